#include "rmode/receiver.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "rmode/errors.hpp"

namespace rmode {

namespace {

// One cached FFTW plan per transform length. Plans are created with
// FFTW_ESTIMATE | FFTW_UNALIGNED so fftw_execute_dft may be reused across
// threads on caller-owned buffers.
fftw_plan plan_for(int n) {
    static std::mutex mu;
    static std::map<int, fftw_plan> plans;
    std::lock_guard<std::mutex> lock(mu);
    auto it = plans.find(n);
    if (it != plans.end()) return it->second;
    std::vector<cplx> scratch(static_cast<std::size_t>(n));
    fftw_plan p = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(scratch.data()),
                                   reinterpret_cast<fftw_complex*>(scratch.data()), FFTW_FORWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans.emplace(n, p);
    return p;
}

double window_value(EstimatorWindow w, std::size_t i, std::size_t n) {
    if (w == EstimatorWindow::rectangular) return 1.0;
    return 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n)));
}

} // namespace

const char* tone_name(ToneId id) { return id == ToneId::cw1 ? "CW1" : "CW2"; }

ToneId tone_from_name(const std::string& name) {
    if (name == "CW1" || name == "cw1") return ToneId::cw1;
    if (name == "CW2" || name == "cw2") return ToneId::cw2;
    throw FormatError("unknown tone id '" + name + "' (expected CW1 or CW2)");
}

double wrap_cycles(double x) {
    double w = x - std::floor(x);
    if (w >= 1.0) w = 0.0; // floor rounding at the seam
    return w;
}

CwMeasurement estimate_tone(const SampleBlock& r, double offset_hz, const ToneEstimatorConfig& cfg,
                            ToneId id) {
    if (!(r.sample_rate_hz > 0.0)) throw ConfigError("estimate_tone: block has no sample rate");
    if (!(cfg.integration_s > 0.0)) throw ConfigError("estimate_tone: integration_s must be > 0");
    const double fs = r.sample_rate_hz;
    if (std::fabs(offset_hz) >= fs / 2.0)
        throw ConfigError("estimate_tone: tone offset outside Nyquist");
    const std::size_t n = static_cast<std::size_t>(std::llround(cfg.integration_s * fs));
    if (n < 2) throw ConfigError("estimate_tone: integration window shorter than two samples");
    if (r.samples.size() < n)
        throw InsufficientDataError("estimate_tone: block holds " +
                                    std::to_string(r.samples.size()) + " samples, window needs " +
                                    std::to_string(n));

    // Windowed samples and window sums.
    std::vector<cplx> wr(n);
    double wsum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double w = window_value(cfg.window, i, n);
        wr[i] = w * r.samples[i];
        wsum += w;
    }

    // Coherent correlation against the tone at its exact frequency.
    cplx corr(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double cycles = offset_hz * r.time_at(i);
        cycles -= std::floor(cycles);
        corr += wr[i] * std::polar(1.0, -kTwoPi * cycles);
    }
    corr /= wsum;

    // Periodogram with the same normalization (a clean tone reads B^2 in its
    // bin); noise floor = median of the bins outside the MSK-dominated
    // center and the tone neighborhoods, divided by ln 2 to unbias the
    // median of the exponential bin distribution.
    fftw_plan plan = plan_for(static_cast<int>(n));
    std::vector<cplx> spec(n);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(wr.data()),
                     reinterpret_cast<fftw_complex*>(spec.data()));

    const double bin_hz = fs / static_cast<double>(n);
    std::vector<double> floor_bins;
    floor_bins.reserve(n);
    std::vector<double> excluded_hz = cfg.known_tone_offsets_hz;
    excluded_hz.push_back(offset_hz);
    for (std::size_t k = 0; k < n; ++k) {
        double f_k = static_cast<double>(k) * bin_hz;
        if (f_k >= fs / 2.0) f_k -= fs;
        if (std::fabs(f_k) <= cfg.msk_exclusion_halfwidth_hz) continue;
        bool near_tone = false;
        for (double ft : excluded_hz) {
            if (std::fabs(f_k - ft) <= (cfg.tone_guard_bins + 0.5) * bin_hz) {
                near_tone = true;
                break;
            }
        }
        if (near_tone) continue;
        floor_bins.push_back(std::norm(spec[k]) / (wsum * wsum));
    }

    double noise_per_bin = 0.0;
    if (!floor_bins.empty()) {
        std::size_t mid = floor_bins.size() / 2;
        std::nth_element(floor_bins.begin(), floor_bins.begin() + mid, floor_bins.end());
        noise_per_bin = floor_bins[mid] / 0.69314718055994530942; // ln 2
    }

    CwMeasurement m;
    m.tone_id = id;
    m.epoch_time_s = r.start_time_s() + cfg.integration_s / 2.0;
    m.amplitude_est = std::abs(corr);
    m.phase_cycles = wrap_cycles(std::arg(corr) / kTwoPi);
    double p_tone = std::norm(corr);
    if (noise_per_bin <= 0.0 || p_tone / noise_per_bin > std::pow(10.0, cfg.snr_cap_db / 10.0)) {
        m.snr_db = cfg.snr_cap_db;
    } else if (p_tone <= 0.0) {
        m.snr_db = -cfg.snr_cap_db;
    } else {
        m.snr_db = std::max(-cfg.snr_cap_db, 10.0 * std::log10(p_tone / noise_per_bin));
    }
    return m;
}

double propagation_cycles(const CwMeasurement& m, double tx_phase_offset_rad) {
    return wrap_cycles(tx_phase_offset_rad / kTwoPi - m.phase_cycles);
}

CwMeasurement referenced_to_transmitter(const CwMeasurement& m, double tx_phase_offset_rad) {
    CwMeasurement out = m;
    out.phase_cycles = propagation_cycles(m, tx_phase_offset_rad);
    return out;
}

RangeEpoch phase_to_range(const CwMeasurement& m, double tone_hz, double a_priori_range_m) {
    if (!(tone_hz > 0.0)) throw ConfigError("phase_to_range: tone_hz must be > 0");
    if (!(a_priori_range_m >= 0.0)) throw ConfigError("phase_to_range: a-priori range must be >= 0");
    const double lambda = kSpeedOfLight / tone_hz;
    const std::int64_t n_cycles =
        static_cast<std::int64_t>(std::llround(a_priori_range_m / lambda - m.phase_cycles));

    RangeEpoch e;
    e.tone_id = m.tone_id;
    e.epoch_time_s = m.epoch_time_s;
    e.phase_cycles = m.phase_cycles;
    e.snr_db = m.snr_db;
    e.integer_cycles_n = n_cycles;
    e.range_m = (static_cast<double>(n_cycles) + m.phase_cycles) * lambda;
    return e;
}

double resolve_coarse(const CwMeasurement& m1, const CwMeasurement& m2, double f1_hz,
                      double f2_hz) {
    if (f1_hz == f2_hz) throw ConfigError("resolve_coarse: tone frequencies must differ");
    if (std::fabs(m1.epoch_time_s - m2.epoch_time_s) > 1e-9)
        throw EpochMismatchError("resolve_coarse: measurements from different epochs (" +
                                 std::to_string(m1.epoch_time_s) + " vs " +
                                 std::to_string(m2.epoch_time_s) + ")");
    double hi = (f1_hz > f2_hz) ? m1.phase_cycles : m2.phase_cycles;
    double lo = (f1_hz > f2_hz) ? m2.phase_cycles : m1.phase_cycles;
    double beat_lambda = kSpeedOfLight / std::fabs(f1_hz - f2_hz);
    return wrap_cycles(hi - lo) * beat_lambda;
}

bool snr_gate(const CwMeasurement& m, double threshold_db) {
    return m.snr_db >= threshold_db;
}

} // namespace rmode
