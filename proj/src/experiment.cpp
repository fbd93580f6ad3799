#include "rmode/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rmode/errors.hpp"
#include "rmode/rng.hpp"

namespace rmode {

namespace {

// Left-closed right-open containment on the 24 h circle; an interval whose
// end is not after its start wraps midnight.
bool interval_contains(double tod, double start, double end) {
    if (start < end) return tod >= start && tod < end;
    return tod >= start || tod < end;
}

} // namespace

double Scenario::duration_s() const {
    double d = end_local_time.seconds - start_local_time.seconds;
    if (d <= 0.0) d += kSecondsPerDay;
    return d;
}

void Scenario::validate() const {
    transmitter.validate();
    link.validate();
    schedule.validate();
    if (!(noise_sigma >= 0.0)) throw ConfigError("noise_sigma must be >= 0");
    if (!(integration_s > 0.0)) throw ConfigError("integration_s must be > 0");
    if (!(epoch_interval_s >= integration_s))
        throw ConfigError("epoch_interval_s must be >= integration_s");
    if (!(duration_s() >= integration_s)) throw ConfigError("scenario too short for one epoch");
    if (a_priori_mode == APrioriMode::fixed && !(a_priori_fixed_m >= 0.0))
        throw ConfigError("fixed a-priori range must be >= 0");
    if (cw_boost && !std::isfinite(cw_boost->gain_db))
        throw ConfigError("cw_boost.gain_db must be finite");
    if (!std::isfinite(rx_clock_offset_s) || std::fabs(rx_clock_offset_s) > 0.01)
        throw ConfigError("rx_clock_offset_s must be finite and within +/-10 ms");
    if (!(snr_gate_db > -60.0 && snr_gate_db < 60.0))
        throw ConfigError("snr_gate_db outside the reportable range");
    day_serial_from_date(start_date); // throws FormatError -> surface as config problem
}

bool WindowSpec::contains(double local_tod_s) const {
    double tod = wrap_tod(local_tod_s);
    for (const auto& [a, b] : intervals)
        if (interval_contains(tod, a.seconds, b.seconds)) return true;
    return false;
}

double WindowSpec::total_duration_s() const {
    double total = 0.0;
    for (const auto& [a, b] : intervals) {
        double d = b.seconds - a.seconds;
        if (d <= 0.0) d += kSecondsPerDay;
        total += d;
    }
    return total;
}

void WindowSpec::validate() const {
    if (label.empty()) throw ConfigError("window label must be non-empty");
    if (intervals.empty()) throw ConfigError("window '" + label + "' has no intervals");
    // Normalize to [start, end) pieces on [0, 86400) and check pairwise overlap.
    std::vector<std::pair<double, double>> pieces;
    for (const auto& [a, b] : intervals) {
        double s = a.seconds, e = b.seconds;
        if (e > s) {
            pieces.emplace_back(s, e);
        } else {
            pieces.emplace_back(s, kSecondsPerDay);
            if (e > 0.0) pieces.emplace_back(0.0, e);
        }
    }
    std::sort(pieces.begin(), pieces.end());
    for (std::size_t i = 1; i < pieces.size(); ++i)
        if (pieces[i].first < pieces[i - 1].second)
            throw ConfigError("window '" + label + "' has overlapping intervals");
}

std::vector<RangeEpoch> run_scenario(const Scenario& sc, std::uint64_t seed) {
    sc.validate();

    const LinkBudget budget = derive_link(sc.link);
    DiurnalSchedule schedule = sc.schedule;
    if (schedule.t_d_night_s == 0.0) schedule.t_d_night_s = budget.skywave_excess_delay_s;

    const double fs = sc.transmitter.sample_rate_hz;
    const std::size_t n_window = static_cast<std::size_t>(std::llround(sc.integration_s * fs));
    const double start_tod = sc.start_local_time.seconds;
    const std::size_t n_epochs = static_cast<std::size_t>(
        std::floor((sc.duration_s() - sc.integration_s) / sc.epoch_interval_s)) + 1;

    const double f1 = sc.transmitter.tone_hz(1);
    const double f2 = sc.transmitter.tone_hz(2);

    ToneEstimatorConfig est;
    est.integration_s = sc.integration_s;
    est.known_tone_offsets_hz = {sc.transmitter.cw1.offset_hz, sc.transmitter.cw2.offset_hz};
    est.msk_exclusion_halfwidth_hz =
        std::min(1.5 / sc.transmitter.msk.bit_interval_s,
                 0.45 * fs); // two main-lobe widths, clamped below Nyquist

    std::vector<RangeEpoch> out;
    out.reserve(2 * n_epochs);

    for (std::size_t k = 0; k < n_epochs; ++k) {
        const double t0 = static_cast<double>(k) * sc.epoch_interval_s;
        const std::int64_t start_idx = std::llround(t0 * fs);
        const double center_s = static_cast<double>(start_idx) / fs + sc.integration_s / 2.0;
        const double tod_center = wrap_tod(start_tod + center_s);

        SkywaveParams sky = schedule_alpha(schedule, tod_center);

        TransmitterConfig tx = sc.transmitter;
        if (sc.cw_boost &&
            interval_contains(tod_center, sc.cw_boost->start.seconds, sc.cw_boost->end.seconds)) {
            const double gain = std::pow(10.0, sc.cw_boost->gain_db / 20.0);
            tx.cw1.amplitude *= gain;
            tx.cw2.amplitude *= gain;
        }

        // A fixed receiver clock error shifts the receiver's timebase, which
        // is the same as an extra (possibly negative) delay on everything it
        // sees, carrier rotation included.
        const double total_delay_s = budget.groundwave_delay_s + sc.rx_clock_offset_s;

        // Synthesize with enough slack for the delays, the skywave tap, and
        // interpolator margins on both sides.
        const std::int64_t pad_front = static_cast<std::int64_t>(std::ceil(
                                           (std::max(0.0, total_delay_s) + sky.t_d_s) * fs)) + 96;
        const std::int64_t pad_back =
            static_cast<std::int64_t>(std::ceil(std::max(0.0, -total_delay_s) * fs)) + 96;
        SampleBlock tx_block =
            generate_rmode(tx, start_idx - pad_front,
                           n_window + static_cast<std::size_t>(pad_front + pad_back));

        // Groundwave leg, kept wide enough that the skywave trim still
        // covers the integration window.
        const std::int64_t sky_margin =
            static_cast<std::int64_t>(std::ceil(sky.t_d_s * fs)) + 40;
        SampleBlock ground =
            extract_delayed(tx_block, start_idx - sky_margin,
                            n_window + static_cast<std::size_t>(sky_margin + 40), total_delay_s);

        double extra_phase = 0.0;
        if (sc.skywave_random_phase && sky.alpha > 0.0) {
            Rng phase_rng(derive_seed(seed, 0x5B, k));
            extra_phase = kTwoPi * phase_rng.uniform01();
        }
        SampleBlock received = apply_skywave(ground, sky, extra_phase);
        received = slice(received, start_idx, n_window);
        received = add_awgn(received, sc.noise_sigma, derive_seed(seed, 0xA3, k));

        CwMeasurement m1 = estimate_tone(received, sc.transmitter.cw1.offset_hz, est, ToneId::cw1);
        CwMeasurement m2 = estimate_tone(received, sc.transmitter.cw2.offset_hz, est, ToneId::cw2);
        CwMeasurement r1 = referenced_to_transmitter(m1, sc.transmitter.cw1.phase_offset_rad);
        CwMeasurement r2 = referenced_to_transmitter(m2, sc.transmitter.cw2.phase_offset_rad);

        double a_priori;
        switch (sc.a_priori_mode) {
            case APrioriMode::truth: a_priori = budget.true_range_m; break;
            case APrioriMode::fixed: a_priori = sc.a_priori_fixed_m; break;
            case APrioriMode::coarse:
            default: a_priori = resolve_coarse(r1, r2, f1, f2); break;
        }

        for (int tone = 1; tone <= 2; ++tone) {
            const CwMeasurement& raw = (tone == 1) ? m1 : m2;
            const CwMeasurement& ref = (tone == 1) ? r1 : r2;
            RangeEpoch e = phase_to_range(ref, tone == 1 ? f1 : f2, a_priori);
            e.local_tod_s = tod_center;
            e.alpha = sky.alpha;
            e.gated = snr_gate(raw, sc.snr_gate_db);
            e.error_m = e.range_m - budget.true_range_m;
            out.push_back(e);
        }
    }
    return out;
}

std::vector<LabeledEpochs> partition(std::span<const RangeEpoch> epochs,
                                     const std::vector<WindowSpec>& windows) {
    for (const auto& w : windows) w.validate();
    std::vector<LabeledEpochs> out;
    out.reserve(windows.size());
    for (const auto& w : windows) out.push_back({w.label, {}});
    for (const auto& e : epochs) {
        if (!e.gated) continue;
        for (std::size_t i = 0; i < windows.size(); ++i)
            if (windows[i].contains(e.local_tod_s)) out[i].epochs.push_back(e);
    }
    return out;
}

void ErrorAccumulator::add(double error_m) {
    ++n_;
    sum_ += error_m;
    sum_sq_ += error_m * error_m;
}

double ErrorAccumulator::mean() const {
    if (n_ == 0) throw EmptyPartitionError("mean of an empty error set");
    return sum_ / static_cast<double>(n_);
}

double ErrorAccumulator::rms() const {
    if (n_ == 0) throw EmptyPartitionError("rms of an empty error set");
    return std::sqrt(sum_sq_ / static_cast<double>(n_));
}

namespace {

std::vector<double> make_edges(double lo, double hi, int n_bins) {
    if (n_bins < 1) throw ConfigError("histogram needs at least one bin");
    if (lo == hi) { // degenerate spread: widen symmetrically
        lo -= 0.5;
        hi += 0.5;
    }
    std::vector<double> edges(static_cast<std::size_t>(n_bins) + 1);
    const double w = (hi - lo) / n_bins;
    for (int i = 0; i <= n_bins; ++i) edges[static_cast<std::size_t>(i)] = lo + w * i;
    edges.back() = hi;
    return edges;
}

void fill_histogram(ErrorStats& st, std::span<const double> errors,
                    const std::vector<double>& edges) {
    st.bin_edges_m = edges;
    st.counts.assign(edges.size() - 1, 0);
    const double lo = edges.front();
    const double hi = edges.back();
    const std::int64_t nb = static_cast<std::int64_t>(st.counts.size());
    const double w = (hi - lo) / static_cast<double>(nb);
    for (double e : errors) {
        std::int64_t j = static_cast<std::int64_t>(std::floor((e - lo) / w));
        j = std::clamp<std::int64_t>(j, 0, nb - 1); // clamp under/overflow into edge bins
        ++st.counts[static_cast<std::size_t>(j)];
    }
}

} // namespace

ErrorStats compute_stats(const std::string& label, std::span<const double> errors_m,
                         const HistogramSpec& spec) {
    if (errors_m.empty())
        throw EmptyPartitionError("no epochs in partition '" + label + "'");

    ErrorStats st;
    st.label = label;
    st.n_epochs = errors_m.size();

    ErrorAccumulator acc;
    for (double e : errors_m) acc.add(e);
    st.rms_m = acc.rms();
    st.mean_m = acc.mean();

    std::vector<double> sorted(errors_m.begin(), errors_m.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    st.median_m = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

    std::vector<double> edges = spec.edges.empty()
                                    ? make_edges(sorted.front(), sorted.back(), spec.n_bins)
                                    : spec.edges;
    if (edges.size() < 2) throw ConfigError("histogram edges need at least two entries");
    fill_histogram(st, errors_m, edges);
    return st;
}

ErrorStats compute_stats(const std::string& label, std::span<const RangeEpoch> epochs,
                         const HistogramSpec& spec) {
    std::vector<double> errors;
    errors.reserve(epochs.size());
    double snr_sum = 0.0;
    for (const auto& e : epochs) {
        errors.push_back(e.error_m);
        snr_sum += e.snr_db;
    }
    ErrorStats st = compute_stats(label, std::span<const double>(errors), spec);
    st.mean_snr_db = snr_sum / static_cast<double>(epochs.size());
    return st;
}

std::vector<double> pooled_edges(std::span<const LabeledEpochs> sets, int n_bins) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& s : sets)
        for (const auto& e : s.epochs) {
            lo = std::min(lo, e.error_m);
            hi = std::max(hi, e.error_m);
        }
    if (!(lo <= hi)) throw EmptyPartitionError("pooled_edges: no epochs in any partition");
    return make_edges(lo, hi, n_bins);
}

ComparisonReport compare(const ErrorStats& a, const ErrorStats& b, double d_threshold) {
    if (a.n_epochs == 0 || b.n_epochs == 0)
        throw EmptyPartitionError("compare: both stats must be non-empty");
    if (a.bin_edges_m != b.bin_edges_m)
        throw ConfigError("compare: histograms must share bin edges (rebuild with pooled edges)");

    ComparisonReport rep;
    rep.rms_ratio = (a.rms_m == b.rms_m) ? 1.0 : a.rms_m / b.rms_m;
    rep.median_ratio = (a.median_m == b.median_m) ? 1.0 : a.median_m / b.median_m;

    double ca = 0.0, cb = 0.0, d = 0.0;
    for (std::size_t i = 0; i < a.counts.size(); ++i) {
        ca += static_cast<double>(a.counts[i]) / static_cast<double>(a.n_epochs);
        cb += static_cast<double>(b.counts[i]) / static_cast<double>(b.n_epochs);
        d = std::max(d, std::fabs(ca - cb));
    }
    rep.ks_d = d;

    if (d > d_threshold && a.rms_m != b.rms_m)
        rep.verdict = (a.rms_m < b.rms_m) ? "a_better" : "b_better";
    else
        rep.verdict = "inconclusive";
    return rep;
}

} // namespace rmode
