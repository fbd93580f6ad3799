#include "rmode/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rmode/errors.hpp"
#include "rmode/rng.hpp"

namespace rmode {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

// Windowed-sinc fractional-delay interpolator: 63 taps, Blackman window.
// The kernel is symmetric about the (fractional) target position, so the
// interpolation is exactly linear-phase; only a small in-band amplitude
// ripple remains, negligible for signals confined to a few hundred Hz of
// an 8 kHz grid.
constexpr int kInterpHalf = 31;
constexpr int kInterpTaps = 2 * kInterpHalf + 1;

inline double blackman(double x, double half_width) {
    double u = kPi * x / half_width;
    return 0.42 + 0.5 * std::cos(u) + 0.08 * std::cos(2.0 * u);
}

inline double sinc(double x) {
    if (std::fabs(x) < 1e-12) return 1.0;
    double px = kPi * x;
    return std::sin(px) / px;
}

void make_kernel(double frac, double* taps) {
    double sum = 0.0;
    for (int m = -kInterpHalf; m <= kInterpHalf; ++m) {
        double x = static_cast<double>(m) - frac;
        double v = sinc(x) * blackman(x, kInterpHalf + 1.0);
        taps[m + kInterpHalf] = v;
        sum += v;
    }
    for (int m = 0; m < kInterpTaps; ++m) taps[m] /= sum; // exact unity DC gain
}

} // namespace

void SkywaveParams::validate() const {
    if (!(alpha >= 0.0)) throw ConfigError("skywave alpha must be >= 0");
    if (!(t_d_s >= 0.0)) throw ConfigError("skywave t_d_s must be >= 0");
}

void DiurnalSchedule::validate() const {
    if (!(day_start.seconds < day_end.seconds))
        throw ConfigError("schedule day_start must precede day_end within the 24 h cycle");
    if (!(alpha_night >= 0.0)) throw ConfigError("schedule alpha_night must be >= 0");
    if (!(ramp_minutes >= 0.0)) throw ConfigError("schedule ramp_minutes must be >= 0");
    if (!(t_d_night_s >= 0.0)) throw ConfigError("schedule t_d_night_s must be >= 0");
    double night_len = kSecondsPerDay - (day_end.seconds - day_start.seconds);
    if (2.0 * ramp_minutes * 60.0 > night_len)
        throw ConfigError("schedule ramps do not fit inside the night window");
}

void LinkGeometry::validate() const {
    auto ok_lat = [](double v) { return std::isfinite(v) && std::fabs(v) <= 90.0; };
    auto ok_lon = [](double v) { return std::isfinite(v) && std::fabs(v) <= 180.0; };
    if (!ok_lat(tx_lat_deg) || !ok_lat(rx_lat_deg))
        throw GeometryError("latitude out of range [-90, 90]");
    if (!ok_lon(tx_lon_deg) || !ok_lon(rx_lon_deg))
        throw GeometryError("longitude out of range [-180, 180]");
    if (!(groundwave_velocity_factor > 0.0 && groundwave_velocity_factor <= 1.0))
        throw GeometryError("groundwave_velocity_factor must be in (0, 1]");
    if (!(ionosphere_height_km > 0.0)) throw GeometryError("ionosphere_height_km must be > 0");
}

LinkBudget derive_link(const LinkGeometry& geom) {
    geom.validate();
    const double d2r = kPi / 180.0;
    double p1 = geom.tx_lat_deg * d2r, l1 = geom.tx_lon_deg * d2r;
    double p2 = geom.rx_lat_deg * d2r, l2 = geom.rx_lon_deg * d2r;
    double sdp = std::sin((p2 - p1) / 2.0);
    double sdl = std::sin((l2 - l1) / 2.0);
    double a = sdp * sdp + std::cos(p1) * std::cos(p2) * sdl * sdl;
    double central = 2.0 * std::asin(std::min(1.0, std::sqrt(a)));
    if (kPi - central < 1e-9)
        throw GeometryError("endpoints are antipodal; the one-hop skywave model degenerates");

    LinkBudget b;
    b.true_range_m = kEarthRadiusM * central;
    b.groundwave_delay_s = b.true_range_m / (kSpeedOfLight * geom.groundwave_velocity_factor);
    double h_m = geom.ionosphere_height_km * 1000.0;
    double hop = 2.0 * std::hypot(b.true_range_m / 2.0, h_m);
    b.skywave_excess_delay_s = (hop - b.true_range_m) / kSpeedOfLight;
    return b;
}

SkywaveParams schedule_alpha(const DiurnalSchedule& schedule, double local_tod_s) {
    schedule.validate();
    double tod = wrap_tod(local_tod_s);
    double ds = schedule.day_start.seconds;
    double de = schedule.day_end.seconds;
    double ramp = schedule.ramp_minutes * 60.0;

    SkywaveParams p;
    p.t_d_s = schedule.t_d_night_s;
    if (tod >= ds && tod < de) {
        p.alpha = 0.0; // day window; ramps live entirely in the night side
        return p;
    }
    double night_len = kSecondsPerDay - (de - ds);
    double u = wrap_tod(tod - de); // position inside the night, [0, night_len)
    if (ramp > 0.0 && u < ramp) {
        p.alpha = schedule.alpha_night * (u / ramp); // sunset ramp
    } else if (ramp > 0.0 && u >= night_len - ramp) {
        p.alpha = schedule.alpha_night * ((night_len - u) / ramp); // sunrise ramp
    } else {
        p.alpha = schedule.alpha_night;
    }
    return p;
}

SampleBlock extract_delayed(const SampleBlock& src, std::int64_t out_start_index, std::size_t n,
                            double delay_s, double extra_phase_rad) {
    if (!(src.sample_rate_hz > 0.0)) throw ConfigError("extract_delayed: source has no sample rate");
    if (n == 0) throw EmptyRequestError("extract_delayed: zero samples requested");
    const double fs = src.sample_rate_hz;
    const double delay_samples = delay_s * fs;
    const double rot_rad = -kTwoPi * src.carrier_hz * delay_s + extra_phase_rad;
    const cplx rot = std::polar(1.0, rot_rad);

    SampleBlock out;
    out.start_index = out_start_index;
    out.sample_rate_hz = fs;
    out.carrier_hz = src.carrier_hz;
    out.samples.resize(n);

    const double rounded = std::nearbyint(delay_samples);
    if (std::fabs(delay_samples - rounded) < 1e-9) {
        // Integer-sample delay: exact lookup.
        std::int64_t k = static_cast<std::int64_t>(rounded);
        std::int64_t need_lo = out_start_index - k;
        std::int64_t need_hi = need_lo + static_cast<std::int64_t>(n);
        if (need_lo < src.start_index || need_hi > src.end_index())
            throw HistoryUnderrunError("extract_delayed: source lacks " +
                                       std::to_string(delay_s) + " s of history");
        std::size_t off = static_cast<std::size_t>(need_lo - src.start_index);
        for (std::size_t i = 0; i < n; ++i) out.samples[i] = src.samples[off + i] * rot;
        return out;
    }

    // Target position p = out_idx - delay_samples sits at q + f with
    // q = floor(p) and f in (0, 1); sample j contributes sinc(j - p).
    std::int64_t k_floor = static_cast<std::int64_t>(std::floor(delay_samples));
    double f = 1.0 - (delay_samples - static_cast<double>(k_floor));
    double taps[kInterpTaps];
    make_kernel(f, taps); // taps[m + kInterpHalf] ~ sinc(m - f), m in [-half, half]

    std::int64_t need_lo = out_start_index - k_floor - 1 - kInterpHalf;
    std::int64_t need_hi = out_start_index + static_cast<std::int64_t>(n) - k_floor + kInterpHalf;
    if (need_lo < src.start_index || need_hi > src.end_index())
        throw HistoryUnderrunError("extract_delayed: source lacks margin for fractional delay " +
                                   std::to_string(delay_s) + " s");

    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t q = out_start_index + static_cast<std::int64_t>(i) - k_floor - 1;
        std::size_t base = static_cast<std::size_t>(q - kInterpHalf - src.start_index);
        cplx acc(0.0, 0.0);
        for (int m = 0; m < kInterpTaps; ++m) acc += src.samples[base + m] * taps[m];
        out.samples[i] = acc * rot;
    }
    return out;
}

SampleBlock apply_skywave(const SampleBlock& s, const SkywaveParams& params,
                          double extra_phase_rad) {
    params.validate();
    if (s.samples.empty()) throw EmptyRequestError("apply_skywave: empty block");
    if (params.alpha == 0.0) return s; // Eq. with alpha = 0: identity

    const double fs = s.sample_rate_hz;
    const double delay_samples = params.t_d_s * fs;
    const double rounded = std::nearbyint(delay_samples);
    const bool integer_delay = std::fabs(delay_samples - rounded) < 1e-9;

    std::int64_t trim_front, trim_back;
    if (integer_delay) {
        trim_front = static_cast<std::int64_t>(rounded);
        trim_back = 0;
    } else {
        trim_front = static_cast<std::int64_t>(std::floor(delay_samples)) + 1 + kInterpHalf + 1;
        trim_back = std::max<std::int64_t>(
            0, kInterpHalf + 1 - static_cast<std::int64_t>(std::floor(delay_samples)));
    }
    std::int64_t n_out = static_cast<std::int64_t>(s.samples.size()) - trim_front - trim_back;
    if (n_out <= 0)
        throw HistoryUnderrunError("apply_skywave: block shorter than t_d plus interpolator margin");

    std::int64_t out_start = s.start_index + trim_front;
    SampleBlock delayed = extract_delayed(s, out_start, static_cast<std::size_t>(n_out),
                                          params.t_d_s, extra_phase_rad);
    SampleBlock out = slice(s, out_start, static_cast<std::size_t>(n_out));
    for (std::size_t i = 0; i < out.samples.size(); ++i)
        out.samples[i] += params.alpha * delayed.samples[i];
    return out;
}

SampleBlock add_awgn(const SampleBlock& s, double noise_sigma, std::uint64_t seed) {
    if (!(noise_sigma >= 0.0)) throw ConfigError("noise_sigma must be >= 0");
    if (noise_sigma == 0.0) return s;
    SampleBlock out = s;
    Rng rng(seed);
    for (auto& v : out.samples) {
        double zi, zq;
        rng.gaussian_pair(zi, zq);
        v += cplx(noise_sigma * zi, noise_sigma * zq);
    }
    return out;
}

} // namespace rmode
