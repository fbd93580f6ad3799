#ifndef RMODE_CHANNEL_HPP
#define RMODE_CHANNEL_HPP

#include <cstdint>

#include "rmode/clock_time.hpp"
#include "rmode/sample_block.hpp"

namespace rmode {

// One-hop skywave: a delayed, attenuated copy of the groundwave.
struct SkywaveParams {
    double alpha = 0.0; // linear attenuation; 0 = no skywave
    double t_d_s = 0.0; // excess delay over the groundwave

    void validate() const;
};

// Piecewise-linear day/night evolution of the skywave attenuation:
// zero across the day window, alpha_night across the night plateau,
// linear ramps of ramp_minutes starting at day_end and ending at day_start.
struct DiurnalSchedule {
    ClockTime day_start{6 * 3600};
    ClockTime day_end{18 * 3600};
    double alpha_night = 0.3;
    double ramp_minutes = 30.0;
    double t_d_night_s = 0.0; // usually derived from the link geometry

    void validate() const; // throws ConfigError
};

// Transmitter/receiver placement. Spherical earth; the skywave path is the
// two-leg reflection off a layer at ionosphere_height_km.
struct LinkGeometry {
    double tx_lat_deg = 0.0;
    double tx_lon_deg = 0.0;
    double rx_lat_deg = 0.0;
    double rx_lon_deg = 0.0;
    double groundwave_velocity_factor = 1.0; // signal speed = c * factor
    double ionosphere_height_km = 90.0;

    void validate() const; // throws GeometryError
};

struct LinkBudget {
    double true_range_m = 0.0;
    double groundwave_delay_s = 0.0;
    double skywave_excess_delay_s = 0.0; // t_d
};

inline constexpr double kEarthRadiusM = 6371000.0;

// Great-circle range, groundwave delay, and the one-hop skywave excess
// delay t_d = (2*sqrt((d/2)^2 + h^2) - d)/c.
LinkBudget derive_link(const LinkGeometry& geom);

// Attenuation/delay in effect at a local time of day (seconds since midnight).
SkywaveParams schedule_alpha(const DiurnalSchedule& schedule, double local_tod_s);

// r(t) = s(t) + alpha * s(t - t_d) * exp(-j*2*pi*carrier*t_d + j*extra_phase).
// The leading t_d of the input (plus the interpolator margin for fractional
// delays) acts as the history buffer: the output is the interior of s where
// both terms are defined, so it starts later (and, for fractional delays,
// ends earlier) than the input. Integer-sample delays are reproduced
// sample-exactly; fractional delays use a 63-tap windowed-sinc interpolator.
// Throws HistoryUnderrunError when no interior remains.
SampleBlock apply_skywave(const SampleBlock& s, const SkywaveParams& params,
                          double extra_phase_rad = 0.0);

// out[i] = src(t_i - delay_s) * exp(-j*2*pi*carrier*delay_s + j*extra_phase)
// for t_i = (out_start_index + i)/fs; the carrier rotation is what a passband
// delay looks like at baseband. Source must cover the delayed range plus the
// interpolator margin, else HistoryUnderrunError.
SampleBlock extract_delayed(const SampleBlock& src, std::int64_t out_start_index, std::size_t n,
                            double delay_s, double extra_phase_rad = 0.0);

// Adds circularly-symmetric Gaussian noise: each quadrature gets an
// independent N(0, noise_sigma^2) draw per sample. Deterministic per seed.
SampleBlock add_awgn(const SampleBlock& s, double noise_sigma, std::uint64_t seed);

} // namespace rmode

#endif
