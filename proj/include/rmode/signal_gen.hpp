#ifndef RMODE_SIGNAL_GEN_HPP
#define RMODE_SIGNAL_GEN_HPP

#include <cstdint>

#include "rmode/sample_block.hpp"

namespace rmode {

// MSK data signal parameters. The +/-1 bit stream stands in for the
// broadcast correction message; it is drawn from a seeded counter-based
// generator so any bit index (including negative ones) is addressable.
struct MskParams {
    double amplitude = 1.0;        // A, linear
    double bit_interval_s = 0.005; // T; 200 bit/s default
    double phase_offset_rad = 0.0; // Phi
    std::uint64_t bit_seed = 1;

    void validate(double sample_rate_hz) const; // throws ConfigError
};

// One ranging tone at carrier + offset_hz.
struct CwParams {
    double amplitude = 0.25;       // B, linear
    double phase_offset_rad = 0.0;
    double offset_hz = 250.0;      // signed; +250 -> 318.25 kHz on a 318 kHz carrier

    void validate(double sample_rate_hz) const; // throws ConfigError
};

struct TransmitterConfig {
    double carrier_hz = 318000.0;
    MskParams msk;
    CwParams cw1{0.25, 0.0, +250.0};
    CwParams cw2{0.25, 0.0, -250.0};
    double sample_rate_hz = 8000.0;
    bool strict_band = true; // keep the carrier inside the 285-325 kHz MF band

    double tone_hz(int which) const { return carrier_hz + (which == 1 ? cw1.offset_hz : cw2.offset_hz); }
    void validate() const; // throws ConfigError
};

// Transmitted bit for any index; bits before index 0 are defined so delayed
// taps of the channel stay meaningful.
int msk_bit(std::uint64_t seed, std::int64_t index);

// Sum of bits j in [0, index) (negated sum over [index, 0) when index < 0).
// O(|index|/64) via 64-bit popcounts.
std::int64_t msk_bit_prefix_sum(std::uint64_t seed, std::int64_t index);

// Sampled complex baseband of A*cos(2*pi*fc*t +/- pi*t/(2T) + Phi) with the
// carrier term removed: each sample is A*exp(j*(Phi + phase walk)), where the
// walk moves by +/- pi/2 per bit interval, continuous across bit boundaries.
SampleBlock generate_msk(const MskParams& params, double carrier_hz, std::int64_t start_index,
                         std::size_t n, double sample_rate_hz);

// Complex-baseband tone B*exp(j*(2*pi*offset_hz*t + Phi)).
SampleBlock generate_cw(const CwParams& params, std::int64_t start_index, std::size_t n,
                        double sample_rate_hz, double carrier_hz = 0.0);

// Sample-wise sum of the MSK signal and both tones.
SampleBlock generate_rmode(const TransmitterConfig& config, std::int64_t start_index, std::size_t n);

// Seconds-based entry points; t0 must sit on the sample grid.
SampleBlock generate_msk(const MskParams& params, double carrier_hz, double t0_s, std::size_t n,
                         double sample_rate_hz);
SampleBlock generate_cw(const CwParams& params, double t0_s, std::size_t n, double sample_rate_hz,
                        double carrier_hz = 0.0);
SampleBlock generate_rmode(const TransmitterConfig& config, double t0_s, std::size_t n);

} // namespace rmode

#endif
