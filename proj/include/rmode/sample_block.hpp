#ifndef RMODE_SAMPLE_BLOCK_HPP
#define RMODE_SAMPLE_BLOCK_HPP

#include <complex>
#include <cstdint>
#include <vector>

namespace rmode {

using cplx = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0; // m/s
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// A contiguous run of complex-baseband samples on the shared scenario
// clock. Sample i sits at time (start_index + i)/sample_rate_hz; keeping
// the start as an integer sample index (possibly negative -- history
// before the scenario epoch exists) is what makes block concatenation
// bit-exact: a sample's value depends only on its absolute index.
//
// Samples are relative to carrier_hz: the passband signal is
// Re{ samples[i] * exp(j*2*pi*carrier_hz*t_i) }.
struct SampleBlock {
    std::int64_t start_index = 0;
    double sample_rate_hz = 0.0;
    double carrier_hz = 0.0;
    std::vector<cplx> samples;

    std::size_t size() const { return samples.size(); }
    double start_time_s() const { return static_cast<double>(start_index) / sample_rate_hz; }
    double time_at(std::size_t i) const {
        return static_cast<double>(start_index + static_cast<std::int64_t>(i)) / sample_rate_hz;
    }
    std::int64_t end_index() const { return start_index + static_cast<std::int64_t>(samples.size()); }
};

// Nearest sample index for a time on the grid; throws ConfigError if t_s is
// farther than ~1e-6 samples off the grid (the generators are exact only on
// grid points).
std::int64_t index_for_time(double t_s, double sample_rate_hz);

// Copy of the [start_index, start_index+n) sub-range; throws
// HistoryUnderrunError if the range is not fully covered.
SampleBlock slice(const SampleBlock& block, std::int64_t start_index, std::size_t n);

} // namespace rmode

#endif
