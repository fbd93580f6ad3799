#ifndef RMODE_RNG_HPP
#define RMODE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace rmode {

// splitmix64 finalizer. Everything random in the simulator is derived from
// this one mixer so that runs are reproducible across platforms (no
// library-defined distributions anywhere).
inline std::uint64_t hash_mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ULL;

// Random access into a counter-indexed stream: word(seed, w) for any signed
// word index w (negative indices wrap through two's complement, which is
// fine -- they just select other counters deterministically).
inline std::uint64_t counter_word(std::uint64_t seed, std::uint64_t counter) {
    return hash_mix64(seed + (counter + 1) * kGolden64);
}

// Independent sub-seed per (stream, index), used for per-epoch noise etc.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return hash_mix64(seed + hash_mix64(stream + hash_mix64(index + 1) * kGolden64) * kGolden64);
}

// Sequential generator over the splitmix64 stream with a Box-Muller
// Gaussian on top. Distributions are spelled out here instead of using
// <random> ones so that a (seed, config) pair gives the same samples on
// every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += kGolden64;
        return hash_mix64(state_);
    }

    // Uniform in (0, 1]; never 0 so log() below is safe.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
    }

    // One independent N(0,1) pair per call.
    void gaussian_pair(double& z0, double& z1) {
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        z0 = r * std::cos(a);
        z1 = r * std::sin(a);
    }

private:
    std::uint64_t state_;
};

} // namespace rmode

#endif
