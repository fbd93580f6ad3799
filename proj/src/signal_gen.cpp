#include "rmode/signal_gen.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "rmode/errors.hpp"
#include "rmode/rng.hpp"

namespace rmode {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    std::int64_t r = a % b;
    return (r != 0 && ((r < 0) != (b < 0))) ? q - 1 : q;
}

// 64 bits of the transmitted stream per word, addressable by signed word index.
inline std::uint64_t bit_word(std::uint64_t seed, std::int64_t word_index) {
    return counter_word(seed, static_cast<std::uint64_t>(word_index));
}

// Sum of +/-1 bits j in [a, b), b > a. Whole words go through popcount.
std::int64_t bit_sum_range(std::uint64_t seed, std::int64_t a, std::int64_t b) {
    std::int64_t sum = 0;
    std::int64_t j = a;
    while (j < b) {
        std::int64_t w = floor_div(j, 64);
        int lo = static_cast<int>(j - w * 64);
        int hi = static_cast<int>(std::min<std::int64_t>(b - w * 64, 64));
        std::uint64_t word = bit_word(seed, w);
        int width = hi - lo;
        std::uint64_t mask = (width == 64) ? ~0ULL : (((1ULL << width) - 1) << lo);
        int ones = std::popcount(word & mask);
        sum += 2 * ones - width;
        j = w * 64 + hi;
    }
    return sum;
}

} // namespace

int msk_bit(std::uint64_t seed, std::int64_t index) {
    std::int64_t w = floor_div(index, 64);
    int pos = static_cast<int>(index - w * 64);
    return ((bit_word(seed, w) >> pos) & 1u) ? +1 : -1;
}

std::int64_t msk_bit_prefix_sum(std::uint64_t seed, std::int64_t index) {
    if (index >= 0) return bit_sum_range(seed, 0, index);
    return -bit_sum_range(seed, index, 0);
}

void MskParams::validate(double sample_rate_hz) const {
    if (!(bit_interval_s > 0.0)) throw ConfigError("msk.bit_interval_s must be > 0");
    if (!(amplitude >= 0.0)) throw ConfigError("msk.amplitude must be >= 0");
    if (!(std::isfinite(phase_offset_rad))) throw ConfigError("msk.phase_offset_rad must be finite");
    if (!(sample_rate_hz > 0.0)) throw ConfigError("sample_rate_hz must be > 0");
    // The MSK main lobe needs the same margin the combined-config rule gives it.
    if (sample_rate_hz < 4.0 * (0.5 / bit_interval_s))
        throw ConfigError("sample_rate_hz " + std::to_string(sample_rate_hz) +
                          " too low for bit interval " + std::to_string(bit_interval_s));
}

void CwParams::validate(double sample_rate_hz) const {
    if (!(amplitude >= 0.0)) throw ConfigError("cw.amplitude must be >= 0");
    if (!(std::isfinite(phase_offset_rad))) throw ConfigError("cw.phase_offset_rad must be finite");
    if (!(std::fabs(offset_hz) > 0.0)) throw ConfigError("cw.offset_hz must be nonzero");
    if (!(sample_rate_hz > 0.0)) throw ConfigError("sample_rate_hz must be > 0");
    if (std::fabs(offset_hz) >= sample_rate_hz / 2.0)
        throw ConfigError("cw.offset_hz " + std::to_string(offset_hz) + " outside Nyquist for fs " +
                          std::to_string(sample_rate_hz));
}

void TransmitterConfig::validate() const {
    msk.validate(sample_rate_hz);
    cw1.validate(sample_rate_hz);
    cw2.validate(sample_rate_hz);
    double max_offset = std::max(std::fabs(cw1.offset_hz), std::fabs(cw2.offset_hz));
    double required = 4.0 * (max_offset + 0.5 / msk.bit_interval_s);
    if (sample_rate_hz < required)
        throw ConfigError("sample_rate_hz " + std::to_string(sample_rate_hz) +
                          " below required Nyquist margin " + std::to_string(required));
    if (strict_band && (carrier_hz < 285000.0 || carrier_hz > 325000.0))
        throw ConfigError("carrier_hz " + std::to_string(carrier_hz) +
                          " outside the 285-325 kHz band (disable strict_band to allow)");
    if (!(carrier_hz > 0.0)) throw ConfigError("carrier_hz must be > 0");
}

std::int64_t index_for_time(double t_s, double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0)) throw ConfigError("sample_rate_hz must be > 0");
    double pos = t_s * sample_rate_hz;
    double snapped = std::nearbyint(pos);
    if (std::fabs(pos - snapped) > 1e-6)
        throw ConfigError("time " + std::to_string(t_s) + " s is off the sample grid at fs " +
                          std::to_string(sample_rate_hz));
    return static_cast<std::int64_t>(snapped);
}

SampleBlock slice(const SampleBlock& block, std::int64_t start_index, std::size_t n) {
    if (start_index < block.start_index ||
        start_index + static_cast<std::int64_t>(n) > block.end_index())
        throw HistoryUnderrunError("slice [" + std::to_string(start_index) + ", +" +
                                   std::to_string(n) + ") outside block [" +
                                   std::to_string(block.start_index) + ", " +
                                   std::to_string(block.end_index()) + ")");
    SampleBlock out;
    out.start_index = start_index;
    out.sample_rate_hz = block.sample_rate_hz;
    out.carrier_hz = block.carrier_hz;
    std::size_t off = static_cast<std::size_t>(start_index - block.start_index);
    out.samples.assign(block.samples.begin() + off, block.samples.begin() + off + n);
    return out;
}

SampleBlock generate_msk(const MskParams& p, double carrier_hz, std::int64_t start_index,
                         std::size_t n, double fs) {
    p.validate(fs);
    if (n == 0) throw EmptyRequestError("generate_msk: zero samples requested");

    SampleBlock out;
    out.start_index = start_index;
    out.sample_rate_hz = fs;
    out.carrier_hz = carrier_hz;
    out.samples.resize(n);

    const double spb_f = fs * p.bit_interval_s; // samples per bit
    const std::int64_t spb = static_cast<std::int64_t>(std::nearbyint(spb_f));
    const bool integer_spb = std::fabs(spb_f - static_cast<double>(spb)) < 1e-9 && spb >= 1;

    // Bit index and accumulated phase at the first sample; from there the
    // walk advances incrementally. Everything depends only on the absolute
    // sample index, so block seams are bit-exact.
    std::int64_t k;
    if (integer_spb) {
        k = floor_div(start_index, spb);
    } else {
        k = static_cast<std::int64_t>(
            std::floor(static_cast<double>(start_index) / fs / p.bit_interval_s));
    }
    std::int64_t walk = msk_bit_prefix_sum(p.bit_seed, k);
    int bit = msk_bit(p.bit_seed, k);

    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t idx = start_index + static_cast<std::int64_t>(i);
        double dev;
        if (integer_spb) {
            std::int64_t k_here = floor_div(idx, spb);
            while (k_here > k) {
                walk += bit;
                ++k;
                bit = msk_bit(p.bit_seed, k);
            }
            std::int64_t o = idx - k * spb; // sample offset inside the bit
            dev = bit * kPi * static_cast<double>(o) / (2.0 * static_cast<double>(spb));
        } else {
            double t = static_cast<double>(idx) / fs;
            std::int64_t k_here =
                static_cast<std::int64_t>(std::floor(t / p.bit_interval_s));
            while (k_here > k) {
                walk += bit;
                ++k;
                bit = msk_bit(p.bit_seed, k);
            }
            dev = bit * (kPi / (2.0 * p.bit_interval_s)) *
                  (t - static_cast<double>(k) * p.bit_interval_s);
        }
        // Accumulated walk only matters mod 4 quarter-turns.
        std::int64_t q = walk % 4;
        if (q < 0) q += 4;
        double theta = 0.5 * kPi * static_cast<double>(q) + dev + p.phase_offset_rad;
        out.samples[i] = std::polar(p.amplitude, theta);
    }
    return out;
}

SampleBlock generate_cw(const CwParams& p, std::int64_t start_index, std::size_t n, double fs,
                        double carrier_hz) {
    p.validate(fs);
    if (n == 0) throw EmptyRequestError("generate_cw: zero samples requested");

    SampleBlock out;
    out.start_index = start_index;
    out.sample_rate_hz = fs;
    out.carrier_hz = carrier_hz;
    out.samples.resize(n);

    const double phi_cycles = p.phase_offset_rad / kTwoPi;
    for (std::size_t i = 0; i < n; ++i) {
        double t = static_cast<double>(start_index + static_cast<std::int64_t>(i)) / fs;
        double cycles = p.offset_hz * t + phi_cycles;
        cycles -= std::floor(cycles); // keep the argument small before the trig call
        out.samples[i] = std::polar(p.amplitude, kTwoPi * cycles);
    }
    return out;
}

SampleBlock generate_rmode(const TransmitterConfig& config, std::int64_t start_index,
                           std::size_t n) {
    config.validate();
    if (n == 0) throw EmptyRequestError("generate_rmode: zero samples requested");

    SampleBlock out = generate_msk(config.msk, config.carrier_hz, start_index, n,
                                   config.sample_rate_hz);
    SampleBlock t1 = generate_cw(config.cw1, start_index, n, config.sample_rate_hz,
                                 config.carrier_hz);
    SampleBlock t2 = generate_cw(config.cw2, start_index, n, config.sample_rate_hz,
                                 config.carrier_hz);
    for (std::size_t i = 0; i < n; ++i) out.samples[i] += t1.samples[i] + t2.samples[i];
    return out;
}

SampleBlock generate_msk(const MskParams& p, double carrier_hz, double t0_s, std::size_t n,
                         double fs) {
    return generate_msk(p, carrier_hz, index_for_time(t0_s, fs), n, fs);
}

SampleBlock generate_cw(const CwParams& p, double t0_s, std::size_t n, double fs,
                        double carrier_hz) {
    return generate_cw(p, index_for_time(t0_s, fs), n, fs, carrier_hz);
}

SampleBlock generate_rmode(const TransmitterConfig& config, double t0_s, std::size_t n) {
    return generate_rmode(config, index_for_time(t0_s, config.sample_rate_hz), n);
}

} // namespace rmode
