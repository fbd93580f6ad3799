#ifndef RMODE_RECEIVER_HPP
#define RMODE_RECEIVER_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rmode/sample_block.hpp"

namespace rmode {

enum class ToneId { cw1, cw2 };

const char* tone_name(ToneId id);
ToneId tone_from_name(const std::string& name); // throws FormatError

// Per-tone estimate over one integration window, stamped at window center.
struct CwMeasurement {
    ToneId tone_id = ToneId::cw1;
    double epoch_time_s = 0.0;
    double phase_cycles = 0.0;  // fractional tone phase in [0, 1)
    double snr_db = 0.0;        // capped, see ToneEstimatorConfig
    double amplitude_est = 0.0; // linear
};

enum class EstimatorWindow { rectangular, hann };

// The SNR convention: tone power is the coherently-normalized correlation
// power |C|^2 (reads B^2 for a clean tone); the per-bin noise power is the
// median periodogram bin outside the exclusion zones, divided by ln 2 to
// unbias the median of an exponential distribution. With this convention the
// small-error phase noise is 1/(2*pi*sqrt(2*snr_linear)) cycles for either
// window choice.
struct ToneEstimatorConfig {
    double integration_s = 1.0;
    EstimatorWindow window = EstimatorWindow::hann;
    std::vector<double> known_tone_offsets_hz = {+250.0, -250.0}; // excluded from the noise floor
    double msk_exclusion_halfwidth_hz = 300.0; // central MSK-dominated region
    int tone_guard_bins = 3;
    double snr_cap_db = 60.0;
};

// Windowed complex correlation of r against exp(j*2*pi*offset_hz*t) over the
// first integration_s of the block (Hann weighting by default keeps the MSK
// continuum out of the tone estimate). Throws InsufficientDataError when the
// block is shorter than the window.
CwMeasurement estimate_tone(const SampleBlock& r, double offset_hz,
                            const ToneEstimatorConfig& cfg = {}, ToneId id = ToneId::cw1);

double wrap_cycles(double x); // into [0, 1)

// Measured tone phase -> one-way propagation phase in cycles, given the
// transmitted phase offset of that tone: frac(Phi_tx - measured).
double propagation_cycles(const CwMeasurement& m, double tx_phase_offset_rad);
CwMeasurement referenced_to_transmitter(const CwMeasurement& m, double tx_phase_offset_rad);

// One resolved range. For receiver-produced epochs
// range_m = (integer_cycles_n + phase_cycles) * wavelength exactly.
struct RangeEpoch {
    ToneId tone_id = ToneId::cw1;
    double epoch_time_s = 0.0; // seconds since the scenario epoch
    double local_tod_s = 0.0;  // local clock, seconds since midnight
    double phase_cycles = 0.0; // propagation phase used for ranging
    double snr_db = 0.0;
    double alpha = 0.0;        // skywave attenuation in effect at this epoch
    std::int64_t integer_cycles_n = 0;
    double range_m = 0.0;
    bool gated = false;        // admitted by the SNR gate
    double error_m = std::numeric_limits<double>::quiet_NaN();
};

// lambda = c/tone_hz; N = argmin over integers of
// |(N + phase_cycles)*lambda - a_priori_range_m| (ties resolve to the larger
// N); range = (N + phase_cycles)*lambda. N may come out negative when the
// a-priori sits near zero and the phase near one.
RangeEpoch phase_to_range(const CwMeasurement& m, double tone_hz, double a_priori_range_m);

// Dual-tone coarse range from the beat of two propagation phases:
// wrap(phase_hi - phase_lo) * c/|f1 - f2|, where "hi" is the higher-frequency
// tone. Throws EpochMismatchError when the measurements are from different
// epochs.
double resolve_coarse(const CwMeasurement& m1, const CwMeasurement& m2, double f1_hz, double f2_hz);

// IEC beacon-receiver admission rule; inclusive at the threshold.
bool snr_gate(const CwMeasurement& m, double threshold_db = 7.0);

} // namespace rmode

#endif
