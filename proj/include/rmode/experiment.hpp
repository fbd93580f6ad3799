#ifndef RMODE_EXPERIMENT_HPP
#define RMODE_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rmode/channel.hpp"
#include "rmode/clock_time.hpp"
#include "rmode/receiver.hpp"
#include "rmode/signal_gen.hpp"

namespace rmode {

// Window of raised CW amplitude ("modified signal"), local clock times,
// left-closed right-open, may wrap midnight.
struct BoostWindow {
    ClockTime start{21 * 3600};
    ClockTime end{24 * 3600};
    double gain_db = 6.0;
};

enum class APrioriMode { truth, fixed, coarse };

// One simulated measurement campaign over a single link.
struct Scenario {
    TransmitterConfig transmitter;
    LinkGeometry link;
    DiurnalSchedule schedule;
    double noise_sigma = 0.0;   // per-quadrature, linear
    ClockTime start_local_time{9 * 3600};
    ClockTime end_local_time{18 * 3600}; // end <= start means "next day"
    double epoch_interval_s = 21.6;
    double integration_s = 1.0;
    std::optional<BoostWindow> cw_boost;
    APrioriMode a_priori_mode = APrioriMode::truth;
    double a_priori_fixed_m = 0.0;
    bool skywave_random_phase = false; // per-epoch random echo phase (sensitivity mode)
    double rx_clock_offset_s = 0.0;    // fixed receiver clock error; biases every range
    double snr_gate_db = 7.0;
    std::string start_date = "2022-04-21";
    int utc_offset_min = 9 * 60;

    double duration_s() const;
    void validate() const; // throws ConfigError
};

// Named set of local-time intervals, left-closed right-open. An interval
// whose end is not after its start wraps past midnight.
struct WindowSpec {
    std::string label;
    std::vector<std::pair<ClockTime, ClockTime>> intervals;

    bool contains(double local_tod_s) const;
    double total_duration_s() const;
    void validate() const; // throws ConfigError (overlapping intervals)
};

// Runs every epoch of the scenario: schedule -> synthesize (with CW boost if
// inside the boost window) -> groundwave delay -> skywave -> noise ->
// per-tone estimate -> gate -> ambiguity-resolved range. Two RangeEpoch
// records per epoch (one per tone), deterministic per seed.
std::vector<RangeEpoch> run_scenario(const Scenario& scenario, std::uint64_t seed);

struct LabeledEpochs {
    std::string label;
    std::vector<RangeEpoch> epochs;
};

// Assigns every gated epoch to each window containing its local time of
// day; ungated epochs are dropped (the 7 dB rule is applied before
// partitioning). Result follows the order of `windows`.
std::vector<LabeledEpochs> partition(std::span<const RangeEpoch> epochs,
                                     const std::vector<WindowSpec>& windows);

struct HistogramSpec {
    int n_bins = 50;
    std::vector<double> edges; // fixed edges when non-empty (overrides n_bins)
};

struct ErrorStats {
    std::string label;
    std::size_t n_epochs = 0;
    double rms_m = 0.0;
    double mean_m = 0.0;
    double median_m = 0.0;
    double mean_snr_db = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> bin_edges_m;     // n_bins + 1 edges
    std::vector<std::size_t> counts;     // sums to n_epochs
};

// Throws EmptyPartitionError on an empty set. Values outside fixed edges
// clamp into the outermost bins so counts always sum to n_epochs.
ErrorStats compute_stats(const std::string& label, std::span<const double> errors_m,
                         const HistogramSpec& spec = {});
ErrorStats compute_stats(const std::string& label, std::span<const RangeEpoch> epochs,
                         const HistogramSpec& spec = {});

// Streaming mean/rms accumulator; must agree with compute_stats.
class ErrorAccumulator {
public:
    void add(double error_m);
    std::size_t n() const { return n_; }
    double mean() const;
    double rms() const;

private:
    std::size_t n_ = 0;
    double sum_ = 0.0;
    double sum_sq_ = 0.0;
};

// Uniform histogram edges spanning the pooled extent of several error sets,
// so per-label histograms share bins and distributions can be compared.
std::vector<double> pooled_edges(std::span<const LabeledEpochs> sets, int n_bins);

struct ComparisonReport {
    double rms_ratio = 1.0;    // a/b
    double median_ratio = 1.0; // a/b
    double ks_d = 0.0;         // two-sample Kolmogorov-Smirnov D from shared-bin CDFs
    std::string verdict;       // "a_better" | "b_better" | "inconclusive"
};

// Distribution-shift comparison; requires both stats to carry identical bin
// edges. Verdict is by RMS, declared only when D exceeds the threshold.
ComparisonReport compare(const ErrorStats& a, const ErrorStats& b, double d_threshold = 0.2);

} // namespace rmode

#endif
