#ifndef RMODE_SCENARIO_IO_HPP
#define RMODE_SCENARIO_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rmode/experiment.hpp"

namespace rmode {

inline constexpr const char* kScenarioVersion = "rmode-scenario/1";
inline constexpr const char* kWindowsVersion = "rmode-windows/1";

// Everything one simulation run needs: the scenario proper plus analysis
// windows, histogram binning and the default seed.
struct ScenarioDoc {
    Scenario scenario;
    std::vector<WindowSpec> windows;
    HistogramSpec histogram;
    std::uint64_t seed = 1;
};

// Strict JSON loader: version field mandatory, unknown keys rejected, every
// value validated. All problems are collected and reported together in the
// FormatError message (one per line, each with its JSON path).
ScenarioDoc parse_scenario(const std::string& path);
ScenarioDoc parse_scenario_text(const std::string& text, const std::string& origin = "<string>");

std::string serialize_scenario(const ScenarioDoc& doc); // round-trips through parse

// Standalone windows file (same schema as the scenario's "windows" array).
std::vector<WindowSpec> parse_windows(const std::string& path);
std::vector<WindowSpec> parse_windows_text(const std::string& text,
                                           const std::string& origin = "<string>");

} // namespace rmode

#endif
