// Command-line front end: simulate / analyze / compare / tables.
//
// All outputs are deterministic for a fixed (scenario, seed): rerunning a
// command produces byte-identical files.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "rmode/csv_io.hpp"
#include "rmode/errors.hpp"
#include "rmode/experiment.hpp"
#include "rmode/field_log.hpp"
#include "rmode/scenario_io.hpp"
#include "rmode/table_render.hpp"

namespace fs = std::filesystem;
using namespace rmode;

namespace {

std::vector<WindowSpec> default_windows() {
    // Day/night split of the measurement protocol: day 06:00-18:00 local.
    WindowSpec day{"day", {{ClockTime::parse("06:00"), ClockTime::parse("18:00")}}};
    WindowSpec night{"night", {{ClockTime::parse("18:00"), ClockTime::parse("24:00")},
                               {ClockTime::parse("00:00"), ClockTime::parse("06:00")}}};
    return {day, night};
}

std::vector<RangeEpoch> filter_tone(const std::vector<RangeEpoch>& in, ToneId id) {
    std::vector<RangeEpoch> out;
    for (const auto& e : in)
        if (e.tone_id == id) out.push_back(e);
    return out;
}

// Per-label stats for ALL / CW1 / CW2 over shared pooled bin edges.
std::vector<ErrorStats> label_stats(const LabeledEpochs& set, const HistogramSpec& hist) {
    std::vector<ErrorStats> rows;
    rows.push_back(compute_stats(set.label + "/ALL", std::span<const RangeEpoch>(set.epochs), hist));
    for (ToneId id : {ToneId::cw1, ToneId::cw2}) {
        auto sub = filter_tone(set.epochs, id);
        if (!sub.empty())
            rows.push_back(compute_stats(set.label + "/" + tone_name(id),
                                         std::span<const RangeEpoch>(sub), hist));
    }
    return rows;
}

struct AnalysisOutput {
    std::vector<LabeledEpochs> sets;
    std::vector<std::vector<ErrorStats>> per_label; // parallel to sets
};

AnalysisOutput write_analysis(const std::vector<RangeEpoch>& epochs,
                              const std::vector<WindowSpec>& windows, const HistogramSpec& hist,
                              const std::string& out_dir, std::string& report) {
    AnalysisOutput out;
    out.sets = partition(epochs, windows);

    std::vector<LabeledEpochs> non_empty;
    for (const auto& s : out.sets)
        if (!s.epochs.empty()) non_empty.push_back(s);
    HistogramSpec shared = hist;
    if (shared.edges.empty() && !non_empty.empty())
        shared.edges = pooled_edges(std::span<const LabeledEpochs>(non_empty), hist.n_bins);

    report += "label        tone   n       rms_m         mean_m        median_m      mean_snr_db\n";
    for (const auto& set : out.sets) {
        if (set.epochs.empty()) {
            report += set.label + ": empty partition (no gated epochs)\n";
            out.per_label.push_back({});
            continue;
        }
        auto rows = label_stats(set, shared);
        write_file(out_dir + "/stats_" + set.label + ".csv", stats_csv(rows));
        write_file(out_dir + "/histogram_" + set.label + ".csv", histogram_csv(rows));
        for (const auto& st : rows) {
            auto sep = st.label.find('/');
            char line[160];
            std::snprintf(line, sizeof line, "%-12s %-6s %-7zu %-13.6g %-13.6g %-13.6g %-.6g\n",
                          st.label.substr(0, sep).c_str(), st.label.substr(sep + 1).c_str(),
                          st.n_epochs, st.rms_m, st.mean_m, st.median_m, st.mean_snr_db);
            report += line;
        }
        out.per_label.push_back(std::move(rows));
    }

    // Head-to-head comparison when exactly two labels carry data.
    if (non_empty.size() == 2) {
        auto a = label_stats(non_empty[0], shared)[0];
        auto b = label_stats(non_empty[1], shared)[0];
        ComparisonReport rep = compare(a, b);
        report += "\ncompare " + non_empty[0].label + " (a) vs " + non_empty[1].label + " (b):\n";
        report += "  rms_ratio=" + fmt_double(rep.rms_ratio) +
                  " median_ratio=" + fmt_double(rep.median_ratio) +
                  " ks_d=" + fmt_double(rep.ks_d) + " verdict=" + rep.verdict + "\n";
    }
    return out;
}

int cmd_simulate(const std::string& scenario_path, std::optional<std::uint64_t> seed_opt,
                 const std::string& out_dir) {
    ScenarioDoc doc = parse_scenario(scenario_path);
    std::uint64_t seed = seed_opt.value_or(doc.seed);
    if (doc.windows.empty()) doc.windows = default_windows();

    LinkBudget budget = derive_link(doc.scenario.link);
    std::vector<RangeEpoch> epochs = run_scenario(doc.scenario, seed);

    fs::create_directories(out_dir);
    write_file(out_dir + "/epochs.csv",
               epochs_csv(epochs, doc.scenario.start_date, doc.scenario.utc_offset_min));

    std::size_t gated_out = 0;
    for (const auto& e : epochs)
        if (!e.gated) ++gated_out;

    std::string report;
    report += "scenario: " + scenario_path + "\n";
    report += "seed: " + std::to_string(seed) + "\n";
    report += "true_range_m: " + fmt_double(budget.true_range_m) + "\n";
    report += "groundwave_delay_s: " + fmt_double(budget.groundwave_delay_s) + "\n";
    report += "skywave_excess_delay_s: " + fmt_double(budget.skywave_excess_delay_s) + "\n";
    report += "epochs: " + std::to_string(epochs.size()) + " (" +
              std::to_string(gated_out) + " gated out at " +
              fmt_double(doc.scenario.snr_gate_db) + " dB)\n\n";
    write_analysis(epochs, doc.windows, doc.histogram, out_dir, report);
    write_file(out_dir + "/report.txt", report);
    std::fputs(report.c_str(), stdout);
    return 0;
}

int cmd_analyze(const std::string& log_path, double truth_m, const std::string& windows_path,
                const std::string& out_dir, double gate_db, int n_bins) {
    std::vector<WindowSpec> windows =
        windows_path.empty() ? default_windows() : parse_windows(windows_path);
    IngestReport ing = ingest_log(log_path, truth_m, gate_db);

    fs::create_directories(out_dir);
    std::string report;
    report += "log: " + log_path + "\n";
    report += "truth_range_m: " + fmt_double(truth_m) + "\n";
    report += "rows: " + std::to_string(ing.rows_total) +
              " malformed: " + std::to_string(ing.rows_malformed) +
              " gated_out: " + std::to_string(ing.gated_out) + "\n";
    if (ing.empty_warning) report += "warning: log contains no data rows\n";
    for (const auto& d : ing.malformed_detail) report += "  malformed: " + d + "\n";
    report += "\n";

    HistogramSpec hist;
    hist.n_bins = n_bins;
    write_analysis(ing.epochs, windows, hist, out_dir, report);
    write_file(out_dir + "/report.txt", report);
    std::fputs(report.c_str(), stdout);
    return 0;
}

int cmd_compare(const std::string& stats_a, const std::string& stats_b) {
    auto load = [](const std::string& path) {
        auto rows = read_stats_csv(path);
        std::string name = fs::path(path).filename().string();
        if (name.rfind("stats_", 0) != 0)
            throw FormatError(path + ": expected a stats_<label>.csv file");
        read_histogram_csv(fs::path(path).parent_path() / ("histogram_" + name.substr(6)), rows);
        for (const auto& r : rows)
            if (r.label.size() > 4 && r.label.substr(r.label.size() - 4) == "/ALL" &&
                !r.bin_edges_m.empty())
                return r;
        throw FormatError(path + ": no pooled (ALL) row with histogram data");
    };
    ErrorStats a = load(stats_a);
    ErrorStats b = load(stats_b);
    ComparisonReport rep = compare(a, b);
    std::printf("a: %s (n=%zu rms=%s)\n", stats_a.c_str(), a.n_epochs, fmt_double(a.rms_m).c_str());
    std::printf("b: %s (n=%zu rms=%s)\n", stats_b.c_str(), b.n_epochs, fmt_double(b.rms_m).c_str());
    std::printf("rms_ratio=%s median_ratio=%s ks_d=%s verdict=%s\n",
                fmt_double(rep.rms_ratio).c_str(), fmt_double(rep.median_ratio).c_str(),
                fmt_double(rep.ks_d).c_str(), rep.verdict.c_str());
    return 0;
}

int cmd_tables(const std::string& log_path, double truth_m, const std::string& windows_path,
               const std::string& kind, const std::string& title, const std::string& out_dir,
               double gate_db) {
    std::vector<WindowSpec> windows =
        windows_path.empty() ? default_windows() : parse_windows(windows_path);
    IngestReport ing = ingest_log(log_path, truth_m, gate_db);
    auto sets = partition(ing.epochs, windows);

    SummaryTable table;
    table.title = title.empty()
                      ? (kind == "snr" ? std::string("Average SNR (dB)")
                                       : std::string("RMS distance error (m)"))
                      : title;
    table.row_labels = {"CW1", "CW2"};
    for (const auto& set : sets) table.column_labels.push_back(set.label);
    table.cells.assign(2, std::vector<double>(sets.size(), 0.0));
    for (std::size_t c = 0; c < sets.size(); ++c) {
        for (std::size_t r = 0; r < 2; ++r) {
            auto sub = filter_tone(sets[c].epochs, r == 0 ? ToneId::cw1 : ToneId::cw2);
            if (sub.empty())
                throw EmptyPartitionError("no " + std::string(r == 0 ? "CW1" : "CW2") +
                                          " epochs in window '" + sets[c].label + "'");
            ErrorStats st = compute_stats("cell", std::span<const RangeEpoch>(sub));
            table.cells[r][c] = (kind == "snr") ? st.mean_snr_db : st.rms_m;
        }
    }
    std::string rendered = render_table(table);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_file(out_dir + "/table.txt", rendered);
    }
    std::fputs(rendered.c_str(), stdout);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"MF R-Mode ranging simulator and field-log analysis toolkit"};
    app.require_subcommand(1);

    // simulate
    std::string scenario_path, out_dir = "out";
    std::uint64_t seed_val = 0;
    auto* sim = app.add_subcommand("simulate", "run a scenario and write epoch/stats CSVs");
    sim->add_option("scenario", scenario_path, "scenario JSON file")->required();
    auto* seed_opt = sim->add_option("--seed", seed_val, "override the scenario's seed");
    sim->add_option("--out", out_dir, "output directory (default: out)");

    // analyze
    std::string log_path, windows_path;
    double truth_m = 0.0, gate_db = 7.0;
    int n_bins = 50;
    auto* ana = app.add_subcommand("analyze", "ingest a field log and compute window statistics");
    ana->add_option("log", log_path, "field-log CSV")->required();
    ana->add_option("--truth", truth_m, "surveyed true range in meters")->required();
    ana->add_option("--windows", windows_path, "windows JSON (default: day/night 06:00-18:00)");
    ana->add_option("--out", out_dir, "output directory (default: out)");
    ana->add_option("--gate-db", gate_db, "SNR admission threshold (default 7)");
    ana->add_option("--bins", n_bins, "histogram bin count (default 50)");

    // compare
    std::string stats_a, stats_b;
    auto* cmp = app.add_subcommand("compare", "compare two stats_<label>.csv files");
    cmp->add_option("stats_a", stats_a, "first stats CSV")->required();
    cmp->add_option("stats_b", stats_b, "second stats CSV")->required();

    // tables
    std::string kind = "rms", title, tables_out;
    auto* tab = app.add_subcommand("tables", "render a per-tone summary table from a field log");
    tab->add_option("--log", log_path, "field-log CSV")->required();
    tab->add_option("--truth", truth_m, "surveyed true range in meters")->required();
    tab->add_option("--windows", windows_path, "windows JSON")->required();
    tab->add_option("--kind", kind, "rms | snr (default rms)")
        ->check(CLI::IsMember({"rms", "snr"}));
    tab->add_option("--title", title, "table title");
    tab->add_option("--out", tables_out, "directory for table.txt (optional)");
    tab->add_option("--gate-db", gate_db, "SNR admission threshold (default 7)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed())
            return cmd_simulate(scenario_path,
                                seed_opt->count() ? std::optional<std::uint64_t>(seed_val)
                                                  : std::nullopt,
                                out_dir);
        if (ana->parsed())
            return cmd_analyze(log_path, truth_m, windows_path, out_dir, gate_db, n_bins);
        if (cmp->parsed()) return cmd_compare(stats_a, stats_b);
        if (tab->parsed())
            return cmd_tables(log_path, truth_m, windows_path, kind, title, tables_out, gate_db);
    } catch (const Error& e) {
        std::fprintf(stderr, "{\"error\":\"%s\",\"message\":%s}\n", e.category().c_str(),
                     nlohmann::json(std::string(e.what())).dump().c_str());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "{\"error\":\"internal\",\"message\":%s}\n",
                     nlohmann::json(std::string(e.what())).dump().c_str());
        return 1;
    }
    return 0;
}
