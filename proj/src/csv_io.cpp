#include "rmode/csv_io.hpp"

#include <charconv>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rmode/errors.hpp"

namespace rmode {

std::string fmt_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string epochs_csv(std::span<const RangeEpoch> epochs, const std::string& start_date,
                       int utc_offset_min) {
    const std::int64_t day0 = day_serial_from_date(start_date);
    std::string out =
        "timestamp,tone,snr_db,range_m,epoch_time_s,local_tod_s,phase_cycles,integer_cycles,"
        "alpha,gated,error_m\n";
    for (const auto& e : epochs) {
        LocalTimestamp ts;
        ts.utc_offset_min = utc_offset_min;
        // epoch_time_s counts from the scenario start; the start's time of
        // day is local_tod_s - epoch_time_s (mod 24 h), from which the
        // calendar stamp follows.
        double start_tod = wrap_tod(e.local_tod_s - e.epoch_time_s);
        double total = start_tod + e.epoch_time_s;
        ts.day_serial = day0 + static_cast<std::int64_t>(std::floor(total / kSecondsPerDay));
        ts.tod_s = wrap_tod(total);
        out += ts.str();
        out += ',';
        out += tone_name(e.tone_id);
        out += ',';
        out += fmt_double(e.snr_db);
        out += ',';
        out += fmt_double(e.range_m);
        out += ',';
        out += fmt_double(e.epoch_time_s);
        out += ',';
        out += fmt_double(e.local_tod_s);
        out += ',';
        out += fmt_double(e.phase_cycles);
        out += ',';
        out += std::to_string(e.integer_cycles_n);
        out += ',';
        out += fmt_double(e.alpha);
        out += ',';
        out += e.gated ? "1" : "0";
        out += ',';
        out += fmt_double(e.error_m);
        out += '\n';
    }
    return out;
}

std::string stats_csv(const std::vector<ErrorStats>& rows) {
    std::string out = "label,tone,n_epochs,rms_m,mean_m,median_m,mean_snr_db\n";
    for (const auto& st : rows) {
        auto sep = st.label.find('/');
        std::string label = st.label.substr(0, sep);
        std::string tone = sep == std::string::npos ? "ALL" : st.label.substr(sep + 1);
        out += label + "," + tone + "," + std::to_string(st.n_epochs) + "," + fmt_double(st.rms_m) +
               "," + fmt_double(st.mean_m) + "," + fmt_double(st.median_m) + "," +
               fmt_double(st.mean_snr_db) + "\n";
    }
    return out;
}

std::string histogram_csv(const std::vector<ErrorStats>& rows) {
    std::string out = "label,tone,bin_lo_m,bin_hi_m,count\n";
    for (const auto& st : rows) {
        auto sep = st.label.find('/');
        std::string label = st.label.substr(0, sep);
        std::string tone = sep == std::string::npos ? "ALL" : st.label.substr(sep + 1);
        for (std::size_t i = 0; i < st.counts.size(); ++i) {
            out += label + "," + tone + "," + fmt_double(st.bin_edges_m[i]) + "," +
                   fmt_double(st.bin_edges_m[i + 1]) + "," + std::to_string(st.counts[i]) + "\n";
        }
    }
    return out;
}

namespace {

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string f;
    for (char c : line) {
        if (c == delim) {
            out.push_back(f);
            f.clear();
        } else if (c != '\r') {
            f += c;
        }
    }
    out.push_back(f);
    return out;
}

double to_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw FormatError("bad numeric value '" + s + "' in " + what);
    }
}

} // namespace

std::vector<ErrorStats> read_stats_csv(const std::string& path) {
    std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) ||
        split(line, ',') != std::vector<std::string>{"label", "tone", "n_epochs", "rms_m",
                                                     "mean_m", "median_m", "mean_snr_db"})
        throw FormatError(path + ": not a stats CSV (unexpected header)");
    std::vector<ErrorStats> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split(line, ',');
        if (f.size() != 7) throw FormatError(path + ": bad stats row '" + line + "'");
        ErrorStats st;
        st.label = f[0] + "/" + f[1];
        st.n_epochs = static_cast<std::size_t>(to_double(f[2], path));
        st.rms_m = to_double(f[3], path);
        st.mean_m = to_double(f[4], path);
        st.median_m = to_double(f[5], path);
        st.mean_snr_db = to_double(f[6], path);
        out.push_back(std::move(st));
    }
    return out;
}

void read_histogram_csv(const std::string& path, std::vector<ErrorStats>& into) {
    std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) ||
        split(line, ',') !=
            std::vector<std::string>{"label", "tone", "bin_lo_m", "bin_hi_m", "count"})
        throw FormatError(path + ": not a histogram CSV (unexpected header)");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split(line, ',');
        if (f.size() != 5) throw FormatError(path + ": bad histogram row '" + line + "'");
        std::string key = f[0] + "/" + f[1];
        for (auto& st : into) {
            if (st.label != key) continue;
            double lo = to_double(f[2], path), hi = to_double(f[3], path);
            if (st.bin_edges_m.empty()) st.bin_edges_m.push_back(lo);
            st.bin_edges_m.push_back(hi);
            st.counts.push_back(static_cast<std::size_t>(to_double(f[4], path)));
        }
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace rmode
