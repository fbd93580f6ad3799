#include "rmode/field_log.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "rmode/errors.hpp"

namespace rmode {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    out.push_back(field);
    return out;
}

bool parse_double(const std::string& s, double& into) {
    if (s.empty()) return false;
    char* end = nullptr;
    into = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(into);
}

} // namespace

IngestReport ingest_log_text(const std::string& text, double truth_range_m, double gate_db,
                             const std::string& origin) {
    if (!(truth_range_m >= 0.0)) throw ConfigError("truth range must be >= 0");

    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw FormatError(origin + ": empty input, no header row");

    auto header = split_csv_line(line);
    int col_ts = -1, col_tone = -1, col_snr = -1, col_range = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "timestamp") col_ts = static_cast<int>(i);
        if (header[i] == "tone") col_tone = static_cast<int>(i);
        if (header[i] == "snr_db") col_snr = static_cast<int>(i);
        if (header[i] == "range_m") col_range = static_cast<int>(i);
    }
    if (col_ts < 0 || col_tone < 0 || col_snr < 0 || col_range < 0)
        throw FormatError(origin +
                          ": header must name timestamp, tone, snr_db and range_m columns; got '" +
                          line + "'");

    IngestReport rep;
    bool have_first = false;
    std::int64_t first_midnight_serial = 0;
    double prev_serial_s = -std::numeric_limits<double>::infinity();
    std::size_t line_no = 1;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        ++rep.rows_total;
        auto fields = split_csv_line(line);
        auto reject = [&](const std::string& why) {
            ++rep.rows_malformed;
            if (rep.malformed_detail.size() < 10)
                rep.malformed_detail.push_back(origin + ":" + std::to_string(line_no) + ": " + why);
        };
        std::size_t need = static_cast<std::size_t>(
            std::max(std::max(col_ts, col_tone), std::max(col_snr, col_range)));
        if (fields.size() <= need) {
            reject("too few columns");
            continue;
        }

        FieldLogRecord rec;
        try {
            rec.timestamp = LocalTimestamp::parse(fields[static_cast<std::size_t>(col_ts)]);
        } catch (const FormatError& e) {
            reject(e.what());
            continue;
        }
        try {
            rec.tone_id = tone_from_name(fields[static_cast<std::size_t>(col_tone)]);
        } catch (const FormatError& e) {
            reject(e.what());
            continue;
        }
        if (!parse_double(fields[static_cast<std::size_t>(col_snr)], rec.snr_db)) {
            reject("bad snr_db value");
            continue;
        }
        if (!parse_double(fields[static_cast<std::size_t>(col_range)], rec.range_m)) {
            reject("bad range_m value");
            continue;
        }
        double serial_s = rec.timestamp.local_serial_s();
        if (serial_s < prev_serial_s) {
            reject("timestamp runs backwards");
            continue;
        }
        prev_serial_s = serial_s;
        if (!have_first) {
            have_first = true;
            first_midnight_serial = rec.timestamp.day_serial;
        }

        RangeEpoch e;
        e.tone_id = rec.tone_id;
        e.epoch_time_s =
            static_cast<double>(rec.timestamp.day_serial - first_midnight_serial) * kSecondsPerDay +
            rec.timestamp.tod_s;
        e.local_tod_s = rec.timestamp.tod_s;
        e.snr_db = rec.snr_db;
        e.range_m = rec.range_m;
        e.error_m = rec.range_m - truth_range_m;
        e.gated = rec.snr_db >= gate_db;
        if (!e.gated) ++rep.gated_out;
        rep.epochs.push_back(e);
    }

    if (rep.rows_total == 0) {
        rep.empty_warning = true;
        return rep;
    }
    if (static_cast<double>(rep.rows_malformed) > 0.01 * static_cast<double>(rep.rows_total)) {
        std::string detail;
        for (const auto& d : rep.malformed_detail) detail += "\n  " + d;
        throw IngestError(origin + ": " + std::to_string(rep.rows_malformed) + " of " +
                          std::to_string(rep.rows_total) + " rows malformed (>1%), aborting" +
                          detail);
    }
    return rep;
}

IngestReport ingest_log(const std::string& path, double truth_range_m, double gate_db) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ingest_log_text(ss.str(), truth_range_m, gate_db, path);
}

} // namespace rmode
