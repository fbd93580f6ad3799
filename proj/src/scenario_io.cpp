#include "rmode/scenario_io.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

#include "rmode/errors.hpp"

namespace rmode {

using nlohmann::json;

namespace {

// Collects every problem before failing, so a bad file reports all of its
// issues in one pass rather than one per run.
struct Validator {
    std::vector<std::string> errors;
    std::string origin;

    void fail(const std::string& path, const std::string& msg) {
        errors.push_back(origin + ": " + path + ": " + msg);
    }

    void finish() {
        if (errors.empty()) return;
        std::string joined;
        for (const auto& e : errors) {
            joined += e;
            joined += '\n';
        }
        joined.pop_back();
        throw FormatError(joined);
    }

    void check_keys(const json& obj, const std::string& path,
                    const std::set<std::string>& known) {
        if (!obj.is_object()) {
            fail(path, "expected an object");
            return;
        }
        for (auto it = obj.begin(); it != obj.end(); ++it)
            if (!known.count(it.key())) fail(path, "unknown key '" + it.key() + "'");
    }

    bool want_number(const json& obj, const std::string& path, const char* key, double& into,
                     bool required = true) {
        if (!obj.contains(key)) {
            if (required) fail(path, std::string("missing field '") + key + "'");
            return false;
        }
        const json& v = obj.at(key);
        if (!v.is_number()) {
            fail(path + "." + key, "expected a number");
            return false;
        }
        into = v.get<double>();
        return true;
    }

    bool want_string(const json& obj, const std::string& path, const char* key,
                     std::string& into, bool required = true) {
        if (!obj.contains(key)) {
            if (required) fail(path, std::string("missing field '") + key + "'");
            return false;
        }
        const json& v = obj.at(key);
        if (!v.is_string()) {
            fail(path + "." + key, "expected a string");
            return false;
        }
        into = v.get<std::string>();
        return true;
    }

    bool want_bool(const json& obj, const std::string& path, const char* key, bool& into) {
        if (!obj.contains(key)) return false;
        const json& v = obj.at(key);
        if (!v.is_boolean()) {
            fail(path + "." + key, "expected a boolean");
            return false;
        }
        into = v.get<bool>();
        return true;
    }

    bool want_clock(const json& obj, const std::string& path, const char* key, ClockTime& into,
                    bool required = true) {
        std::string text;
        if (!want_string(obj, path, key, text, required)) return false;
        try {
            into = ClockTime::parse(text);
        } catch (const FormatError& e) {
            fail(path + "." + key, e.what());
            return false;
        }
        return true;
    }
};

void parse_transmitter(Validator& v, const json& j, const std::string& path,
                       TransmitterConfig& tx) {
    v.check_keys(j, path, {"carrier_hz", "sample_rate_hz", "strict_band", "msk", "cw1", "cw2"});
    if (!j.is_object()) return;
    v.want_number(j, path, "carrier_hz", tx.carrier_hz, false);
    v.want_number(j, path, "sample_rate_hz", tx.sample_rate_hz, false);
    v.want_bool(j, path, "strict_band", tx.strict_band);
    if (j.contains("msk")) {
        const json& m = j.at("msk");
        v.check_keys(m, path + ".msk",
                     {"amplitude", "bit_interval_s", "phase_offset_rad", "bit_seed"});
        if (m.is_object()) {
            v.want_number(m, path + ".msk", "amplitude", tx.msk.amplitude, false);
            v.want_number(m, path + ".msk", "bit_interval_s", tx.msk.bit_interval_s, false);
            v.want_number(m, path + ".msk", "phase_offset_rad", tx.msk.phase_offset_rad, false);
            if (m.contains("bit_seed")) {
                if (!m.at("bit_seed").is_number_unsigned())
                    v.fail(path + ".msk.bit_seed", "expected a non-negative integer");
                else
                    tx.msk.bit_seed = m.at("bit_seed").get<std::uint64_t>();
            }
        }
    }
    auto parse_cw = [&](const char* key, CwParams& cw) {
        if (!j.contains(key)) return;
        const json& c = j.at(key);
        std::string p = path + "." + key;
        v.check_keys(c, p, {"amplitude", "phase_offset_rad", "offset_hz"});
        if (!c.is_object()) return;
        v.want_number(c, p, "amplitude", cw.amplitude, false);
        v.want_number(c, p, "phase_offset_rad", cw.phase_offset_rad, false);
        v.want_number(c, p, "offset_hz", cw.offset_hz, false);
    };
    parse_cw("cw1", tx.cw1);
    parse_cw("cw2", tx.cw2);
}

void parse_link(Validator& v, const json& j, const std::string& path, LinkGeometry& link) {
    v.check_keys(j, path,
                 {"tx_lat_deg", "tx_lon_deg", "rx_lat_deg", "rx_lon_deg",
                  "groundwave_velocity_factor", "ionosphere_height_km"});
    if (!j.is_object()) return;
    v.want_number(j, path, "tx_lat_deg", link.tx_lat_deg);
    v.want_number(j, path, "tx_lon_deg", link.tx_lon_deg);
    v.want_number(j, path, "rx_lat_deg", link.rx_lat_deg);
    v.want_number(j, path, "rx_lon_deg", link.rx_lon_deg);
    v.want_number(j, path, "groundwave_velocity_factor", link.groundwave_velocity_factor, false);
    v.want_number(j, path, "ionosphere_height_km", link.ionosphere_height_km, false);
}

void parse_schedule(Validator& v, const json& j, const std::string& path, DiurnalSchedule& s) {
    v.check_keys(j, path,
                 {"day_start", "day_end", "alpha_night", "ramp_minutes", "t_d_night_s"});
    if (!j.is_object()) return;
    v.want_clock(j, path, "day_start", s.day_start, false);
    v.want_clock(j, path, "day_end", s.day_end, false);
    v.want_number(j, path, "alpha_night", s.alpha_night, false);
    v.want_number(j, path, "ramp_minutes", s.ramp_minutes, false);
    v.want_number(j, path, "t_d_night_s", s.t_d_night_s, false);
}

std::vector<WindowSpec> parse_windows_json(Validator& v, const json& arr,
                                           const std::string& path) {
    std::vector<WindowSpec> out;
    if (!arr.is_array()) {
        v.fail(path, "expected an array of windows");
        return out;
    }
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const json& w = arr[i];
        std::string p = path + "[" + std::to_string(i) + "]";
        v.check_keys(w, p, {"label", "intervals"});
        if (!w.is_object()) continue;
        WindowSpec spec;
        v.want_string(w, p, "label", spec.label);
        if (!w.contains("intervals") || !w.at("intervals").is_array()) {
            v.fail(p, "missing or non-array 'intervals'");
            continue;
        }
        for (std::size_t k = 0; k < w.at("intervals").size(); ++k) {
            const json& iv = w.at("intervals")[k];
            std::string ip = p + ".intervals[" + std::to_string(k) + "]";
            if (!iv.is_array() || iv.size() != 2 || !iv[0].is_string() || !iv[1].is_string()) {
                v.fail(ip, "expected [\"HH:MM\", \"HH:MM\"]");
                continue;
            }
            try {
                spec.intervals.emplace_back(ClockTime::parse(iv[0].get<std::string>()),
                                            ClockTime::parse(iv[1].get<std::string>()));
            } catch (const FormatError& e) {
                v.fail(ip, e.what());
            }
        }
        if (!spec.label.empty() && !spec.intervals.empty()) {
            try {
                spec.validate();
            } catch (const ConfigError& e) {
                v.fail(p, e.what());
            }
        }
        out.push_back(std::move(spec));
    }
    return out;
}

json load_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(origin + ": JSON syntax error: " + e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

ScenarioDoc parse_scenario_text(const std::string& text, const std::string& origin) {
    json j = load_json(text, origin);
    Validator v;
    v.origin = origin;

    v.check_keys(j, "$",
                 {"version", "start_date", "utc_offset", "start_local_time", "end_local_time",
                  "epoch_interval_s", "integration_s", "noise_sigma", "a_priori", "transmitter",
                  "link", "schedule", "cw_boost", "skywave_random_phase", "rx_clock_offset_s",
                  "snr_gate_db", "windows", "histogram", "seed"});

    std::string version;
    if (v.want_string(j, "$", "version", version) && version != kScenarioVersion)
        v.fail("$.version", "unsupported version '" + version + "' (expected " +
                                std::string(kScenarioVersion) + ")");

    ScenarioDoc doc;
    Scenario& sc = doc.scenario;

    std::string date_text, offset_text;
    if (v.want_string(j, "$", "start_date", date_text, false)) {
        try {
            day_serial_from_date(date_text);
            sc.start_date = date_text;
        } catch (const FormatError& e) {
            v.fail("$.start_date", e.what());
        }
    }
    if (v.want_string(j, "$", "utc_offset", offset_text, false)) {
        try {
            sc.utc_offset_min = parse_utc_offset(offset_text);
        } catch (const FormatError& e) {
            v.fail("$.utc_offset", e.what());
        }
    }

    v.want_clock(j, "$", "start_local_time", sc.start_local_time, false);
    v.want_clock(j, "$", "end_local_time", sc.end_local_time, false);
    v.want_number(j, "$", "epoch_interval_s", sc.epoch_interval_s, false);
    v.want_number(j, "$", "integration_s", sc.integration_s, false);
    v.want_number(j, "$", "noise_sigma", sc.noise_sigma, false);
    v.want_bool(j, "$", "skywave_random_phase", sc.skywave_random_phase);
    v.want_number(j, "$", "rx_clock_offset_s", sc.rx_clock_offset_s, false);
    v.want_number(j, "$", "snr_gate_db", sc.snr_gate_db, false);

    if (j.contains("a_priori")) {
        const json& ap = j.at("a_priori");
        v.check_keys(ap, "$.a_priori", {"mode", "range_m"});
        std::string mode;
        if (v.want_string(ap, "$.a_priori", "mode", mode)) {
            if (mode == "truth") {
                sc.a_priori_mode = APrioriMode::truth;
            } else if (mode == "coarse") {
                sc.a_priori_mode = APrioriMode::coarse;
            } else if (mode == "fixed") {
                sc.a_priori_mode = APrioriMode::fixed;
                if (!v.want_number(ap, "$.a_priori", "range_m", sc.a_priori_fixed_m))
                    v.fail("$.a_priori", "mode 'fixed' needs range_m");
            } else {
                v.fail("$.a_priori.mode", "expected truth|coarse|fixed, got '" + mode + "'");
            }
        }
    }

    if (j.contains("transmitter")) parse_transmitter(v, j.at("transmitter"), "$.transmitter", sc.transmitter);
    if (j.contains("link"))
        parse_link(v, j.at("link"), "$.link", sc.link);
    else
        v.fail("$", "missing field 'link'");
    if (j.contains("schedule")) parse_schedule(v, j.at("schedule"), "$.schedule", sc.schedule);

    if (j.contains("cw_boost")) {
        const json& b = j.at("cw_boost");
        v.check_keys(b, "$.cw_boost", {"start", "end", "gain_db"});
        BoostWindow bw;
        bool ok = v.want_clock(b, "$.cw_boost", "start", bw.start);
        ok = v.want_clock(b, "$.cw_boost", "end", bw.end) && ok;
        ok = v.want_number(b, "$.cw_boost", "gain_db", bw.gain_db) && ok;
        if (ok) sc.cw_boost = bw;
    }

    if (j.contains("windows")) doc.windows = parse_windows_json(v, j.at("windows"), "$.windows");

    if (j.contains("histogram")) {
        const json& h = j.at("histogram");
        v.check_keys(h, "$.histogram", {"n_bins"});
        double nb = 50;
        if (v.want_number(h, "$.histogram", "n_bins", nb, false)) {
            if (nb < 1 || nb != std::floor(nb))
                v.fail("$.histogram.n_bins", "expected a positive integer");
            else
                doc.histogram.n_bins = static_cast<int>(nb);
        }
    }

    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned())
            v.fail("$.seed", "expected a non-negative integer");
        else
            doc.seed = j.at("seed").get<std::uint64_t>();
    }

    // Semantic validation joins the same error report.
    if (v.errors.empty()) {
        try {
            sc.validate();
        } catch (const Error& e) {
            v.fail("$", e.what());
        }
    }
    v.finish();
    return doc;
}

ScenarioDoc parse_scenario(const std::string& path) {
    return parse_scenario_text(read_text_file(path), path);
}

std::vector<WindowSpec> parse_windows_text(const std::string& text, const std::string& origin) {
    json j = load_json(text, origin);
    Validator v;
    v.origin = origin;
    v.check_keys(j, "$", {"version", "windows"});
    std::string version;
    if (v.want_string(j, "$", "version", version) && version != kWindowsVersion)
        v.fail("$.version", "unsupported version '" + version + "'");
    std::vector<WindowSpec> out;
    if (j.contains("windows"))
        out = parse_windows_json(v, j.at("windows"), "$.windows");
    else
        v.fail("$", "missing field 'windows'");
    v.finish();
    return out;
}

std::vector<WindowSpec> parse_windows(const std::string& path) {
    return parse_windows_text(read_text_file(path), path);
}

namespace {

json windows_to_json(const std::vector<WindowSpec>& windows) {
    json arr = json::array();
    for (const auto& w : windows) {
        json intervals = json::array();
        for (const auto& [a, b] : w.intervals) intervals.push_back({a.str(), b.str()});
        arr.push_back({{"label", w.label}, {"intervals", intervals}});
    }
    return arr;
}

} // namespace

std::string serialize_scenario(const ScenarioDoc& doc) {
    const Scenario& sc = doc.scenario;
    json j;
    j["version"] = kScenarioVersion;
    j["start_date"] = sc.start_date;
    j["utc_offset"] = format_utc_offset(sc.utc_offset_min);
    j["start_local_time"] = sc.start_local_time.str();
    j["end_local_time"] = sc.end_local_time.str();
    j["epoch_interval_s"] = sc.epoch_interval_s;
    j["integration_s"] = sc.integration_s;
    j["noise_sigma"] = sc.noise_sigma;
    j["skywave_random_phase"] = sc.skywave_random_phase;
    j["rx_clock_offset_s"] = sc.rx_clock_offset_s;
    j["snr_gate_db"] = sc.snr_gate_db;
    switch (sc.a_priori_mode) {
        case APrioriMode::truth: j["a_priori"] = {{"mode", "truth"}}; break;
        case APrioriMode::coarse: j["a_priori"] = {{"mode", "coarse"}}; break;
        case APrioriMode::fixed:
            j["a_priori"] = {{"mode", "fixed"}, {"range_m", sc.a_priori_fixed_m}};
            break;
    }
    j["transmitter"] = {
        {"carrier_hz", sc.transmitter.carrier_hz},
        {"sample_rate_hz", sc.transmitter.sample_rate_hz},
        {"strict_band", sc.transmitter.strict_band},
        {"msk",
         {{"amplitude", sc.transmitter.msk.amplitude},
          {"bit_interval_s", sc.transmitter.msk.bit_interval_s},
          {"phase_offset_rad", sc.transmitter.msk.phase_offset_rad},
          {"bit_seed", sc.transmitter.msk.bit_seed}}},
        {"cw1",
         {{"amplitude", sc.transmitter.cw1.amplitude},
          {"phase_offset_rad", sc.transmitter.cw1.phase_offset_rad},
          {"offset_hz", sc.transmitter.cw1.offset_hz}}},
        {"cw2",
         {{"amplitude", sc.transmitter.cw2.amplitude},
          {"phase_offset_rad", sc.transmitter.cw2.phase_offset_rad},
          {"offset_hz", sc.transmitter.cw2.offset_hz}}}};
    j["link"] = {{"tx_lat_deg", sc.link.tx_lat_deg},
                 {"tx_lon_deg", sc.link.tx_lon_deg},
                 {"rx_lat_deg", sc.link.rx_lat_deg},
                 {"rx_lon_deg", sc.link.rx_lon_deg},
                 {"groundwave_velocity_factor", sc.link.groundwave_velocity_factor},
                 {"ionosphere_height_km", sc.link.ionosphere_height_km}};
    j["schedule"] = {{"day_start", sc.schedule.day_start.str()},
                     {"day_end", sc.schedule.day_end.str()},
                     {"alpha_night", sc.schedule.alpha_night},
                     {"ramp_minutes", sc.schedule.ramp_minutes},
                     {"t_d_night_s", sc.schedule.t_d_night_s}};
    if (sc.cw_boost)
        j["cw_boost"] = {{"start", sc.cw_boost->start.str()},
                         {"end", sc.cw_boost->end.str()},
                         {"gain_db", sc.cw_boost->gain_db}};
    if (!doc.windows.empty()) j["windows"] = windows_to_json(doc.windows);
    j["histogram"] = {{"n_bins", doc.histogram.n_bins}};
    j["seed"] = doc.seed;
    return j.dump(2) + "\n";
}

} // namespace rmode
