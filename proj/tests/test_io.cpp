#include <doctest.h>

#include <cmath>

#include "rmode/csv_io.hpp"
#include "rmode/errors.hpp"
#include "rmode/field_log.hpp"
#include "rmode/scenario_io.hpp"
#include "rmode/table_render.hpp"

#include "test_support.hpp"

using namespace rmode;

TEST_CASE("minimal scenario file gets the documented defaults") {
    const char* text = R"({
      "version": "rmode-scenario/1",
      "link": { "tx_lat_deg": 36.97, "tx_lon_deg": 127.87,
                "rx_lat_deg": 36.351, "rx_lon_deg": 127.385 }
    })";
    ScenarioDoc doc = parse_scenario_text(text);
    const Scenario& sc = doc.scenario;
    CHECK(sc.transmitter.carrier_hz == 318000.0);
    CHECK(sc.transmitter.sample_rate_hz == 8000.0);
    CHECK(sc.transmitter.msk.bit_interval_s == 0.005);
    CHECK(sc.transmitter.msk.amplitude == 1.0);
    CHECK(sc.transmitter.cw1.amplitude == 0.25);
    CHECK(sc.transmitter.cw1.offset_hz == 250.0);   // 318.25 kHz
    CHECK(sc.transmitter.cw2.offset_hz == -250.0);  // 317.75 kHz
    CHECK(sc.schedule.day_start.seconds == 6 * 3600);
    CHECK(sc.schedule.day_end.seconds == 18 * 3600);
    CHECK(sc.schedule.alpha_night == 0.3);
    CHECK(sc.snr_gate_db == 7.0);
    CHECK(sc.a_priori_mode == APrioriMode::truth);
    CHECK(doc.seed == 1);
}

TEST_CASE("scenario file carrier and tone placement") {
    ScenarioDoc doc = parse_scenario(data_path("scenarios/default.json"));
    CHECK(doc.scenario.transmitter.carrier_hz == 318000.0);
    CHECK(doc.scenario.transmitter.tone_hz(1) == 318250.0);
    CHECK(doc.scenario.transmitter.tone_hz(2) == 317750.0);
    CHECK(doc.windows.size() == 2);
}

TEST_CASE("scenario parsing reports all problems at once") {
    const char* text = R"({
      "version": "rmode-scenario/0",
      "typo_key": 1,
      "epoch_interval_s": "fast",
      "link": { "tx_lat_deg": 36.97, "tx_lon_deg": 127.87,
                "rx_lat_deg": 36.351, "rx_lon_deg": 127.385,
                "bogus": true }
    })";
    try {
        (void)parse_scenario_text(text, "mem");
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        std::string what = e.what();
        CHECK(what.find("unsupported version") != std::string::npos);
        CHECK(what.find("typo_key") != std::string::npos);
        CHECK(what.find("epoch_interval_s") != std::string::npos);
        CHECK(what.find("bogus") != std::string::npos);
    }

    CHECK_THROWS_AS((void)parse_scenario_text("{}", "mem"), FormatError); // missing version+link
    CHECK_THROWS_AS((void)parse_scenario_text("not json", "mem"), FormatError);
}

TEST_CASE("scenario round-trips through serialize/parse") {
    ScenarioDoc doc = parse_scenario(data_path("scenarios/boost_night.json"));
    std::string text = serialize_scenario(doc);
    ScenarioDoc back = parse_scenario_text(text, "roundtrip");

    CHECK(back.scenario.transmitter.carrier_hz == doc.scenario.transmitter.carrier_hz);
    CHECK(back.scenario.transmitter.cw1.amplitude == doc.scenario.transmitter.cw1.amplitude);
    CHECK(back.scenario.noise_sigma == doc.scenario.noise_sigma);
    CHECK(back.scenario.start_local_time.seconds == doc.scenario.start_local_time.seconds);
    CHECK(back.scenario.end_local_time.seconds == doc.scenario.end_local_time.seconds);
    CHECK(back.scenario.epoch_interval_s == doc.scenario.epoch_interval_s);
    CHECK(back.scenario.a_priori_mode == doc.scenario.a_priori_mode);
    REQUIRE(back.scenario.cw_boost.has_value());
    CHECK(back.scenario.cw_boost->gain_db == doc.scenario.cw_boost->gain_db);
    CHECK(back.scenario.cw_boost->start.seconds == doc.scenario.cw_boost->start.seconds);
    CHECK(back.scenario.utc_offset_min == doc.scenario.utc_offset_min);
    CHECK(back.scenario.start_date == doc.scenario.start_date);
    REQUIRE(back.windows.size() == doc.windows.size());
    for (std::size_t i = 0; i < doc.windows.size(); ++i) {
        CHECK(back.windows[i].label == doc.windows[i].label);
        CHECK(back.windows[i].intervals == doc.windows[i].intervals);
    }
    CHECK(back.seed == doc.seed);
    CHECK(back.histogram.n_bins == doc.histogram.n_bins);
    // And the serialization itself is stable.
    CHECK(serialize_scenario(back) == text);
}

TEST_CASE("timestamp parse/format") {
    LocalTimestamp ts = LocalTimestamp::parse("2022-04-21T13:25:00.500+09:00");
    CHECK(ts.tod_s == doctest::Approx(13 * 3600.0 + 25 * 60.0 + 0.5));
    CHECK(ts.utc_offset_min == 540);
    CHECK(ts.str() == "2022-04-21T13:25:00.500+09:00");
    LocalTimestamp z = LocalTimestamp::parse("2022-04-22T01:25:00Z");
    CHECK(z.utc_offset_min == 0);
    CHECK(z.day_serial == ts.day_serial + 1);
    CHECK_THROWS_AS((void)LocalTimestamp::parse("2022-04-21 13:25"), FormatError);
    CHECK_THROWS_AS((void)LocalTimestamp::parse("yesterday"), FormatError);
}

TEST_CASE("ingest: gating, empty files, malformed thresholds") {
    SUBCASE("below-gate rows are counted, not dropped silently") {
        const char* log =
            "timestamp,tone,snr_db,range_m\n"
            "2022-04-21T14:00:00.000+09:00,CW1,6.5,100100\n"
            "2022-04-21T14:00:30.000+09:00,CW1,9.0,100050\n";
        IngestReport rep = ingest_log_text(log, 100000.0);
        CHECK(rep.rows_total == 2);
        CHECK(rep.gated_out == 1);
        REQUIRE(rep.epochs.size() == 2);
        CHECK_FALSE(rep.epochs[0].gated);
        CHECK(rep.epochs[1].gated);
        CHECK(rep.epochs[1].error_m == doctest::Approx(50.0));
    }

    SUBCASE("empty log warns") {
        IngestReport rep = ingest_log_text("timestamp,tone,snr_db,range_m\n", 1000.0);
        CHECK(rep.empty_warning);
        CHECK(rep.epochs.empty());
    }

    SUBCASE("unusable header is a format error") {
        CHECK_THROWS_AS((void)ingest_log_text("time,snr\n1,2\n", 0.0), FormatError);
        CHECK_THROWS_AS((void)ingest_log_text("", 0.0), FormatError);
    }

    SUBCASE("more than 1% malformed rows aborts") {
        std::string log = "timestamp,tone,snr_db,range_m\n";
        for (int i = 0; i < 50; ++i) {
            char row[96];
            std::snprintf(row, sizeof row, "2022-04-21T14:%02d:00.000+09:00,CW1,9,100000\n",
                          i % 60);
            log += row;
        }
        log += "garbage,CW1,9,100000\n";
        CHECK_THROWS_AS((void)ingest_log_text(log, 100000.0), IngestError);
    }

    SUBCASE("under 1% malformed is tolerated and reported") {
        std::string log = "timestamp,tone,snr_db,range_m\n";
        for (int h = 0; h < 2; ++h)
            for (int i = 0; i < 60; ++i) {
                char row[96];
                std::snprintf(row, sizeof row, "2022-04-21T%02d:%02d:00.000+09:00,CW1,9,100000\n",
                              14 + h, i);
                log += row;
            }
        log += "garbage,CW1,9,100000\n";
        IngestReport rep = ingest_log_text(log, 100000.0);
        CHECK(rep.rows_malformed == 1);
        CHECK(rep.epochs.size() == 120);
        CHECK(rep.malformed_detail.size() == 1);
    }

    SUBCASE("timestamps running backwards are malformed") {
        std::string log = "timestamp,tone,snr_db,range_m\n";
        for (int h = 0; h < 2; ++h)
            for (int i = 0; i < 60; ++i) {
                char row[96];
                std::snprintf(row, sizeof row, "2022-04-21T%02d:%02d:00.000+09:00,CW1,9,100000\n",
                              14 + h, i);
                log += row;
            }
        log += "2022-04-21T13:59:00.000+09:00,CW1,9,100000\n"; // runs backwards
        IngestReport rep = ingest_log_text(log, 100000.0);
        CHECK(rep.rows_malformed == 1);
        CHECK(rep.epochs.size() == 120);
        REQUIRE(rep.malformed_detail.size() == 1);
        CHECK(rep.malformed_detail[0].find("backwards") != std::string::npos);
    }
}

TEST_CASE("golden table cells reproduce the reference values exactly") {
    std::vector<WindowSpec> daynight = parse_windows(data_path("windows/campaign_daynight.json"));
    IngestReport dj = ingest_log(data_path("golden/daejeon_daynight.csv"), 100000.0);
    auto sets = partition(dj.epochs, daynight);
    REQUIRE(sets.size() == 2);

    auto rms_cell = [&](std::size_t set_idx, ToneId id) {
        std::vector<double> errs;
        for (const auto& e : sets[set_idx].epochs)
            if (e.tone_id == id) errs.push_back(e.error_m);
        ErrorStats st = compute_stats("cell", std::span<const double>(errs));
        return fmt_cell(st.rms_m);
    };
    CHECK(rms_cell(0, ToneId::cw1) == "320095");
    CHECK(rms_cell(0, ToneId::cw2) == "320060");
    CHECK(rms_cell(1, ToneId::cw1) == "427741");
    CHECK(rms_cell(1, ToneId::cw2) == "427741");

    // The gated-out decoy row near 14:00 must not disturb the day cell.
    CHECK(dj.gated_out == 1);
}

TEST_CASE("epochs csv round-trips through ingest") {
    std::vector<RangeEpoch> eps;
    for (int i = 0; i < 4; ++i) {
        RangeEpoch e;
        e.tone_id = (i % 2) ? ToneId::cw2 : ToneId::cw1;
        e.epoch_time_s = 100.0 + 30.0 * i;
        e.local_tod_s = wrap_tod(9 * 3600.0 + e.epoch_time_s);
        e.phase_cycles = 0.125 * i;
        e.snr_db = 20.0 + i;
        e.range_m = 81234.5 + 0.001 * i;
        e.integer_cycles_n = 86;
        e.gated = true;
        e.error_m = 0.25 * i;
        eps.push_back(e);
    }
    std::string csv = epochs_csv(eps, "2022-04-21", 540);
    IngestReport rep = ingest_log_text(csv, 81234.5);
    REQUIRE(rep.epochs.size() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(rep.epochs[i].range_m == eps[i].range_m); // exact round-trip
        CHECK(rep.epochs[i].snr_db == eps[i].snr_db);
        CHECK(rep.epochs[i].local_tod_s ==
              doctest::Approx(eps[i].local_tod_s).epsilon(1e-9));
    }
}

TEST_CASE("windows file parsing") {
    auto w = parse_windows(data_path("windows/modified_unmodified.json"));
    REQUIRE(w.size() == 2);
    CHECK(w[0].label == "Modified");
    CHECK(w[0].contains(22 * 3600.0));
    CHECK_FALSE(w[0].contains(1 * 3600.0));
    CHECK_THROWS_AS((void)parse_windows_text(R"({"version":"rmode-windows/1"})", "mem"),
                    FormatError);
}
