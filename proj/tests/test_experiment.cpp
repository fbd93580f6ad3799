#include <doctest.h>

#include <cmath>
#include <vector>

#include "rmode/errors.hpp"
#include "rmode/experiment.hpp"
#include "rmode/rng.hpp"

using namespace rmode;

namespace {

Scenario quiet_noon_scenario() {
    Scenario sc;
    sc.link.tx_lat_deg = 36.97;
    sc.link.tx_lon_deg = 127.87;
    sc.link.rx_lat_deg = 36.351;
    sc.link.rx_lon_deg = 127.385;
    sc.noise_sigma = 0.0;
    sc.start_local_time = ClockTime::parse("12:00");
    sc.end_local_time = ClockTime::parse("12:01");
    sc.epoch_interval_s = 30.0;
    sc.integration_s = 2.0;
    return sc;
}

} // namespace

TEST_CASE("noiseless daytime epoch ranges within 0.1 m") {
    Scenario sc = quiet_noon_scenario();
    auto epochs = run_scenario(sc, 1);
    REQUIRE(epochs.size() >= 2);
    for (const auto& e : epochs) {
        CHECK(std::fabs(e.error_m) < 0.1);
        CHECK(e.alpha == 0.0);
        CHECK(e.gated);
        CHECK(e.snr_db == 60.0);
    }
}

TEST_CASE("identical scenario and seed give bit-identical epochs") {
    Scenario sc = quiet_noon_scenario();
    sc.noise_sigma = 1.2;
    auto a = run_scenario(sc, 99);
    auto b = run_scenario(sc, 99);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].range_m == b[i].range_m);
        CHECK(a[i].snr_db == b[i].snr_db);
        CHECK(a[i].phase_cycles == b[i].phase_cycles);
        CHECK(a[i].error_m == b[i].error_m);
    }
    auto c = run_scenario(sc, 100);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size(); ++i) any_diff |= (a[i].range_m != c[i].range_m);
    CHECK(any_diff);
}

TEST_CASE("recorded alpha tracks the schedule across sunset") {
    Scenario sc = quiet_noon_scenario();
    sc.start_local_time = ClockTime::parse("17:00");
    sc.end_local_time = ClockTime::parse("20:00");
    sc.epoch_interval_s = 120.0;
    sc.integration_s = 1.0;
    auto epochs = run_scenario(sc, 3);
    DiurnalSchedule sched = sc.schedule;
    sched.t_d_night_s = derive_link(sc.link).skywave_excess_delay_s;
    bool saw_day = false, saw_ramp = false, saw_night = false;
    for (const auto& e : epochs) {
        double expected = schedule_alpha(sched, e.local_tod_s).alpha;
        CHECK(e.alpha == doctest::Approx(expected).epsilon(1e-12));
        if (e.alpha == 0.0) saw_day = true;
        if (e.alpha > 0.0 && e.alpha < sched.alpha_night) saw_ramp = true;
        if (e.alpha == doctest::Approx(sched.alpha_night)) saw_night = true;
    }
    CHECK(saw_day);
    CHECK(saw_ramp);
    CHECK(saw_night);
}

TEST_CASE("partition rules") {
    WindowSpec day{"day", {{ClockTime::parse("06:00"), ClockTime::parse("18:00")}}};
    WindowSpec night{"night", {{ClockTime::parse("18:00"), ClockTime::parse("24:00")},
                               {ClockTime::parse("00:00"), ClockTime::parse("06:00")}}};

    RangeEpoch noon;
    noon.local_tod_s = 12 * 3600.0;
    noon.gated = true;
    RangeEpoch six_pm = noon;
    six_pm.local_tod_s = 18 * 3600.0; // boundary: left-closed -> night
    RangeEpoch ungated = noon;
    ungated.gated = false;

    std::vector<RangeEpoch> epochs{noon, six_pm, ungated};
    auto sets = partition(epochs, {day, night});
    REQUIRE(sets.size() == 2);
    CHECK(sets[0].label == "day");
    CHECK(sets[0].epochs.size() == 1);
    CHECK(sets[0].epochs[0].local_tod_s == noon.local_tod_s);
    CHECK(sets[1].epochs.size() == 1);
    CHECK(sets[1].epochs[0].local_tod_s == six_pm.local_tod_s);

    // Conservation: each gated epoch lands in exactly the windows that
    // contain it; ungated epochs land nowhere.
    std::size_t total = sets[0].epochs.size() + sets[1].epochs.size();
    CHECK(total == 2);
}

TEST_CASE("measurement-protocol windows have equal durations") {
    WindowSpec day{"day", {{ClockTime::parse("13:25"), ClockTime::parse("18:00")},
                           {ClockTime::parse("06:00"), ClockTime::parse("09:00")}}};
    WindowSpec night{"night", {{ClockTime::parse("18:00"), ClockTime::parse("21:00")},
                               {ClockTime::parse("01:25"), ClockTime::parse("06:00")}}};
    day.validate();
    night.validate();
    CHECK(day.total_duration_s() == doctest::Approx(7 * 3600.0 + 35 * 60.0));
    CHECK(day.total_duration_s() == doctest::Approx(night.total_duration_s()));
}

TEST_CASE("window validation rejects overlap") {
    WindowSpec bad{"x", {{ClockTime::parse("10:00"), ClockTime::parse("14:00")},
                         {ClockTime::parse("13:00"), ClockTime::parse("15:00")}}};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    WindowSpec wrap{"y", {{ClockTime::parse("22:00"), ClockTime::parse("02:00")},
                          {ClockTime::parse("01:00"), ClockTime::parse("03:00")}}};
    CHECK_THROWS_AS(wrap.validate(), ConfigError);
}

TEST_CASE("compute_stats") {
    std::vector<double> zeros{0.0, 0.0, 0.0};
    ErrorStats z = compute_stats("z", std::span<const double>(zeros));
    CHECK(z.rms_m == 0.0);
    CHECK(z.n_epochs == 3);

    std::vector<double> pair{3.0, 4.0};
    ErrorStats p = compute_stats("p", std::span<const double>(pair));
    CHECK(p.rms_m == doctest::Approx(std::sqrt(12.5)).epsilon(1e-12)); // hand oracle sqrt(25/2)
    CHECK(p.rms_m == doctest::Approx(3.53553).epsilon(1e-5));
    CHECK(p.mean_m == doctest::Approx(3.5));
    CHECK(p.median_m == doctest::Approx(3.5));
    std::size_t total = 0;
    for (auto c : p.counts) total += c;
    CHECK(total == p.n_epochs);

    std::vector<double> empty;
    CHECK_THROWS_AS((void)compute_stats("e", std::span<const double>(empty)), EmptyPartitionError);
}

TEST_CASE("streaming accumulator matches batch stats") {
    std::vector<double> vals;
    double x = 0.1;
    for (int i = 0; i < 5000; ++i) {
        x = std::fmod(x * 1103515245.0 + 12345.0, 997.0);
        vals.push_back(x - 498.5);
    }
    ErrorStats batch = compute_stats("b", std::span<const double>(vals));
    ErrorAccumulator acc;
    for (double v : vals) acc.add(v);
    CHECK(acc.n() == batch.n_epochs);
    CHECK(acc.rms() == doctest::Approx(batch.rms_m).epsilon(1e-9));
    CHECK(acc.mean() == doctest::Approx(batch.mean_m).epsilon(1e-9));
}

TEST_CASE("comparison verdicts") {
    std::vector<double> zeros(50, 0.0);
    std::vector<double> hundreds(50, 100.0);

    HistogramSpec shared;
    shared.edges = {-1.0, 25.0, 50.0, 75.0, 101.0};
    ErrorStats a = compute_stats("a", std::span<const double>(zeros), shared);
    ErrorStats b = compute_stats("b", std::span<const double>(hundreds), shared);

    SUBCASE("identical stats are inconclusive") {
        ComparisonReport r = compare(a, a);
        CHECK(r.rms_ratio == 1.0);
        CHECK(r.median_ratio == 1.0);
        CHECK(r.ks_d == 0.0);
        CHECK(r.verdict == "inconclusive");
    }

    SUBCASE("all-zero vs all-100 favors a") {
        ComparisonReport r = compare(a, b);
        CHECK(r.rms_ratio == 0.0);
        CHECK(r.ks_d == doctest::Approx(1.0));
        CHECK(r.verdict == "a_better");
    }

    SUBCASE("mismatched edges are rejected") {
        HistogramSpec other;
        other.edges = {-1.0, 50.0, 101.0};
        ErrorStats c = compute_stats("c", std::span<const double>(hundreds), other);
        CHECK_THROWS_AS((void)compare(a, c), ConfigError);
    }
}

TEST_CASE("cw boost raises measured snr by its gain") {
    Scenario sc = quiet_noon_scenario();
    sc.noise_sigma = 2.1;
    sc.integration_s = 1.0;
    sc.start_local_time = ClockTime::parse("21:00");
    sc.end_local_time = ClockTime::parse("23:00");
    sc.epoch_interval_s = 30.0;
    sc.cw_boost = BoostWindow{ClockTime::parse("21:00"), ClockTime::parse("22:00"), 6.0};

    auto epochs = run_scenario(sc, 7);
    WindowSpec boosted{"boosted", {{ClockTime::parse("21:00"), ClockTime::parse("22:00")}}};
    WindowSpec plain{"plain", {{ClockTime::parse("22:00"), ClockTime::parse("23:00")}}};
    auto sets = partition(epochs, {boosted, plain});
    REQUIRE(sets[0].epochs.size() > 50);
    REQUIRE(sets[1].epochs.size() > 50);
    ErrorStats sb = compute_stats("b", std::span<const RangeEpoch>(sets[0].epochs));
    ErrorStats sp = compute_stats("p", std::span<const RangeEpoch>(sets[1].epochs));
    CHECK(sb.mean_snr_db - sp.mean_snr_db == doctest::Approx(6.0).epsilon(0.15));
}

TEST_CASE("fixed receiver clock offset biases every range by c times the offset") {
    Scenario sc = quiet_noon_scenario();
    sc.rx_clock_offset_s = 100e-9; // 100 ns -> ~29.98 m
    auto epochs = run_scenario(sc, 1);
    const double expected = kSpeedOfLight * sc.rx_clock_offset_s;
    for (const auto& e : epochs) CHECK(e.error_m == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("partition conservation over random epochs") {
    WindowSpec day{"day", {{ClockTime::parse("06:00"), ClockTime::parse("18:00")}}};
    WindowSpec night{"night", {{ClockTime::parse("18:00"), ClockTime::parse("24:00")},
                               {ClockTime::parse("00:00"), ClockTime::parse("06:00")}}};
    WindowSpec evening{"evening", {{ClockTime::parse("17:00"), ClockTime::parse("22:00")}}};
    std::vector<WindowSpec> windows{day, night, evening};

    Rng rng(5150);
    std::vector<RangeEpoch> epochs(500);
    std::size_t gated_count = 0;
    for (auto& e : epochs) {
        e.local_tod_s = kSecondsPerDay * rng.uniform01();
        e.gated = rng.uniform01() > 0.3;
        if (e.gated) ++gated_count;
    }
    auto sets = partition(epochs, windows);
    // Every gated epoch appears in exactly the windows containing it,
    // ungated epochs nowhere.
    std::size_t expected_total = 0, in_day_or_night = 0;
    for (const auto& e : epochs) {
        if (!e.gated) continue;
        for (const auto& w : windows)
            if (w.contains(e.local_tod_s)) ++expected_total;
        ++in_day_or_night;
    }
    std::size_t got_total = sets[0].epochs.size() + sets[1].epochs.size() + sets[2].epochs.size();
    CHECK(got_total == expected_total);
    // day and night tile the clock: together they hold each gated epoch once.
    CHECK(sets[0].epochs.size() + sets[1].epochs.size() == gated_count);
    CHECK(in_day_or_night == gated_count);
}

TEST_CASE("scenario validation") {
    Scenario sc = quiet_noon_scenario();
    sc.epoch_interval_s = 0.5; // below the integration window
    CHECK_THROWS_AS(sc.validate(), ConfigError);
    sc = quiet_noon_scenario();
    sc.noise_sigma = -1.0;
    CHECK_THROWS_AS(sc.validate(), ConfigError);
    sc = quiet_noon_scenario();
    sc.transmitter.sample_rate_hz = 900.0;
    CHECK_THROWS_AS(sc.validate(), ConfigError);
}
