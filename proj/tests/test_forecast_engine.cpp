#include <doctest.h>

#include <array>
#include <cmath>
#include <filesystem>
#include <random>
#include <vector>

#include "gridcast/csv.hpp"
#include "gridcast/errors.hpp"
#include "gridcast/forecast_engine.hpp"
#include "gridcast/seasonal.hpp"
#include "gridcast/series.hpp"

using namespace gridcast;

namespace {

constexpr double pi = 3.141592653589793;

// Monday 2021-01-04.
Day day0() { return make_day(2021, 1, 4); }
Hour t0() { return day_start(day0()); }

double bias(Hour t) {
    return 30.0 * std::sin(2 * pi * hour_of_week(t) / 168.0) +
           12.0 * std::sin(2 * pi * (hour_of_day(t) - 1) / 24.0);
}

SarmaParams noise_params() {
    SarmaParams p;
    p.phi1 = 0.6;
    p.phi24 = 0.3;
    p.omega1 = -0.2;
    p.omega24 = 0.1;
    p.sigma2 = 25.0;
    return p;
}

/// Error history with weekly structure plus SARMA noise, covering 64
/// days from t0.
TimeSeries make_errors(std::uint64_t seed = 5) {
    auto sim = simulate_sarma(noise_params(), t0(), 64 * 24, seed, 120);
    auto e = TimeSeries::empty(t0(), 64 * 24, Unit::mwh);
    for (Hour t = e.start(); t < e.end(); ++t) e.set(t, bias(t) + sim.rc.at(t));
    return e;
}

TimeSeries make_tso() {
    auto s = TimeSeries::empty(t0(), 64 * 24, Unit::mwh);
    for (Hour t = s.start(); t < s.end(); ++t)
        s.set(t, 1000.0 + 100.0 * std::sin(2 * pi * hour_of_day(t) / 24.0));
    return s;
}

/// Step-by-step transcription of the daily procedure, built directly on
/// the component primitives.  Must agree with improve_day bit for bit.
DayForecast oracle_day(const TimeSeries& errors, const TimeSeries& tso, Day d,
                       const RollingConfig& cfg) {
    Hour cut = day_start(d - 1);
    auto profile = estimate_profile(errors, cut, cfg.window_len);
    auto rc = deseasonalize(errors.slice(cut - cfg.window_len, cut), profile);
    auto fit = fit_sarma(rc, cfg.sarma);
    auto st = state_from_series(fit.params, rc, cfg.sarma);
    auto fc = forecast_sarma(fit.params, st, 48, cfg.sarma);
    DayForecast out;
    out.day = d;
    for (int j = 0; j < 24; ++j) {
        Hour t = day_start(d) + j;
        auto u = static_cast<std::size_t>(j);
        out.ehat[u] = fc[static_cast<std::size_t>(24 + j)] + seasonal_component(profile, t);
        out.lhat_star[u] = tso.at(t) + out.ehat[u];
    }
    return out;
}

}  // namespace

TEST_CASE("improve_day equals the hand-assembled pipeline bit for bit") {
    auto errors = make_errors();
    auto tso = make_tso();
    RollingConfig cfg;
    cfg.window_len = 1440;
    for (Day d : {day0() + 61, day0() + 62}) {
        auto got = improve_day(errors, tso, d, cfg);
        auto want = oracle_day(errors, tso, d, cfg);
        CHECK_FALSE(got.log.fallback);
        for (std::size_t j = 0; j < 24; ++j) {
            CHECK(got.ehat[j] == want.ehat[j]);
            CHECK(got.lhat_star[j] == want.lhat_star[j]);
        }
    }
}

TEST_CASE("a purely periodic error pattern is predicted exactly") {
    auto errors = TimeSeries::empty(t0(), 64 * 24, Unit::mwh);
    for (Hour t = errors.start(); t < errors.end(); ++t) errors.set(t, bias(t));
    auto tso = make_tso();
    RollingConfig cfg;
    cfg.window_len = 1344;  // 8 whole weeks
    Day d = day0() + 58;
    auto got = improve_day(errors, tso, d, cfg);
    CHECK_FALSE(got.log.fallback);
    for (int j = 0; j < 24; ++j) {
        Hour t = day_start(d) + j;
        CHECK(got.ehat[static_cast<std::size_t>(j)] ==
              doctest::Approx(bias(t)).epsilon(1e-9).scale(1.0));
        CHECK(got.lhat_star[static_cast<std::size_t>(j)] ==
              doctest::Approx(tso.at(t) + bias(t)).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("data at or after the cutoff cannot influence the forecast") {
    auto errors = make_errors();
    auto tso = make_tso();
    RollingConfig cfg;
    cfg.window_len = 1440;
    Day d = day0() + 61;
    Hour cut = day_start(d - 1);
    auto base = improve_day(errors, tso, d, cfg);

    auto poked_errors = errors;
    auto poked_tso = tso;
    std::mt19937_64 gen(404);
    std::uniform_real_distribution<double> val(-1e6, 1e6);
    std::uniform_int_distribution<Hour> after_cut(cut, errors.end() - 1);
    for (int k = 0; k < 50; ++k) poked_errors.set(after_cut(gen), val(gen));
    // The input forecast only matters on the target day itself.
    for (Hour t = tso.start(); t < tso.end(); ++t)
        if (t < day_start(d) || t >= day_start(d) + 24) poked_tso.set(t, val(gen));

    auto poked = improve_day(poked_errors, poked_tso, d, cfg);
    for (std::size_t j = 0; j < 24; ++j) {
        CHECK(poked.ehat[j] == base.ehat[j]);
        CHECK(poked.lhat_star[j] == base.lhat_star[j]);
    }
}

TEST_CASE("decision hour is recorded metadata, not an input") {
    auto errors = make_errors();
    auto tso = make_tso();
    RollingConfig noon;
    noon.window_len = 1440;
    noon.decision_hour = 12;
    RollingConfig morning = noon;
    morning.decision_hour = 9;
    Day d = day0() + 61;
    auto a = improve_day(errors, tso, d, noon);
    auto b = improve_day(errors, tso, d, morning);
    for (std::size_t j = 0; j < 24; ++j) CHECK(a.lhat_star[j] == b.lhat_star[j]);
}

TEST_CASE("windows too short for the remainder fit degrade to the profile") {
    auto errors = make_errors();
    auto tso = make_tso();
    RollingConfig cfg;
    cfg.window_len = 672;  // valid length, below the fit minimum
    Day d = day0() + 61;
    auto got = improve_day(errors, tso, d, cfg);
    CHECK(got.log.fallback);
    CHECK(got.log.fallback_reason.find("720") != std::string::npos);
    Hour cut = day_start(d - 1);
    auto profile = estimate_profile(errors, cut, cfg.window_len);
    for (int j = 0; j < 24; ++j)
        CHECK(got.ehat[static_cast<std::size_t>(j)] ==
              seasonal_component(profile, day_start(d) + j));
}

TEST_CASE("backtest assembles per-day results chronologically") {
    auto errors = make_errors();
    auto tso = make_tso();
    auto actual = series_sum(tso, errors);
    RollingConfig cfg;
    cfg.window_len = 1440;
    Day first = day0() + 61, last = day0() + 63;
    auto bt = run_backtest(actual, tso, first, last, cfg);

    CHECK(bt.lhat_star.start() == day_start(first));
    CHECK(bt.lhat_star.size() == 3 * 24);
    CHECK(bt.ehat.size() == 3 * 24);
    REQUIRE(bt.fit_log.size() == 3);
    CHECK(bt.fit_log[0].day == first);
    CHECK(bt.fit_log[2].day == last);

    // The backtest recomputes errors as actual - tso; feed improve_day
    // the same difference for an exact match.
    auto diff = series_difference(actual, tso);
    for (Day d = first; d <= last; ++d) {
        auto one = improve_day(diff, tso, d, cfg);
        for (int j = 0; j < 24; ++j) {
            CHECK(bt.lhat_star.at(day_start(d) + j) == one.lhat_star[static_cast<std::size_t>(j)]);
            CHECK(bt.ehat.at(day_start(d) + j) == one.ehat[static_cast<std::size_t>(j)]);
        }
    }
}

TEST_CASE("parallel and sequential backtests agree bit for bit") {
    auto errors = make_errors(9);
    auto tso = make_tso();
    auto actual = series_sum(tso, errors);
    RollingConfig cfg;
    cfg.window_len = 1440;
    Day first = day0() + 61, last = day0() + 63;
    auto seq = run_backtest(actual, tso, first, last, cfg, 1);
    auto par = run_backtest(actual, tso, first, last, cfg, 2);
    for (Hour t = seq.lhat_star.start(); t < seq.lhat_star.end(); ++t) {
        CHECK(seq.lhat_star.at(t) == par.lhat_star.at(t));
        CHECK(seq.ehat.at(t) == par.ehat.at(t));
    }
    REQUIRE(seq.fit_log.size() == par.fit_log.size());
    for (std::size_t i = 0; i < seq.fit_log.size(); ++i) {
        CHECK(seq.fit_log[i].fallback == par.fit_log[i].fallback);
        CHECK(seq.fit_log[i].fit.params.phi1 == par.fit_log[i].fit.params.phi1);
        CHECK(seq.fit_log[i].fit.params.sigma2 == par.fit_log[i].fit.params.sigma2);
    }
}

TEST_CASE("history and coverage failures are reported precisely") {
    auto errors = make_errors();
    auto tso = make_tso();
    RollingConfig cfg;
    cfg.window_len = 1440;

    SUBCASE("window not covered") {
        CHECK_THROWS_WITH_AS((void)improve_day(errors, tso, day0() + 10, cfg),
                             doctest::Contains("insufficient error history"), InputError);
    }
    SUBCASE("target day beyond the input forecast") {
        auto short_tso = tso.slice(t0(), day_start(day0() + 61));
        CHECK_THROWS_WITH_AS((void)improve_day(errors, short_tso, day0() + 61, cfg),
                             doctest::Contains("does not cover target day"), InputError);
    }
    SUBCASE("missing forecast cell on the target day") {
        auto holey = tso;
        holey.set_missing(day_start(day0() + 61) + 5);
        CHECK_THROWS_WITH_AS((void)improve_day(errors, holey, day0() + 61, cfg),
                             doctest::Contains("missing at"), InputError);
    }
    SUBCASE("gap in the error history") {
        auto actual = series_sum(tso, errors);
        actual.set_missing(t0() + 500);
        CHECK_THROWS_WITH_AS(
            (void)run_backtest(actual, tso, day0() + 61, day0() + 62, cfg),
            doctest::Contains("gap-fill"), InputError);
    }
    SUBCASE("empty day range and bad jobs") {
        auto actual = series_sum(tso, errors);
        CHECK_THROWS_AS((void)run_backtest(actual, tso, day0() + 62, day0() + 61, cfg),
                        InputError);
        CHECK_THROWS_AS((void)run_backtest(actual, tso, day0() + 61, day0() + 61, cfg, 0),
                        InputError);
    }
}

TEST_CASE("rolling configuration is validated") {
    RollingConfig cfg;
    cfg.window_len = 100;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("multiple of 24"), InputError);
    cfg.window_len = 96;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg.window_len = 168;
    CHECK_NOTHROW(cfg.validate());
    cfg.decision_hour = 0;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("decision hour"), InputError);
    cfg.decision_hour = 25;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg.decision_hour = 24;
    CHECK_NOTHROW(cfg.validate());
    cfg.burn = -1;
    CHECK_THROWS_AS(cfg.validate(), InputError);
}

TEST_CASE("improved-forecast and fit-log files round trip") {
    auto errors = make_errors();
    auto tso = make_tso();
    auto actual = series_sum(tso, errors);
    RollingConfig cfg;
    cfg.window_len = 1440;
    Day first = day0() + 61, last = day0() + 62;
    auto bt = run_backtest(actual, tso, first, last, cfg);

    auto dir = std::filesystem::temp_directory_path() / "gridcast_engine_tests";
    std::filesystem::create_directories(dir);
    auto load_path = (dir / "improved.csv").string();
    auto log_path = (dir / "fits.csv").string();
    write_improved_load(load_path, bt, tso);
    write_fit_log(log_path, bt.fit_log);

    auto t = read_csv(load_path);
    CHECK(t.columns == std::vector<std::string>{"timestamp", "lhat", "ehat", "lhat_star"});
    REQUIRE(t.rows.size() == 48);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        Hour h = parse_hour(t.rows[i][0]);
        CHECK(parse_double(t.rows[i][1], "lhat") == tso.at(h));
        CHECK(parse_double(t.rows[i][2], "ehat") == bt.ehat.at(h));
        CHECK(parse_double(t.rows[i][3], "lhat_star") == bt.lhat_star.at(h));
    }

    auto lg = read_csv(log_path);
    CHECK(lg.columns == std::vector<std::string>{"date", "phi0", "phi1", "phi24", "omega1",
                                                 "omega24", "sigma2", "converged"});
    REQUIRE(lg.rows.size() == 2);
    CHECK(lg.rows[0][0] == format_day(first));
    CHECK(parse_double(lg.rows[0][1], "phi0") == bt.fit_log[0].fit.params.phi0);

    // A fallback day keeps empty parameter cells.
    std::vector<DayFit> fl(1);
    fl[0].day = first;
    fl[0].fallback = true;
    write_fit_log(log_path, fl);
    auto lg2 = read_csv(log_path);
    REQUIRE(lg2.rows.size() == 1);
    CHECK(lg2.rows[0][1] == "");
    CHECK(lg2.rows[0][7] == "0");
}
