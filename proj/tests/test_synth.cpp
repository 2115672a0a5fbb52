#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "gridcast/data_io.hpp"
#include "gridcast/dispatch.hpp"
#include "gridcast/errors.hpp"
#include "gridcast/metrics.hpp"
#include "gridcast/synth.hpp"
#include "gridcast/timebase.hpp"

using namespace gridcast;

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

Day monday() { return make_day(2021, 6, 7); }

SynthLoadConfig small_cfg() {
    SynthLoadConfig cfg;
    cfg.first_day = monday();
    cfg.days = 30;
    return cfg;
}

}  // namespace

TEST_CASE("synthetic load is deterministic per seed") {
    auto a = synth_load(small_cfg());
    auto b = synth_load(small_cfg());
    REQUIRE(a.actual.size() == 30 * 24);
    CHECK(a.actual.start() == day_start(monday()));
    CHECK(a.actual.missing_count() == 0);
    CHECK(a.tso.missing_count() == 0);
    for (Hour h = a.actual.start(); h < a.actual.end(); ++h) {
        CHECK(a.actual.at(h) == b.actual.at(h));
        CHECK(a.tso.at(h) == b.tso.at(h));
    }

    auto cfg = small_cfg();
    cfg.seed = 43;
    auto c = synth_load(cfg);
    int diff = 0;
    for (Hour h = a.actual.start(); h < a.actual.end(); ++h)
        if (a.actual.at(h) != c.actual.at(h)) ++diff;
    CHECK(diff > 700);
}

TEST_CASE("noise-free configuration exposes the deterministic shape") {
    auto cfg = small_cfg();
    cfg.load_noise_sd = 0;
    cfg.bias_amplitude = 0;
    cfg.noise.sigma2 = 0;
    auto s = synth_load(cfg);

    for (Hour h = s.actual.start(); h < s.actual.end(); ++h)
        CHECK(s.tso.at(h) == s.actual.at(h));

    // Monday 09:00-10:00 sits at the zero crossing of the day shape.
    Hour nine = day_start(monday()) + 8;
    REQUIRE(hour_of_day(nine) == 9);
    CHECK(s.actual.at(nine) == doctest::Approx(cfg.base_mw).epsilon(1e-12));
    // Six hours later the sine peaks.
    CHECK(s.actual.at(nine + 6) == doctest::Approx(cfg.base_mw + cfg.daily_swing).epsilon(1e-12));
    // Saturday carries the flat weekend reduction.
    Hour sat_nine = day_start(monday() + 5) + 8;
    CHECK(s.actual.at(sat_nine) ==
          doctest::Approx(cfg.base_mw - cfg.weekend_drop).epsilon(1e-12));
}

TEST_CASE("forecast error reproduces the weekly bias pattern exactly") {
    auto cfg = small_cfg();
    cfg.load_noise_sd = 0;
    cfg.noise.sigma2 = 0;
    cfg.bias_amplitude = 1000;
    auto s = synth_load(cfg);
    for (Hour h = s.actual.start(); h < s.actual.end(); h += 17) {
        const double bias =
            1000.0 * (std::sin(two_pi * hour_of_week(h) / 168.0) +
                      0.5 * std::sin(two_pi * (hour_of_day(h) - 1) / 24.0));
        CHECK(s.actual.at(h) - s.tso.at(h) == doctest::Approx(bias).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("unbiased configuration has near-zero mean error and correlated structure") {
    auto cfg = small_cfg();
    cfg.days = 60;
    cfg.bias_amplitude = 0;
    auto s = synth_load(cfg);
    std::vector<double> err;
    for (Hour h = s.actual.start(); h < s.actual.end(); ++h)
        err.push_back(s.actual.at(h) - s.tso.at(h));
    auto r = error_report(err);
    // The persistence inflates the standard error of the mean well
    // beyond sd/sqrt(n); a fifth of a standard deviation is still a
    // tight bound for 60 days of this process.
    CHECK(std::abs(r.mean) < 0.2 * r.stddev);
    // The persistent error component is what the correction model is
    // for; the portmanteau test must see it clearly.
    auto lb = ljung_box(err, 24);
    CHECK(lb.reject);
    CHECK(lb.p_value < 1e-10);

    // With the persistence switched off the same test stays quiet.
    cfg.noise = {0, 0, 0, 0, 0, 40000.0};
    auto white = synth_load(cfg);
    std::vector<double> werr;
    for (Hour h = white.actual.start(); h < white.actual.end(); ++h)
        werr.push_back(white.actual.at(h) - white.tso.at(h));
    CHECK(ljung_box(werr, 24).p_value > 1e-4);
}

TEST_CASE("synthetic load configuration validation") {
    auto cfg = small_cfg();
    cfg.days = 0;
    CHECK_THROWS_WITH_AS((void)synth_load(cfg), doctest::Contains("at least one day"),
                         InputError);
    cfg = small_cfg();
    cfg.base_mw = 0;
    CHECK_THROWS_WITH_AS((void)synth_load(cfg), doctest::Contains("base load"), InputError);
    cfg = small_cfg();
    cfg.bias_amplitude = -1;
    CHECK_THROWS_WITH_AS((void)synth_load(cfg), doctest::Contains("non-negative"), InputError);
}

TEST_CASE("synthetic dispatch system always covers demand") {
    auto load = synth_load(small_cfg());
    SynthDispatchConfig dc;
    dc.first_day = monday();
    dc.days = 10;
    auto ds = synth_dispatch(dc, load.tso);

    REQUIRE(ds.clusters.size() == 3);
    CHECK(ds.zones == std::vector<std::string>{"Z1"});
    CHECK(ds.start == day_start(monday()));
    CHECK(ds.end == day_start(monday()) + 240);
    CHECK(ds.clusters[0].vc_fl == 10.0);
    CHECK(ds.clusters[1].vc_fl == 30.0);
    CHECK(ds.clusters[2].vc_fl == 60.0);
    double total = 0, peak_demand = 0;
    for (const auto& c : ds.clusters) {
        CHECK(c.cap > 0);
        total += c.cap;
    }
    for (Hour h = ds.start; h < ds.end; ++h)
        peak_demand = std::max(peak_demand, ds.demand.at("Z1").at(h));
    CHECK(total > peak_demand);

    // A full window solves without shedding.
    auto inst = make_instance(ds, monday() + 1, {}, nullptr, {});
    auto sol = solve_window(inst);
    for (int t = 0; t < dispatch_horizon; ++t)
        CHECK(sol.shed.at("Z1")[t] == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("optional renewable and storage clusters") {
    auto load = synth_load(small_cfg());
    SynthDispatchConfig dc;
    dc.first_day = monday();
    dc.days = 10;
    dc.with_res = true;
    dc.with_storage = true;
    dc.psp_longterm_share = 0.3;
    auto ds = synth_dispatch(dc, load.tso);

    REQUIRE(ds.clusters.size() == 6);
    const ClusterSpec* wind = nullptr;
    const ClusterSpec* stm = nullptr;
    const ClusterSpec* stl = nullptr;
    for (const auto& c : ds.clusters) {
        if (c.id == "wind") wind = &c;
        if (c.id == "psp_mid") stm = &c;
        if (c.id == "psp_long") stl = &c;
    }
    REQUIRE(wind != nullptr);
    REQUIRE(stm != nullptr);
    REQUIRE(stl != nullptr);
    CHECK(wind->kind == ClusterKind::res);
    CHECK(stm->kind == ClusterKind::stm);
    CHECK(stm->eta == 0.75);
    CHECK(stl->kind == ClusterKind::stl);
    // The pump-storage block splits by the configured share.
    CHECK(stl->cap / (stl->cap + stm->cap) == doctest::Approx(0.3).epsilon(1e-12));

    REQUIRE(ds.af.count("wind"));
    for (Hour h = ds.start; h < ds.end; ++h) {
        CHECK(ds.af.at("wind").at(h) >= 0.0);
        CHECK(ds.af.at("wind").at(h) <= 1.0);
    }
    REQUIRE(ds.water_value.count("psp_long"));
    for (Hour h = ds.start; h < ds.end; ++h) {
        CHECK(ds.water_value.at("psp_long").at(h) >= 22.0 - 1e-9);
        CHECK(ds.water_value.at("psp_long").at(h) <= 34.0 + 1e-9);
    }

    SUBCASE("share 0 keeps only the mid-term half") {
        dc.psp_longterm_share = 0.0;
        auto only_mid = synth_dispatch(dc, load.tso);
        bool has_long = false, has_mid = false;
        for (const auto& c : only_mid.clusters) {
            has_long = has_long || c.id == "psp_long";
            has_mid = has_mid || c.id == "psp_mid";
        }
        CHECK(has_mid);
        CHECK_FALSE(has_long);
        CHECK(only_mid.water_value.empty());
    }
    SUBCASE("share 1 keeps only the water-value half") {
        dc.psp_longterm_share = 1.0;
        auto only_long = synth_dispatch(dc, load.tso);
        bool has_long = false, has_mid = false;
        for (const auto& c : only_long.clusters) {
            has_long = has_long || c.id == "psp_long";
            has_mid = has_mid || c.id == "psp_mid";
        }
        CHECK(has_long);
        CHECK_FALSE(has_mid);
    }
}

TEST_CASE("synthetic dispatch validation") {
    auto load = synth_load(small_cfg());
    SynthDispatchConfig dc;
    dc.first_day = monday();
    dc.days = 40;  // beyond the 30-day demand series
    CHECK_THROWS_WITH_AS((void)synth_dispatch(dc, load.tso),
                         doctest::Contains("does not cover the requested dispatch days"),
                         InputError);
    dc.days = 10;
    dc.base_cap_quantile = 1.0;
    CHECK_THROWS_WITH_AS((void)synth_dispatch(dc, load.tso),
                         doctest::Contains("base capacity quantile"), InputError);
    dc.base_cap_quantile = 0.35;
    dc.psp_longterm_share = 1.2;
    CHECK_THROWS_WITH_AS((void)synth_dispatch(dc, load.tso),
                         doctest::Contains("long-term storage share"), InputError);
    dc.psp_longterm_share = 0.3;
    auto holey = load.tso;
    holey.set_missing(day_start(monday()) + 50);
    CHECK_THROWS_WITH_AS((void)synth_dispatch(dc, holey), doctest::Contains("missing at"),
                         InputError);
}

TEST_CASE("load file round trips exactly") {
    auto s = synth_load(small_cfg());
    auto dir = std::filesystem::temp_directory_path() / "gridcast_synth_tests";
    std::filesystem::create_directories(dir);
    auto path = (dir / "load.csv").string();
    write_load(path, s.actual, s.tso);

    auto actual = read_series(path, "actual");
    auto tso = read_series(path, "tso_forecast");
    REQUIRE(actual.size() == s.actual.size());
    for (Hour h = s.actual.start(); h < s.actual.end(); ++h) {
        CHECK(actual.at(h) == s.actual.at(h));
        CHECK(tso.at(h) == s.tso.at(h));
    }

    auto shifted = s.tso.slice(s.tso.start() + 24, s.tso.end());
    CHECK_THROWS_WITH_AS(write_load(path, s.actual, shifted), doctest::Contains("misaligned"),
                         InputError);
}

TEST_CASE("dispatch dataset directory round trips through the reader") {
    auto load = synth_load(small_cfg());
    SynthDispatchConfig dc;
    dc.first_day = monday();
    dc.days = 8;
    dc.with_res = true;
    dc.with_storage = true;
    auto ds = synth_dispatch(dc, load.tso);

    auto dir = (std::filesystem::temp_directory_path() / "gridcast_synth_ds").string();
    std::filesystem::remove_all(dir);
    write_dispatch_dataset(dir, ds);
    auto back = read_dispatch_dataset(dir);

    CHECK(back.zones == ds.zones);
    CHECK(back.start == ds.start);
    CHECK(back.end == ds.end);
    REQUIRE(back.clusters.size() == ds.clusters.size());
    for (std::size_t i = 0; i < ds.clusters.size(); ++i) {
        CHECK(back.clusters[i].id == ds.clusters[i].id);
        CHECK(back.clusters[i].cap == ds.clusters[i].cap);
        CHECK(back.clusters[i].vc_fl == ds.clusters[i].vc_fl);
        CHECK(back.clusters[i].kind == ds.clusters[i].kind);
    }
    CHECK(back.scalars.voll == ds.scalars.voll);
    CHECK(back.scalars.epf == ds.scalars.epf);
    for (Hour h = ds.start; h < ds.end; ++h) {
        CHECK(back.demand.at("Z1").at(h) == ds.demand.at("Z1").at(h));
        CHECK(back.af_at("wind", h) == ds.af_at("wind", h));
        CHECK(back.water_value.at("psp_long").at(h) == ds.water_value.at("psp_long").at(h));
    }

    // The rebuilt dataset drives the optimiser to the same answer.
    auto a = solve_window(make_instance(ds, monday() + 1, {}, nullptr, {}));
    auto b = solve_window(make_instance(back, monday() + 1, {}, nullptr, {}));
    CHECK(a.objective == b.objective);
    for (int t = 0; t < dispatch_horizon; ++t)
        CHECK(a.price.at("Z1")[t] == b.price.at("Z1")[t]);
}
