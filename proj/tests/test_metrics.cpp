#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gridcast/csv.hpp"
#include "gridcast/errors.hpp"
#include "gridcast/metrics.hpp"
#include "gridcast/sarma.hpp"
#include "gridcast/timebase.hpp"

using namespace gridcast;

namespace {

Hour monday() { return day_start(make_day(2021, 6, 7)); }

TimeSeries to_series(Hour start, const std::vector<double>& v, Unit u = Unit::mwh) {
    auto s = TimeSeries::empty(start, v.size(), u);
    for (std::size_t i = 0; i < v.size(); ++i) s.set(start + static_cast<Hour>(i), v[i]);
    return s;
}

std::string tmp_file(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("error report on a two-value sample is exact") {
    auto r = error_report(std::vector<double>{3.0, -4.0});
    CHECK(r.n == 2);
    CHECK(r.mse == 12.5);
    CHECK(r.rmse == 3.5355339059327378);
    CHECK(r.mae == 3.5);
    CHECK(r.mean == -0.5);
    CHECK(r.median == -0.5);
    CHECK(r.stddev == 4.949747468305833);
    CHECK(r.q5 == -3.65);
    CHECK(r.q95 == 2.6499999999999995);
    CHECK(r.min == -4.0);
    CHECK(r.max == 3.0);
}

TEST_CASE("error report input validation") {
    CHECK_THROWS_WITH_AS((void)error_report(std::vector<double>{}),
                         doctest::Contains("empty sample"), InputError);
    CHECK_THROWS_WITH_AS((void)error_report(std::vector<double>{1.0, std::nan("")}),
                         doctest::Contains("non-finite"), InputError);
}

TEST_CASE("series error report takes actual minus prediction") {
    std::vector<double> truth{100, 105, 95, 110};
    auto actual = to_series(monday(), truth);
    std::vector<double> biased = truth;
    for (auto& v : biased) v += 1.0;  // prediction one unit high
    auto pred = to_series(monday(), biased);
    auto r = error_report(pred, actual);
    CHECK(r.n == 4);
    CHECK(r.mean == -1.0);
    CHECK(r.mse == 1.0);

    SUBCASE("misaligned domains") {
        auto shifted = to_series(monday() + 1, biased);
        CHECK_THROWS_WITH_AS((void)error_report(shifted, actual), doctest::Contains("misaligned"),
                             InputError);
    }
    SUBCASE("missing value is reported with its hour") {
        auto holey = pred;
        holey.set_missing(monday() + 2);
        CHECK_THROWS_WITH_AS((void)error_report(holey, actual),
                             doctest::Contains("in the evaluation index"), InputError);
    }
}

TEST_CASE("statistics obey their mutual identities on random samples") {
    std::mt19937_64 gen(512);
    std::normal_distribution<double> d(2.0, 10.0);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> e(400);
        for (auto& v : e) v = d(gen);
        auto r = error_report(e);
        CHECK(r.rmse == doctest::Approx(std::sqrt(r.mse)).epsilon(1e-12));
        CHECK(r.mse >= r.mae * r.mae - 1e-9);
        CHECK(r.min <= r.q5);
        CHECK(r.q5 <= r.median);
        CHECK(r.median <= r.q95);
        CHECK(r.q95 <= r.max);
        CHECK(r.mean >= r.min);
        CHECK(r.mean <= r.max);
        // n*mse = (n-1)*var + n*mean^2
        double lhs = static_cast<double>(r.n) * r.mse;
        double rhs = (static_cast<double>(r.n) - 1) * r.stddev * r.stddev +
                     static_cast<double>(r.n) * r.mean * r.mean;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("improvement is the percentage drop against the reference") {
    ErrorReport ref, alt;
    ref.mse = 100;
    ref.rmse = 10;
    ref.mae = 8;
    alt.mse = 75;
    alt.rmse = 9;
    alt.mae = 10;
    auto g = improvement(ref, alt);
    CHECK(g.mse == doctest::Approx(25.0).epsilon(1e-12));
    CHECK(g.rmse == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(g.mae == doctest::Approx(-25.0).epsilon(1e-12));

    auto same = improvement(ref, ref);
    CHECK(same.mse == 0.0);
    CHECK(same.rmse == 0.0);
    CHECK(same.mae == 0.0);

    ErrorReport zero;
    CHECK_THROWS_WITH_AS((void)improvement(zero, alt), doctest::Contains("zero reference"),
                         InputError);
}

TEST_CASE("improvement on a large error pair matches the hand-computed percentage") {
    ErrorReport ref, alt;
    ref.mse = 4948990.80;
    alt.mse = 3050928.19;
    ref.rmse = std::sqrt(ref.mse);
    alt.rmse = std::sqrt(alt.mse);
    ref.mae = alt.mae = 1.0;
    auto g = improvement(ref, alt);
    CHECK(g.mse == doctest::Approx(38.35251845689428).epsilon(1e-12));
}

TEST_CASE("interpolating quantile matches the linear rule") {
    std::vector<double> s{1, 2, 3, 4};
    CHECK(quantile_sorted(s, 0.0) == 1.0);
    CHECK(quantile_sorted(s, 1.0) == 4.0);
    CHECK(quantile_sorted(s, 0.25) == 1.75);
    CHECK(quantile_sorted(s, 0.5) == 2.5);
    CHECK(quantile_sorted(std::vector<double>{7.0}, 0.3) == 7.0);
    CHECK_THROWS_AS((void)quantile_sorted(std::vector<double>{}, 0.5), InternalError);
    CHECK_THROWS_AS((void)quantile_sorted(s, 1.5), InternalError);
    CHECK_THROWS_AS((void)quantile_sorted(s, -0.1), InternalError);
}

TEST_CASE("regularised upper incomplete gamma matches an external reference") {
    // Reference values computed with an independent scientific library.
    const struct {
        double a, x, q;
    } cases[] = {
        {0.5, 0.2, 0.5270892568655381},   {0.5, 3.7, 0.006522387706466809},
        {1.0, 1.0, 0.36787944117144245},  {2.5, 0.4, 0.9770333437569263},
        {2.5, 6.0, 0.03478778050624185},  {12.0, 11.0, 0.5792667629217123},
        {12.0, 20.5, 0.016656962091959427}, {84.0, 70.0, 0.9434965378902805},
        {84.0, 110.25, 0.004071331728542938}, {7.5, 7.5, 0.4514172112257256},
    };
    for (const auto& c : cases)
        CHECK(gamma_q(c.a, c.x) == doctest::Approx(c.q).epsilon(1e-10));
    CHECK(gamma_q(3.0, 0.0) == 1.0);
    CHECK_THROWS_AS((void)gamma_q(0.0, 1.0), InternalError);
    CHECK_THROWS_AS((void)gamma_q(1.0, -0.5), InternalError);
}

TEST_CASE("portmanteau statistic and p-value match an external reference") {
    // 40 draws frozen as decimal literals; statistic and chi-square
    // tail computed with an independent scientific library.
    std::vector<double> x{0.001230,  0.298746,  -0.274138, -0.890592, -0.454671, -0.991647,
                          0.060144,  1.340215,  -0.492207, -0.620475, 0.489842,  0.356887,
                          0.105414,  -0.930468, -0.029252, 0.695303,  -1.344215, -0.457616,
                          -1.901223, -1.289538, -1.841735, -0.235091, -1.267446, 0.271264,
                          0.156751,  -0.186931, -2.516760, -0.538693, -0.048501, 0.113309,
                          -1.530136, -0.477753, -0.978519, -0.808837, 1.060899,  -0.807535,
                          -0.032522, 0.884390,  -0.583600, -0.111702};
    auto r5 = ljung_box(x, 5);
    CHECK(r5.statistic == doctest::Approx(0.5733149400592514).epsilon(1e-12));
    CHECK(r5.p_value == doctest::Approx(0.9891924052963327).epsilon(1e-10));
    CHECK(r5.lags == 5);
    CHECK(r5.n == 40);
    CHECK_FALSE(r5.reject);

    auto r10 = ljung_box(x, 10);
    CHECK(r10.statistic == doctest::Approx(1.6706886382438633).epsilon(1e-12));
    CHECK(r10.p_value == doctest::Approx(0.9982979384510235).epsilon(1e-10));
}

TEST_CASE("portmanteau test calibration on white noise and power on a persistent signal") {
    int rejections = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto wn = simulate_sarma({0, 0, 0, 0, 0, 1.0}, monday(), 500, seed, 0);
        if (ljung_box(wn.rc, 24).reject) ++rejections;
    }
    // Nominal level 5%; allow sampling noise.
    CHECK(rejections <= 12);

    auto ar = simulate_sarma({0, 0.9, 0, 0, 0, 1.0}, monday(), 500, 3, 100);
    auto r = ljung_box(ar.rc, 24);
    CHECK(r.reject);
    CHECK(r.p_value < 1e-10);
}

TEST_CASE("portmanteau test input validation") {
    std::vector<double> x(50, 1.0);
    CHECK_THROWS_WITH_AS((void)ljung_box(x, 0), doctest::Contains("at least one lag"),
                         InputError);
    CHECK_THROWS_WITH_AS((void)ljung_box(x, 10, 1.5), doctest::Contains("significance level"),
                         InputError);
    CHECK_THROWS_WITH_AS((void)ljung_box(x, 60), doctest::Contains("shorter than the lag count"),
                         InputError);
    CHECK_THROWS_WITH_AS((void)ljung_box(x, 10), doctest::Contains("constant series"),
                         InputError);

    auto s = TimeSeries::constant(monday(), 50, 1.0, Unit::mwh);
    s.set(monday(), 2.0);
    s.set_missing(monday() + 7);
    CHECK_THROWS_WITH_AS((void)ljung_box(s, 10), doctest::Contains("in the series under test"),
                         InputError);
}

TEST_CASE("segmentation names round trip and reject strangers") {
    for (auto s : {Segmentation::hour_of_day, Segmentation::weekday, Segmentation::peak_offpeak,
                   Segmentation::price_quantile})
        CHECK(parse_segmentation(to_string(s)) == s);
    CHECK(to_string(Segmentation::peak_offpeak) == "peak-offpeak");
    CHECK_THROWS_WITH_AS((void)parse_segmentation("monthly"),
                         doctest::Contains("unknown segmentation"), InputError);
}

namespace {

/// One week of aligned series with reproducible noise.
struct WeekFixture {
    TimeSeries ref, alt, actual;
    WeekFixture(std::uint64_t seed, std::size_t hours = 168) {
        std::mt19937_64 gen(seed);
        std::normal_distribution<double> noise(0.0, 5.0);
        std::vector<double> a(hours), r(hours), l(hours);
        for (std::size_t i = 0; i < hours; ++i) {
            a[i] = 100.0 + 30.0 * std::sin(static_cast<double>(i) / 9.0);
            r[i] = a[i] + noise(gen) + 3.0;
            l[i] = a[i] + 0.4 * noise(gen);
        }
        actual = to_series(monday(), a);
        ref = to_series(monday(), r);
        alt = to_series(monday(), l);
    }
};

}  // namespace

TEST_CASE("hour-of-day segmentation partitions a week into 24 groups of 7") {
    WeekFixture f(21);
    auto rep = segment_report(f.ref, f.alt, f.actual, Segmentation::hour_of_day);
    REQUIRE(rep.rows.size() == 24);
    // Keys sort as strings.
    CHECK(rep.rows[0].key == "h1");
    CHECK(rep.rows[1].key == "h10");
    CHECK(rep.rows.back().key == "h9");
    for (const auto& row : rep.rows) {
        CHECK(row.ref.n == 7);
        CHECK(row.alt.n == 7);
    }
}

TEST_CASE("weekday segmentation groups full days") {
    WeekFixture f(22);
    auto rep = segment_report(f.ref, f.alt, f.actual, Segmentation::weekday);
    REQUIRE(rep.rows.size() == 7);
    for (int i = 0; i < 7; ++i) {
        CHECK(rep.rows[static_cast<std::size_t>(i)].key == "d" + std::to_string(i + 1));
        CHECK(rep.rows[static_cast<std::size_t>(i)].ref.n == 24);
    }
}

TEST_CASE("peak block covers working-day daytime hours") {
    WeekFixture f(23);
    auto rep = segment_report(f.ref, f.alt, f.actual, Segmentation::peak_offpeak);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].key == "offpeak");
    CHECK(rep.rows[1].key == "peak");
    // Five working days times hours-of-day 9..20.
    CHECK(rep.rows[1].ref.n == 60);
    CHECK(rep.rows[0].ref.n == 108);

    SegmentOptions all_day;
    all_day.peak_first = 1;
    all_day.peak_last = 24;
    auto wide = segment_report(f.ref, f.alt, f.actual, Segmentation::peak_offpeak, all_day);
    CHECK(wide.rows[1].ref.n == 120);
    CHECK(wide.rows[0].ref.n == 48);

    SegmentOptions bad;
    bad.peak_first = 0;
    CHECK_THROWS_WITH_AS(
        (void)segment_report(f.ref, f.alt, f.actual, Segmentation::peak_offpeak, bad),
        doctest::Contains("peak hour window"), InputError);
}

TEST_CASE("price quintiles hold a fifth of each calendar year") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> price(20.0, 90.0);
    const std::size_t hours = 2400;  // well inside one calendar year
    std::vector<double> a(hours), r(hours), l(hours);
    for (std::size_t i = 0; i < hours; ++i) {
        a[i] = price(gen);
        r[i] = a[i] + 2.0;
        l[i] = a[i] - 1.0;
    }
    Hour start = day_start(make_day(2021, 3, 1));
    auto rep = segment_report(to_series(start, r), to_series(start, l), to_series(start, a),
                              Segmentation::price_quantile);
    REQUIRE(rep.rows.size() == 5);
    for (int q = 1; q <= 5; ++q) {
        const auto& row = rep.rows[static_cast<std::size_t>(q - 1)];
        CHECK(row.key == "2021_q" + std::to_string(q));
        // Continuous draws make ties impossible, so the split is exact.
        CHECK(row.ref.n == 480);
    }
    // The binning rule is "at most the edge": exactly the values above
    // the 0.8 edge land in the top bin.
    auto sorted = a;
    std::sort(sorted.begin(), sorted.end());
    double edge = quantile_sorted(sorted, 0.8);
    std::size_t above = 0;
    for (double v : a)
        if (v > edge) ++above;
    CHECK(above == rep.rows[4].ref.n);
}

TEST_CASE("price quintile edges are computed per calendar year") {
    // Ten days across the year boundary; first-year prices sit around
    // 100, second-year prices around 1000, so shared edges would dump
    // whole years into single bins.
    Hour start = day_start(make_day(2021, 12, 27));
    const std::size_t hours = 240;
    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    std::vector<double> a(hours), r(hours), l(hours);
    for (std::size_t i = 0; i < hours; ++i) {
        double base = year_of_hour(start + static_cast<Hour>(i)) == 2021 ? 100.0 : 1000.0;
        a[i] = base + u(gen);
        r[i] = a[i] + 1.0;
        l[i] = a[i] - 1.0;
    }
    auto rep = segment_report(to_series(start, r), to_series(start, l), to_series(start, a),
                              Segmentation::price_quantile);
    REQUIRE(rep.rows.size() == 10);
    std::size_t y21 = 0, y22 = 0;
    for (const auto& row : rep.rows) {
        if (row.key.rfind("2021_", 0) == 0) y21 += row.ref.n;
        if (row.key.rfind("2022_", 0) == 0) y22 += row.ref.n;
        CHECK(row.ref.n >= 23);  // five near-even bins per year
        CHECK(row.ref.n <= 25);
    }
    CHECK(y21 == 120);  // five days of 2021 remain in the index
    CHECK(y22 == 120);

    SUBCASE("a year with too few observations is rejected") {
        auto tiny = to_series(day_start(make_day(2021, 12, 31)) + 20,
                              std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8});
        CHECK_THROWS_WITH_AS((void)segment_report(tiny, tiny, tiny, Segmentation::price_quantile),
                             doctest::Contains("too few observations"), InputError);
    }
}

TEST_CASE("segments recombine to the pooled error statistics") {
    WeekFixture f(29, 6 * 168);
    auto pooled = error_report(f.ref, f.actual);
    for (auto scheme : {Segmentation::hour_of_day, Segmentation::weekday,
                        Segmentation::peak_offpeak}) {
        auto rep = segment_report(f.ref, f.alt, f.actual, scheme);
        std::size_t n = 0;
        double se = 0, ae = 0;
        for (const auto& row : rep.rows) {
            n += row.ref.n;
            se += static_cast<double>(row.ref.n) * row.ref.mse;
            ae += static_cast<double>(row.ref.n) * row.ref.mae;
        }
        CHECK(n == pooled.n);
        CHECK(se / static_cast<double>(n) == doctest::Approx(pooled.mse).epsilon(1e-12));
        CHECK(ae / static_cast<double>(n) == doctest::Approx(pooled.mae).epsilon(1e-12));
    }
}

TEST_CASE("segment report alignment and emptiness checks") {
    WeekFixture f(30);
    auto shifted = to_series(monday() + 1, std::vector<double>(168, 1.0));
    CHECK_THROWS_WITH_AS(
        (void)segment_report(shifted, f.alt, f.actual, Segmentation::weekday),
        doctest::Contains("aligned"), InputError);
    auto holey = f.alt;
    holey.set_missing(monday() + 3);
    CHECK_THROWS_WITH_AS((void)segment_report(f.ref, holey, f.actual, Segmentation::weekday),
                         doctest::Contains("missing value"), InputError);
}

TEST_CASE("error report file lists every metric once") {
    auto r = error_report(std::vector<double>{3.0, -4.0});
    auto path = tmp_file("gridcast_error_report.csv");
    write_error_report(path, r);
    auto t = read_csv(path);
    REQUIRE(t.columns == std::vector<std::string>{"metric", "value"});
    REQUIRE(t.rows.size() == 11);
    const char* names[] = {"n",      "mse", "rmse", "mae", "mean", "median",
                           "std",    "q5",  "q95",  "min", "max"};
    for (std::size_t i = 0; i < 11; ++i) CHECK(t.rows[i][0] == names[i]);
    CHECK(parse_int(t.rows[0][1], "n") == 2);
    CHECK(parse_double(t.rows[1][1], "mse") == 12.5);
    CHECK(parse_double(t.rows[2][1], "rmse") == r.rmse);
    CHECK(parse_double(t.rows[8][1], "q95") == r.q95);
}

TEST_CASE("segment report file carries both predictors and the gains") {
    WeekFixture f(33);
    auto rep = segment_report(f.ref, f.alt, f.actual, Segmentation::peak_offpeak);
    auto path = tmp_file("gridcast_segment_report.csv");
    write_segment_report(path, rep);
    auto t = read_csv(path);
    REQUIRE(t.columns == std::vector<std::string>{"segment", "metric", "value"});
    REQUIRE(t.rows.size() == 2 * 25);
    CHECK(t.rows[0][0] == "offpeak");
    CHECK(t.rows[0][1] == "n_ref");
    CHECK(t.rows[0][2] == "108");
    CHECK(t.rows[11][1] == "n_alt");
    CHECK(t.rows[22][1] == "impr_mse");
    CHECK(parse_double(t.rows[22][2], "impr") ==
          doctest::Approx(rep.rows[0].gain.mse).epsilon(1e-15));
    CHECK(t.rows[25][0] == "peak");
    // Round trip through the shortest-representation formatter is exact.
    CHECK(parse_double(t.rows[1][2], "mse") == rep.rows[0].ref.mse);
}
