#include "gridcast/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "gridcast/csv.hpp"
#include "gridcast/errors.hpp"
#include "gridcast/timebase.hpp"

namespace gridcast {

ErrorReport error_report(const std::vector<double>& errors) {
    if (errors.empty()) throw InputError("error report over an empty sample");
    ErrorReport r;
    r.n = errors.size();
    double se = 0, ae = 0, sum = 0;
    for (double e : errors) {
        if (!std::isfinite(e)) throw InputError("non-finite error value");
        se += e * e;
        ae += std::abs(e);
        sum += e;
    }
    const double n = static_cast<double>(r.n);
    r.mse = se / n;
    r.rmse = std::sqrt(r.mse);
    r.mae = ae / n;
    r.mean = sum / n;
    double dev = 0;
    for (double e : errors) dev += (e - r.mean) * (e - r.mean);
    r.stddev = r.n > 1 ? std::sqrt(dev / (n - 1)) : 0.0;
    std::vector<double> sorted = errors;
    std::sort(sorted.begin(), sorted.end());
    r.median = quantile_sorted(sorted, 0.5);
    r.q5 = quantile_sorted(sorted, 0.05);
    r.q95 = quantile_sorted(sorted, 0.95);
    r.min = sorted.front();
    r.max = sorted.back();
    return r;
}

ErrorReport error_report(const TimeSeries& pred, const TimeSeries& actual) {
    if (pred.start() != actual.start() || pred.end() != actual.end())
        throw InputError("prediction and actual series are misaligned");
    std::vector<double> errors;
    errors.reserve(pred.size());
    for (Hour h = pred.start(); h < pred.end(); ++h) {
        if (pred.missing_at(h) || actual.missing_at(h))
            throw InputError("missing value at " + format_hour(h) +
                             " in the evaluation index");
        errors.push_back(actual.at(h) - pred.at(h));
    }
    return error_report(errors);
}

namespace {

double pct_gain(double ref, double alt, const char* metric) {
    if (ref == 0)
        throw InputError(std::string("zero reference ") + metric +
                         "; improvement undefined");
    return 100.0 * (ref - alt) / ref;
}

}  // namespace

Improvement improvement(const ErrorReport& ref, const ErrorReport& alt) {
    Improvement g;
    g.mse = pct_gain(ref.mse, alt.mse, "mse");
    g.rmse = pct_gain(ref.rmse, alt.rmse, "rmse");
    g.mae = pct_gain(ref.mae, alt.mae, "mae");
    return g;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw InternalError("quantile of an empty sample");
    if (!(p >= 0 && p <= 1)) throw InternalError("quantile level outside [0, 1]");
    const double h = (static_cast<double>(sorted.size()) - 1) * p;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double gamma_q(double a, double x) {
    if (!(a > 0) || x < 0) throw InternalError("gamma_q domain error");
    if (x == 0) return 1.0;
    constexpr int max_iter = 500;
    constexpr double eps = 1e-14;
    if (x < a + 1.0) {
        // Lower series, then complement.
        double ap = a, term = 1.0 / a, sum = term;
        for (int i = 0; i < max_iter; ++i) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (std::abs(term) < std::abs(sum) * eps) break;
        }
        double p = sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        return 1.0 - p;
    }
    // Continued fraction for the upper tail (modified Lentz).
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, f = d;
    for (int i = 1; i <= max_iter; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        f *= delta;
        if (std::abs(delta - 1.0) < eps) break;
    }
    return f * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

LjungBoxResult ljung_box(const std::vector<double>& x, int lags, double alpha) {
    if (lags < 1) throw InputError("autocorrelation test needs at least one lag");
    if (!(alpha > 0 && alpha < 1)) throw InputError("significance level outside (0, 1)");
    const std::size_t n = x.size();
    if (n <= static_cast<std::size_t>(lags))
        throw InputError("series shorter than the lag count");
    double mean = 0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double denom = 0;
    for (double v : x) denom += (v - mean) * (v - mean);
    if (denom == 0) throw InputError("constant series has no autocorrelation to test");
    LjungBoxResult r;
    r.lags = lags;
    r.n = n;
    r.alpha = alpha;
    const double nd = static_cast<double>(n);
    for (int k = 1; k <= lags; ++k) {
        double num = 0;
        for (std::size_t t = static_cast<std::size_t>(k); t < n; ++t)
            num += (x[t] - mean) * (x[t - k] - mean);
        const double rho = num / denom;
        r.statistic += rho * rho / (nd - k);
    }
    r.statistic *= nd * (nd + 2.0);
    r.p_value = gamma_q(lags / 2.0, r.statistic / 2.0);
    r.reject = r.p_value < alpha;
    return r;
}

LjungBoxResult ljung_box(const TimeSeries& errors, int lags, double alpha) {
    std::vector<double> x;
    x.reserve(errors.size());
    for (Hour h = errors.start(); h < errors.end(); ++h) {
        if (errors.missing_at(h))
            throw InputError("missing value at " + format_hour(h) +
                             " in the series under test");
        x.push_back(errors.at(h));
    }
    return ljung_box(x, lags, alpha);
}

std::string to_string(Segmentation s) {
    switch (s) {
        case Segmentation::hour_of_day: return "hour";
        case Segmentation::weekday: return "weekday";
        case Segmentation::peak_offpeak: return "peak-offpeak";
        case Segmentation::price_quantile: return "price-quantile";
    }
    throw InternalError("unknown segmentation");
}

Segmentation parse_segmentation(const std::string& name) {
    if (name == "hour") return Segmentation::hour_of_day;
    if (name == "weekday") return Segmentation::weekday;
    if (name == "peak-offpeak") return Segmentation::peak_offpeak;
    if (name == "price-quantile") return Segmentation::price_quantile;
    throw InputError("unknown segmentation " + name +
                     " (expected hour, weekday, peak-offpeak, or price-quantile)");
}

SegmentedReport segment_report(const TimeSeries& pred_ref, const TimeSeries& pred_alt,
                               const TimeSeries& actual, Segmentation scheme,
                               const SegmentOptions& opt) {
    if (pred_ref.start() != actual.start() || pred_ref.end() != actual.end() ||
        pred_alt.start() != actual.start() || pred_alt.end() != actual.end())
        throw InputError("segmented report needs three aligned series");
    if (actual.size() == 0) throw InputError("segmented report over an empty index");
    if (!(opt.peak_first >= 1 && opt.peak_first <= opt.peak_last && opt.peak_last <= 24))
        throw InputError("peak hour window outside 1..24");

    // Segment label per hour, then one report pair per label.
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
    std::vector<std::string> order;
    auto put = [&](const std::string& key, Hour h) {
        auto [it, fresh] = groups.try_emplace(key);
        if (fresh) order.push_back(key);
        it->second.first.push_back(actual.at(h) - pred_ref.at(h));
        it->second.second.push_back(actual.at(h) - pred_alt.at(h));
    };
    auto check = [&](Hour h) {
        if (pred_ref.missing_at(h) || pred_alt.missing_at(h) || actual.missing_at(h))
            throw InputError("missing value at " + format_hour(h) +
                             " in the evaluation index");
    };

    if (scheme == Segmentation::price_quantile) {
        // Bin edges from the actual values of each calendar year.
        std::map<int, std::vector<double>> by_year;
        for (Hour h = actual.start(); h < actual.end(); ++h) {
            check(h);
            by_year[year_of_hour(h)].push_back(actual.at(h));
        }
        std::map<int, std::array<double, 4>> edges;
        for (auto& [year, vals] : by_year) {
            if (vals.size() < 5)
                throw InputError("year " + std::to_string(year) +
                                 " has too few observations for quintiles");
            std::sort(vals.begin(), vals.end());
            edges[year] = {quantile_sorted(vals, 0.2), quantile_sorted(vals, 0.4),
                           quantile_sorted(vals, 0.6), quantile_sorted(vals, 0.8)};
        }
        for (Hour h = actual.start(); h < actual.end(); ++h) {
            const int year = year_of_hour(h);
            const auto& e = edges.at(year);
            const double v = actual.at(h);
            int q = 5;
            for (int i = 0; i < 4; ++i)
                if (v <= e[i]) {
                    q = i + 1;
                    break;
                }
            put(std::to_string(year) + "_q" + std::to_string(q), h);
        }
    } else {
        for (Hour h = actual.start(); h < actual.end(); ++h) {
            check(h);
            switch (scheme) {
                case Segmentation::hour_of_day:
                    put("h" + std::to_string(hour_of_day(h)), h);
                    break;
                case Segmentation::weekday:
                    put("d" + std::to_string(weekday_of_hour(h)), h);
                    break;
                case Segmentation::peak_offpeak: {
                    const int hod = hour_of_day(h);
                    const bool peak = weekday_of_hour(h) <= 5 &&
                                      hod >= opt.peak_first && hod <= opt.peak_last;
                    put(peak ? "peak" : "offpeak", h);
                    break;
                }
                case Segmentation::price_quantile: break;  // handled above
            }
        }
    }

    SegmentedReport rep;
    rep.scheme = scheme;
    std::sort(order.begin(), order.end());
    for (const auto& key : order) {
        const auto& [ref_err, alt_err] = groups.at(key);
        SegmentRow row;
        row.key = key;
        row.ref = error_report(ref_err);
        row.alt = error_report(alt_err);
        row.gain = improvement(row.ref, row.alt);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

namespace {

void push_metrics(std::vector<std::vector<std::string>>& rows, const std::string& segment,
                  const std::string& suffix, const ErrorReport& r) {
    auto add = [&](const char* metric, double v) {
        rows.push_back({segment, metric + suffix, format_double(v)});
    };
    rows.push_back({segment, "n" + suffix, std::to_string(r.n)});
    add("mse", r.mse);
    add("rmse", r.rmse);
    add("mae", r.mae);
    add("mean", r.mean);
    add("median", r.median);
    add("std", r.stddev);
    add("q5", r.q5);
    add("q95", r.q95);
    add("min", r.min);
    add("max", r.max);
}

}  // namespace

void write_error_report(const std::string& path, const ErrorReport& r) {
    std::vector<std::vector<std::string>> rows;
    push_metrics(rows, "all", "", r);
    std::vector<std::vector<std::string>> out;
    for (auto& row : rows) out.push_back({row[1], row[2]});
    write_csv(path, {"metric", "value"}, out);
}

void write_segment_report(const std::string& path, const SegmentedReport& r) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : r.rows) {
        push_metrics(rows, row.key, "_ref", row.ref);
        push_metrics(rows, row.key, "_alt", row.alt);
        rows.push_back({row.key, "impr_mse", format_double(row.gain.mse)});
        rows.push_back({row.key, "impr_rmse", format_double(row.gain.rmse)});
        rows.push_back({row.key, "impr_mae", format_double(row.gain.mae)});
    }
    write_csv(path, {"segment", "metric", "value"}, rows);
}

}  // namespace gridcast
