#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gridcast/series.hpp"

namespace gridcast {

/// Descriptive statistics of a forecast-error sample.  The error sign
/// convention everywhere is actual minus prediction, so a positive
/// mean is systematic underprediction.
struct ErrorReport {
    std::size_t n = 0;
    double mse = 0;
    double rmse = 0;
    double mae = 0;
    double mean = 0;
    double median = 0;
    double stddev = 0;  // sample standard deviation
    double q5 = 0;
    double q95 = 0;
    double min = 0;
    double max = 0;
};

[[nodiscard]] ErrorReport error_report(const std::vector<double>& errors);

/// Errors taken as actual - pred over the common index, which must be
/// identical, with no missing values.
[[nodiscard]] ErrorReport error_report(const TimeSeries& pred, const TimeSeries& actual);

/// Percentage gain per metric: 100 * (ref - alt) / ref.  Negative
/// means the alternative is worse.  Throws on a zero reference metric.
struct Improvement {
    double mse = 0;
    double rmse = 0;
    double mae = 0;
};

[[nodiscard]] Improvement improvement(const ErrorReport& ref, const ErrorReport& alt);

/// Portmanteau autocorrelation test.  reject means the no-correlation
/// null falls at the given significance level; both the statistic and
/// the p-value are reported since a bare flag hides the margin.
struct LjungBoxResult {
    double statistic = 0;
    int lags = 0;
    std::size_t n = 0;
    double p_value = 1;
    double alpha = 0.05;
    bool reject = false;
};

[[nodiscard]] LjungBoxResult ljung_box(const std::vector<double>& x, int lags = 168,
                                       double alpha = 0.05);
[[nodiscard]] LjungBoxResult ljung_box(const TimeSeries& errors, int lags = 168,
                                       double alpha = 0.05);

/// Interpolating sample quantile (the common linear "type 7" rule);
/// input must be sorted ascending and non-empty.
[[nodiscard]] double quantile_sorted(const std::vector<double>& sorted, double p);

/// Regularized upper incomplete gamma Q(a, x); the chi-square survival
/// function is Q(k/2, x/2).
[[nodiscard]] double gamma_q(double a, double x);

enum class Segmentation { hour_of_day, weekday, peak_offpeak, price_quantile };

[[nodiscard]] std::string to_string(Segmentation s);
[[nodiscard]] Segmentation parse_segmentation(const std::string& name);

struct SegmentOptions {
    /// Peak block: weekday hours-of-day in [peak_first, peak_last],
    /// 1-based intervals; the default covers 08:00-20:00.
    int peak_first = 9;
    int peak_last = 20;
};

struct SegmentRow {
    std::string key;
    ErrorReport ref;
    ErrorReport alt;
    Improvement gain;
};

struct SegmentedReport {
    Segmentation scheme = Segmentation::hour_of_day;
    std::vector<SegmentRow> rows;
};

/// Splits the evaluation index by the scheme and reports both
/// predictors per segment.  Price quantiles are five equal-probability
/// bins of the actual values, computed separately per calendar year.
[[nodiscard]] SegmentedReport segment_report(const TimeSeries& pred_ref,
                                             const TimeSeries& pred_alt,
                                             const TimeSeries& actual,
                                             Segmentation scheme,
                                             const SegmentOptions& opt = {});

/// metric,value pairs, one per line.
void write_error_report(const std::string& path, const ErrorReport& r);

/// Plot-ready long format: segment,metric,value.
void write_segment_report(const std::string& path, const SegmentedReport& r);

}  // namespace gridcast
