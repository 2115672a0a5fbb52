#include "gridcast/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "gridcast/errors.hpp"

namespace gridcast {

namespace {
constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();
}

TimeSeries::TimeSeries(Hour start, std::vector<double> values, Unit unit)
    : start_(start), v_(std::move(values)), unit_(unit) {}

TimeSeries TimeSeries::constant(Hour start, std::size_t n, double value, Unit unit) {
    return TimeSeries(start, std::vector<double>(n, value), unit);
}

TimeSeries TimeSeries::empty(Hour start, std::size_t n, Unit unit) {
    return TimeSeries(start, std::vector<double>(n, nan_v), unit);
}

void TimeSeries::check(Hour h) const {
    if (!covers(h))
        throw InternalError("series lookup at hour " + format_hour(h) + " outside domain [" +
                            format_hour(start_) + ", " + format_hour(end()) + ")");
}

double TimeSeries::at(Hour h) const {
    check(h);
    return v_[static_cast<std::size_t>(h - start_)];
}

bool TimeSeries::missing_at(Hour h) const {
    check(h);
    return std::isnan(v_[static_cast<std::size_t>(h - start_)]);
}

void TimeSeries::set(Hour h, double v) {
    check(h);
    v_[static_cast<std::size_t>(h - start_)] = v;
}

void TimeSeries::set_missing(Hour h) {
    check(h);
    v_[static_cast<std::size_t>(h - start_)] = nan_v;
}

std::size_t TimeSeries::missing_count() const {
    return static_cast<std::size_t>(
        std::count_if(v_.begin(), v_.end(), [](double x) { return std::isnan(x); }));
}

TimeSeries TimeSeries::slice(Hour from, Hour to) const {
    if (!covers_range(from, to))
        throw InternalError("slice [" + format_hour(from) + ", " + format_hour(to) +
                            ") outside domain");
    auto a = v_.begin() + static_cast<std::ptrdiff_t>(from - start_);
    return TimeSeries(from, std::vector<double>(a, a + (to - from)), unit_);
}

std::size_t TimeSeries::index_of(Hour h) const {
    check(h);
    return static_cast<std::size_t>(h - start_);
}

namespace {

template <class Op>
TimeSeries combine(const TimeSeries& a, const TimeSeries& b, Op op, const char* what) {
    if (a.unit() != b.unit())
        throw InputError(std::string("unit mismatch in series ") + what);
    Hour from = std::max(a.start(), b.start());
    Hour to = std::min(a.end(), b.end());
    if (from >= to) throw InputError(std::string("series domains do not overlap in ") + what);
    TimeSeries out = TimeSeries::empty(from, static_cast<std::size_t>(to - from), a.unit());
    for (Hour h = from; h < to; ++h) {
        if (a.missing_at(h) || b.missing_at(h)) continue;
        out.set(h, op(a.at(h), b.at(h)));
    }
    return out;
}

}  // namespace

TimeSeries series_difference(const TimeSeries& actual, const TimeSeries& predicted) {
    return combine(actual, predicted, [](double x, double y) { return x - y; }, "difference");
}

TimeSeries series_sum(const TimeSeries& a, const TimeSeries& b) {
    return combine(a, b, [](double x, double y) { return x + y; }, "sum");
}

}  // namespace gridcast
