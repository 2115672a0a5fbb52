#pragma once

#include <cstddef>
#include <vector>

#include "gridcast/timebase.hpp"

namespace gridcast {

/// Physical unit of a series; combining series of different units is an
/// error.
enum class Unit { mwh, eur_per_mwh, mw, fraction };

/// A contiguous hourly series.  The domain is [start, start + size) in
/// hours; missing values are stored as NaN and must be tested with
/// missing_at, never compared.  Lookups outside the domain throw: a
/// caller that wants extrapolation has a bug.
class TimeSeries {
public:
    TimeSeries() = default;
    TimeSeries(Hour start, std::vector<double> values, Unit unit = Unit::mwh);

    /// Series of n copies of value.
    [[nodiscard]] static TimeSeries constant(Hour start, std::size_t n, double value,
                                             Unit unit = Unit::mwh);

    /// Series of n missing values.
    [[nodiscard]] static TimeSeries empty(Hour start, std::size_t n, Unit unit = Unit::mwh);

    [[nodiscard]] Unit unit() const { return unit_; }
    void set_unit(Unit u) { unit_ = u; }

    [[nodiscard]] Hour start() const { return start_; }
    /// One past the last hour.
    [[nodiscard]] Hour end() const { return start_ + static_cast<Hour>(v_.size()); }
    [[nodiscard]] std::size_t size() const { return v_.size(); }
    [[nodiscard]] bool covers(Hour h) const { return h >= start_ && h < end(); }
    [[nodiscard]] bool covers_range(Hour from, Hour to) const {
        return from >= start_ && to <= end() && from <= to;
    }

    /// Value at hour h.  Throws InternalError outside the domain;
    /// returns NaN for a missing value.
    [[nodiscard]] double at(Hour h) const;
    [[nodiscard]] bool missing_at(Hour h) const;
    void set(Hour h, double v);
    void set_missing(Hour h);

    [[nodiscard]] const std::vector<double>& values() const { return v_; }
    [[nodiscard]] std::size_t missing_count() const;

    /// Copy of the hours [from, to).  Throws InternalError when the
    /// range is not fully inside the domain.
    [[nodiscard]] TimeSeries slice(Hour from, Hour to) const;

    /// Index of hour h in values().  Throws InternalError outside the
    /// domain.
    [[nodiscard]] std::size_t index_of(Hour h) const;

private:
    void check(Hour h) const;

    Hour start_ = 0;
    std::vector<double> v_;
    Unit unit_ = Unit::mwh;
};

/// actual - predicted, over the intersection of both domains.  Missing
/// wherever either input is missing.  Throws InputError when the domains
/// do not overlap.
[[nodiscard]] TimeSeries series_difference(const TimeSeries& actual, const TimeSeries& predicted);

/// actual + correction over the intersection, same missing rule.
[[nodiscard]] TimeSeries series_sum(const TimeSeries& a, const TimeSeries& b);

}  // namespace gridcast
