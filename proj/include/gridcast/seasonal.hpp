#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "gridcast/series.hpp"
#include "gridcast/timebase.hpp"

namespace gridcast {

/// Hour-of-week mean table: one bucket per (weekday 1..7, hour-of-day
/// 1..24).  A bucket with count 0 is undefined and reading it is an
/// error, never a silent 0.
struct HourOfWeekProfile {
    std::array<double, 168> means{};
    std::array<std::int64_t, 168> counts{};

    /// Bucket index for weekday d in 1..7, hour h in 1..24.
    [[nodiscard]] static int bucket(int h, int d) { return (d - 1) * 24 + (h - 1); }

    [[nodiscard]] bool defined(int h, int d) const { return counts[bucket(h, d)] > 0; }

    /// Mean of bucket (h, d); throws InputError when undefined.
    [[nodiscard]] double mean(int h, int d) const;
};

/// Bucket means of the errors over [window_end - window_len,
/// window_end).  window_len must be a positive multiple of 24 and the
/// window must lie inside the series with no missing values.
[[nodiscard]] HourOfWeekProfile estimate_profile(const TimeSeries& errors, Hour window_end,
                                                 Hour window_len);

/// The profile mean for the bucket containing t.
[[nodiscard]] double seasonal_component(const HourOfWeekProfile& profile, Hour t);

/// errors_t minus the seasonal component, same index; missing stays
/// missing.
[[nodiscard]] TimeSeries deseasonalize(const TimeSeries& errors, const HourOfWeekProfile& profile);

/// Writes the 168 buckets as `d,h,mean,count` rows for inspection;
/// undefined buckets get an empty mean cell.
void write_profile(const std::string& path, const HourOfWeekProfile& profile);

}  // namespace gridcast
