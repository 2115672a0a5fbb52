#pragma once

#include <cstdint>
#include <string>

namespace gridcast {

/// Hours since 1970-01-01 00:00 UTC.  The whole codebase runs on a plain
/// hourly axis with no time zones and no DST transitions; input data is
/// expected to be UTC.
using Hour = std::int64_t;

/// Days since 1970-01-01 (UTC).
using Day = std::int64_t;

inline constexpr Hour hours_per_day = 24;
inline constexpr Hour hours_per_week = 168;

/// First hour of the given day.
[[nodiscard]] constexpr Hour day_start(Day d) { return d * hours_per_day; }

/// Day containing the given hour.  Floor division, exact for negative
/// hours as well.
[[nodiscard]] constexpr Day day_of(Hour h) {
    Day d = h / hours_per_day;
    if (h % hours_per_day < 0) --d;
    return d;
}

/// Hour of day in 1..24.  Hour 1 is the interval starting at midnight.
[[nodiscard]] constexpr int hour_of_day(Hour h) {
    auto r = static_cast<int>(h - day_start(day_of(h)));
    return r + 1;
}

/// ISO weekday in 1..7, Monday = 1.  The epoch day 1970-01-01 was a
/// Thursday.
[[nodiscard]] constexpr int weekday_of(Day d) {
    auto w = static_cast<int>((d + 3) % 7);
    if (w < 0) w += 7;
    return w + 1;
}

[[nodiscard]] constexpr int weekday_of_hour(Hour h) { return weekday_of(day_of(h)); }

/// Hour-of-week bucket in 0..167: (weekday - 1) * 24 + (hour_of_day - 1).
[[nodiscard]] constexpr int hour_of_week(Hour h) {
    return (weekday_of_hour(h) - 1) * 24 + hour_of_day(h) - 1;
}

/// True for Saturday and Sunday.
[[nodiscard]] constexpr bool is_weekend(Day d) { return weekday_of(d) >= 6; }

/// Civil date to day number.  Throws InputError when the date does not
/// exist (e.g. February 30th).
[[nodiscard]] Day make_day(int year, int month, int day);

/// Day number to "YYYY-MM-DD".
[[nodiscard]] std::string format_day(Day d);

/// Hour number to "YYYY-MM-DD HH:MM", minutes always zero.
[[nodiscard]] std::string format_hour(Hour h);

/// Parses "YYYY-MM-DD".  Throws InputError on malformed or impossible
/// dates.
[[nodiscard]] Day parse_day(const std::string& text);

/// Parses a timestamp at hour resolution.  Accepts "YYYY-MM-DD HH:MM",
/// "YYYY-MM-DDTHH:MM", both with optional ":SS", and "YYYY-MM-DD HH".
/// Minutes and seconds must be zero.  Throws InputError otherwise.
[[nodiscard]] Hour parse_hour(const std::string& text);

/// Calendar year of a day, e.g. 2017.
[[nodiscard]] int year_of(Day d);

[[nodiscard]] inline int year_of_hour(Hour h) { return year_of(day_of(h)); }

}  // namespace gridcast
