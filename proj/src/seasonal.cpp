#include "gridcast/seasonal.hpp"

#include <vector>

#include "gridcast/csv.hpp"
#include "gridcast/errors.hpp"

namespace gridcast {

double HourOfWeekProfile::mean(int h, int d) const {
    if (h < 1 || h > 24 || d < 1 || d > 7) throw InternalError("profile bucket out of range");
    int b = bucket(h, d);
    if (counts[b] == 0)
        throw InputError("seasonal bucket (hour " + std::to_string(h) + ", weekday " +
                         std::to_string(d) + ") has no observations");
    return means[b];
}

HourOfWeekProfile estimate_profile(const TimeSeries& errors, Hour window_end, Hour window_len) {
    if (window_len <= 0 || window_len % hours_per_day != 0)
        throw InputError("window length " + std::to_string(window_len) +
                         " is not a positive multiple of 24");
    Hour from = window_end - window_len;
    if (!errors.covers_range(from, window_end))
        throw InputError("estimation window [" + format_hour(from) + ", " +
                         format_hour(window_end) + ") exceeds the series");
    HourOfWeekProfile p;
    std::array<double, 168> sums{};
    for (Hour t = from; t < window_end; ++t) {
        if (errors.missing_at(t))
            throw InputError("missing value inside estimation window at " + format_hour(t));
        int b = hour_of_week(t);
        sums[b] += errors.at(t);
        ++p.counts[b];
    }
    for (int b = 0; b < 168; ++b)
        if (p.counts[b] > 0) p.means[b] = sums[b] / static_cast<double>(p.counts[b]);
    return p;
}

double seasonal_component(const HourOfWeekProfile& profile, Hour t) {
    return profile.mean(hour_of_day(t), weekday_of_hour(t));
}

TimeSeries deseasonalize(const TimeSeries& errors, const HourOfWeekProfile& profile) {
    TimeSeries out = TimeSeries::empty(errors.start(), errors.size(), errors.unit());
    for (Hour t = errors.start(); t < errors.end(); ++t) {
        if (errors.missing_at(t)) continue;
        out.set(t, errors.at(t) - seasonal_component(profile, t));
    }
    return out;
}

void write_profile(const std::string& path, const HourOfWeekProfile& profile) {
    std::vector<std::vector<std::string>> rows;
    for (int d = 1; d <= 7; ++d)
        for (int h = 1; h <= 24; ++h) {
            int b = HourOfWeekProfile::bucket(h, d);
            rows.push_back({std::to_string(d), std::to_string(h),
                            profile.counts[b] ? format_double(profile.means[b]) : "",
                            std::to_string(profile.counts[b])});
        }
    write_csv(path, {"d", "h", "mean", "count"}, rows);
}

}  // namespace gridcast
