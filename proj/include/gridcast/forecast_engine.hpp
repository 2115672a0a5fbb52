#pragma once

#include <array>
#include <string>
#include <vector>

#include "gridcast/sarma.hpp"
#include "gridcast/series.hpp"
#include "gridcast/timebase.hpp"

namespace gridcast {

/// Settings of the daily rolling-window improvement.
///
/// The information cutoff for target day D is always the start of day
/// D-1: the last observed error is the final hour of D-2, and the
/// 48-hour recursion bridges D-1 before reaching D.  decision_hour
/// records the decision clock (noon of D-1 under the day-ahead
/// timetable) but does not move the cutoff, which stays day-aligned so
/// the window always rolls over full days.
struct RollingConfig {
    Hour window_len = 8760;  // trailing estimation window, multiple of 24
    int decision_hour = 12;  // hour-of-day of the decision, 1..24
    Hour burn = 0;           // hours excluded from evaluation at the series start
    SarmaOptions sarma{};

    void validate() const;
};

/// Per-day fit record; exactly one entry per target day.
struct DayFit {
    Day day = 0;
    SarmaFit fit{};
    bool fallback = false;  // seasonal component only, fit unusable
    std::string fallback_reason;
};

/// One improved target day: 24 predicted errors and the resulting
/// forecast, hours day_start(day) .. day_start(day)+23.
struct DayForecast {
    Day day = 0;
    std::array<double, 24> ehat{};
    std::array<double, 24> lhat_star{};
    DayFit log{};
};

struct ImprovedForecast {
    TimeSeries lhat_star;
    TimeSeries ehat;
    std::vector<DayFit> fit_log;
};

/// Improves one target day under the no-lookahead protocol: estimate
/// the seasonal profile and the remainder model on the window_len hours
/// ending at start-of-day(day-1), forecast the remainder 48 hours
/// ahead, re-add the seasonal component, and keep the final 24 values.
/// A failed fit degrades to the seasonal component alone and is
/// flagged.  Requires complete error history over the window and a TSO
/// forecast covering the target day.
[[nodiscard]] DayForecast improve_day(const TimeSeries& errors, const TimeSeries& tso_forecast,
                                      Day day, const RollingConfig& cfg);

/// improve_day over every day in [first_day, last_day], assembled
/// chronologically.  jobs > 1 evaluates days concurrently; results are
/// identical to the sequential run.
[[nodiscard]] ImprovedForecast run_backtest(const TimeSeries& actual, const TimeSeries& tso,
                                            Day first_day, Day last_day, const RollingConfig& cfg,
                                            int jobs = 1);

/// Writes `timestamp,lhat,ehat,lhat_star`; lhat is the unmodified input
/// forecast.
void write_improved_load(const std::string& path, const ImprovedForecast& improved,
                         const TimeSeries& tso);

/// Writes `date,phi0,phi1,phi24,omega1,omega24,sigma2,converged`.
/// Fallback days keep empty parameter cells and converged = 0.
void write_fit_log(const std::string& path, const std::vector<DayFit>& fit_log);

}  // namespace gridcast
