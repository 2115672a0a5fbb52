#include "gridcast/forecast_engine.hpp"

#include <cmath>
#include <thread>

#include "gridcast/csv.hpp"
#include "gridcast/errors.hpp"
#include "gridcast/seasonal.hpp"

namespace gridcast {

void RollingConfig::validate() const {
    if (window_len < hours_per_week || window_len % hours_per_day != 0)
        throw InputError("window length " + std::to_string(window_len) +
                         " must be a multiple of 24 and at least 168");
    if (decision_hour < 1 || decision_hour > 24)
        throw InputError("decision hour must be in 1..24");
    if (burn < 0) throw InputError("burn must be non-negative");
}

DayForecast improve_day(const TimeSeries& errors, const TimeSeries& tso_forecast, Day day,
                        const RollingConfig& cfg) {
    cfg.validate();
    Hour window_end = day_start(day - 1);
    Hour window_start = window_end - cfg.window_len;
    if (!errors.covers_range(window_start, window_end))
        throw InputError("insufficient error history for " + format_day(day) + ": window [" +
                         format_hour(window_start) + ", " + format_hour(window_end) + ") not covered");
    Hour target_start = day_start(day);
    if (!tso_forecast.covers_range(target_start, target_start + hours_per_day))
        throw InputError("TSO forecast does not cover target day " + format_day(day));

    HourOfWeekProfile profile = estimate_profile(errors, window_end, cfg.window_len);
    TimeSeries rc = deseasonalize(errors.slice(window_start, window_end), profile);

    DayForecast out;
    out.day = day;
    out.log.day = day;

    // The remainder forecast spans 48 hours from the cutoff; the target
    // day is the final 24 of them.
    std::array<double, 24> rc_forecast{};
    try {
        SarmaFit fit = fit_sarma(rc, cfg.sarma);
        if (!std::isfinite(fit.css) || !std::isfinite(fit.params.phi0))
            throw ModelError("fit produced a non-finite objective");
        SarmaState state = state_from_series(fit.params, rc, cfg.sarma);
        std::vector<double> fc = forecast_sarma(fit.params, state, 48, cfg.sarma);
        for (int j = 0; j < 24; ++j) rc_forecast[static_cast<std::size_t>(j)] = fc[24 + j];
        out.log.fit = fit;
    } catch (const InputError& e) {
        out.log.fallback = true;
        out.log.fallback_reason = e.what();
    } catch (const ModelError& e) {
        out.log.fallback = true;
        out.log.fallback_reason = e.what();
    }

    for (int j = 0; j < 24; ++j) {
        Hour t = target_start + j;
        if (tso_forecast.missing_at(t))
            throw InputError("TSO forecast missing at " + format_hour(t));
        auto u = static_cast<std::size_t>(j);
        double sc = seasonal_component(profile, t);
        out.ehat[u] = out.log.fallback ? sc : rc_forecast[u] + sc;
        out.lhat_star[u] = tso_forecast.at(t) + out.ehat[u];
    }
    return out;
}

ImprovedForecast run_backtest(const TimeSeries& actual, const TimeSeries& tso, Day first_day,
                              Day last_day, const RollingConfig& cfg, int jobs) {
    cfg.validate();
    if (last_day < first_day) throw InputError("backtest day range is empty");
    if (jobs < 1) throw InputError("jobs must be at least 1");

    TimeSeries errors = series_difference(actual, tso);
    Hour needed_from = day_start(first_day - 1) - cfg.window_len;
    Hour needed_to = day_start(last_day - 1);
    if (!errors.covers_range(needed_from, needed_to))
        throw InputError("backtest range starts too early: error history begins at " +
                         format_hour(errors.start()));
    for (Hour h = needed_from; h < needed_to; ++h)
        if (errors.missing_at(h))
            throw InputError("error history has a gap at " + format_hour(h) +
                             "; gap-fill the load series first");

    auto n_days = static_cast<std::size_t>(last_day - first_day + 1);
    std::vector<DayForecast> days(n_days);
    auto work = [&](std::size_t from, std::size_t to) {
        for (std::size_t i = from; i < to; ++i)
            days[i] = improve_day(errors, tso, first_day + static_cast<Day>(i), cfg);
    };
    if (jobs == 1 || n_days < 2) {
        work(0, n_days);
    } else {
        std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(jobs), n_days);
        std::vector<std::thread> pool;
        std::size_t chunk = (n_days + n_threads - 1) / n_threads;
        for (std::size_t t = 0; t < n_threads; ++t)
            pool.emplace_back(work, t * chunk, std::min(n_days, (t + 1) * chunk));
        for (auto& th : pool) th.join();
    }

    ImprovedForecast out{TimeSeries::empty(day_start(first_day), n_days * 24),
                         TimeSeries::empty(day_start(first_day), n_days * 24), {}};
    for (const auto& d : days) {
        for (int j = 0; j < 24; ++j) {
            out.ehat.set(day_start(d.day) + j, d.ehat[static_cast<std::size_t>(j)]);
            out.lhat_star.set(day_start(d.day) + j, d.lhat_star[static_cast<std::size_t>(j)]);
        }
        out.fit_log.push_back(d.log);
    }
    return out;
}

void write_improved_load(const std::string& path, const ImprovedForecast& improved,
                         const TimeSeries& tso) {
    std::vector<std::vector<std::string>> rows;
    for (Hour t = improved.lhat_star.start(); t < improved.lhat_star.end(); ++t)
        rows.push_back({format_hour(t), format_double(tso.at(t)),
                        format_double(improved.ehat.at(t)),
                        format_double(improved.lhat_star.at(t))});
    write_csv(path, {"timestamp", "lhat", "ehat", "lhat_star"}, rows);
}

void write_fit_log(const std::string& path, const std::vector<DayFit>& fit_log) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& f : fit_log) {
        if (f.fallback) {
            rows.push_back({format_day(f.day), "", "", "", "", "", "", "0"});
        } else {
            const SarmaParams& p = f.fit.params;
            rows.push_back({format_day(f.day), format_double(p.phi0), format_double(p.phi1),
                            format_double(p.phi24), format_double(p.omega1),
                            format_double(p.omega24), format_double(p.sigma2),
                            f.fit.converged ? "1" : "0"});
        }
    }
    write_csv(path, {"date", "phi0", "phi1", "phi24", "omega1", "omega24", "sigma2", "converged"},
              rows);
}

}  // namespace gridcast
