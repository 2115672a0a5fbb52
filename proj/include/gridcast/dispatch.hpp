#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gridcast/data_io.hpp"
#include "gridcast/lp.hpp"
#include "gridcast/series.hpp"
#include "gridcast/timebase.hpp"

namespace gridcast {

/// One solve covers 72 consecutive hours: the day before the target
/// day, the target day itself, and the day after.  Only the middle 24
/// hours are kept; the flanking days exist so that storage cycling and
/// start-up decisions near midnight are not distorted by the window
/// edge.
inline constexpr int dispatch_horizon = 72;

struct DispatchConfig {
    /// Storage boundary level: share of energy capacity the reservoir
    /// must hold at both window edges.
    double boundary_share = 0.3;
    /// When set, the boundary level is boundary_share * cap (the
    /// turbine power rating read as an energy number) instead of
    /// boundary_share * cap * epf.
    bool boundary_in_power_units = false;
    /// When set, every window starts with all thermal capacity offline
    /// instead of chaining the previous window's commitment.
    bool cold_start = false;
    /// Directory for per-day LP interchange dumps; empty disables.
    std::string export_dir;
};

/// Fully materialised 72-hour problem data: defaults applied, series
/// sliced, reserve blocks clipped to the window.  Hour index t runs
/// 0..71 with t=0 at `start`.
struct DispatchInstance {
    Hour start = 0;
    std::vector<std::string> zones;
    std::vector<ClusterSpec> clusters;
    DispatchScalars scalars;
    std::map<std::string, std::array<double, dispatch_horizon>> demand;
    std::map<std::string, std::array<double, dispatch_horizon>> avail;
    std::map<std::string, std::array<double, dispatch_horizon>> outage;
    std::map<std::string, std::array<double, dispatch_horizon>> chp;
    std::map<std::string, std::array<double, dispatch_horizon>> water_value;
    std::map<std::pair<std::string, std::string>,
             std::array<double, dispatch_horizon>>
        ntc;
    struct Block {
        std::string zone;
        int first = 0;  // inclusive window offset
        int last = 0;   // exclusive
        double pos_mw = 0.0;
        double neg_mw = 0.0;
    };
    std::vector<Block> pcr;
    std::vector<Block> scr;
    /// Commitment carried in from the hour before the window, MW per
    /// thermal cluster.  Missing entries mean offline.
    std::map<std::string, double> initial_on;
    /// Reservoir level imposed at both window boundaries, MWh per
    /// short-term storage cluster.
    std::map<std::string, double> boundary_level;

    void validate() const;
    [[nodiscard]] Day target_day() const { return day_of(start) + 1; }
};

/// The LP plus the index bookkeeping needed to read the solution back
/// in model terms.  Single-variable restrictions (commitment capacity,
/// line capacity, reservoir size, must-run floor) are encoded as
/// variable bounds, not rows, so the row set stays small; the
/// market-clearing balances are genuine equality rows because their
/// duals are the point of the exercise.
struct DispatchLp {
    LpProblem problem;
    std::map<std::string, std::array<std::size_t, dispatch_horizon>> g, on, su,
        curt, pump, level, load_shift, shed;
    std::map<std::pair<std::string, std::string>,
             std::array<std::size_t, dispatch_horizon>>
        flow;
    std::map<std::string, std::array<std::size_t, dispatch_horizon>> demand_row;
    std::map<std::pair<std::string, int>, std::size_t> pcr, scr_pos, scr_neg;
};

[[nodiscard]] DispatchLp build_lp(const DispatchInstance& inst);

struct DispatchSolution {
    double objective = 0.0;
    int iterations = 0;
    std::map<std::string, std::array<double, dispatch_horizon>> g, on, su, curt,
        pump, level, load_shift, shed;
    std::map<std::pair<std::string, std::string>,
             std::array<double, dispatch_horizon>>
        flow;
    /// Marginal system cost of one extra MWh of demand, per zone and
    /// window hour; the day-ahead price estimate.
    std::map<std::string, std::array<double, dispatch_horizon>> price;
    std::map<std::pair<std::string, int>, double> pcr, scr_pos, scr_neg;
};

/// Solves one window.  Throws ModelError when the LP is infeasible or
/// unbounded, naming the target day.
[[nodiscard]] DispatchSolution solve_window(const DispatchInstance& inst);

/// Builds the instance for one target day.  When `demand_override` is
/// non-null its series replace the dataset demand and must cover the
/// full 72-hour window for every zone they provide.  `prev_on` carries
/// the committed MW from the previous window's solution.
[[nodiscard]] DispatchInstance make_instance(
    const DispatchDataset& data, Day target, const DispatchConfig& cfg,
    const std::map<std::string, TimeSeries>* demand_override,
    const std::map<std::string, double>& prev_on);

struct RollingDispatch {
    /// Per-zone hourly prices over [first target day, last target day].
    std::map<std::string, TimeSeries> prices;
    double total_cost = 0.0;  // target-day generation cost, summed
    int windows = 0;
    long iterations = 0;
};

/// Runs consecutive daily windows, chaining the hour-24 commitment
/// from each window into the next.  The dataset (or the override) must
/// cover one day before `first` through one day after `last`.
[[nodiscard]] RollingDispatch run_rolling(
    const DispatchDataset& data, Day first, Day last, const DispatchConfig& cfg,
    const std::map<std::string, TimeSeries>* demand_override = nullptr);

/// Writes prices in long format: timestamp, zone, price.
void write_prices(const std::map<std::string, TimeSeries>& prices,
                  const std::string& path);

}  // namespace gridcast
