#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gridcast/errors.hpp"
#include "gridcast/series.hpp"
#include "gridcast/timebase.hpp"

namespace gridcast {

/// Structural defect in a series file.  Carries the defect kind and the
/// 1-based file row so callers can report precisely.
class SeriesFormatError : public InputError {
public:
    enum class Kind { malformed_timestamp, non_monotone, duplicate_hour, gap_in_index };

    SeriesFormatError(Kind k, std::size_t file_row, const std::string& msg)
        : InputError(msg), kind(k), row(file_row) {}

    Kind kind;
    std::size_t row;
};

/// Reads one value column from a `timestamp,<name>,...` file.  The
/// timestamp axis must be strictly increasing and contiguous hourly;
/// empty cells become missing values.
[[nodiscard]] TimeSeries read_series(const std::string& path, const std::string& column);

/// Writes a series as `timestamp,<column>`; missing values become empty
/// cells.  Numbers are written so they parse back bit-identical.
void write_series(const std::string& path, const std::string& column, const TimeSeries& s);

struct FillReport {
    TimeSeries series;
    std::vector<Hour> filled;
};

/// Replaces each missing value with the mean of the values one week
/// before and one week after, or with the single one that exists.
/// Neighbour values are taken from the input series only, so filling
/// never cascades and the operation is idempotent.  Throws InputError
/// naming the hour when neither neighbour is available.
[[nodiscard]] FillReport fill_gaps(const TimeSeries& s);

enum class ClusterKind { thermal, stm, stl, res };

[[nodiscard]] std::string to_string(ClusterKind k);

/// One capacity cluster: an aggregated group of same-technology plants
/// dispatched in marginal increments.
struct ClusterSpec {
    std::string id;
    std::string zone;
    double cap = 0;     // MW
    double g_min = 0;   // fraction of running capacity, in [0, 1)
    double vc_fl = 0;   // €/MWh at full load
    double vc_ml = 0;   // €/MWh at minimum load
    double sc = 0;      // €/MW start-up
    double eta = 0;     // charging efficiency, mid-term storage only
    ClusterKind kind = ClusterKind::thermal;
};

/// Reserved control-power capacity over [start, end).  For primary
/// blocks pos_mw is the symmetric requirement and neg_mw is unused.
struct ControlBlock {
    std::string zone;
    Hour start = 0;
    Hour end = 0;
    double pos_mw = 0;
    double neg_mw = 0;
};

struct DispatchScalars {
    double voll = 0;     // €/MWh shed
    double curtc = 0;    // €/MWh curtailed
    double epf = 0;      // storage energy capacity in hours of full load
    double eta_stm = 0;  // default mid-term charging efficiency
};

/// All dispatch inputs over one common hourly index [start, end).
struct DispatchDataset {
    std::vector<std::string> zones;  // demand columns, file order
    std::vector<ClusterSpec> clusters;
    std::map<std::string, TimeSeries> demand;                          // by zone
    std::map<std::pair<std::string, std::string>, TimeSeries> ntc;    // by (from, to)
    std::map<std::string, TimeSeries> af;                             // by cluster
    std::map<std::string, TimeSeries> outage;                         // by cluster
    std::map<std::string, TimeSeries> chp;                            // by cluster
    std::map<std::string, TimeSeries> water_value;                    // by stl cluster
    std::vector<ControlBlock> pcr_blocks;
    std::vector<ControlBlock> scr_blocks;
    DispatchScalars scalars;
    Hour start = 0;
    Hour end = 0;

    [[nodiscard]] const ClusterSpec& cluster(const std::string& id) const;
    [[nodiscard]] bool has_zone(const std::string& zone) const;

    /// af value with default 1 when no availability row exists.
    [[nodiscard]] double af_at(const std::string& cluster, Hour t) const;
    /// outage MW with default 0.
    [[nodiscard]] double outage_at(const std::string& cluster, Hour t) const;
    /// CHP must-run MWh with default 0.
    [[nodiscard]] double chp_at(const std::string& cluster, Hour t) const;
};

/// Reads and cross-validates a dispatch dataset directory.
///
/// Required files: `clusters.csv` (id, zone, cap, g_min, vc_fl, vc_ml,
/// sc, eta, kind), `demand.csv` (timestamp plus one column per zone),
/// `scalars.csv` (key, value).  Optional: `ntc.csv` (from, to, hour,
/// mw), `availability.csv` (cluster, hour, af, out), `chp.csv`
/// (cluster, hour, mwh), `water_value.csv` (cluster, hour, eur_per_mwh;
/// required when a long-term storage cluster exists), and
/// `control_power.csv` (kind, zone, start, end, pos_mw, neg_mw).
/// Every per-hour table must cover the demand index exactly.
[[nodiscard]] DispatchDataset read_dispatch_dataset(const std::string& dir);

/// Reads one zone's series from a long-format `timestamp,zone,price`
/// file.
[[nodiscard]] TimeSeries read_price_series(const std::string& path, const std::string& zone);

}  // namespace gridcast
