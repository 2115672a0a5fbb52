#include "gridcast/data_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <set>

#include "gridcast/csv.hpp"

namespace gridcast {

namespace {

std::string row_ctx(const CsvTable& t, std::size_t i) {
    return t.path + " row " + std::to_string(t.file_row(i));
}

Hour parse_cell_hour(const CsvTable& t, std::size_t i, std::size_t c) {
    try {
        return parse_hour(t.rows[i][c]);
    } catch (const InputError& e) {
        throw SeriesFormatError(SeriesFormatError::Kind::malformed_timestamp, t.file_row(i),
                                row_ctx(t, i) + ": " + e.what());
    }
}

/// Validates a strictly increasing contiguous hourly axis while
/// scanning rows; `prev` starts unset.
struct AxisChecker {
    const CsvTable& t;
    bool have_prev = false;
    Hour prev = 0;

    void step(Hour h, std::size_t i) {
        if (have_prev) {
            if (h == prev)
                throw SeriesFormatError(SeriesFormatError::Kind::duplicate_hour, t.file_row(i),
                                        row_ctx(t, i) + ": duplicate hour " + format_hour(h));
            if (h < prev)
                throw SeriesFormatError(SeriesFormatError::Kind::non_monotone, t.file_row(i),
                                        row_ctx(t, i) + ": timestamp " + format_hour(h) +
                                            " not after " + format_hour(prev));
            if (h != prev + 1)
                throw SeriesFormatError(SeriesFormatError::Kind::gap_in_index, t.file_row(i),
                                        row_ctx(t, i) + ": hour " + format_hour(prev + 1) +
                                            " skipped (missing values must be empty cells)");
        }
        have_prev = true;
        prev = h;
    }
};

TimeSeries column_series(const CsvTable& t, const std::string& column, Unit unit) {
    if (t.rows.empty()) throw InputError(t.path + ": no data rows");
    std::size_t tc = t.col("timestamp"), vc = t.col(column);
    Hour start = 0;
    std::vector<double> values;
    values.reserve(t.rows.size());
    AxisChecker axis{t};
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        Hour h = parse_cell_hour(t, i, tc);
        axis.step(h, i);
        if (i == 0) start = h;
        const std::string& cell = t.rows[i][vc];
        values.push_back(cell.empty() ? std::numeric_limits<double>::quiet_NaN()
                                      : parse_double(cell, row_ctx(t, i)));
    }
    return TimeSeries(start, std::move(values), unit);
}

}  // namespace

TimeSeries read_series(const std::string& path, const std::string& column) {
    return column_series(read_csv(path), column, Unit::mwh);
}

void write_series(const std::string& path, const std::string& column, const TimeSeries& s) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(s.size());
    for (Hour h = s.start(); h < s.end(); ++h)
        rows.push_back({format_hour(h), s.missing_at(h) ? "" : format_double(s.at(h))});
    write_csv(path, {"timestamp", column}, rows);
}

FillReport fill_gaps(const TimeSeries& s) {
    FillReport r{s, {}};
    for (Hour h = s.start(); h < s.end(); ++h) {
        if (!s.missing_at(h)) continue;
        double sum = 0;
        int k = 0;
        for (Hour nb : {h - hours_per_week, h + hours_per_week}) {
            if (s.covers(nb) && !s.missing_at(nb)) {
                sum += s.at(nb);
                ++k;
            }
        }
        if (k == 0)
            throw InputError("cannot fill gap at " + format_hour(h) +
                             ": no value one week before or after");
        r.series.set(h, sum / k);
        r.filled.push_back(h);
    }
    return r;
}

std::string to_string(ClusterKind k) {
    switch (k) {
        case ClusterKind::thermal: return "thermal";
        case ClusterKind::stm: return "stm";
        case ClusterKind::stl: return "stl";
        case ClusterKind::res: return "res";
    }
    throw InternalError("bad ClusterKind");
}

const ClusterSpec& DispatchDataset::cluster(const std::string& id) const {
    for (const auto& c : clusters)
        if (c.id == id) return c;
    throw InputError("unknown cluster id '" + id + "'");
}

bool DispatchDataset::has_zone(const std::string& zone) const {
    return std::find(zones.begin(), zones.end(), zone) != zones.end();
}

double DispatchDataset::af_at(const std::string& c, Hour t) const {
    auto it = af.find(c);
    return it == af.end() ? 1.0 : it->second.at(t);
}

double DispatchDataset::outage_at(const std::string& c, Hour t) const {
    auto it = outage.find(c);
    return it == outage.end() ? 0.0 : it->second.at(t);
}

double DispatchDataset::chp_at(const std::string& c, Hour t) const {
    auto it = chp.find(c);
    return it == chp.end() ? 0.0 : it->second.at(t);
}

namespace {

ClusterKind parse_kind(const std::string& cell, const std::string& ctx) {
    if (cell == "thermal") return ClusterKind::thermal;
    if (cell == "stm") return ClusterKind::stm;
    if (cell == "stl") return ClusterKind::stl;
    if (cell == "res") return ClusterKind::res;
    throw InputError(ctx + ": unknown cluster kind '" + cell + "'");
}

DispatchScalars read_scalars(const std::string& path) {
    CsvTable t = read_csv(path);
    std::size_t kc = t.col("key"), vc = t.col("value");
    std::map<std::string, double> kv;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const std::string& key = t.rows[i][kc];
        if (key != "voll" && key != "curtc" && key != "epf" && key != "eta_stm")
            throw InputError(row_ctx(t, i) + ": unknown scalar '" + key + "'");
        if (!kv.emplace(key, parse_double(t.rows[i][vc], row_ctx(t, i))).second)
            throw InputError(row_ctx(t, i) + ": duplicate scalar '" + key + "'");
    }
    for (const char* req : {"voll", "curtc", "epf", "eta_stm"})
        if (!kv.count(req)) throw InputError(path + ": missing scalar '" + std::string(req) + "'");
    DispatchScalars s{kv["voll"], kv["curtc"], kv["epf"], kv["eta_stm"]};
    if (s.voll <= 0) throw InputError(path + ": voll must be positive");
    if (s.curtc < 0) throw InputError(path + ": curtc must be non-negative");
    if (s.epf <= 0) throw InputError(path + ": epf must be positive");
    if (s.eta_stm <= 0 || s.eta_stm > 1) throw InputError(path + ": eta_stm must be in (0, 1]");
    return s;
}

/// Reads a long-format table keyed by `key_col`, one full-index series
/// per key, one value column `val_col`.  Each key's rows must cover
/// [start, end) exactly and contiguously.
std::map<std::string, TimeSeries> read_keyed_series(const CsvTable& t, const std::string& key_col,
                                                    const std::string& val_col, Hour start,
                                                    Hour end, Unit unit) {
    std::size_t kc = t.col(key_col), tc = t.col("hour"), vc = t.col(val_col);
    std::map<std::string, TimeSeries> out;
    std::map<std::string, Hour> next_hour;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const std::string& key = t.rows[i][kc];
        Hour h = parse_cell_hour(t, i, tc);
        auto [it, fresh] = next_hour.emplace(key, start);
        if (h != it->second)
            throw InputError(row_ctx(t, i) + ": index misalignment for '" + key + "': expected " +
                             format_hour(it->second) + ", got " + format_hour(h));
        if (h >= end) throw InputError(row_ctx(t, i) + ": hour beyond demand index");
        if (fresh) out.emplace(key, TimeSeries::empty(start, static_cast<std::size_t>(end - start), unit));
        const std::string& cell = t.rows[i][vc];
        if (cell.empty()) throw InputError(row_ctx(t, i) + ": missing value not allowed here");
        out.at(key).set(h, parse_double(cell, row_ctx(t, i)));
        it->second = h + 1;
    }
    for (const auto& [key, nh] : next_hour)
        if (nh != end)
            throw InputError(t.path + ": series for '" + key + "' ends at " + format_hour(nh) +
                             ", expected " + format_hour(end));
    return out;
}

}  // namespace

DispatchDataset read_dispatch_dataset(const std::string& dir) {
    namespace fs = std::filesystem;
    auto p = [&](const char* name) { return (fs::path(dir) / name).string(); };
    DispatchDataset ds;
    ds.scalars = read_scalars(p("scalars.csv"));

    // Zones come from the demand file: a zone may be import-only, but
    // every zone must have a demand series.
    CsvTable dem = read_csv(p("demand.csv"));
    for (const auto& c : dem.columns)
        if (c != "timestamp") ds.zones.push_back(c);
    if (ds.zones.empty()) throw InputError(dem.path + ": no zone columns");
    for (const auto& z : ds.zones) {
        TimeSeries s = column_series(dem, z, Unit::mwh);
        if (s.missing_count() != 0)
            throw InputError(dem.path + ": missing demand values for zone '" + z + "'");
        ds.demand.emplace(z, std::move(s));
    }
    ds.start = ds.demand.begin()->second.start();
    ds.end = ds.demand.begin()->second.end();

    CsvTable cl = read_csv(p("clusters.csv"));
    std::size_t c_id = cl.col("id"), c_zone = cl.col("zone"), c_cap = cl.col("cap"),
                c_gmin = cl.col("g_min"), c_vfl = cl.col("vc_fl"), c_vml = cl.col("vc_ml"),
                c_sc = cl.col("sc"), c_eta = cl.col("eta"), c_kind = cl.col("kind");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < cl.rows.size(); ++i) {
        std::string ctx = row_ctx(cl, i);
        ClusterSpec c;
        c.id = cl.rows[i][c_id];
        c.zone = cl.rows[i][c_zone];
        if (c.id.empty()) throw InputError(ctx + ": empty cluster id");
        if (!seen.insert(c.id).second) throw InputError(ctx + ": duplicate cluster id '" + c.id + "'");
        if (!ds.has_zone(c.zone))
            throw InputError(ctx + ": cluster '" + c.id + "' references unknown zone '" + c.zone + "'");
        c.cap = parse_double(cl.rows[i][c_cap], ctx);
        c.g_min = parse_double(cl.rows[i][c_gmin], ctx);
        c.vc_fl = parse_double(cl.rows[i][c_vfl], ctx);
        c.vc_ml = parse_double(cl.rows[i][c_vml], ctx);
        c.sc = parse_double(cl.rows[i][c_sc], ctx);
        c.kind = parse_kind(cl.rows[i][c_kind], ctx);
        if (c.cap < 0) throw InputError(ctx + ": negative capacity");
        if (c.g_min < 0 || c.g_min >= 1) throw InputError(ctx + ": g_min must be in [0, 1)");
        if (c.sc < 0) throw InputError(ctx + ": negative start-up cost");
        if (c.kind == ClusterKind::thermal && c.vc_ml < c.vc_fl)
            throw InputError(ctx + ": vc_ml below vc_fl for '" + c.id + "'");
        const std::string& eta_cell = cl.rows[i][c_eta];
        if (c.kind == ClusterKind::stm) {
            c.eta = eta_cell.empty() ? ds.scalars.eta_stm : parse_double(eta_cell, ctx);
            if (c.eta <= 0 || c.eta > 1) throw InputError(ctx + ": eta must be in (0, 1]");
        } else if (!eta_cell.empty()) {
            c.eta = parse_double(eta_cell, ctx);
        }
        ds.clusters.push_back(std::move(c));
    }

    if (fs::exists(p("availability.csv"))) {
        CsvTable t = read_csv(p("availability.csv"));
        ds.af = read_keyed_series(t, "cluster", "af", ds.start, ds.end, Unit::fraction);
        ds.outage = read_keyed_series(t, "cluster", "out", ds.start, ds.end, Unit::mw);
        for (const auto& [id, s] : ds.af) {
            const ClusterSpec& c = ds.cluster(id);
            if (c.kind == ClusterKind::stm || c.kind == ClusterKind::stl)
                throw InputError(t.path + ": availability series not applicable to storage '" + id + "'");
            for (Hour h = ds.start; h < ds.end; ++h) {
                if (s.at(h) < 0 || s.at(h) > 1)
                    throw InputError(t.path + ": af outside [0, 1] for '" + id + "' at " + format_hour(h));
                if (ds.outage.at(id).at(h) < 0)
                    throw InputError(t.path + ": negative outage for '" + id + "'");
            }
        }
    }

    if (fs::exists(p("chp.csv"))) {
        CsvTable t = read_csv(p("chp.csv"));
        ds.chp = read_keyed_series(t, "cluster", "mwh", ds.start, ds.end, Unit::mwh);
        for (const auto& [id, s] : ds.chp) {
            if (ds.cluster(id).kind != ClusterKind::thermal)
                throw InputError(t.path + ": must-run series only applies to thermal '" + id + "'");
            for (Hour h = ds.start; h < ds.end; ++h)
                if (s.at(h) < 0) throw InputError(t.path + ": negative must-run for '" + id + "'");
        }
    }

    bool any_stl = std::any_of(ds.clusters.begin(), ds.clusters.end(),
                               [](const ClusterSpec& c) { return c.kind == ClusterKind::stl; });
    if (fs::exists(p("water_value.csv"))) {
        CsvTable t = read_csv(p("water_value.csv"));
        ds.water_value =
            read_keyed_series(t, "cluster", "eur_per_mwh", ds.start, ds.end, Unit::eur_per_mwh);
        for (const auto& [id, s] : ds.water_value)
            if (ds.cluster(id).kind != ClusterKind::stl)
                throw InputError(t.path + ": water value only applies to long-term storage, got '" +
                                 id + "'");
    }
    if (any_stl)
        for (const auto& c : ds.clusters)
            if (c.kind == ClusterKind::stl && !ds.water_value.count(c.id))
                throw InputError("water value series missing for long-term storage '" + c.id + "'");

    if (fs::exists(p("ntc.csv"))) {
        CsvTable t = read_csv(p("ntc.csv"));
        std::size_t fc = t.col("from"), oc = t.col("to");
        // Key pairs first so read_keyed_series can run on a joined key.
        std::map<std::string, std::pair<std::string, std::string>> links;
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            const std::string &from = t.rows[i][fc], &to = t.rows[i][oc];
            if (!ds.has_zone(from) || !ds.has_zone(to))
                throw InputError(row_ctx(t, i) + ": link references unknown zone '" +
                                 (ds.has_zone(from) ? to : from) + "'");
            if (from == to) throw InputError(row_ctx(t, i) + ": self-link on zone '" + from + "'");
            links.emplace(from + "\x1f" + to, std::make_pair(from, to));
        }
        CsvTable joined = t;
        joined.columns.push_back("__link");
        for (std::size_t i = 0; i < joined.rows.size(); ++i)
            joined.rows[i].push_back(t.rows[i][fc] + "\x1f" + t.rows[i][oc]);
        auto per_link = read_keyed_series(joined, "__link", "mw", ds.start, ds.end, Unit::mw);
        for (auto& [key, series] : per_link) {
            for (Hour h = ds.start; h < ds.end; ++h)
                if (series.at(h) < 0) throw InputError(t.path + ": negative transfer capacity");
            ds.ntc.emplace(links.at(key), std::move(series));
        }
        // The reverse direction of a one-way link exists with zero
        // capacity so both flow variables are always present.
        for (const auto& [key, pair] : links) {
            auto rev = std::make_pair(pair.second, pair.first);
            if (!ds.ntc.count(rev))
                ds.ntc.emplace(rev, TimeSeries::constant(ds.start,
                                                         static_cast<std::size_t>(ds.end - ds.start),
                                                         0.0, Unit::mw));
        }
    }

    if (fs::exists(p("control_power.csv"))) {
        CsvTable t = read_csv(p("control_power.csv"));
        std::size_t kc = t.col("kind"), zc = t.col("zone"), sc_ = t.col("start"), ec = t.col("end"),
                    pc = t.col("pos_mw"), nc = t.col("neg_mw");
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            std::string ctx = row_ctx(t, i);
            ControlBlock b;
            b.zone = t.rows[i][zc];
            if (!ds.has_zone(b.zone)) throw InputError(ctx + ": unknown zone '" + b.zone + "'");
            b.start = parse_cell_hour(t, i, sc_);
            b.end = parse_cell_hour(t, i, ec);
            if (b.start >= b.end || b.start < ds.start || b.end > ds.end)
                throw InputError(ctx + ": block outside the demand index");
            b.pos_mw = parse_double(t.rows[i][pc], ctx);
            b.neg_mw = t.rows[i][nc].empty() ? 0.0 : parse_double(t.rows[i][nc], ctx);
            if (b.pos_mw < 0 || b.neg_mw < 0) throw InputError(ctx + ": negative requirement");
            const std::string& kind = t.rows[i][kc];
            if (kind == "pcr")
                ds.pcr_blocks.push_back(b);
            else if (kind == "scr")
                ds.scr_blocks.push_back(b);
            else
                throw InputError(ctx + ": unknown control-power kind '" + kind + "'");
        }
        for (const auto* blocks : {&ds.pcr_blocks, &ds.scr_blocks}) {
            for (std::size_t i = 0; i < blocks->size(); ++i)
                for (std::size_t j = i + 1; j < blocks->size(); ++j) {
                    const ControlBlock &a = (*blocks)[i], &b = (*blocks)[j];
                    if (a.zone == b.zone && a.start < b.end && b.start < a.end)
                        throw InputError(p("control_power.csv") + ": overlapping blocks in zone '" +
                                         a.zone + "'");
                }
        }
        for (const auto* blocks : {&ds.pcr_blocks, &ds.scr_blocks}) {
            for (const auto& b : *blocks) {
                if (b.pos_mw == 0 && b.neg_mw == 0) continue;
                bool thermal = std::any_of(ds.clusters.begin(), ds.clusters.end(),
                                           [&](const ClusterSpec& c) {
                                               return c.zone == b.zone &&
                                                      c.kind == ClusterKind::thermal;
                                           });
                if (!thermal)
                    throw InputError("control-power requirement in zone '" + b.zone +
                                     "' with no thermal cluster to provide it");
            }
        }
    }

    return ds;
}

TimeSeries read_price_series(const std::string& path, const std::string& zone) {
    CsvTable t = read_csv(path);
    std::size_t tc = t.col("timestamp"), zc = t.col("zone"), pc = t.col("price");
    Hour start = 0;
    std::vector<double> values;
    AxisChecker axis{t};
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (t.rows[i][zc] != zone) continue;
        Hour h = parse_cell_hour(t, i, tc);
        axis.step(h, i);
        if (values.empty()) start = h;
        values.push_back(parse_double(t.rows[i][pc], row_ctx(t, i)));
    }
    if (values.empty()) throw InputError(path + ": no rows for zone '" + zone + "'");
    return TimeSeries(start, std::move(values), Unit::eur_per_mwh);
}

}  // namespace gridcast
