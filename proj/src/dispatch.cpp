#include "gridcast/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gridcast/csv.hpp"
#include "gridcast/errors.hpp"
#include "gridcast/mps.hpp"

// LP shape notes.  Everything that restricts a single variable is a
// bound, not a row: committed capacity (P_on <= cap*af - out, clamped
// at 0 when outages exceed what is available), line flow (<= ntc),
// reservoir level (<= cap*epf, pinned to the boundary fill in the last
// hour), and the CHP must-run floor (G >= chp).  Rows carry only the
// couplings, and the market-clearing equalities come first so their
// duals, the price estimates, are trivially addressable.

namespace gridcast {
namespace {

constexpr int H = dispatch_horizon;

// Pumping draws more grid power than the turbine rating re-delivers.
constexpr double pump_capacity_factor = 1.1;

std::string tag(const std::string& stem, const std::string& id, int t) {
    return stem + "_" + id + "_" + std::to_string(t + 1);
}

void require_finite(double v, const std::string& what) {
    if (!std::isfinite(v)) throw InputError(what + " is not finite");
}

double part_load_rate(const ClusterSpec& c) {
    return (c.vc_ml - c.vc_fl) * c.g_min / (1.0 - c.g_min);
}

}  // namespace

void DispatchInstance::validate() const {
    if (zones.empty()) throw InputError("dispatch window has no zones");
    if (std::set<std::string>(zones.begin(), zones.end()).size() != zones.size())
        throw InputError("duplicate zone in dispatch window");
    if (!(scalars.voll > 0)) throw InputError("voll must be positive");
    if (scalars.curtc < 0) throw InputError("curtc must be non-negative");
    if (!(scalars.epf > 0)) throw InputError("epf must be positive");

    std::set<std::string> ids;
    for (const auto& c : clusters) {
        if (!ids.insert(c.id).second)
            throw InputError("duplicate cluster " + c.id);
        if (std::find(zones.begin(), zones.end(), c.zone) == zones.end())
            throw InputError("cluster " + c.id + " references unknown zone " + c.zone);
        if (!(c.cap >= 0) || !std::isfinite(c.cap))
            throw InputError("cluster " + c.id + " has invalid capacity");
        if (!(c.g_min >= 0 && c.g_min < 1))
            throw InputError("cluster " + c.id + " has g_min outside [0, 1)");
        if (c.sc < 0) throw InputError("cluster " + c.id + " has negative start-up cost");
        require_finite(c.vc_fl, "vc_fl of " + c.id);
        require_finite(c.vc_ml, "vc_ml of " + c.id);
        if (c.kind == ClusterKind::thermal && c.vc_ml < c.vc_fl)
            throw InputError("cluster " + c.id +
                             ": minimum-load variable cost below full-load cost");
        const auto af_it = avail.find(c.id);
        const auto out_it = outage.find(c.id);
        if (af_it == avail.end() || out_it == outage.end())
            throw InputError("cluster " + c.id + " lacks availability data");
        for (int t = 0; t < H; ++t) {
            double a = af_it->second[t], o = out_it->second[t];
            if (!(a >= 0 && a <= 1))
                throw InputError("availability factor of " + c.id + " outside [0, 1]");
            if (!(o >= 0) || !std::isfinite(o))
                throw InputError("outage of " + c.id + " invalid");
        }
        switch (c.kind) {
            case ClusterKind::thermal: {
                const auto it = chp.find(c.id);
                if (it == chp.end())
                    throw InputError("cluster " + c.id + " lacks a must-run profile");
                for (double v : it->second)
                    if (!(v >= 0) || !std::isfinite(v))
                        throw InputError("must-run profile of " + c.id + " invalid");
                break;
            }
            case ClusterKind::stm: {
                if (!(c.eta > 0 && c.eta <= 1))
                    throw InputError("storage " + c.id + " has charging efficiency outside (0, 1]");
                const auto it = boundary_level.find(c.id);
                if (it == boundary_level.end())
                    throw InputError("storage " + c.id + " lacks a boundary level");
                if (!(it->second >= 0) || it->second > c.cap * scalars.epf)
                    throw InputError("storage " + c.id +
                                     " boundary level exceeds the reservoir");
                break;
            }
            case ClusterKind::stl: {
                const auto it = water_value.find(c.id);
                if (it == water_value.end())
                    throw InputError("long-term storage " + c.id + " lacks water values");
                for (double v : it->second) require_finite(v, "water value of " + c.id);
                break;
            }
            case ClusterKind::res: {
                for (double o : out_it->second)
                    if (o != 0.0)
                        throw InputError("renewable cluster " + c.id +
                                         " has outage data; fold outages into the "
                                         "availability factor");
                break;
            }
        }
    }
    for (const auto& [zone, d] : demand) {
        if (std::find(zones.begin(), zones.end(), zone) == zones.end())
            throw InputError("demand for unknown zone " + zone);
        for (double v : d) require_finite(v, "demand in " + zone);
    }
    for (const auto& z : zones)
        if (demand.find(z) == demand.end())
            throw InputError("no demand for zone " + z);
    for (const auto& [key, arr] : ntc) {
        if (std::find(zones.begin(), zones.end(), key.first) == zones.end() ||
            std::find(zones.begin(), zones.end(), key.second) == zones.end())
            throw InputError("transfer link references unknown zone");
        for (double v : arr)
            if (!(v >= 0) || !std::isfinite(v))
                throw InputError("transfer capacity invalid on " + key.first + "->" +
                                 key.second);
    }
    auto check_blocks = [&](const std::vector<Block>& blocks, const char* what) {
        for (const auto& b : blocks) {
            if (std::find(zones.begin(), zones.end(), b.zone) == zones.end())
                throw InputError(std::string(what) + " block references unknown zone " +
                                 b.zone);
            if (!(b.first >= 0 && b.first < b.last && b.last <= H))
                throw InputError(std::string(what) + " block outside the window");
            if (!(b.pos_mw >= 0) || !(b.neg_mw >= 0))
                throw InputError(std::string(what) + " block has a negative requirement");
            if (b.pos_mw > 0 || b.neg_mw > 0) {
                bool any = false;
                for (const auto& c : clusters)
                    any = any || (c.kind == ClusterKind::thermal && c.zone == b.zone);
                if (!any)
                    throw InputError(std::string(what) + " requirement in zone " + b.zone +
                                     " with no thermal cluster to provide it");
            }
        }
    };
    check_blocks(pcr, "primary control");
    check_blocks(scr, "secondary control");
    for (const auto& [id, mw] : initial_on) {
        if (!(mw >= 0) || !std::isfinite(mw))
            throw InputError("carried-in commitment for " + id + " invalid");
    }
}

DispatchInstance make_instance(const DispatchDataset& data, Day target,
                               const DispatchConfig& cfg,
                               const std::map<std::string, TimeSeries>* demand_override,
                               const std::map<std::string, double>& prev_on) {
    DispatchInstance inst;
    inst.start = day_start(target - 1);
    const Hour endh = inst.start + H;
    if (inst.start < data.start || endh > data.end)
        throw InputError("dispatch window for " + format_day(target) +
                         " extends outside the dataset range");
    inst.zones = data.zones;
    inst.clusters = data.clusters;
    inst.scalars = data.scalars;

    if (demand_override)
        for (const auto& [zone, s] : *demand_override) {
            (void)s;
            if (!data.has_zone(zone))
                throw InputError("demand override names unknown zone " + zone);
        }
    for (const auto& zone : data.zones) {
        const TimeSeries* src = &data.demand.at(zone);
        if (demand_override) {
            auto it = demand_override->find(zone);
            if (it != demand_override->end()) src = &it->second;
        }
        if (!src->covers_range(inst.start, endh))
            throw InputError("demand for zone " + zone + " does not cover the window of " +
                             format_day(target));
        auto& arr = inst.demand[zone];
        for (int t = 0; t < H; ++t) {
            if (src->missing_at(inst.start + t))
                throw InputError("demand for zone " + zone + " is missing at " +
                                 format_hour(inst.start + t));
            arr[t] = src->at(inst.start + t);
        }
    }
    for (const auto& c : data.clusters) {
        auto& af = inst.avail[c.id];
        auto& out = inst.outage[c.id];
        for (int t = 0; t < H; ++t) {
            af[t] = data.af_at(c.id, inst.start + t);
            out[t] = data.outage_at(c.id, inst.start + t);
        }
        if (c.kind == ClusterKind::thermal) {
            auto& ch = inst.chp[c.id];
            for (int t = 0; t < H; ++t) ch[t] = data.chp_at(c.id, inst.start + t);
        }
        if (c.kind == ClusterKind::stl) {
            const TimeSeries& wv = data.water_value.at(c.id);
            auto& arr = inst.water_value[c.id];
            for (int t = 0; t < H; ++t) arr[t] = wv.at(inst.start + t);
        }
        if (c.kind == ClusterKind::stm) {
            double scale = cfg.boundary_in_power_units ? 1.0 : data.scalars.epf;
            inst.boundary_level[c.id] = cfg.boundary_share * c.cap * scale;
        }
    }
    for (const auto& [key, s] : data.ntc) {
        auto& arr = inst.ntc[key];
        for (int t = 0; t < H; ++t) arr[t] = s.at(inst.start + t);
    }
    auto clip = [&](const std::vector<ControlBlock>& in) {
        std::vector<DispatchInstance::Block> blocks;
        for (const auto& b : in) {
            Hour lo = std::max(b.start, inst.start);
            Hour hi = std::min(b.end, endh);
            if (lo >= hi) continue;
            blocks.push_back({b.zone, static_cast<int>(lo - inst.start),
                              static_cast<int>(hi - inst.start), b.pos_mw, b.neg_mw});
        }
        return blocks;
    };
    inst.pcr = clip(data.pcr_blocks);
    inst.scr = clip(data.scr_blocks);
    if (!cfg.cold_start) inst.initial_on = prev_on;
    inst.validate();
    return inst;
}

DispatchLp build_lp(const DispatchInstance& inst) {
    inst.validate();
    DispatchLp out;
    LpProblem& lp = out.problem;
    const double epf = inst.scalars.epf;

    for (const auto& c : inst.clusters) {
        const auto& af = inst.avail.at(c.id);
        const auto& ou = inst.outage.at(c.id);
        switch (c.kind) {
            case ClusterKind::thermal: {
                const double k = part_load_rate(c);
                const auto& ch = inst.chp.at(c.id);
                auto& g = out.g[c.id];
                auto& on = out.on[c.id];
                auto& su = out.su[c.id];
                for (int t = 0; t < H; ++t)
                    g[t] = lp.add_variable(tag("G", c.id, t), ch[t], lp_inf, c.vc_fl - k);
                for (int t = 0; t < H; ++t)
                    on[t] = lp.add_variable(tag("ON", c.id, t), 0.0,
                                            std::max(0.0, c.cap * af[t] - ou[t]), k);
                for (int t = 0; t < H; ++t)
                    su[t] = lp.add_variable(tag("SU", c.id, t), 0.0, lp_inf, c.sc);
                break;
            }
            case ClusterKind::res: {
                auto& g = out.g[c.id];
                auto& curt = out.curt[c.id];
                for (int t = 0; t < H; ++t)
                    g[t] = lp.add_variable(tag("G", c.id, t), 0.0, lp_inf, c.vc_fl);
                for (int t = 0; t < H; ++t)
                    curt[t] = lp.add_variable(tag("CR", c.id, t), 0.0, lp_inf,
                                              inst.scalars.curtc);
                break;
            }
            case ClusterKind::stm: {
                const double fill = inst.boundary_level.at(c.id);
                auto& g = out.g[c.id];
                auto& pump = out.pump[c.id];
                auto& level = out.level[c.id];
                for (int t = 0; t < H; ++t)
                    g[t] = lp.add_variable(tag("G", c.id, t), 0.0, lp_inf, c.vc_fl);
                for (int t = 0; t < H; ++t)
                    pump[t] = lp.add_variable(tag("CM", c.id, t), 0.0, lp_inf, 0.0);
                for (int t = 0; t < H; ++t) {
                    double lo = (t == H - 1) ? fill : 0.0;
                    double hi = (t == H - 1) ? fill : c.cap * epf;
                    level[t] = lp.add_variable(tag("SL", c.id, t), lo, hi, 0.0);
                }
                break;
            }
            case ClusterKind::stl: {
                const auto& wv = inst.water_value.at(c.id);
                auto& g = out.g[c.id];
                auto& cl = out.load_shift[c.id];
                for (int t = 0; t < H; ++t)
                    g[t] = lp.add_variable(tag("G", c.id, t), 0.0, lp_inf,
                                           c.vc_fl + wv[t]);
                for (int t = 0; t < H; ++t)
                    cl[t] = lp.add_variable(tag("CL", c.id, t), 0.0, lp_inf, -wv[t]);
                break;
            }
        }
    }
    for (const auto& z : inst.zones) {
        auto& shed = out.shed[z];
        for (int t = 0; t < H; ++t)
            shed[t] = lp.add_variable(tag("SH", z, t), 0.0, lp_inf, inst.scalars.voll);
    }
    for (const auto& [key, cap] : inst.ntc) {
        auto& fl = out.flow[key];
        for (int t = 0; t < H; ++t)
            fl[t] = lp.add_variable(tag("F", key.first + "_" + key.second, t), 0.0,
                                    cap[t], 0.0);
    }
    for (std::size_t b = 0; b < inst.pcr.size(); ++b)
        for (const auto& c : inst.clusters)
            if (c.kind == ClusterKind::thermal && c.zone == inst.pcr[b].zone)
                out.pcr[{c.id, static_cast<int>(b)}] = lp.add_variable(
                    "PC_" + c.id + "_" + std::to_string(b), 0.0, lp_inf, 0.0);
    for (std::size_t b = 0; b < inst.scr.size(); ++b)
        for (const auto& c : inst.clusters)
            if (c.kind == ClusterKind::thermal && c.zone == inst.scr[b].zone) {
                out.scr_pos[{c.id, static_cast<int>(b)}] = lp.add_variable(
                    "SP_" + c.id + "_" + std::to_string(b), 0.0, lp_inf, 0.0);
                out.scr_neg[{c.id, static_cast<int>(b)}] = lp.add_variable(
                    "SN_" + c.id + "_" + std::to_string(b), 0.0, lp_inf, 0.0);
            }

    // Market clearing first: one equality per (zone, hour).
    for (const auto& z : inst.zones) {
        auto& rows = out.demand_row[z];
        const auto& d = inst.demand.at(z);
        for (int t = 0; t < H; ++t)
            rows[t] = lp.add_row(tag("dem", z, t), RowSense::eq, d[t]);
    }
    for (const auto& c : inst.clusters) {
        const auto& dr = out.demand_row.at(c.zone);
        const auto& g = out.g.at(c.id);
        for (int t = 0; t < H; ++t) lp.add_entry(dr[t], g[t], 1.0);
        if (c.kind == ClusterKind::stm) {
            const auto& pump = out.pump.at(c.id);
            for (int t = 0; t < H; ++t) lp.add_entry(dr[t], pump[t], -1.0);
        }
        if (c.kind == ClusterKind::stl) {
            const auto& cl = out.load_shift.at(c.id);
            for (int t = 0; t < H; ++t) lp.add_entry(dr[t], cl[t], -1.0);
        }
    }
    for (const auto& z : inst.zones) {
        const auto& dr = out.demand_row.at(z);
        const auto& shed = out.shed.at(z);
        for (int t = 0; t < H; ++t) lp.add_entry(dr[t], shed[t], 1.0);
    }
    for (const auto& [key, fl] : out.flow) {
        const auto& exp_row = out.demand_row.at(key.first);
        const auto& imp_row = out.demand_row.at(key.second);
        for (int t = 0; t < H; ++t) {
            lp.add_entry(imp_row[t], fl[t], 1.0);
            lp.add_entry(exp_row[t], fl[t], -1.0);
        }
    }

    for (const auto& c : inst.clusters) {
        switch (c.kind) {
            case ClusterKind::thermal: {
                const auto& g = out.g.at(c.id);
                const auto& on = out.on.at(c.id);
                const auto& su = out.su.at(c.id);
                // Reserve variables of this cluster, with block windows.
                struct Res {
                    std::size_t var;
                    int first, last;
                };
                std::vector<Res> up, down;
                for (std::size_t b = 0; b < inst.pcr.size(); ++b) {
                    auto it = out.pcr.find({c.id, static_cast<int>(b)});
                    if (it == out.pcr.end()) continue;
                    // Symmetric product: reserves headroom and floor alike.
                    up.push_back({it->second, inst.pcr[b].first, inst.pcr[b].last});
                    down.push_back({it->second, inst.pcr[b].first, inst.pcr[b].last});
                }
                for (std::size_t b = 0; b < inst.scr.size(); ++b) {
                    auto p = out.scr_pos.find({c.id, static_cast<int>(b)});
                    if (p != out.scr_pos.end())
                        up.push_back({p->second, inst.scr[b].first, inst.scr[b].last});
                    auto n = out.scr_neg.find({c.id, static_cast<int>(b)});
                    if (n != out.scr_neg.end())
                        down.push_back({n->second, inst.scr[b].first, inst.scr[b].last});
                }
                for (int t = 0; t < H; ++t) {
                    std::size_t r = lp.add_row(tag("gmax", c.id, t), RowSense::le, 0.0);
                    lp.add_entry(r, g[t], 1.0);
                    lp.add_entry(r, on[t], -1.0);
                    for (const auto& u : up)
                        if (t >= u.first && t < u.last) lp.add_entry(r, u.var, 1.0);
                }
                for (int t = 0; t < H; ++t) {
                    bool reserved = false;
                    for (const auto& d : down)
                        reserved = reserved || (t >= d.first && t < d.last);
                    if (c.g_min == 0.0 && !reserved) continue;  // floor is vacuous
                    std::size_t r = lp.add_row(tag("gmin", c.id, t), RowSense::le, 0.0);
                    lp.add_entry(r, g[t], -1.0);
                    if (c.g_min != 0.0) lp.add_entry(r, on[t], c.g_min);
                    for (const auto& d : down)
                        if (t >= d.first && t < d.last) lp.add_entry(r, d.var, 1.0);
                }
                for (int t = 0; t < H; ++t) {
                    double carried = 0.0;
                    if (t == 0) {
                        auto it = inst.initial_on.find(c.id);
                        if (it != inst.initial_on.end()) carried = it->second;
                    }
                    std::size_t r = lp.add_row(tag("su", c.id, t), RowSense::le, carried);
                    lp.add_entry(r, on[t], 1.0);
                    if (t > 0) lp.add_entry(r, on[t - 1], -1.0);
                    lp.add_entry(r, su[t], -1.0);
                }
                break;
            }
            case ClusterKind::res: {
                const auto& g = out.g.at(c.id);
                const auto& curt = out.curt.at(c.id);
                const auto& af = inst.avail.at(c.id);
                for (int t = 0; t < H; ++t) {
                    std::size_t r = lp.add_row(tag("res", c.id, t), RowSense::eq,
                                               c.cap * af[t]);
                    lp.add_entry(r, g[t], 1.0);
                    lp.add_entry(r, curt[t], 1.0);
                }
                break;
            }
            case ClusterKind::stm: {
                const auto& g = out.g.at(c.id);
                const auto& pump = out.pump.at(c.id);
                const auto& level = out.level.at(c.id);
                const double fill = inst.boundary_level.at(c.id);
                for (int t = 0; t < H; ++t) {
                    std::size_t r = lp.add_row(tag("lvl", c.id, t), RowSense::eq,
                                               t == 0 ? fill : 0.0);
                    lp.add_entry(r, level[t], 1.0);
                    if (t > 0) lp.add_entry(r, level[t - 1], -1.0);
                    lp.add_entry(r, g[t], 1.0);
                    lp.add_entry(r, pump[t], -c.eta);
                }
                for (int t = 0; t < H; ++t) {
                    std::size_t r = lp.add_row(tag("tp", c.id, t), RowSense::le, c.cap);
                    lp.add_entry(r, g[t], 1.0);
                    lp.add_entry(r, pump[t], pump_capacity_factor);
                }
                break;
            }
            case ClusterKind::stl: {
                const auto& g = out.g.at(c.id);
                const auto& cl = out.load_shift.at(c.id);
                for (int t = 0; t < H; ++t) {
                    std::size_t r = lp.add_row(tag("cap", c.id, t), RowSense::le, c.cap);
                    lp.add_entry(r, g[t], 1.0);
                    lp.add_entry(r, cl[t], 1.0);
                }
                break;
            }
        }
    }
    for (std::size_t b = 0; b < inst.pcr.size(); ++b) {
        std::size_t r = lp.add_row("pcr_" + inst.pcr[b].zone + "_" + std::to_string(b),
                                   RowSense::eq, inst.pcr[b].pos_mw);
        for (const auto& c : inst.clusters) {
            auto it = out.pcr.find({c.id, static_cast<int>(b)});
            if (it != out.pcr.end()) lp.add_entry(r, it->second, 1.0);
        }
    }
    for (std::size_t b = 0; b < inst.scr.size(); ++b) {
        std::size_t rp = lp.add_row("scp_" + inst.scr[b].zone + "_" + std::to_string(b),
                                    RowSense::eq, inst.scr[b].pos_mw);
        std::size_t rn = lp.add_row("scn_" + inst.scr[b].zone + "_" + std::to_string(b),
                                    RowSense::eq, inst.scr[b].neg_mw);
        for (const auto& c : inst.clusters) {
            auto p = out.scr_pos.find({c.id, static_cast<int>(b)});
            if (p != out.scr_pos.end()) lp.add_entry(rp, p->second, 1.0);
            auto n = out.scr_neg.find({c.id, static_cast<int>(b)});
            if (n != out.scr_neg.end()) lp.add_entry(rn, n->second, 1.0);
        }
    }
    lp.validate();
    return out;
}

namespace {

void copy_primal(const LpSolution& sol,
                 const std::map<std::string, std::array<std::size_t, H>>& idx,
                 std::map<std::string, std::array<double, H>>& dst) {
    for (const auto& [key, arr] : idx) {
        auto& d = dst[key];
        for (int t = 0; t < H; ++t) d[t] = sol.primal[arr[t]];
    }
}

}  // namespace

DispatchSolution solve_window(const DispatchInstance& inst) {
    DispatchLp lp = build_lp(inst);
    LpSolution sol = solve(lp.problem);
    if (sol.status != LpStatus::optimal)
        throw ModelError("dispatch LP " + to_string(sol.status) + " for target day " +
                         format_day(inst.target_day()) +
                         "; the input data is inconsistent");
    DispatchSolution out;
    out.objective = sol.objective;
    out.iterations = sol.iterations;
    copy_primal(sol, lp.g, out.g);
    copy_primal(sol, lp.on, out.on);
    copy_primal(sol, lp.su, out.su);
    copy_primal(sol, lp.curt, out.curt);
    copy_primal(sol, lp.pump, out.pump);
    copy_primal(sol, lp.level, out.level);
    copy_primal(sol, lp.load_shift, out.load_shift);
    copy_primal(sol, lp.shed, out.shed);
    for (const auto& [key, arr] : lp.flow) {
        auto& d = out.flow[key];
        for (int t = 0; t < H; ++t) d[t] = sol.primal[arr[t]];
    }
    for (const auto& [z, rows] : lp.demand_row) {
        auto& p = out.price[z];
        for (int t = 0; t < H; ++t) p[t] = sol.duals[rows[t]];
    }
    for (const auto& [key, v] : lp.pcr) out.pcr[key] = sol.primal[v];
    for (const auto& [key, v] : lp.scr_pos) out.scr_pos[key] = sol.primal[v];
    for (const auto& [key, v] : lp.scr_neg) out.scr_neg[key] = sol.primal[v];
    return out;
}

namespace {

/// Cost of the solution restricted to window hours [t0, t1), priced
/// with the objective's own coefficients.
double window_cost(const DispatchInstance& inst, const DispatchSolution& sol, int t0,
                   int t1) {
    double tc = 0.0;
    for (const auto& c : inst.clusters) {
        const auto& g = sol.g.at(c.id);
        for (int t = t0; t < t1; ++t) tc += g[t] * c.vc_fl;
        if (c.kind == ClusterKind::thermal) {
            const double k = part_load_rate(c);
            const auto& on = sol.on.at(c.id);
            const auto& su = sol.su.at(c.id);
            for (int t = t0; t < t1; ++t)
                tc += su[t] * c.sc + (on[t] - g[t]) * k;
        }
        if (c.kind == ClusterKind::stl) {
            const auto& wv = inst.water_value.at(c.id);
            const auto& cl = sol.load_shift.at(c.id);
            for (int t = t0; t < t1; ++t) tc += (g[t] - cl[t]) * wv[t];
        }
        if (c.kind == ClusterKind::res) {
            const auto& curt = sol.curt.at(c.id);
            for (int t = t0; t < t1; ++t) tc += curt[t] * inst.scalars.curtc;
        }
    }
    for (const auto& z : inst.zones) {
        const auto& shed = sol.shed.at(z);
        for (int t = t0; t < t1; ++t) tc += shed[t] * inst.scalars.voll;
    }
    return tc;
}

}  // namespace

RollingDispatch run_rolling(const DispatchDataset& data, Day first, Day last,
                            const DispatchConfig& cfg,
                            const std::map<std::string, TimeSeries>* demand_override) {
    if (first > last) throw InputError("empty dispatch day range");
    RollingDispatch out;
    const Hour h0 = day_start(first);
    const std::size_t n = static_cast<std::size_t>(last - first + 1) * hours_per_day;
    for (const auto& z : data.zones)
        out.prices.emplace(z, TimeSeries::empty(h0, n, Unit::eur_per_mwh));

    std::map<std::string, double> carried;
    for (Day d = first; d <= last; ++d) {
        DispatchInstance inst = make_instance(data, d, cfg, demand_override, carried);
        if (!cfg.export_dir.empty()) {
            DispatchLp lp = build_lp(inst);
            export_interchange(lp.problem,
                               cfg.export_dir + "/lp_" + format_day(d) + ".mps");
        }
        DispatchSolution sol = solve_window(inst);
        for (const auto& z : data.zones) {
            const auto& p = sol.price.at(z);
            TimeSeries& dst = out.prices.at(z);
            for (int t = 0; t < hours_per_day; ++t)
                dst.set(day_start(d) + t, p[24 + t]);
        }
        out.total_cost += window_cost(inst, sol, 24, 48);
        out.iterations += sol.iterations;
        ++out.windows;
        carried.clear();
        if (!cfg.cold_start) {
            // Hour 24 of this window is the hour before the next
            // window's first hour.
            for (const auto& [id, on] : sol.on) carried[id] = on[23];
        }
    }
    return out;
}

void write_prices(const std::map<std::string, TimeSeries>& prices,
                  const std::string& path) {
    if (prices.empty()) throw InputError("no price series to write");
    std::vector<std::vector<std::string>> rows;
    for (const auto& [zone, s] : prices) {
        for (Hour h = s.start(); h < s.end(); ++h) {
            if (s.missing_at(h))
                throw InternalError("price series for " + zone + " has a hole");
            rows.push_back({format_hour(h), zone, format_double(s.at(h))});
        }
    }
    // Chronological, zones alphabetical within the hour.
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a[0] < b[0]; });
    write_csv(path, {"timestamp", "zone", "price"}, rows);
}

}  // namespace gridcast
