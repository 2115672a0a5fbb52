#include "gridcast/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <vector>

#include "gridcast/csv.hpp"
#include "gridcast/errors.hpp"

namespace gridcast {
namespace {

constexpr double two_pi = 2.0 * 3.141592653589793238462643383279502884;

/// Same pinned Box-Muller scheme as the model simulator, so file
/// content is identical across platforms for a given seed.
class GaussStream {
public:
    explicit GaussStream(std::uint64_t seed) : gen_(seed) {}

    double next() {
        if (cached_) {
            cached_ = false;
            return cache_;
        }
        double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1p-53;
        double u2 = static_cast<double>(gen_() >> 11) * 0x1p-53;
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = two_pi * u2;
        cache_ = r * std::sin(a);
        cached_ = true;
        return r * std::cos(a);
    }

private:
    std::mt19937_64 gen_;
    bool cached_ = false;
    double cache_ = 0;
};

}  // namespace

SynthLoad synth_load(const SynthLoadConfig& cfg) {
    if (cfg.days < 1) throw InputError("synthetic load needs at least one day");
    if (cfg.base_mw <= 0) throw InputError("base load must be positive");
    if (cfg.load_noise_sd < 0 || cfg.bias_amplitude < 0)
        throw InputError("noise and bias amplitudes must be non-negative");
    const std::size_t n = static_cast<std::size_t>(cfg.days) * hours_per_day;
    const Hour h0 = day_start(cfg.first_day);

    SimulatedSarma sim = simulate_sarma(cfg.noise, h0, n, cfg.seed + 1, 200);
    GaussStream load_noise(cfg.seed);

    std::vector<double> actual(n), tso(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Hour h = h0 + static_cast<Hour>(i);
        const int hod = hour_of_day(h);
        const double shape =
            cfg.base_mw + cfg.daily_swing * std::sin(two_pi * (hod - 9) / 24.0) -
            (is_weekend(day_of(h)) ? cfg.weekend_drop : 0.0);
        actual[i] = shape + cfg.load_noise_sd * load_noise.next();
        const double bias =
            cfg.bias_amplitude * (std::sin(two_pi * hour_of_week(h) / 168.0) +
                                  0.5 * std::sin(two_pi * (hod - 1) / 24.0));
        // error = actual - tso, so the forecast under-predicts where
        // the bias pattern is positive.
        tso[i] = actual[i] - bias - sim.rc.at(h);
    }
    return {TimeSeries(h0, std::move(actual)), TimeSeries(h0, std::move(tso))};
}

DispatchDataset synth_dispatch(const SynthDispatchConfig& cfg, const TimeSeries& demand) {
    if (cfg.days < 1) throw InputError("synthetic dispatch needs at least one day");
    if (!(cfg.base_cap_quantile > 0 && cfg.base_cap_quantile < 1))
        throw InputError("base capacity quantile outside (0, 1)");
    if (!(cfg.psp_longterm_share >= 0 && cfg.psp_longterm_share <= 1))
        throw InputError("long-term storage share outside [0, 1]");
    const Hour h0 = day_start(cfg.first_day);
    const Hour h1 = h0 + static_cast<Hour>(cfg.days) * hours_per_day;
    if (!demand.covers_range(h0, h1))
        throw InputError("demand series does not cover the requested dispatch days");

    std::vector<double> sample;
    sample.reserve(static_cast<std::size_t>(h1 - h0));
    double mean = 0;
    for (Hour h = h0; h < h1; ++h) {
        if (demand.missing_at(h))
            throw InputError("demand is missing at " + format_hour(h));
        sample.push_back(demand.at(h));
        mean += demand.at(h);
    }
    mean /= static_cast<double>(sample.size());
    std::sort(sample.begin(), sample.end());
    auto quant = [&](double p) {
        const double x = (static_cast<double>(sample.size()) - 1) * p;
        const auto lo = static_cast<std::size_t>(x);
        if (lo + 1 >= sample.size()) return sample.back();
        return sample[lo] + (x - lo) * (sample[lo + 1] - sample[lo]);
    };
    const double q_base = quant(cfg.base_cap_quantile);
    const double q_mid = std::max(quant(0.85), q_base * 1.02);
    const double top = std::max(sample.back() * 1.08, q_mid * 1.05);

    DispatchDataset data;
    data.start = h0;
    data.end = h1;
    data.zones = {cfg.zone};
    data.scalars = {3000.0, 20.0, 9.0, 0.75};
    data.demand.emplace(cfg.zone, demand.slice(h0, h1));

    auto thermal = [&](const std::string& id, double cap, double vc) {
        ClusterSpec c;
        c.id = id;
        c.zone = cfg.zone;
        c.cap = cap;
        c.g_min = 0;
        c.vc_fl = vc;
        c.vc_ml = vc + 5;
        c.sc = 50;
        c.kind = ClusterKind::thermal;
        data.clusters.push_back(c);
    };
    thermal("base", q_base, 10);
    thermal("mid", q_mid - q_base, 30);
    thermal("peak", top - q_mid, 60);

    if (cfg.with_res) {
        ClusterSpec c;
        c.id = "wind";
        c.zone = cfg.zone;
        c.cap = 0.25 * mean;
        c.kind = ClusterKind::res;
        data.clusters.push_back(c);
        std::vector<double> af(static_cast<std::size_t>(h1 - h0));
        for (Hour h = h0; h < h1; ++h) {
            // Incommensurate periods give a varied but reproducible
            // availability profile.
            double v = 0.4 + 0.3 * std::sin(two_pi * static_cast<double>(h) / 36.5) +
                       0.15 * std::sin(two_pi * static_cast<double>(h) / 171.0);
            af[static_cast<std::size_t>(h - h0)] = std::clamp(v, 0.0, 1.0);
        }
        data.af.emplace("wind", TimeSeries(h0, std::move(af), Unit::fraction));
    }
    if (cfg.with_storage) {
        const double psp_cap = 0.15 * mean;
        ClusterSpec stm;
        stm.id = "psp_mid";
        stm.zone = cfg.zone;
        stm.cap = (1.0 - cfg.psp_longterm_share) * psp_cap;
        stm.eta = 0.75;
        stm.kind = ClusterKind::stm;
        if (stm.cap > 0) data.clusters.push_back(stm);
        ClusterSpec stl;
        stl.id = "psp_long";
        stl.zone = cfg.zone;
        stl.cap = cfg.psp_longterm_share * psp_cap;
        stl.kind = ClusterKind::stl;
        if (stl.cap > 0) {
            data.clusters.push_back(stl);
            std::vector<double> wv(static_cast<std::size_t>(h1 - h0));
            for (Hour h = h0; h < h1; ++h)
                wv[static_cast<std::size_t>(h - h0)] =
                    28.0 + 6.0 * std::sin(two_pi * hour_of_week(h) / 168.0);
            data.water_value.emplace("psp_long",
                                     TimeSeries(h0, std::move(wv), Unit::eur_per_mwh));
        }
    }
    return data;
}

void write_load(const std::string& path, const TimeSeries& actual,
                const TimeSeries& tso) {
    if (actual.start() != tso.start() || actual.end() != tso.end())
        throw InputError("actual and forecast series are misaligned");
    std::vector<std::vector<std::string>> rows;
    for (Hour h = actual.start(); h < actual.end(); ++h) {
        rows.push_back({format_hour(h),
                        actual.missing_at(h) ? "" : format_double(actual.at(h)),
                        tso.missing_at(h) ? "" : format_double(tso.at(h))});
    }
    write_csv(path, {"timestamp", "actual", "tso_forecast"}, rows);
}

void write_dispatch_dataset(const std::string& dir, const DispatchDataset& data) {
    std::filesystem::create_directories(dir);
    const std::string sep = "/";

    {
        std::vector<std::vector<std::string>> rows;
        for (const auto& c : data.clusters)
            rows.push_back({c.id, c.zone, format_double(c.cap), format_double(c.g_min),
                            format_double(c.vc_fl), format_double(c.vc_ml),
                            format_double(c.sc),
                            c.kind == ClusterKind::stm ? format_double(c.eta) : "",
                            to_string(c.kind)});
        write_csv(dir + sep + "clusters.csv",
                  {"id", "zone", "cap", "g_min", "vc_fl", "vc_ml", "sc", "eta", "kind"},
                  rows);
    }
    {
        std::vector<std::string> cols{"timestamp"};
        for (const auto& z : data.zones) cols.push_back(z);
        std::vector<std::vector<std::string>> rows;
        for (Hour h = data.start; h < data.end; ++h) {
            std::vector<std::string> row{format_hour(h)};
            for (const auto& z : data.zones) {
                const TimeSeries& s = data.demand.at(z);
                row.push_back(s.missing_at(h) ? "" : format_double(s.at(h)));
            }
            rows.push_back(std::move(row));
        }
        write_csv(dir + sep + "demand.csv", cols, rows);
    }
    {
        std::vector<std::vector<std::string>> rows{
            {"voll", format_double(data.scalars.voll)},
            {"curtc", format_double(data.scalars.curtc)},
            {"epf", format_double(data.scalars.epf)},
            {"eta_stm", format_double(data.scalars.eta_stm)}};
        write_csv(dir + sep + "scalars.csv", {"key", "value"}, rows);
    }
    if (!data.af.empty() || !data.outage.empty()) {
        // Merge af and outage per cluster; absent halves get defaults.
        std::vector<std::vector<std::string>> rows;
        std::vector<std::string> ids;
        for (const auto& [id, s] : data.af) ids.push_back(id);
        for (const auto& [id, s] : data.outage)
            if (data.af.find(id) == data.af.end()) ids.push_back(id);
        std::sort(ids.begin(), ids.end());
        for (const auto& id : ids)
            for (Hour h = data.start; h < data.end; ++h)
                rows.push_back({id, format_hour(h), format_double(data.af_at(id, h)),
                                format_double(data.outage_at(id, h))});
        write_csv(dir + sep + "availability.csv", {"cluster", "hour", "af", "out"}, rows);
    }
    if (!data.chp.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& [id, s] : data.chp)
            for (Hour h = data.start; h < data.end; ++h)
                rows.push_back({id, format_hour(h), format_double(s.at(h))});
        write_csv(dir + sep + "chp.csv", {"cluster", "hour", "mwh"}, rows);
    }
    if (!data.water_value.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& [id, s] : data.water_value)
            for (Hour h = data.start; h < data.end; ++h)
                rows.push_back({id, format_hour(h), format_double(s.at(h))});
        write_csv(dir + sep + "water_value.csv", {"cluster", "hour", "eur_per_mwh"},
                  rows);
    }
    if (!data.ntc.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& [key, s] : data.ntc)
            for (Hour h = data.start; h < data.end; ++h)
                rows.push_back(
                    {key.first, key.second, format_hour(h), format_double(s.at(h))});
        write_csv(dir + sep + "ntc.csv", {"from", "to", "hour", "mw"}, rows);
    }
    if (!data.pcr_blocks.empty() || !data.scr_blocks.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& b : data.pcr_blocks)
            rows.push_back({"pcr", b.zone, format_hour(b.start), format_hour(b.end),
                            format_double(b.pos_mw), format_double(b.neg_mw)});
        for (const auto& b : data.scr_blocks)
            rows.push_back({"scr", b.zone, format_hour(b.start), format_hour(b.end),
                            format_double(b.pos_mw), format_double(b.neg_mw)});
        write_csv(dir + sep + "control_power.csv",
                  {"kind", "zone", "start", "end", "pos_mw", "neg_mw"}, rows);
    }
}

}  // namespace gridcast
