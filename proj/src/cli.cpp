#include "gridcast/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "gridcast/csv.hpp"
#include "gridcast/data_io.hpp"
#include "gridcast/dispatch.hpp"
#include "gridcast/errors.hpp"
#include "gridcast/forecast_engine.hpp"
#include "gridcast/metrics.hpp"
#include "gridcast/synth.hpp"
#include "gridcast/timebase.hpp"

namespace gridcast {
namespace {

std::uint64_t fnv64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

/// Reproducibility record: the exact configuration a command ran with,
/// hashed so runs can be compared at a glance.  Deliberately carries no
/// timestamps; identical config must produce an identical manifest.
class Manifest {
public:
    explicit Manifest(std::string command) : command_(std::move(command)) {}

    void add(const std::string& key, const std::string& value) {
        entries_.emplace_back(key, value);
    }
    void add(const std::string& key, double value) { add(key, format_double(value)); }
    void add(const std::string& key, long long value) { add(key, std::to_string(value)); }
    void add(const std::string& key, bool value) { add(key, std::string(value ? "1" : "0")); }

    void write(const std::string& dir) const {
        auto sorted = entries_;
        std::sort(sorted.begin(), sorted.end());
        std::string body = "command=" + command_ + "\n";
        for (const auto& [k, v] : sorted) body += k + "=" + v + "\n";
        char tag[32];
        std::snprintf(tag, sizeof tag, "%016llx",
                      static_cast<unsigned long long>(fnv64(body)));
        const std::string path = dir + "/manifest_" + command_ + ".txt";
        std::ofstream os(path);
        if (!os) throw InputError("cannot write " + path);
        os << body << "config_hash=" << tag << "\n";
    }

private:
    std::string command_;
    std::vector<std::pair<std::string, std::string>> entries_;
};

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw InputError("cannot create directory " + dir + ": " + ec.message());
}

/// First day whose trailing window fits entirely after `from`.
Day first_day_with_history(Hour from, Hour window) {
    Day d = day_of(from + window);
    if (day_start(d) < from + window) ++d;
    return d + 1;
}

Day parse_day_arg(const std::string& text, const char* flag) {
    try {
        return parse_day(text);
    } catch (const InputError& e) {
        throw InputError(std::string(flag) + ": " + e.what());
    }
}

void print_metric_table(const ErrorReport& ref, const ErrorReport& alt,
                        const Improvement& gain, const char* ref_name,
                        const char* alt_name) {
    std::printf("%-6s %18s %18s %12s\n", "metric", ref_name, alt_name, "reduction");
    std::printf("%-6s %18.2f %18.2f %11.2f%%\n", "MSE", ref.mse, alt.mse, gain.mse);
    std::printf("%-6s %18.2f %18.2f %11.2f%%\n", "RMSE", ref.rmse, alt.rmse, gain.rmse);
    std::printf("%-6s %18.2f %18.2f %11.2f%%\n", "MAE", ref.mae, alt.mae, gain.mae);
}

// ---------------------------------------------------------------- synth

struct SynthOpts {
    std::string out = "gridcast_out";
    std::uint64_t seed = 42;
    std::string first_day = "2015-01-01";
    int days = 730;
    double base_mw = 50000, daily_swing = 6000, weekend_drop = 4000;
    double load_noise_sd = 300, bias_amplitude = 1000, noise_sd = 200;
    double phi1 = 0.8, phi24 = 0.5, omega1 = -0.3, omega24 = 0.2;
    int dispatch_days = 0;  // 0: same as days
    std::string zone = "Z1";
    double base_cap_quantile = 0.35, psp_share = 0.3;
    bool with_res = false, with_storage = false;
};

int cmd_synth(const SynthOpts& o) {
    SynthLoadConfig cfg;
    cfg.seed = o.seed;
    cfg.first_day = parse_day_arg(o.first_day, "--first-day");
    cfg.days = o.days;
    cfg.base_mw = o.base_mw;
    cfg.daily_swing = o.daily_swing;
    cfg.weekend_drop = o.weekend_drop;
    cfg.load_noise_sd = o.load_noise_sd;
    cfg.bias_amplitude = o.bias_amplitude;
    cfg.noise = {0.0, o.phi1, o.phi24, o.omega1, o.omega24, o.noise_sd * o.noise_sd};
    SynthLoad data = synth_load(cfg);

    ensure_dir(o.out);
    write_load(o.out + "/load.csv", data.actual, data.tso);

    SynthDispatchConfig dc;
    dc.first_day = cfg.first_day;
    dc.days = o.dispatch_days > 0 ? o.dispatch_days : o.days;
    dc.zone = o.zone;
    dc.base_cap_quantile = o.base_cap_quantile;
    dc.with_res = o.with_res;
    dc.with_storage = o.with_storage;
    dc.psp_longterm_share = o.psp_share;
    // The dataset's demand is the forecast a system operator would
    // have: dispatch runs on forecasts, never on realized load.
    DispatchDataset ds = synth_dispatch(dc, data.tso);
    write_dispatch_dataset(o.out + "/dispatch", ds);

    Manifest m("synth");
    m.add("seed", static_cast<long long>(o.seed));
    m.add("first_day", o.first_day);
    m.add("days", static_cast<long long>(o.days));
    m.add("base_mw", o.base_mw);
    m.add("daily_swing", o.daily_swing);
    m.add("weekend_drop", o.weekend_drop);
    m.add("load_noise_sd", o.load_noise_sd);
    m.add("bias_amplitude", o.bias_amplitude);
    m.add("noise_sd", o.noise_sd);
    m.add("noise_phi1", o.phi1);
    m.add("noise_phi24", o.phi24);
    m.add("noise_omega1", o.omega1);
    m.add("noise_omega24", o.omega24);
    m.add("dispatch_days", static_cast<long long>(dc.days));
    m.add("zone", o.zone);
    m.add("base_cap_quantile", o.base_cap_quantile);
    m.add("with_res", o.with_res);
    m.add("with_storage", o.with_storage);
    m.add("psp_longterm_share", o.psp_share);
    m.write(o.out);

    std::printf("wrote %s/load.csv (%d days) and %s/dispatch (%zu clusters, %d days)\n",
                o.out.c_str(), o.days, o.out.c_str(), ds.clusters.size(), dc.days);
    return 0;
}

// --------------------------------------------------------- improve-load

struct ImproveOpts {
    std::string out = "gridcast_out";
    std::string load_file;
    std::string actual_col = "actual", tso_col = "tso_forecast";
    std::string first_day, last_day;
    long long window_hours = 8760;
    int decision_hour = 12;
    int jobs = 1;
    bool no_fill = false;
};

int cmd_improve(const ImproveOpts& o) {
    TimeSeries actual = read_series(o.load_file, o.actual_col);
    TimeSeries tso = read_series(o.load_file, o.tso_col);
    std::size_t filled_actual = 0, filled_tso = 0;
    if (!o.no_fill) {
        FillReport fa = fill_gaps(actual);
        filled_actual = fa.filled.size();
        actual = std::move(fa.series);
        FillReport ft = fill_gaps(tso);
        filled_tso = ft.filled.size();
        tso = std::move(ft.series);
    }

    RollingConfig cfg;
    cfg.window_len = o.window_hours;
    cfg.decision_hour = o.decision_hour;
    cfg.validate();

    const Hour s = std::max(actual.start(), tso.start());
    const Hour e = std::min(actual.end(), tso.end());
    Day first = o.first_day.empty() ? first_day_with_history(s, cfg.window_len)
                                    : parse_day_arg(o.first_day, "--first-day");
    Day last = o.last_day.empty() ? day_of(e - hours_per_day)
                                  : parse_day_arg(o.last_day, "--last-day");
    if (first > last)
        throw InputError("no runnable target days: history of " +
                         std::to_string(o.window_hours) +
                         " hours leaves nothing to forecast in the input range");

    ImprovedForecast imp = run_backtest(actual, tso, first, last, cfg, o.jobs);

    ensure_dir(o.out);
    write_improved_load(o.out + "/improved_load.csv", imp, tso);
    write_fit_log(o.out + "/fit_log.csv", imp.fit_log);

    const Hour eval0 = day_start(first), eval1 = day_start(last) + hours_per_day;
    TimeSeries act_eval = actual.slice(eval0, eval1);
    ErrorReport ref = error_report(tso.slice(eval0, eval1), act_eval);
    ErrorReport alt = error_report(imp.lhat_star, act_eval);
    Improvement gain = improvement(ref, alt);

    std::size_t fallbacks = 0;
    for (const auto& f : imp.fit_log) fallbacks += f.fallback ? 1 : 0;

    Manifest m("improve-load");
    m.add("load_file", o.load_file);
    m.add("actual_col", o.actual_col);
    m.add("tso_col", o.tso_col);
    m.add("first_day", format_day(first));
    m.add("last_day", format_day(last));
    m.add("window_hours", o.window_hours);
    m.add("decision_hour", static_cast<long long>(o.decision_hour));
    m.add("jobs", static_cast<long long>(o.jobs));
    m.add("fill_gaps", !o.no_fill);
    m.write(o.out);

    std::printf("backtest %s .. %s (%lld days), window %lld h\n",
                format_day(first).c_str(), format_day(last).c_str(),
                static_cast<long long>(last - first + 1),
                static_cast<long long>(o.window_hours));
    if (filled_actual + filled_tso > 0)
        std::printf("gap-filled %zu actual and %zu forecast hours\n", filled_actual,
                    filled_tso);
    print_metric_table(ref, alt, gain, "tso", "improved");
    std::printf("fallback days: %zu of %zu\n", fallbacks, imp.fit_log.size());
    return 0;
}

// --------------------------------------------------------- run-dispatch

struct DispatchOpts {
    std::string out = "gridcast_out";
    std::string data_dir;
    std::string source;
    std::string improved_file, improved_col = "lhat_star";
    std::string zone;
    std::string first_day, last_day;
    double boundary_share = 0.3;
    bool boundary_power_units = false, cold_start = false, export_lp = false;
};

int cmd_dispatch(const DispatchOpts& o) {
    if (o.source != "tso" && o.source != "improved")
        throw InputError("--source must be tso or improved");
    DispatchDataset data = read_dispatch_dataset(o.data_dir);

    DispatchConfig cfg;
    cfg.boundary_share = o.boundary_share;
    cfg.boundary_in_power_units = o.boundary_power_units;
    cfg.cold_start = o.cold_start;

    std::map<std::string, TimeSeries> override_demand;
    const std::map<std::string, TimeSeries>* ov = nullptr;
    Hour s = data.start, e = data.end;
    if (o.source == "improved") {
        if (o.improved_file.empty())
            throw InputError("--improved-file is required with --source improved");
        std::string zone = o.zone;
        if (zone.empty()) {
            if (data.zones.size() != 1)
                throw InputError("--zone is required for a multi-zone dataset");
            zone = data.zones.front();
        }
        TimeSeries imp = read_series(o.improved_file, o.improved_col);
        s = std::max(s, imp.start());
        e = std::min(e, imp.end());
        override_demand.emplace(zone, std::move(imp));
        ov = &override_demand;
    }

    // Each target day needs the day before and after inside [s, e).
    Day first, last;
    if (o.first_day.empty()) {
        first = day_of(s);
        if (day_start(first) < s) ++first;
        ++first;
    } else {
        first = parse_day_arg(o.first_day, "--first-day");
    }
    last = o.last_day.empty() ? day_of(e - 2 * hours_per_day)
                              : parse_day_arg(o.last_day, "--last-day");
    if (first > last)
        throw InputError("no runnable dispatch days in the covered range");
    if (o.export_lp) {
        cfg.export_dir = o.out + "/lp_" + o.source;
        ensure_dir(cfg.export_dir);
    }

    ensure_dir(o.out);
    RollingDispatch run = run_rolling(data, first, last, cfg, ov);
    const std::string price_path = o.out + "/prices_" + o.source + ".csv";
    write_prices(run.prices, price_path);

    Manifest m("run-dispatch-" + o.source);
    m.add("data_dir", o.data_dir);
    m.add("source", o.source);
    m.add("improved_file", o.improved_file);
    m.add("improved_col", o.improved_col);
    m.add("zone", o.zone);
    m.add("first_day", format_day(first));
    m.add("last_day", format_day(last));
    m.add("boundary_share", o.boundary_share);
    m.add("boundary_in_power_units", o.boundary_power_units);
    m.add("cold_start", o.cold_start);
    m.add("export_lp", o.export_lp);
    m.write(o.out);

    std::printf("dispatched %s .. %s: %d windows, %ld simplex iterations\n",
                format_day(first).c_str(), format_day(last).c_str(), run.windows,
                run.iterations);
    std::printf("target-day system cost %.2f\n", run.total_cost);
    for (const auto& [zone, p] : run.prices) {
        double mean = 0;
        for (Hour h = p.start(); h < p.end(); ++h) mean += p.at(h);
        mean /= static_cast<double>(p.size());
        std::printf("zone %s: mean price %.2f over %zu hours\n", zone.c_str(), mean,
                    p.size());
    }
    std::printf("wrote %s\n", price_path.c_str());
    return 0;
}

// ------------------------------------------------------------- evaluate

struct EvalOpts {
    std::string out = "gridcast_out";
    std::string format = "series";
    std::string zone;
    std::string actual_file, actual_col = "actual";
    std::string ref_file, ref_col = "tso_forecast";
    std::string alt_file, alt_col = "lhat_star";
    std::string segments = "hour,weekday,peak-offpeak,price-quantile";
    std::string first_day, last_day;
    int lb_lags = 168;
    double alpha = 0.05;
    int peak_first = 9, peak_last = 20;
};

int cmd_evaluate(const EvalOpts& o) {
    if (o.format != "series" && o.format != "prices")
        throw InputError("--format must be series or prices");
    auto load = [&](const std::string& file, const std::string& col) {
        if (o.format == "prices") {
            if (o.zone.empty()) throw InputError("--zone is required with --format prices");
            return read_price_series(file, o.zone);
        }
        return read_series(file, col);
    };
    TimeSeries actual = load(o.actual_file, o.actual_col);
    TimeSeries ref = load(o.ref_file, o.ref_col);
    TimeSeries alt = load(o.alt_file, o.alt_col);

    Hour s = std::max({actual.start(), ref.start(), alt.start()});
    Hour e = std::min({actual.end(), ref.end(), alt.end()});
    if (!o.first_day.empty())
        s = std::max(s, day_start(parse_day_arg(o.first_day, "--first-day")));
    if (!o.last_day.empty())
        e = std::min(e, day_start(parse_day_arg(o.last_day, "--last-day") + 1));
    if (s >= e) throw InputError("evaluation ranges do not overlap");
    actual = actual.slice(s, e);
    ref = ref.slice(s, e);
    alt = alt.slice(s, e);

    ErrorReport rref = error_report(ref, actual);
    ErrorReport ralt = error_report(alt, actual);
    Improvement gain = improvement(rref, ralt);

    ensure_dir(o.out);
    write_error_report(o.out + "/report_ref.csv", rref);
    write_error_report(o.out + "/report_alt.csv", ralt);
    {
        std::vector<std::vector<std::string>> rows{
            {"mse", format_double(rref.mse), format_double(ralt.mse),
             format_double(gain.mse)},
            {"rmse", format_double(rref.rmse), format_double(ralt.rmse),
             format_double(gain.rmse)},
            {"mae", format_double(rref.mae), format_double(ralt.mae),
             format_double(gain.mae)}};
        write_csv(o.out + "/improvement.csv", {"metric", "ref", "alt", "reduction_pct"},
                  rows);
    }

    std::vector<Segmentation> schemes;
    std::string token;
    std::stringstream ss(o.segments);
    while (std::getline(ss, token, ','))
        if (!token.empty()) schemes.push_back(parse_segmentation(token));
    SegmentOptions sopt;
    sopt.peak_first = o.peak_first;
    sopt.peak_last = o.peak_last;
    for (Segmentation scheme : schemes) {
        SegmentedReport rep = segment_report(ref, alt, actual, scheme, sopt);
        write_segment_report(o.out + "/segments_" + to_string(scheme) + ".csv", rep);
    }

    print_metric_table(rref, ralt, gain, "reference", "alternative");

    TimeSeries err_ref = series_difference(actual, ref);
    TimeSeries err_alt = series_difference(actual, alt);
    if (actual.size() > static_cast<std::size_t>(o.lb_lags)) {
        LjungBoxResult lb_ref = ljung_box(err_ref, o.lb_lags, o.alpha);
        LjungBoxResult lb_alt = ljung_box(err_alt, o.lb_lags, o.alpha);
        std::printf("LB(%d) reference: Q=%.1f p=%.4g reject=%d\n", o.lb_lags,
                    lb_ref.statistic, lb_ref.p_value, lb_ref.reject ? 1 : 0);
        std::printf("LB(%d) alternative: Q=%.1f p=%.4g reject=%d\n", o.lb_lags,
                    lb_alt.statistic, lb_alt.p_value, lb_alt.reject ? 1 : 0);
    } else {
        std::printf("LB test skipped: %zu observations for %d lags\n", actual.size(),
                    o.lb_lags);
    }

    Manifest m("evaluate");
    m.add("format", o.format);
    m.add("zone", o.zone);
    m.add("actual_file", o.actual_file);
    m.add("actual_col", o.actual_col);
    m.add("ref_file", o.ref_file);
    m.add("ref_col", o.ref_col);
    m.add("alt_file", o.alt_file);
    m.add("alt_col", o.alt_col);
    m.add("segments", o.segments);
    m.add("first_hour", format_hour(s));
    m.add("last_hour", format_hour(e - 1));
    m.add("lb_lags", static_cast<long long>(o.lb_lags));
    m.add("alpha", o.alpha);
    m.add("peak_first", static_cast<long long>(o.peak_first));
    m.add("peak_last", static_cast<long long>(o.peak_last));
    m.write(o.out);
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"day-ahead load forecast improvement and dispatch price estimation"};
    app.require_subcommand(1);

    auto add_common = [](CLI::App* sub, std::string& out) {
        sub->add_option("-o,--output-dir", out, "run directory for outputs")
            ->envname("GRIDCAST_OUTPUT_DIR")
            ->capture_default_str();
        sub->set_config("--config", "", "flat key=value configuration file");
        sub->allow_config_extras(CLI::config_extras_mode::error);
    };

    SynthOpts so;
    CLI::App* synth = app.add_subcommand("synth", "generate deterministic test data");
    add_common(synth, so.out);
    synth->add_option("--seed", so.seed, "RNG seed")->capture_default_str();
    synth->add_option("--first-day", so.first_day, "first day, YYYY-MM-DD")
        ->capture_default_str();
    synth->add_option("--days", so.days, "number of days")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth->add_option("--base-mw", so.base_mw, "mean load level")->capture_default_str();
    synth->add_option("--daily-swing", so.daily_swing, "day-shape amplitude, MW")
        ->capture_default_str();
    synth->add_option("--weekend-drop", so.weekend_drop, "weekend load reduction, MW")
        ->capture_default_str();
    synth->add_option("--load-noise-sd", so.load_noise_sd, "white noise on actual load")
        ->capture_default_str();
    synth->add_option("--bias-amplitude", so.bias_amplitude,
                      "hour-of-week forecast bias amplitude, MW")
        ->capture_default_str();
    synth->add_option("--noise-sd", so.noise_sd,
                      "innovation std dev of the correlated error part")
        ->capture_default_str();
    synth->add_option("--noise-phi1", so.phi1, "error model AR(1)")->capture_default_str();
    synth->add_option("--noise-phi24", so.phi24, "error model seasonal AR")
        ->capture_default_str();
    synth->add_option("--noise-omega1", so.omega1, "error model MA(1)")
        ->capture_default_str();
    synth->add_option("--noise-omega24", so.omega24, "error model seasonal MA")
        ->capture_default_str();
    synth->add_option("--dispatch-days", so.dispatch_days,
                      "days in the dispatch dataset (default: same as --days)")
        ->capture_default_str();
    synth->add_option("--zone", so.zone, "zone name")->capture_default_str();
    synth->add_option("--base-cap-quantile", so.base_cap_quantile,
                      "demand quantile sizing the cheapest cluster")
        ->capture_default_str();
    synth->add_flag("--with-res", so.with_res, "add a renewable cluster");
    synth->add_flag("--with-storage", so.with_storage, "add a pump-storage pair");
    synth->add_option("--psp-longterm-share", so.psp_share,
                      "share of pump storage in the long-term formulation")
        ->capture_default_str();

    ImproveOpts io;
    CLI::App* improve =
        app.add_subcommand("improve-load", "run the rolling forecast correction");
    add_common(improve, io.out);
    improve->add_option("--load", io.load_file, "CSV with actual and forecast columns")
        ->required();
    improve->add_option("--actual-col", io.actual_col, "actual load column")
        ->capture_default_str();
    improve->add_option("--tso-col", io.tso_col, "forecast column")->capture_default_str();
    improve->add_option("--first-day", io.first_day,
                        "first target day (default: earliest with full history)");
    improve->add_option("--last-day", io.last_day, "last target day (default: latest)");
    improve->add_option("--window-hours", io.window_hours,
                        "trailing estimation window, multiple of 24")
        ->capture_default_str();
    improve->add_option("--decision-hour", io.decision_hour,
                        "decision clock hour-of-day, 1..24")
        ->capture_default_str();
    improve->add_option("--jobs", io.jobs, "parallel day fits")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    improve->add_flag("--no-fill", io.no_fill,
                      "fail on gaps instead of week-neighbour filling");

    DispatchOpts po;
    CLI::App* dispatch =
        app.add_subcommand("run-dispatch", "solve the rolling dispatch and write prices");
    add_common(dispatch, po.out);
    dispatch->add_option("--data", po.data_dir, "dispatch dataset directory")->required();
    dispatch->add_option("--source", po.source, "demand source: tso or improved")
        ->required();
    dispatch->add_option("--improved-file", po.improved_file,
                         "improved forecast CSV (source=improved)");
    dispatch->add_option("--improved-col", po.improved_col, "column to read from it")
        ->capture_default_str();
    dispatch->add_option("--zone", po.zone, "zone the improved series replaces");
    dispatch->add_option("--first-day", po.first_day, "first target day");
    dispatch->add_option("--last-day", po.last_day, "last target day");
    dispatch->add_option("--boundary-share", po.boundary_share,
                         "reservoir fill share at window edges")
        ->capture_default_str();
    dispatch->add_flag("--boundary-power-units", po.boundary_power_units,
                       "boundary fill as share of cap instead of cap*epf");
    dispatch->add_flag("--cold-start", po.cold_start,
                       "no commitment hand-off between windows");
    dispatch->add_flag("--export-lp", po.export_lp, "dump per-day LP interchange files");

    EvalOpts eo;
    CLI::App* evaluate =
        app.add_subcommand("evaluate", "error reports, improvements, segmentations");
    add_common(evaluate, eo.out);
    evaluate->add_option("--format", eo.format, "series (wide CSV) or prices (long CSV)")
        ->capture_default_str();
    evaluate->add_option("--zone", eo.zone, "zone to read in prices format");
    evaluate->add_option("--actual-file", eo.actual_file, "realized values")->required();
    evaluate->add_option("--actual-col", eo.actual_col, "column in --actual-file")
        ->capture_default_str();
    evaluate->add_option("--ref-file", eo.ref_file, "reference prediction")->required();
    evaluate->add_option("--ref-col", eo.ref_col, "column in --ref-file")
        ->capture_default_str();
    evaluate->add_option("--alt-file", eo.alt_file, "alternative prediction")->required();
    evaluate->add_option("--alt-col", eo.alt_col, "column in --alt-file")
        ->capture_default_str();
    evaluate->add_option("--segments", eo.segments, "comma list of segmentation schemes")
        ->capture_default_str();
    evaluate->add_option("--first-day", eo.first_day, "restrict evaluation start");
    evaluate->add_option("--last-day", eo.last_day, "restrict evaluation end");
    evaluate->add_option("--lb-lags", eo.lb_lags, "autocorrelation test lag count")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    evaluate->add_option("--alpha", eo.alpha, "significance level")->capture_default_str();
    evaluate->add_option("--peak-first", eo.peak_first, "first peak hour-of-day")
        ->capture_default_str();
    evaluate->add_option("--peak-last", eo.peak_last, "last peak hour-of-day")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    // CLI11 only reads config files attached to the top-level app, so a
    // per-subcommand --config needs an explicit hand-off.  Values given
    // on the command line keep precedence: the reader skips any option
    // that already holds a result.
    auto apply_config = [](CLI::App* sub) {
        CLI::Option* copt = sub->get_config_ptr();
        if (copt == nullptr || copt->count() == 0) return;
        const std::string path = copt->as<std::string>();
        std::ifstream in(path);
        if (!in) throw InputError("cannot open " + path);
        try {
            sub->parse_from_stream(in);
        } catch (const CLI::Error& e) {
            throw InputError("--config " + path + ": " + e.what());
        }
    };

    try {
        for (CLI::App* sub : app.get_subcommands()) apply_config(sub);
        if (synth->parsed()) return cmd_synth(so);
        if (improve->parsed()) return cmd_improve(io);
        if (dispatch->parsed()) return cmd_dispatch(po);
        if (evaluate->parsed()) return cmd_evaluate(eo);
        throw InternalError("no subcommand dispatched");
    } catch (const InputError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ModelError& e) {
        std::fprintf(stderr, "model error: %s\n", e.what());
        return 3;
    } catch (const InternalError& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 4;
    }
}

}  // namespace gridcast
