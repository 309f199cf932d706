#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lppls/errors.hpp"
#include "lppls/fit_store.hpp"
#include "lppls/indicator.hpp"
#include "lppls/optimizer.hpp"
#include "lppls/postmortem.hpp"
#include "lppls/qualify.hpp"
#include "lppls/synth.hpp"
#include "lppls/timeseries.hpp"
#include "run_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace lppls::cli {
namespace {

struct Flags {
    std::optional<std::string> config, csv, column, row_policy, out;
    std::optional<std::string> t1, t2, start, end;
    std::optional<int> max_window, min_window, step;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;

    std::optional<int> population, max_evals, restarts;
    std::optional<double> step_fraction, tol_cost;

    std::optional<double> m_min, m_max, omega_min, omega_max, tc_horizon, osc_coef, osc_min,
        max_rel_error, lomb_alpha, ar1_alpha;
    std::optional<int> lomb_ofac;

    std::optional<std::string> store, sign;
    std::vector<double> levels;

    std::optional<std::string> preset, start_date;
    std::optional<double> tc, m, omega, A, B, C1, C2, noise;
    std::optional<int> n_days;
};

template <class T>
void put(json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

/// Explicit flags as a config overlay; `seed_key` routes --seed.
json flags_to_json(const Flags& f, const char* seed_section) {
    json j = json::object();
    put(j, "csv", f.csv);
    put(j, "column", f.column);
    put(j, "row_policy", f.row_policy);
    put(j, "out", f.out);
    put(j, "t1", f.t1);
    put(j, "t2", f.t2);
    put(j, "start", f.start);
    put(j, "end", f.end);
    put(j, "max_window", f.max_window);
    put(j, "min_window", f.min_window);
    put(j, "window_step", f.step);
    put(j, "workers", f.workers);
    put(j, "store", f.store);
    put(j, "sign", f.sign);
    if (!f.levels.empty()) j["levels"] = f.levels;
    put(j, "preset", f.preset);

    json opt = json::object();
    put(opt, "population_size", f.population);
    put(opt, "max_evaluations", f.max_evals);
    put(opt, "restarts", f.restarts);
    put(opt, "initial_step_fraction", f.step_fraction);
    put(opt, "tolerance_cost", f.tol_cost);

    json filt = json::object();
    put(filt, "m_min", f.m_min);
    put(filt, "m_max", f.m_max);
    put(filt, "omega_min", f.omega_min);
    put(filt, "omega_max", f.omega_max);
    put(filt, "tc_horizon_fraction", f.tc_horizon);
    put(filt, "oscillation_coefficient", f.osc_coef);
    put(filt, "oscillation_min", f.osc_min);
    put(filt, "max_rel_error", f.max_rel_error);
    put(filt, "lomb_alpha", f.lomb_alpha);
    put(filt, "lomb_oversampling", f.lomb_ofac);
    put(filt, "ar1_alpha", f.ar1_alpha);

    json syn = json::object();
    put(syn, "tc", f.tc);
    put(syn, "m", f.m);
    put(syn, "omega", f.omega);
    put(syn, "A", f.A);
    put(syn, "B", f.B);
    put(syn, "C1", f.C1);
    put(syn, "C2", f.C2);
    put(syn, "n_days", f.n_days);
    put(syn, "noise_sigma", f.noise);
    put(syn, "start_date", f.start_date);

    if (f.seed) (std::string(seed_section) == "synth" ? syn : opt)["seed"] = *f.seed;
    if (!opt.empty()) j["optimizer"] = opt;
    if (!filt.empty()) j["filters"] = filt;
    if (!syn.empty()) j["synth"] = syn;
    return j;
}

RunConfig resolve(const Flags& f, const char* seed_section) {
    RunConfig cfg;
    if (f.config) {
        std::ifstream in(*f.config);
        if (!in) throw DataError("file not found: " + *f.config);
        json file;
        try {
            in >> file;
        } catch (const json::exception& e) {
            throw DataError("malformed config " + *f.config + ": " + e.what());
        }
        apply_json(cfg, file);
    }
    apply_json(cfg, flags_to_json(f, seed_section));
    return cfg;
}

void add_io(CLI::App* c, Flags& f) {
    c->add_option("--config", f.config, "JSON run configuration; flags take precedence");
    c->add_option("--out", f.out, "Output directory");
}

void add_input(CLI::App* c, Flags& f) {
    c->add_option("--csv", f.csv, "Price CSV with a Date column");
    c->add_option("--column", f.column, "Price column (default: Adj Close, else Close)");
    c->add_option("--row-policy", f.row_policy, "strict or skip for bad rows");
}

void add_optimizer(CLI::App* c, Flags& f) {
    c->add_option("--seed", f.seed, "Base seed");
    c->add_option("--population", f.population, "CMA-ES population size");
    c->add_option("--max-evals", f.max_evals, "Evaluations per restart");
    c->add_option("--restarts", f.restarts, "CMA-ES restarts");
    c->add_option("--step-fraction", f.step_fraction, "Initial step as a fraction of the box");
    c->add_option("--tol-cost", f.tol_cost, "Relative cost stall tolerance");
}

void add_filters(CLI::App* c, Flags& f) {
    c->add_option("--m-min", f.m_min);
    c->add_option("--m-max", f.m_max);
    c->add_option("--omega-min", f.omega_min);
    c->add_option("--omega-max", f.omega_max);
    c->add_option("--tc-horizon", f.tc_horizon, "tc <= t2 + h (t2 - t1)");
    c->add_option("--osc-coef", f.osc_coef, "Oscillation count coefficient on omega");
    c->add_option("--osc-min", f.osc_min, "Minimum oscillation count");
    c->add_option("--max-rel-error", f.max_rel_error);
    c->add_option("--lomb-alpha", f.lomb_alpha);
    c->add_option("--lomb-ofac", f.lomb_ofac, "Lomb oversampling factor");
    c->add_option("--ar1-alpha", f.ar1_alpha, "0.01, 0.05 or 0.10");
}

void add_windows(CLI::App* c, Flags& f) {
    c->add_option("--max-window", f.max_window, "Longest window in trading days");
    c->add_option("--min-window", f.min_window, "Shortest window in trading days");
    c->add_option("--step", f.step, "Window length step");
}

PriceSeries load_series(const RunConfig& cfg) {
    if (cfg.csv.empty()) throw std::invalid_argument("--csv is required");
    return load_csv(cfg.csv, {cfg.column, cfg.row_policy});
}

Date require(const std::optional<Date>& d, const char* flag) {
    if (!d) throw std::invalid_argument(std::string(flag) + " is required");
    return *d;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

fs::path prepare_out(const RunConfig& cfg) {
    const fs::path dir = cfg.out;
    fs::create_directories(dir);
    write_json(dir / "config.json", to_json(cfg));
    return dir;
}

ScanConfig scan_config(const RunConfig& cfg) {
    ScanConfig s;
    s.max_window = cfg.max_window;
    s.min_window = cfg.min_window;
    s.window_step = cfg.window_step;
    s.endpoint_start = cfg.start;
    s.endpoint_end = cfg.end;
    s.optimizer = cfg.optimizer;
    s.filters = cfg.filters;
    s.validate();
    return s;
}

unsigned worker_count(const RunConfig& cfg) {
    if (cfg.workers > 0) return cfg.workers;
    return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_fit(const RunConfig& cfg) {
    cfg.optimizer.validate();
    cfg.filters.validate();
    const auto series = load_series(cfg);
    const auto t1 = date_to_index(series, require(cfg.t1, "--t1"));
    const auto t2 = date_to_index(series, require(cfg.t2, "--t2"));
    if (t1 >= t2) throw std::invalid_argument("--t1 must be earlier than --t2");

    const Window w{t1, t2};
    OptimizerConfig opt = cfg.optimizer;
    // Same seed as the scan uses for this window.
    opt.seed = window_seed(cfg.optimizer.seed, t2, w.size());
    FitResult fit = calibrate(series, w, opt);
    fit.qualification = qualify(fit, series, cfg.filters);

    const auto dir = prepare_out(cfg);
    const json j = fit_to_json(fit, series);
    write_json(dir / "fit.json", j);

    if (fit.fitted) {
        std::printf("tc=%.3f (%s) m=%.4f omega=%.4f cost=%.6g qualified=%s sign=%s\n",
                    fit.params.tc, j.at("tc_date").get<std::string>().c_str(), fit.params.m,
                    fit.params.omega, fit.cost, fit.qualified() ? "yes" : "no",
                    std::string(to_string(fit.qualification->bubble_sign)).c_str());
    } else {
        std::printf("no feasible fit\n");
    }
    return fit.qualified() ? kExitOk : kExitNegative;
}

int cmd_scan(const RunConfig& cfg) {
    const auto scfg = scan_config(cfg);
    const auto series = load_series(cfg);
    const auto result = scan(series, scfg, worker_count(cfg));

    const auto dir = prepare_out(cfg);
    write_indicator_csv(dir / "indicator.csv", result.points);
    write_indicator_json(dir / "indicator.json", result.points);
    write_fit_store(dir / "fits.jsonl", result.fits, series);

    double peak_pos = 0.0, peak_neg = 0.0;
    for (const auto& p : result.points) {
        peak_pos = std::max(peak_pos, p.positive_ci);
        peak_neg = std::max(peak_neg, p.negative_ci);
    }
    std::printf("endpoints=%zu qualified_fits=%zu peak_positive_ci=%.4f peak_negative_ci=%.4f\n",
                result.points.size(), result.fits.size(), peak_pos, peak_neg);
    return kExitOk;
}

int cmd_postmortem(const RunConfig& cfg) {
    if (cfg.store.empty()) throw std::invalid_argument("--store is required");
    const auto from = require(cfg.start, "--start");
    const auto to = require(cfg.end, "--end");
    PostMortemConfig pm;
    pm.levels = cfg.levels;
    const auto series = load_series(cfg);
    const auto store = read_fit_store(cfg.store, &series);

    std::vector<FitRecord> selection;
    try {
        selection = collect_fits(store, from, to, cfg.sign);
    } catch (const DataError& e) {
        std::fprintf(stderr, "lppls postmortem: %s\n", e.what());
        return kExitNegative;
    }
    const auto report = build_report(selection, series, pm);

    const auto dir = prepare_out(cfg);
    write_json(dir / "report.json", report_to_json(report));
    write_density_csv(dir / "tc_density.csv", report.tc_density, series);
    write_density_csv(dir / "t1_density.csv", report.t1_density, series);

    std::printf("n_fits=%d t1_earliest=%s tc_mode=%s tc_skewness=%.4f\n", report.n_fits,
                format_date(report.t1_earliest).c_str(), format_date(report.tc_mode_date).c_str(),
                report.tc_skewness);
    return kExitOk;
}

int cmd_synth(const RunConfig& cfg) {
    cfg.synth.validate();
    const auto dir = prepare_out(cfg);
    write_synth_csv(cfg.synth, dir / "series.csv");
    std::printf("wrote %d days to %s\n", cfg.synth.n_days, (dir / "series.csv").string().c_str());
    return kExitOk;
}

int cmd_stats(const RunConfig& cfg, bool write_files) {
    const auto series = load_series(cfg);
    const auto from = cfg.start.value_or(series.front_date());
    const auto to = cfg.end.value_or(series.back_date());
    const auto s = crash_stats(series, from, to);
    const json j = {
        {"peak_date", format_date(s.peak_date)},
        {"peak_price", s.peak_price},
        {"valley_date", format_date(s.valley_date)},
        {"valley_price", s.valley_price},
        {"crash_size", s.crash_size},
    };
    std::printf("peak %s %.2f  valley %s %.2f  crash %.1f%%\n", format_date(s.peak_date).c_str(),
                s.peak_price, format_date(s.valley_date).c_str(), s.valley_price,
                100.0 * s.crash_size);
    if (write_files) write_json(prepare_out(cfg) / "stats.json", j);
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"LPPLS bubble detection"};
    app.require_subcommand(1);
    Flags f;

    auto* fit = app.add_subcommand("fit", "Calibrate one window and apply the filters");
    add_io(fit, f);
    add_input(fit, f);
    fit->add_option("--t1", f.t1, "Window start date");
    fit->add_option("--t2", f.t2, "Window end date");
    add_optimizer(fit, f);
    add_filters(fit, f);

    auto* scan_cmd = app.add_subcommand("scan", "Confidence indicators over a range of endpoints");
    add_io(scan_cmd, f);
    add_input(scan_cmd, f);
    scan_cmd->add_option("--start", f.start, "First endpoint date");
    scan_cmd->add_option("--end", f.end, "Last endpoint date");
    add_windows(scan_cmd, f);
    scan_cmd->add_option("--workers", f.workers, "Worker threads (default: all cores)");
    add_optimizer(scan_cmd, f);
    add_filters(scan_cmd, f);

    auto* pm = app.add_subcommand("postmortem", "Densities and quantiles of qualified fits");
    add_io(pm, f);
    add_input(pm, f);
    pm->add_option("--store", f.store, "fits.jsonl written by scan");
    pm->add_option("--start", f.start, "First endpoint of the cluster");
    pm->add_option("--end", f.end, "Last endpoint of the cluster");
    pm->add_option("--sign", f.sign, "positive or negative");
    pm->add_option("--levels", f.levels, "Quantile levels");

    auto* syn = app.add_subcommand("synth", "Generate a synthetic LPPLS series");
    add_io(syn, f);
    syn->add_option("--preset", f.preset, "Starting parameter set (paper-like)");
    syn->add_option("--tc", f.tc);
    syn->add_option("--m", f.m);
    syn->add_option("--omega", f.omega);
    syn->add_option("--A", f.A);
    syn->add_option("--B", f.B);
    syn->add_option("--C1", f.C1);
    syn->add_option("--C2", f.C2);
    syn->add_option("--n-days", f.n_days);
    syn->add_option("--noise", f.noise, "Gaussian log-price noise sigma");
    syn->add_option("--seed", f.seed, "Noise seed");
    syn->add_option("--start-date", f.start_date, "First calendar date");

    auto* stats = app.add_subcommand("stats", "Peak, valley and crash size");
    add_io(stats, f);
    add_input(stats, f);
    stats->add_option("--start", f.start, "First date considered");
    stats->add_option("--end", f.end, "Last date considered");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    const auto* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();
    try {
        const RunConfig cfg = resolve(f, name == "synth" ? "synth" : "optimizer");
        if (name == "fit") return cmd_fit(cfg);
        if (name == "scan") return cmd_scan(cfg);
        if (name == "postmortem") return cmd_postmortem(cfg);
        if (name == "synth") return cmd_synth(cfg);
        return cmd_stats(cfg, f.out.has_value() || f.config.has_value());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "lppls %s: %s\n", name.c_str(), e.what());
        return kExitError;
    }
}

}  // namespace lppls::cli
