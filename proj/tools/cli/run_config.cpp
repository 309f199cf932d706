#include "run_config.hpp"

#include <set>
#include <stdexcept>

namespace lppls::cli {
namespace {

using nlohmann::json;

std::optional<Date> optional_date(const json& v) {
    if (v.is_null()) return std::nullopt;
    return parse_date(v.get<std::string>());
}

json date_or_null(const std::optional<Date>& d) {
    return d ? json(format_date(*d)) : json(nullptr);
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw std::invalid_argument(where + " must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (!allowed.contains(key)) {
            throw std::invalid_argument("unknown config key '" + where + key + "'");
        }
    }
}

template <class T>
void read(const json& j, const char* key, T& field) {
    if (j.contains(key)) field = j.at(key).get<T>();
}

void apply_optimizer(OptimizerConfig& o, const json& j) {
    check_keys(j,
               {"population_size", "max_evaluations", "restarts", "seed",
                "initial_step_fraction", "tolerance_cost"},
               "optimizer.");
    read(j, "population_size", o.population_size);
    read(j, "max_evaluations", o.max_evaluations);
    read(j, "restarts", o.restarts);
    read(j, "seed", o.seed);
    read(j, "initial_step_fraction", o.initial_step_fraction);
    read(j, "tolerance_cost", o.tolerance_cost);
}

void apply_filters(FilterConfig& f, const json& j) {
    check_keys(j,
               {"m_min", "m_max", "omega_min", "omega_max", "tc_horizon_fraction",
                "oscillation_coefficient", "oscillation_min", "max_rel_error", "lomb_alpha",
                "lomb_oversampling", "ar1_alpha"},
               "filters.");
    read(j, "m_min", f.m.lo);
    read(j, "m_max", f.m.hi);
    read(j, "omega_min", f.omega.lo);
    read(j, "omega_max", f.omega.hi);
    read(j, "tc_horizon_fraction", f.tc_horizon_fraction);
    read(j, "oscillation_coefficient", f.oscillation_coefficient);
    read(j, "oscillation_min", f.oscillation_min);
    read(j, "max_rel_error", f.max_rel_error);
    read(j, "lomb_alpha", f.lomb_alpha);
    read(j, "lomb_oversampling", f.lomb_oversampling);
    read(j, "ar1_alpha", f.ar1_alpha);
}

void apply_synth(SynthSpec& s, const json& j) {
    check_keys(j, {"tc", "m", "omega", "A", "B", "C1", "C2", "n_days", "noise_sigma", "seed",
                   "start_date"},
               "synth.");
    read(j, "tc", s.params.tc);
    read(j, "m", s.params.m);
    read(j, "omega", s.params.omega);
    read(j, "A", s.params.A);
    read(j, "B", s.params.B);
    read(j, "C1", s.params.C1);
    read(j, "C2", s.params.C2);
    read(j, "n_days", s.n_days);
    read(j, "noise_sigma", s.noise_sigma);
    read(j, "seed", s.seed);
    if (j.contains("start_date")) s.start_date = parse_date(j.at("start_date").get<std::string>());
}

}  // namespace

void apply_json(RunConfig& cfg, const json& j) {
    check_keys(j,
               {"csv", "column", "row_policy", "t1", "t2", "start", "end", "max_window",
                "min_window", "window_step", "workers", "optimizer", "filters", "store", "sign",
                "levels", "preset", "synth", "out"},
               "");
    read(j, "csv", cfg.csv);
    read(j, "column", cfg.column);
    if (j.contains("row_policy")) {
        const auto p = j.at("row_policy").get<std::string>();
        if (p == "strict") cfg.row_policy = RowPolicy::strict;
        else if (p == "skip") cfg.row_policy = RowPolicy::skip;
        else throw std::invalid_argument("row_policy must be 'strict' or 'skip'");
    }
    if (j.contains("t1")) cfg.t1 = optional_date(j.at("t1"));
    if (j.contains("t2")) cfg.t2 = optional_date(j.at("t2"));
    if (j.contains("start")) cfg.start = optional_date(j.at("start"));
    if (j.contains("end")) cfg.end = optional_date(j.at("end"));
    read(j, "max_window", cfg.max_window);
    read(j, "min_window", cfg.min_window);
    read(j, "window_step", cfg.window_step);
    read(j, "workers", cfg.workers);
    if (j.contains("optimizer")) apply_optimizer(cfg.optimizer, j.at("optimizer"));
    if (j.contains("filters")) apply_filters(cfg.filters, j.at("filters"));
    read(j, "store", cfg.store);
    if (j.contains("sign")) cfg.sign = parse_bubble_sign(j.at("sign").get<std::string>());
    read(j, "levels", cfg.levels);
    if (j.contains("preset")) {
        cfg.preset = j.at("preset").get<std::string>();
        cfg.synth = synth_preset(cfg.preset);
    }
    if (j.contains("synth")) apply_synth(cfg.synth, j.at("synth"));
    read(j, "out", cfg.out);
}

SynthSpec synth_preset(const std::string& name) {
    if (name == "paper-like") return paper_like();
    throw std::invalid_argument("unknown synth preset '" + name + "'");
}

json to_json(const RunConfig& cfg) {
    const auto& o = cfg.optimizer;
    const auto& f = cfg.filters;
    const auto& s = cfg.synth;
    return {
        {"csv", cfg.csv},
        {"column", cfg.column},
        {"row_policy", cfg.row_policy == RowPolicy::strict ? "strict" : "skip"},
        {"t1", date_or_null(cfg.t1)},
        {"t2", date_or_null(cfg.t2)},
        {"start", date_or_null(cfg.start)},
        {"end", date_or_null(cfg.end)},
        {"max_window", cfg.max_window},
        {"min_window", cfg.min_window},
        {"window_step", cfg.window_step},
        {"workers", cfg.workers},
        {"optimizer",
         {{"population_size", o.population_size},
          {"max_evaluations", o.max_evaluations},
          {"restarts", o.restarts},
          {"seed", o.seed},
          {"initial_step_fraction", o.initial_step_fraction},
          {"tolerance_cost", o.tolerance_cost}}},
        {"filters",
         {{"m_min", f.m.lo},
          {"m_max", f.m.hi},
          {"omega_min", f.omega.lo},
          {"omega_max", f.omega.hi},
          {"tc_horizon_fraction", f.tc_horizon_fraction},
          {"oscillation_coefficient", f.oscillation_coefficient},
          {"oscillation_min", f.oscillation_min},
          {"max_rel_error", f.max_rel_error},
          {"lomb_alpha", f.lomb_alpha},
          {"lomb_oversampling", f.lomb_oversampling},
          {"ar1_alpha", f.ar1_alpha}}},
        {"store", cfg.store},
        {"sign", std::string(to_string(cfg.sign))},
        {"levels", cfg.levels},
        {"preset", cfg.preset},
        {"synth",
         {{"tc", s.params.tc},
          {"m", s.params.m},
          {"omega", s.params.omega},
          {"A", s.params.A},
          {"B", s.params.B},
          {"C1", s.params.C1},
          {"C2", s.params.C2},
          {"n_days", s.n_days},
          {"noise_sigma", s.noise_sigma},
          {"seed", s.seed},
          {"start_date", format_date(s.start_date)}}},
        {"out", cfg.out},
    };
}

}  // namespace lppls::cli
