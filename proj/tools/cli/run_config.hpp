#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lppls/cma_es.hpp"
#include "lppls/date.hpp"
#include "lppls/fit_result.hpp"
#include "lppls/qualify.hpp"
#include "lppls/synth.hpp"
#include "lppls/timeseries.hpp"

namespace lppls::cli {

/// Everything a command reads. Built from defaults, then a --config file,
/// then explicit flags; the resolved value is echoed as config.json.
struct RunConfig {
    std::string csv;
    std::string column;
    RowPolicy row_policy = RowPolicy::strict;

    std::optional<Date> t1;
    std::optional<Date> t2;
    std::optional<Date> start;
    std::optional<Date> end;

    int max_window = 650;
    int min_window = 30;
    int window_step = 5;
    unsigned workers = 0;  ///< 0 picks hardware concurrency

    OptimizerConfig optimizer;
    FilterConfig filters;

    std::string store;
    BubbleSign sign = BubbleSign::positive;
    std::vector<double> levels{0.05, 0.20, 0.50, 0.80, 0.95};

    std::string preset = "paper-like";
    SynthSpec synth = paper_like();

    std::string out = ".";
};

/// Keys missing from `j` keep the values already in `cfg`. Unknown keys throw.
void apply_json(RunConfig& cfg, const nlohmann::json& j);

nlohmann::json to_json(const RunConfig& cfg);

/// Named synthetic presets; currently only "paper-like". Throws on others.
SynthSpec synth_preset(const std::string& name);

}  // namespace lppls::cli
