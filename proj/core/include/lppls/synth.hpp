#pragma once

#include <cstdint>
#include <filesystem>

#include "lppls/date.hpp"
#include "lppls/model.hpp"
#include "lppls/timeseries.hpp"

namespace lppls {

struct SynthSpec {
    LpplsParams params;
    int n_days = 500;
    double noise_sigma = 0.0;  ///< log-price units
    std::uint64_t seed = 1;
    Date start_date{std::chrono::year{2000}, std::chrono::January, std::chrono::day{3}};

    /// Throws std::invalid_argument unless tc > n_days - 1, n_days >= 2 and
    /// noise_sigma >= 0.
    void validate() const;
};

/// m = 0.5, omega = 9, 500 days, tc 20 days past the end, damping about 1.2.
SynthSpec paper_like();

/// log p_i = lppls_eval(params, i) + N(0, sigma^2), on consecutive weekdays
/// from the first weekday on or after start_date.
PriceSeries generate(const SynthSpec& spec);

void write_synth_csv(const SynthSpec& spec, const std::filesystem::path& path);

}  // namespace lppls
