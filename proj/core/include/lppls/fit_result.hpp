#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "lppls/model.hpp"

namespace lppls {

enum class BubbleSign { none, positive, negative };

std::string_view to_string(BubbleSign sign);
BubbleSign parse_bubble_sign(std::string_view text);

/// Outcome of the filter battery for one calibrated window.
struct QualificationReport {
    bool passed = false;

    bool m_bound = false;
    bool omega_bound = false;
    bool tc_bound = false;
    bool oscillation_count = false;
    bool max_relative_error = false;
    bool lomb_significance = false;
    bool ar1_residuals = false;

    /// False when the Lomb and AR(1) tests were skipped because a cheaper
    /// condition already failed; both booleans then stay false.
    bool spectral_evaluated = false;

    double oscillation = 0.0;
    double max_rel_error = 0.0;
    double lomb_peak_power = 0.0;
    double lomb_peak_omega = 0.0;
    double lomb_false_alarm = 1.0;
    double ar1_statistic = 0.0;

    BubbleSign bubble_sign = BubbleSign::none;
};

/// One calibrated window.
struct FitResult {
    Window window;
    LpplsParams params;
    double cost = std::numeric_limits<double>::infinity();
    std::vector<double> residuals;  ///< ln p_hat - ln p over the window
    std::uint64_t seed = 0;
    bool fitted = false;  ///< false when no feasible point was found
    int evaluations = 0;
    std::optional<QualificationReport> qualification;

    bool qualified() const { return qualification && qualification->passed; }
};

}  // namespace lppls
