#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>

namespace lppls {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Search space for (tc, m, omega) plus the damping floor.
struct SearchBox {
    Interval tc;
    Interval m{0.0, 1.0};
    Interval omega{1.0, 50.0};
    double damping_min = 1.0;

    /// tc in [t2, t2 + (t2 - t1) / 3], m in [0, 1], omega in [1, 50].
    static SearchBox for_window(std::size_t t1, std::size_t t2);

    bool contains(double tc_value, double m_value, double omega_value) const {
        return tc.contains(tc_value) && m.contains(m_value) && omega.contains(omega_value);
    }
};

struct OptimizerConfig {
    int population_size = 7;  ///< 4 + floor(3 ln 3)
    int max_evaluations = 3000;  ///< per restart
    int restarts = 3;
    std::uint64_t seed = 20200219;
    double initial_step_fraction = 0.3;
    /// Relative stall tolerance on the best cost.
    double tolerance_cost = 1e-10;
    /// Starting mean as (tc, m, omega); box centre when unset.
    std::optional<std::array<double, 3>> initial_mean;

    /// Throws std::invalid_argument.
    void validate() const;
};

struct Optimum {
    double tc = 0.0;
    double m = 0.0;
    double omega = 0.0;
    double cost = 0.0;
    int evaluations = 0;
};

/// Objective over (tc, m, omega); +inf marks an infeasible point.
using Objective = std::function<double(double tc, double m, double omega)>;

/// Minimises `objective` with restarted (mu/mu_w, lambda)-CMA-ES in the unit
/// cube mapped onto `box`. Candidates outside the box are resampled up to 50
/// times and then projected. Restart k uses a seed derived from (seed, k), so
/// results are a function of the inputs and the seed only.
///
/// Throws InfeasibleError when no finite cost is seen in any restart.
Optimum cma_es_minimize(const Objective& objective, const SearchBox& box,
                        const OptimizerConfig& config);

}  // namespace lppls
