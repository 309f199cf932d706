#include "lppls/optimizer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lppls/errors.hpp"

namespace lppls {

namespace {

constexpr double kInfeasible = std::numeric_limits<double>::infinity();

bool damped_enough(const LinearParams& lin, double m, double omega, double damping_min) {
    const double c = std::hypot(lin.C1, lin.C2);
    if (c == 0.0) return true;
    return m * std::abs(lin.B) / (omega * c) >= damping_min;
}

}  // namespace

FitResult calibrate(const PriceSeries& series, const Window& w, const SearchBox& box,
                    const OptimizerConfig& config) {
    if (w.t2 >= series.size() || w.t2 <= w.t1) {
        throw std::invalid_argument("calibrate: window outside the series");
    }
    if (w.size() < 30) {
        throw std::invalid_argument("calibrate: windows shorter than 30 trading days are not fitted");
    }

    WindowCost window_cost(series, w);
    const Objective objective = [&](double tc, double m, double omega) {
        const auto fit = window_cost.fit(tc, m, omega);
        if (!fit || !damped_enough(fit->params, m, omega, box.damping_min)) return kInfeasible;
        return fit->cost;
    };

    FitResult result;
    result.window = w;
    result.seed = config.seed;
    try {
        const Optimum best = cma_es_minimize(objective, box, config);
        const auto fit = window_cost.fit(best.tc, best.m, best.omega);
        if (!fit) return result;  // cannot happen for a finite optimum
        result.params = {best.tc,        best.m,           best.omega,       fit->params.A,
                         fit->params.B,  fit->params.C1,   fit->params.C2};
        result.cost = fit->cost;
        result.evaluations = best.evaluations;
        result.residuals = residuals(series, w, result.params);
        result.fitted = true;
    } catch (const InfeasibleError&) {
        result.fitted = false;
    }
    return result;
}

FitResult calibrate(const PriceSeries& series, const Window& w, const OptimizerConfig& config) {
    return calibrate(series, w, SearchBox::for_window(w.t1, w.t2), config);
}

}  // namespace lppls
