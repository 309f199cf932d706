#pragma once

#include "lppls/cma_es.hpp"
#include "lppls/fit_result.hpp"
#include "lppls/model.hpp"
#include "lppls/timeseries.hpp"

namespace lppls {

/// Fits the LPPLS model to one window.
///
/// The optimizer searches (tc, m, omega) inside `box`; the linear parameters
/// are eliminated analytically at every evaluation, and points whose damping
/// falls below box.damping_min are treated as infeasible. An optimizer that
/// finds nothing feasible yields a FitResult with fitted == false rather than
/// an exception. The qualification slot is left empty.
FitResult calibrate(const PriceSeries& series, const Window& w, const SearchBox& box,
                    const OptimizerConfig& config);

/// calibrate() over SearchBox::for_window(w).
FitResult calibrate(const PriceSeries& series, const Window& w, const OptimizerConfig& config);

}  // namespace lppls
