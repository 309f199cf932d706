#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lppls/cma_es.hpp"
#include "lppls/fit_result.hpp"
#include "lppls/timeseries.hpp"

namespace lppls {

/// Filter thresholds applied to every calibrated window.
struct FilterConfig {
    Interval m{0.01, 0.99};
    Interval omega{2.0, 25.0};
    double tc_horizon_fraction = 0.2;  ///< tc <= t2 + fraction * (t2 - t1)
    /// Oscillation count = coefficient * omega * ln((tc - t1) / (tc - t2)).
    /// 0.5 reads the threshold as omega/2; 1/pi gives the omega/pi variant.
    double oscillation_coefficient = 0.5;
    double oscillation_min = 2.5;
    double max_rel_error = 0.20;
    double lomb_alpha = 0.05;
    double ar1_alpha = 0.05;  ///< one of 0.01, 0.05, 0.10
    int lomb_oversampling = 4;

    void validate() const;
};

struct BoundsCheck {
    bool m = false;
    bool omega = false;
    bool tc = false;

    bool all() const { return m && omega && tc; }
};

struct ThresholdOutcome {
    double value = 0.0;
    bool passed = false;
};

struct LombOutcome {
    double peak_power = 0.0;
    double peak_omega = 0.0;  ///< angular frequency in the ln(tc - t) coordinate
    double false_alarm = 1.0;
    bool significant = false;           ///< false_alarm <= alpha
    bool frequency_consistent = false;  ///< peak_omega within [omega/2, 2 omega]
    bool degenerate = false;            ///< residuals identically zero
    bool passed = false;
};

struct Ar1Outcome {
    double slope = 0.0;
    double statistic = 0.0;
    double critical_value = 0.0;
    bool degenerate = false;  ///< constant residuals
    bool passed = false;
};

/// Inclusive bound checks on m, omega and tc.
BoundsCheck check_bounds(const FitResult& fit, const FilterConfig& cfg);

/// Throws std::domain_error unless tc > t2.
ThresholdOutcome oscillation_count(const FitResult& fit, const FilterConfig& cfg);

/// max |p_hat - p| / p over the window.
ThresholdOutcome max_relative_error(const FitResult& fit, const PriceSeries& series,
                                    const FilterConfig& cfg = {});

/// Detrended residuals r(t) = (tc - t)^-m (ln p - A - B (tc - t)^m) and their
/// positions u = ln(tc - t), both in window order.
struct DetrendedResiduals {
    std::vector<double> position;
    std::vector<double> value;
};

DetrendedResiduals detrended_residuals(const PriceSeries& series, const FitResult& fit);

/// Lomb test of arbitrary samples against an expected angular frequency.
LombOutcome lomb_test(std::span<const double> positions, std::span<const double> values,
                      double fitted_omega, const FilterConfig& cfg);

LombOutcome lomb_test(const PriceSeries& series, const FitResult& fit, const FilterConfig& cfg);

/// Left-tail Dickey-Fuller critical value (no intercept, no trend).
double df_critical_value(std::size_t n, double alpha);

/// Regresses diff(e) on lagged e without an intercept; passes on a negative
/// slope whose t-statistic is below the critical value.
Ar1Outcome ar1_test(std::span<const double> residuals, double alpha);

Ar1Outcome ar1_test(const FitResult& fit, const FilterConfig& cfg);

/// Runs the full battery. Bounds, oscillation count and relative error are
/// always evaluated; the Lomb and AR(1) tests only when those all pass.
QualificationReport qualify(const FitResult& fit, const PriceSeries& series,
                            const FilterConfig& cfg);

}  // namespace lppls
