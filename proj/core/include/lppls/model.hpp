#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lppls/timeseries.hpp"

namespace lppls {

/// LPPLS parameters in trading-day units.
///
///   ln p(t) = A + B (tc - t)^m + C1 (tc - t)^m cos(omega ln(tc - t))
///                              + C2 (tc - t)^m sin(omega ln(tc - t))
struct LpplsParams {
    double tc = 0.0;
    double m = 0.0;
    double omega = 0.0;
    double A = 0.0;
    double B = 0.0;
    double C1 = 0.0;
    double C2 = 0.0;

    /// sqrt(C1^2 + C2^2)
    double amplitude() const;

    /// m |B| / (omega C); +inf when C == 0 (nothing to damp).
    double damping() const;
};

/// Inclusive range of trading-day indices [t1, t2].
struct Window {
    std::size_t t1 = 0;
    std::size_t t2 = 0;

    std::size_t size() const { return t2 - t1 + 1; }

    friend bool operator==(const Window&, const Window&) = default;
};

/// Throws std::domain_error when t >= tc.
double lppls_eval(const LpplsParams& p, double t);

struct LinearParams {
    double A = 0.0;
    double B = 0.0;
    double C1 = 0.0;
    double C2 = 0.0;
};

/// Result of eliminating the linear parameters for one (tc, m, omega).
struct LinearFit {
    LinearParams params;
    double cost = 0.0;  ///< sum of squared residuals at the optimum
};

/// Smallest-to-largest |R_kk| ratio below which the basis counts as degenerate.
inline constexpr double kRankTolerance = 1e-10;

/// Least-squares fit of the four linear parameters of a window of
/// log-prices observed at times first_time, first_time + 1, ...
///
/// Uses a Householder QR of the column-normalised design [1, f, g, h].
/// Returns nullopt when tc does not lie beyond the last observation or the
/// design is numerically rank deficient.
std::optional<LinearFit> fit_linear(std::span<const double> log_prices, double first_time,
                                    double tc, double m, double omega);

std::optional<LinearParams> solve_linear(const PriceSeries& series, const Window& w, double tc,
                                         double m, double omega);

/// Cost after subordinating the linear parameters; +inf for degenerate input.
double cost(const PriceSeries& series, const Window& w, double tc, double m, double omega);

/// Per-point residuals ln p_hat - ln p over the window.
std::vector<double> residuals(const PriceSeries& series, const Window& w, const LpplsParams& p);

/// Cost evaluator bound to one window. Holds scratch storage, so a single
/// instance must not be shared between threads.
class WindowCost {
public:
    WindowCost(const PriceSeries& series, const Window& w);

    std::optional<LinearFit> fit(double tc, double m, double omega);
    double operator()(double tc, double m, double omega);

    const Window& window() const { return window_; }

private:
    Window window_;
    std::span<const double> log_prices_;
    std::vector<double> scratch_;
};

}  // namespace lppls
