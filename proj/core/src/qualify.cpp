#include "lppls/qualify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lppls/lomb.hpp"

namespace lppls {

namespace {

constexpr double kZeroResidual = 1e-12;
constexpr double kConstantResidual = 1e-9;

// Fuller's table for the no-constant Dickey-Fuller statistic.
struct DfRow {
    double n;
    std::array<double, 3> crit;  // 1%, 5%, 10%
};
constexpr std::array<DfRow, 6> kDfTable{{
    {25.0, {-2.66, -1.95, -1.60}},
    {50.0, {-2.62, -1.95, -1.61}},
    {100.0, {-2.60, -1.95, -1.61}},
    {250.0, {-2.58, -1.95, -1.62}},
    {500.0, {-2.58, -1.95, -1.62}},
    {1e12, {-2.58, -1.95, -1.62}},
}};

std::size_t alpha_column(double alpha) {
    constexpr std::array<double, 3> levels{0.01, 0.05, 0.10};
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (std::abs(alpha - levels[i]) < 1e-12) return i;
    }
    throw std::invalid_argument("ar1 alpha must be 0.01, 0.05 or 0.10, got " +
                                std::to_string(alpha));
}

}  // namespace

std::string_view to_string(BubbleSign sign) {
    switch (sign) {
        case BubbleSign::positive: return "positive";
        case BubbleSign::negative: return "negative";
        case BubbleSign::none: break;
    }
    return "none";
}

BubbleSign parse_bubble_sign(std::string_view text) {
    if (text == "positive") return BubbleSign::positive;
    if (text == "negative") return BubbleSign::negative;
    if (text == "none") return BubbleSign::none;
    throw std::invalid_argument("unknown bubble sign '" + std::string(text) + "'");
}

void FilterConfig::validate() const {
    if (!(m.lo <= m.hi) || !(omega.lo <= omega.hi)) {
        throw std::invalid_argument("filter ranges must be ordered");
    }
    if (!(tc_horizon_fraction > 0.0)) throw std::invalid_argument("tc horizon must be positive");
    if (!(oscillation_coefficient > 0.0)) {
        throw std::invalid_argument("oscillation coefficient must be positive");
    }
    if (!(max_rel_error >= 0.0)) throw std::invalid_argument("max_rel_error must be >= 0");
    if (!(lomb_alpha > 0.0 && lomb_alpha < 1.0)) {
        throw std::invalid_argument("lomb_alpha must lie in (0, 1)");
    }
    alpha_column(ar1_alpha);
    if (lomb_oversampling < 1) throw std::invalid_argument("lomb oversampling must be >= 1");
}

BoundsCheck check_bounds(const FitResult& fit, const FilterConfig& cfg) {
    const auto& p = fit.params;
    const auto t1 = static_cast<double>(fit.window.t1);
    const auto t2 = static_cast<double>(fit.window.t2);
    BoundsCheck out;
    out.m = cfg.m.contains(p.m);
    out.omega = cfg.omega.contains(p.omega);
    out.tc = p.tc >= t2 && p.tc <= t2 + cfg.tc_horizon_fraction * (t2 - t1);
    return out;
}

ThresholdOutcome oscillation_count(const FitResult& fit, const FilterConfig& cfg) {
    const auto& p = fit.params;
    const auto t1 = static_cast<double>(fit.window.t1);
    const auto t2 = static_cast<double>(fit.window.t2);
    if (!(p.tc > t2)) throw std::domain_error("oscillation count needs tc > t2");
    ThresholdOutcome out;
    out.value = cfg.oscillation_coefficient * p.omega * std::log((p.tc - t1) / (p.tc - t2));
    out.passed = out.value >= cfg.oscillation_min;
    return out;
}

ThresholdOutcome max_relative_error(const FitResult& fit, const PriceSeries& series,
                                    const FilterConfig& cfg) {
    ThresholdOutcome out;
    for (std::size_t t = fit.window.t1; t <= fit.window.t2; ++t) {
        const double fitted = std::exp(lppls_eval(fit.params, static_cast<double>(t)));
        const double observed = series.close(t);
        out.value = std::max(out.value, std::abs(fitted - observed) / observed);
    }
    out.passed = out.value <= cfg.max_rel_error;
    return out;
}

DetrendedResiduals detrended_residuals(const PriceSeries& series, const FitResult& fit) {
    const auto& p = fit.params;
    DetrendedResiduals out;
    out.position.reserve(fit.window.size());
    out.value.reserve(fit.window.size());
    for (std::size_t t = fit.window.t1; t <= fit.window.t2; ++t) {
        const double dt = p.tc - static_cast<double>(t);
        if (!(dt > 0.0)) throw std::domain_error("detrended residuals need tc > t2");
        const double f = std::pow(dt, p.m);
        out.position.push_back(std::log(dt));
        out.value.push_back((series.log_close(t) - p.A - p.B * f) / f);
    }
    return out;
}

LombOutcome lomb_test(std::span<const double> positions, std::span<const double> values,
                      double fitted_omega, const FilterConfig& cfg) {
    LombOutcome out;
    double largest = 0.0;
    double mean = 0.0;
    for (double v : values) {
        largest = std::max(largest, std::abs(v));
        mean += v;
    }
    mean /= static_cast<double>(values.size());
    double spread = 0.0;
    for (double v : values) spread = std::max(spread, std::abs(v - mean));
    if (largest <= kZeroResidual || spread <= kZeroResidual * std::max(1.0, largest)) {
        out.degenerate = true;
        out.passed = true;
        return out;
    }
    const Periodogram pg = lomb_periodogram(positions, values, cfg.lomb_oversampling);
    const auto peak = static_cast<std::size_t>(
        std::max_element(pg.power.begin(), pg.power.end()) - pg.power.begin());
    out.peak_power = pg.power[peak];
    out.peak_omega = 2.0 * std::numbers::pi * pg.frequency[peak];
    out.false_alarm = lomb_false_alarm(out.peak_power, pg.power.size(), pg.oversampling);
    out.significant = out.false_alarm <= cfg.lomb_alpha;
    out.frequency_consistent =
        out.peak_omega >= 0.5 * fitted_omega && out.peak_omega <= 2.0 * fitted_omega;
    out.passed = out.significant && out.frequency_consistent;
    return out;
}

LombOutcome lomb_test(const PriceSeries& series, const FitResult& fit, const FilterConfig& cfg) {
    if (fit.window.size() < 30) throw std::invalid_argument("lomb test needs >= 30 points");
    const auto r = detrended_residuals(series, fit);
    return lomb_test(r.position, r.value, fit.params.omega, cfg);
}

double df_critical_value(std::size_t n, double alpha) {
    const std::size_t col = alpha_column(alpha);
    const auto size = static_cast<double>(n);
    if (size <= kDfTable.front().n) return kDfTable.front().crit[col];
    for (std::size_t i = 1; i < kDfTable.size(); ++i) {
        if (size <= kDfTable[i].n) {
            const auto& a = kDfTable[i - 1];
            const auto& b = kDfTable[i];
            const double w = (size - a.n) / (b.n - a.n);
            return a.crit[col] + w * (b.crit[col] - a.crit[col]);
        }
    }
    return kDfTable.back().crit[col];
}

Ar1Outcome ar1_test(std::span<const double> e, double alpha) {
    if (e.size() < 30) throw std::invalid_argument("ar1 test needs >= 30 residuals");
    Ar1Outcome out;
    out.critical_value = df_critical_value(e.size(), alpha);

    double mean = 0.0;
    for (double v : e) mean += v;
    mean /= static_cast<double>(e.size());
    double spread = 0.0;
    for (double v : e) spread = std::max(spread, std::abs(v - mean));
    if (spread <= kConstantResidual) {
        out.degenerate = true;
        out.passed = true;
        return out;
    }

    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t t = 1; t < e.size(); ++t) {
        sxx += e[t - 1] * e[t - 1];
        sxy += (e[t] - e[t - 1]) * e[t - 1];
    }
    out.slope = sxy / sxx;
    double rss = 0.0;
    for (std::size_t t = 1; t < e.size(); ++t) {
        const double u = (e[t] - e[t - 1]) - out.slope * e[t - 1];
        rss += u * u;
    }
    const double dof = static_cast<double>(e.size() - 2);
    const double se = std::sqrt(rss / dof / sxx);
    out.statistic = se > 0.0 ? out.slope / se : -std::numeric_limits<double>::infinity();
    out.passed = out.slope < 0.0 && out.statistic < out.critical_value;
    return out;
}

Ar1Outcome ar1_test(const FitResult& fit, const FilterConfig& cfg) {
    return ar1_test(fit.residuals, cfg.ar1_alpha);
}

QualificationReport qualify(const FitResult& fit, const PriceSeries& series,
                            const FilterConfig& cfg) {
    QualificationReport report;
    if (!fit.fitted) return report;

    const auto& p = fit.params;
    report.bubble_sign = p.B < 0.0   ? BubbleSign::positive
                         : p.B > 0.0 ? BubbleSign::negative
                                     : BubbleSign::none;

    const BoundsCheck bounds = check_bounds(fit, cfg);
    report.m_bound = bounds.m;
    report.omega_bound = bounds.omega;
    report.tc_bound = bounds.tc;

    if (p.tc > static_cast<double>(fit.window.t2)) {
        const auto osc = oscillation_count(fit, cfg);
        report.oscillation = osc.value;
        report.oscillation_count = osc.passed;
    }
    const auto rel = max_relative_error(fit, series, cfg);
    report.max_rel_error = rel.value;
    report.max_relative_error = rel.passed;

    const bool cheap_ok = bounds.all() && report.oscillation_count && report.max_relative_error &&
                          report.bubble_sign != BubbleSign::none;
    if (cheap_ok) {
        report.spectral_evaluated = true;
        const auto lomb = lomb_test(series, fit, cfg);
        report.lomb_significance = lomb.passed;
        report.lomb_peak_power = lomb.peak_power;
        report.lomb_peak_omega = lomb.peak_omega;
        report.lomb_false_alarm = lomb.false_alarm;
        const auto ar1 = ar1_test(fit, cfg);
        report.ar1_residuals = ar1.passed;
        report.ar1_statistic = ar1.statistic;
    }

    report.passed = report.m_bound && report.omega_bound && report.tc_bound &&
                    report.oscillation_count && report.max_relative_error &&
                    report.lomb_significance && report.ar1_residuals &&
                    report.bubble_sign != BubbleSign::none;
    return report;
}

}  // namespace lppls
