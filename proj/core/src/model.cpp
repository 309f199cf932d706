#include "lppls/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lppls {

namespace {

constexpr std::size_t kCols = 5;  // 1, f, g, h | y

// In-place Householder QR of an n x 5 column-major block. The first four
// columns are the design, the last is the right-hand side.
std::optional<LinearFit> least_squares(std::span<double> block, std::size_t n) {
    if (n < 4) return std::nullopt;
    auto col = [&](std::size_t j) { return block.subspan(j * n, n); };

    std::array<double, 4> scale{};
    for (std::size_t j = 0; j < 4; ++j) {
        double ss = 0.0;
        for (double v : col(j)) ss += v * v;
        const double norm = std::sqrt(ss);
        if (!(norm > 0.0) || !std::isfinite(norm)) return std::nullopt;
        scale[j] = norm;
        for (double& v : col(j)) v /= norm;
    }

    std::array<double, 4> diag{};
    for (std::size_t k = 0; k < 4; ++k) {
        auto x = col(k);
        double ss = 0.0;
        for (std::size_t i = k; i < n; ++i) ss += x[i] * x[i];
        const double norm = std::sqrt(ss);
        if (!(norm > 0.0)) return std::nullopt;
        const double alpha = x[k] > 0.0 ? -norm : norm;
        const double head = x[k];
        x[k] = head - alpha;  // x[k..n) now holds the reflector v
        const double vnorm2 = ss - head * head + x[k] * x[k];
        if (vnorm2 > 0.0) {
            for (std::size_t j = k + 1; j < kCols; ++j) {
                auto c = col(j);
                double dot = 0.0;
                for (std::size_t i = k; i < n; ++i) dot += x[i] * c[i];
                const double f = 2.0 * dot / vnorm2;
                for (std::size_t i = k; i < n; ++i) c[i] -= f * x[i];
            }
        }
        diag[k] = alpha;
    }

    double dmax = 0.0;
    double dmin = std::numeric_limits<double>::infinity();
    for (double d : diag) {
        dmax = std::max(dmax, std::abs(d));
        dmin = std::min(dmin, std::abs(d));
    }
    if (!(dmin >= kRankTolerance * dmax)) return std::nullopt;

    // R is stored above the diagonal of the reflected columns.
    auto r = [&](std::size_t i, std::size_t j) { return i == j ? diag[i] : col(j)[i]; };
    auto qty = col(4);
    std::array<double, 4> beta{};
    for (std::size_t ii = 4; ii-- > 0;) {
        double s = qty[ii];
        for (std::size_t j = ii + 1; j < 4; ++j) s -= r(ii, j) * beta[j];
        beta[ii] = s / r(ii, ii);
    }
    double rss = 0.0;
    for (std::size_t i = 4; i < n; ++i) rss += qty[i] * qty[i];

    LinearFit out;
    out.params = {beta[0] / scale[0], beta[1] / scale[1], beta[2] / scale[2], beta[3] / scale[3]};
    out.cost = rss;
    if (!std::isfinite(out.params.A) || !std::isfinite(out.params.B) ||
        !std::isfinite(out.params.C1) || !std::isfinite(out.params.C2) || !std::isfinite(rss)) {
        return std::nullopt;
    }
    return out;
}

std::optional<LinearFit> fit_into(std::span<double> block, std::span<const double> log_prices,
                                  double first_time, double tc, double m, double omega) {
    const std::size_t n = log_prices.size();
    const double last_time = first_time + static_cast<double>(n) - 1.0;
    if (!(tc > last_time) || !std::isfinite(tc) || !std::isfinite(m) || !std::isfinite(omega)) {
        return std::nullopt;
    }
    double* ones = block.data();
    double* f = ones + n;
    double* g = f + n;
    double* h = g + n;
    double* y = h + n;
    for (std::size_t i = 0; i < n; ++i) {
        const double ldt = std::log(tc - (first_time + static_cast<double>(i)));
        const double fi = std::exp(m * ldt);
        const double phase = omega * ldt;
        ones[i] = 1.0;
        f[i] = fi;
        g[i] = fi * std::cos(phase);
        h[i] = fi * std::sin(phase);
        y[i] = log_prices[i];
    }
    return least_squares(block, n);
}

std::span<const double> window_prices(const PriceSeries& series, const Window& w) {
    if (w.t2 < w.t1 || w.t2 >= series.size()) {
        throw std::out_of_range("window outside the series");
    }
    return series.log_closes().subspan(w.t1, w.size());
}

}  // namespace

double LpplsParams::amplitude() const { return std::hypot(C1, C2); }

double LpplsParams::damping() const {
    const double c = amplitude();
    if (c == 0.0) return std::numeric_limits<double>::infinity();
    return m * std::abs(B) / (omega * c);
}

double lppls_eval(const LpplsParams& p, double t) {
    if (!(t < p.tc)) {
        throw std::domain_error("lppls_eval: t must be strictly before tc");
    }
    const double dt = p.tc - t;
    const double f = std::pow(dt, p.m);
    const double phase = p.omega * std::log(dt);
    return p.A + p.B * f + p.C1 * f * std::cos(phase) + p.C2 * f * std::sin(phase);
}

std::optional<LinearFit> fit_linear(std::span<const double> log_prices, double first_time,
                                    double tc, double m, double omega) {
    std::vector<double> block(log_prices.size() * kCols);
    return fit_into(block, log_prices, first_time, tc, m, omega);
}

std::optional<LinearParams> solve_linear(const PriceSeries& series, const Window& w, double tc,
                                         double m, double omega) {
    const auto fit = fit_linear(window_prices(series, w), static_cast<double>(w.t1), tc, m, omega);
    if (!fit) return std::nullopt;
    return fit->params;
}

double cost(const PriceSeries& series, const Window& w, double tc, double m, double omega) {
    const auto fit = fit_linear(window_prices(series, w), static_cast<double>(w.t1), tc, m, omega);
    return fit ? fit->cost : std::numeric_limits<double>::infinity();
}

std::vector<double> residuals(const PriceSeries& series, const Window& w, const LpplsParams& p) {
    const auto y = window_prices(series, w);
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        out[i] = lppls_eval(p, static_cast<double>(w.t1 + i)) - y[i];
    }
    return out;
}

WindowCost::WindowCost(const PriceSeries& series, const Window& w)
    : window_(w), log_prices_(window_prices(series, w)), scratch_(w.size() * kCols) {}

std::optional<LinearFit> WindowCost::fit(double tc, double m, double omega) {
    return fit_into(scratch_, log_prices_, static_cast<double>(window_.t1), tc, m, omega);
}

double WindowCost::operator()(double tc, double m, double omega) {
    const auto f = fit(tc, m, omega);
    return f ? f->cost : std::numeric_limits<double>::infinity();
}

}  // namespace lppls
