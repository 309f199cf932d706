#include "lppls/lomb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lppls {

Periodogram lomb_periodogram(std::span<const double> positions, std::span<const double> values,
                             int oversampling) {
    const std::size_t n = positions.size();
    if (n != values.size()) throw std::invalid_argument("lomb: size mismatch");
    if (n < 3) throw std::invalid_argument("lomb: need at least 3 samples");
    if (oversampling < 1) throw std::invalid_argument("lomb: oversampling must be >= 1");

    const auto [lo_it, hi_it] = std::minmax_element(positions.begin(), positions.end());
    const double span = *hi_it - *lo_it;
    if (!(span > 0.0)) throw std::invalid_argument("lomb: positions must not all coincide");
    const double centre = 0.5 * (*hi_it + *lo_it);

    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n - 1);
    if (!(var > 0.0)) throw std::invalid_argument("lomb: values have zero variance");

    const double f_lo = 1.0 / span;
    const double df = 1.0 / (static_cast<double>(oversampling) * span);
    const double f_hi = 0.5 * static_cast<double>(n) / span;
    const auto count = static_cast<std::size_t>(std::floor((f_hi - f_lo) / df + 1e-9)) + 1;

    // cos/sin(2 pi f (u - centre)) advanced by rotation from one frequency to the next.
    std::vector<double> c(n), s(n), cd(n), sd(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double arg = 2.0 * std::numbers::pi * (positions[i] - centre);
        c[i] = std::cos(arg * f_lo);
        s[i] = std::sin(arg * f_lo);
        cd[i] = std::cos(arg * df);
        sd[i] = std::sin(arg * df);
        x[i] = values[i] - mean;
    }

    Periodogram out;
    out.oversampling = oversampling;
    out.frequency.resize(count);
    out.power.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        double s2 = 0.0;
        double c2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s2 += 2.0 * s[i] * c[i];
            c2 += (c[i] - s[i]) * (c[i] + s[i]);
        }
        const double wtau = 0.5 * std::atan2(s2, c2);
        const double ct = std::cos(wtau);
        const double st = std::sin(wtau);
        double xc = 0.0, cc = 0.0, xs = 0.0, ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double cos_shift = c[i] * ct + s[i] * st;
            const double sin_shift = s[i] * ct - c[i] * st;
            xc += x[i] * cos_shift;
            cc += cos_shift * cos_shift;
            xs += x[i] * sin_shift;
            ss += sin_shift * sin_shift;
        }
        double p = 0.0;
        if (cc > 0.0) p += xc * xc / cc;
        if (ss > 0.0) p += xs * xs / ss;
        out.frequency[k] = f_lo + static_cast<double>(k) * df;
        out.power[k] = 0.5 * p / var;

        for (std::size_t i = 0; i < n; ++i) {
            const double cn = c[i] * cd[i] - s[i] * sd[i];
            s[i] = s[i] * cd[i] + c[i] * sd[i];
            c[i] = cn;
        }
    }
    return out;
}

double lomb_false_alarm(double power, std::size_t grid_size, int oversampling) {
    const double independent = 2.0 * static_cast<double>(grid_size) / oversampling;
    // 1 - (1 - e^-z)^M without cancellation
    const double fap = -std::expm1(independent * std::log1p(-std::exp(-power)));
    return std::clamp(fap, 0.0, 1.0);
}

}  // namespace lppls
