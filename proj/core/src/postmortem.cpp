#include "lppls/postmortem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "lppls/errors.hpp"

namespace lppls {

double silverman_bandwidth(std::span<const double> samples, double floor) {
    const auto n = static_cast<double>(samples.size());
    if (samples.empty()) throw std::invalid_argument("bandwidth of an empty sample");
    double sd = 0.0;
    if (samples.size() > 1) {
        double mean = 0.0;
        for (double x : samples) mean += x;
        mean /= n;
        double ss = 0.0;
        for (double x : samples) ss += (x - mean) * (x - mean);
        sd = std::sqrt(ss / (n - 1.0));
    }
    return std::max(1.06 * sd * std::pow(n, -0.2), floor);
}

std::vector<double> kde(std::span<const double> samples, std::span<const double> grid,
                        double bandwidth) {
    if (samples.empty()) throw std::invalid_argument("kde needs at least one sample");
    if (!(bandwidth > 0.0)) throw std::invalid_argument("kde bandwidth must be positive");
    const double norm =
        1.0 / (static_cast<double>(samples.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
    std::vector<double> out(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        double acc = 0.0;
        for (double x : samples) {
            const double z = (grid[g] - x) / bandwidth;
            acc += std::exp(-0.5 * z * z);
        }
        out[g] = acc * norm;
    }
    return out;
}

std::vector<double> density_grid(std::span<const double> samples, double bandwidth, int points,
                                 double margin) {
    if (samples.empty()) throw std::invalid_argument("grid of an empty sample");
    if (points < 2) throw std::invalid_argument("grid needs at least two points");
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    const double a = *lo - margin * bandwidth;
    const double b = *hi + margin * bandwidth;
    std::vector<double> grid(static_cast<std::size_t>(points));
    const double step = (b - a) / (points - 1);
    for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = a + step * i;
    grid.back() = b;
    return grid;
}

Density estimate_density(std::span<const double> samples, const PostMortemConfig& cfg) {
    Density d;
    d.bandwidth = silverman_bandwidth(samples, cfg.min_bandwidth);
    d.grid = density_grid(samples, d.bandwidth, cfg.grid_points, cfg.grid_margin);
    d.values = kde(samples, d.grid, d.bandwidth);
    return d;
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("trapezoid: size mismatch");
    double total = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) total += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    return total;
}

std::vector<double> quantiles(std::span<const double> samples, std::span<const double> levels) {
    if (samples.empty()) throw std::invalid_argument("quantiles of an empty sample");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const auto last = static_cast<double>(sorted.size() - 1);
    std::vector<double> out;
    out.reserve(levels.size());
    for (double q : levels) {
        if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level outside [0, 1]");
        const double rank = q * last;
        const auto lo = static_cast<std::size_t>(std::floor(rank));
        const auto hi = std::min(lo + 1, sorted.size() - 1);
        const double frac = rank - static_cast<double>(lo);
        out.push_back(frac == 0.0 ? sorted[lo] : sorted[lo] + frac * (sorted[hi] - sorted[lo]));
    }
    return out;
}

double skewness(std::span<const double> samples) {
    const auto n = static_cast<double>(samples.size());
    if (samples.size() < 3) return 0.0;
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= n;
    double m2 = 0.0, m3 = 0.0;
    for (double x : samples) {
        const double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= n;
    m3 /= n;
    if (!(m2 > 0.0)) return 0.0;
    const double g1 = m3 / std::pow(m2, 1.5);
    return g1 * std::sqrt(n * (n - 1.0)) / (n - 2.0);
}

std::vector<FitRecord> collect_fits(std::span<const FitRecord> store, Date from, Date to,
                                    BubbleSign sign) {
    std::vector<FitRecord> out;
    for (const auto& rec : store) {
        if (rec.endpoint_date < from || to < rec.endpoint_date) continue;
        if (!rec.fit.qualified() || rec.fit.qualification->bubble_sign != sign) continue;
        out.push_back(rec);
    }
    if (out.empty()) {
        throw DataError("empty selection: no qualified " + std::string(to_string(sign)) +
                        " fits with endpoints in " + format_date(from) + ".." + format_date(to));
    }
    return out;
}

PostMortemReport build_report(std::span<const FitRecord> fits, const PriceSeries& series,
                              const PostMortemConfig& cfg) {
    if (fits.empty()) throw std::invalid_argument("post-mortem of an empty fit list");
    std::vector<double> tc;
    std::vector<double> t1;
    tc.reserve(fits.size());
    t1.reserve(fits.size());
    for (const auto& rec : fits) {
        tc.push_back(rec.fit.params.tc);
        t1.push_back(static_cast<double>(rec.fit.window.t1));
    }

    PostMortemReport r;
    r.n_fits = static_cast<int>(fits.size());
    r.tc_density = estimate_density(tc, cfg);
    r.t1_density = estimate_density(t1, cfg);

    const auto q = quantiles(tc, cfg.levels);
    for (std::size_t i = 0; i < q.size(); ++i) {
        r.tc_quantiles.push_back(
            {cfg.levels[i], q[i], index_to_fractional_date(series, std::max(0.0, q[i]))});
    }
    const auto [t1_lo, t1_hi] = std::minmax_element(t1.begin(), t1.end());
    r.t1_earliest = series.date(static_cast<std::size_t>(*t1_lo));
    r.t1_latest = series.date(static_cast<std::size_t>(*t1_hi));
    r.tc_skewness = skewness(tc);

    const auto& values = r.tc_density.values;
    const auto mode = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) -
                                               values.begin());
    r.tc_mode_position = r.tc_density.grid[mode];
    r.tc_mode_date = index_to_fractional_date(series, std::max(0.0, r.tc_mode_position)).date;
    return r;
}

nlohmann::json report_to_json(const PostMortemReport& r) {
    nlohmann::json quant = nlohmann::json::object();
    for (const auto& q : r.tc_quantiles) {
        char key[32];
        std::snprintf(key, sizeof key, "%.2f", q.level);
        quant[key] = format_date(q.date.date);
    }
    return {
        {"n_fits", r.n_fits},
        {"tc_quantiles", quant},
        {"t1_earliest", format_date(r.t1_earliest)},
        {"t1_latest", format_date(r.t1_latest)},
        {"tc_skewness", r.tc_skewness},
        {"tc_mode_date", format_date(r.tc_mode_date)},
        {"tc_mode_position", r.tc_mode_position},
        {"tc_bandwidth", r.tc_density.bandwidth},
        {"t1_bandwidth", r.t1_density.bandwidth},
    };
}

void write_density_csv(const std::filesystem::path& path, const Density& density,
                       const PriceSeries& series) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << "grid_date,grid_position,density\n";
    char buf[64];
    for (std::size_t i = 0; i < density.grid.size(); ++i) {
        const double pos = density.grid[i];
        // Grid points before the first observation clamp to the first date.
        const auto date = index_to_fractional_date(series, std::max(0.0, pos)).date;
        std::snprintf(buf, sizeof buf, "%.6f,%.12e", pos, density.values[i]);
        out << format_date(date) << ',' << buf << '\n';
    }
}

}  // namespace lppls
