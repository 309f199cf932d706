#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "lppls/date.hpp"
#include "lppls/fit_result.hpp"
#include "lppls/indicator.hpp"
#include "lppls/timeseries.hpp"

namespace lppls {

struct PostMortemConfig {
    std::vector<double> levels{0.05, 0.20, 0.50, 0.80, 0.95};
    int grid_points = 512;
    /// Grid spans [min - margin*h, max + margin*h].
    double grid_margin = 6.0;
    /// Bandwidth floor in trading days.
    double min_bandwidth = 1.0;
};

struct Density {
    std::vector<double> grid;  ///< trading-day positions
    std::vector<double> values;
    double bandwidth = 0.0;
};

/// 1.06 * sd * n^(-1/5), floored at `floor`.
double silverman_bandwidth(std::span<const double> samples, double floor = 1.0);

/// Gaussian KDE of `samples` evaluated at each grid point.
std::vector<double> kde(std::span<const double> samples, std::span<const double> grid,
                        double bandwidth);

std::vector<double> density_grid(std::span<const double> samples, double bandwidth, int points,
                                 double margin);

Density estimate_density(std::span<const double> samples, const PostMortemConfig& cfg = {});

double trapezoid(std::span<const double> x, std::span<const double> y);

/// Linear interpolation between closest ranks: level q sits at rank q(n-1).
std::vector<double> quantiles(std::span<const double> samples, std::span<const double> levels);

/// Adjusted Fisher-Pearson standardised third moment; 0 for n < 3 or no spread.
double skewness(std::span<const double> samples);

/// Qualified fits of the given sign with endpoints in [from, to].
/// Throws DataError on an empty selection.
std::vector<FitRecord> collect_fits(std::span<const FitRecord> store, Date from, Date to,
                                    BubbleSign sign);

struct QuantileDate {
    double level = 0.0;
    double position = 0.0;
    FractionalDate date;
};

struct PostMortemReport {
    int n_fits = 0;
    Density tc_density;
    Density t1_density;
    std::vector<QuantileDate> tc_quantiles;
    Date t1_earliest;
    Date t1_latest;
    double tc_skewness = 0.0;
    double tc_mode_position = 0.0;
    Date tc_mode_date;
};

PostMortemReport build_report(std::span<const FitRecord> fits, const PriceSeries& series,
                              const PostMortemConfig& cfg = {});

nlohmann::json report_to_json(const PostMortemReport& report);

/// grid_date, grid_position, density
void write_density_csv(const std::filesystem::path& path, const Density& density,
                       const PriceSeries& series);

}  // namespace lppls
