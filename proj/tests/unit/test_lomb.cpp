#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lppls/lomb.hpp"

using namespace lppls;

namespace {

// Press & Rybicki's normalised periodogram evaluated term by term.
double lomb_power_direct(const std::vector<double>& t, const std::vector<double>& y, double f) {
    const double w = 2.0 * std::numbers::pi * f;
    const double n = static_cast<double>(y.size());
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    var /= n - 1.0;
    double s2 = 0.0, c2 = 0.0;
    for (double ti : t) {
        s2 += std::sin(2.0 * w * ti);
        c2 += std::cos(2.0 * w * ti);
    }
    const double tau = std::atan2(s2, c2) / (2.0 * w);
    double yc = 0.0, cc = 0.0, ys = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double c = std::cos(w * (t[i] - tau)), s = std::sin(w * (t[i] - tau));
        yc += (y[i] - mean) * c;
        ys += (y[i] - mean) * s;
        cc += c * c;
        ss += s * s;
    }
    return (yc * yc / cc + ys * ys / ss) / (2.0 * var);
}

std::vector<double> log_spaced_positions(std::size_t n, double tc) {
    std::vector<double> u;
    for (std::size_t i = 0; i < n; ++i) u.push_back(std::log(tc - static_cast<double>(i)));
    return u;
}

}  // namespace

TEST(Lomb, MatchesDirectEvaluation) {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> N(0.0, 1.0);
    const auto u = log_spaced_positions(300, 330.0);
    std::vector<double> y;
    for (double x : u) y.push_back(std::sin(9.0 * x) + 0.5 * N(rng));
    const auto pg = lomb_periodogram(u, y, 4);
    const double T = u.front() - u.back();
    EXPECT_NEAR(pg.frequency.front(), 1.0 / T, 1e-12);
    EXPECT_LE(pg.frequency.back(), 300.0 / (2.0 * T) + 1e-9);
    EXPECT_GT(pg.frequency.back() + 1.0 / (4.0 * T), 300.0 / (2.0 * T));
    for (std::size_t k = 0; k < pg.frequency.size(); ++k) {
        const double ref = lomb_power_direct(u, y, pg.frequency[k]);
        ASSERT_NEAR(pg.power[k], ref, 1e-9 * std::max(1.0, ref)) << "k=" << k;
    }
}

TEST(Lomb, SinusoidPeaksAtItsFrequency) {
    const auto u = log_spaced_positions(400, 420.0);
    std::vector<double> y;
    for (double x : u) y.push_back(0.3 * std::cos(12.0 * x + 0.4));
    const auto pg = lomb_periodogram(u, y, 8);
    const auto peak = std::max_element(pg.power.begin(), pg.power.end()) - pg.power.begin();
    const double T = u.front() - u.back();
    EXPECT_NEAR(2.0 * std::numbers::pi * pg.frequency[static_cast<std::size_t>(peak)], 12.0,
                2.0 * std::numbers::pi / (8.0 * T));
}

TEST(Lomb, FalseAlarmFormula) {
    for (double z : {0.5, 3.0, 8.0, 20.0}) {
        const std::size_t grid = 500;
        const double M = 2.0 * grid / 4.0;
        EXPECT_NEAR(lomb_false_alarm(z, grid, 4), 1.0 - std::pow(1.0 - std::exp(-z), M), 1e-12);
    }
    EXPECT_GT(lomb_false_alarm(2.0, 100, 4), lomb_false_alarm(3.0, 100, 4));
    EXPECT_GE(lomb_false_alarm(0.0, 100, 4), 0.0);
    EXPECT_LE(lomb_false_alarm(0.0, 100, 4), 1.0);
    // Tiny probabilities keep their precision.
    EXPECT_GT(lomb_false_alarm(60.0, 100, 4), 0.0);
}

TEST(Lomb, RejectsDegenerateInput) {
    const std::vector<double> t{0, 1}, y{1, 2};
    EXPECT_THROW(lomb_periodogram(t, y), std::invalid_argument);
    const std::vector<double> t3{0, 1, 2}, flat{1, 1, 1};
    EXPECT_THROW(lomb_periodogram(t3, flat), std::invalid_argument);
    const std::vector<double> same{1, 1, 1}, y3{1, 2, 3};
    EXPECT_THROW(lomb_periodogram(same, y3), std::invalid_argument);
}
