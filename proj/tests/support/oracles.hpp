#pragma once

// Reference implementations written independently of the library code they
// check, plus a few fixtures shared by unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <unistd.h>

#include <Eigen/Dense>

#include "lppls/date.hpp"
#include "lppls/model.hpp"
#include "lppls/synth.hpp"
#include "lppls/timeseries.hpp"

namespace oracle {

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("lppls_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

struct LstsqResult {
    Eigen::Vector4d x;  // A, B, C1, C2
    double cost = 0.0;
};

inline Eigen::MatrixXd lppls_design(std::size_t n, double first_time, double tc, double m,
                                    double omega) {
    Eigen::MatrixXd X(static_cast<Eigen::Index>(n), 4);
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = tc - (first_time + static_cast<double>(i));
        const double f = std::pow(dt, m);
        const auto r = static_cast<Eigen::Index>(i);
        X(r, 0) = 1.0;
        X(r, 1) = f;
        X(r, 2) = f * std::cos(omega * std::log(dt));
        X(r, 3) = f * std::sin(omega * std::log(dt));
    }
    return X;
}

/// Column-pivoted Householder least squares on the raw design.
inline LstsqResult lstsq_qr(std::span<const double> y, double first_time, double tc, double m,
                            double omega) {
    const auto X = lppls_design(y.size(), first_time, tc, m, omega);
    const Eigen::Map<const Eigen::VectorXd> v(y.data(), static_cast<Eigen::Index>(y.size()));
    LstsqResult r;
    r.x = X.colPivHouseholderQr().solve(v);
    r.cost = (X * r.x - v).squaredNorm();
    return r;
}

/// Normal equations solved by LDLT; much less accurate, for a loose check.
inline LstsqResult lstsq_normal(std::span<const double> y, double first_time, double tc, double m,
                                double omega) {
    const auto X = lppls_design(y.size(), first_time, tc, m, omega);
    const Eigen::Map<const Eigen::VectorXd> v(y.data(), static_cast<Eigen::Index>(y.size()));
    LstsqResult r;
    r.x = (X.transpose() * X).ldlt().solve(X.transpose() * v);
    r.cost = (X * r.x - v).squaredNorm();
    return r;
}

/// Double loop over grid and samples with the Gaussian kernel written out.
inline std::vector<double> kde_brute(const std::vector<double>& samples,
                                     const std::vector<double>& grid, double h) {
    std::vector<double> out;
    for (double x : grid) {
        double s = 0.0;
        for (double xi : samples) {
            const double z = (x - xi) / h;
            s += std::exp(-z * z / 2.0) / std::sqrt(2.0 * std::numbers::pi);
        }
        out.push_back(s / (static_cast<double>(samples.size()) * h));
    }
    return out;
}

/// Type-7 quantile via nth_element.
inline double quantile_sorted_oracle(std::vector<double> v, double q) {
    const double h = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    std::nth_element(v.begin(), v.begin() + static_cast<long>(lo), v.end());
    const double a = v[lo];
    if (lo + 1 >= v.size() || h == static_cast<double>(lo)) return a;
    const double b = *std::min_element(v.begin() + static_cast<long>(lo) + 1, v.end());
    return a + (h - static_cast<double>(lo)) * (b - a);
}

/// Steps through the calendar one day at a time, counting weekdays.
inline lppls::Date add_weekdays_slow(lppls::Date d, long n) {
    using namespace std::chrono;
    sys_days s{d};
    while (n > 0) {
        s += days{1};
        const weekday wd{s};
        if (wd != Saturday && wd != Sunday) --n;
    }
    return year_month_day{s};
}

/// A zero-noise bubble inside the qualification box, ending at index n - 1.
/// The sign of B follows `positive`.
inline lppls::SynthSpec random_bubble(std::mt19937_64& rng, int n, bool positive = true) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    lppls::SynthSpec s;
    s.n_days = n;
    const double t2 = n - 1;
    auto& p = s.params;
    p.m = 0.1 + 0.8 * U(rng);
    p.omega = 4.0 + 16.0 * U(rng);
    p.tc = t2 + 5.0 + (0.15 * t2 - 5.0) * U(rng);
    p.A = 5.0 + 4.0 * U(rng);
    const double move = 0.3 + 0.7 * U(rng);
    const double span = std::pow(p.tc, p.m) - std::pow(p.tc - t2, p.m);
    p.B = (positive ? -1.0 : 1.0) * move / span;
    const double damping = 1.1 + 1.9 * U(rng);
    const double amp = p.m * std::abs(p.B) / (p.omega * damping);
    const double phase = 2.0 * std::numbers::pi * U(rng);
    p.C1 = amp * std::cos(phase);
    p.C2 = amp * std::sin(phase);
    s.noise_sigma = 0.0;
    s.seed = rng();
    return s;
}

/// Geometric random walk on the given calendar.
inline lppls::PriceSeries random_walk(std::vector<lppls::Date> dates, double p0, double drift,
                                      double sigma, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> N(drift, sigma);
    std::vector<double> closes(dates.size());
    double lp = std::log(p0);
    for (auto& c : closes) {
        c = std::exp(lp);
        lp += N(rng);
    }
    return lppls::PriceSeries(std::move(dates), std::move(closes));
}

inline std::vector<lppls::Date> weekdays(lppls::Date start, std::size_t n) {
    std::vector<lppls::Date> out;
    lppls::Date d = start;
    while (!lppls::is_weekday(d)) d = lppls::add_days(d, 1);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(d);
        d = add_weekdays_slow(d, 1);
    }
    return out;
}

}  // namespace oracle
