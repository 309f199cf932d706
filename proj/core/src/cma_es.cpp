#include "lppls/cma_es.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "lppls/errors.hpp"
#include "lppls/seed.hpp"

namespace lppls {

namespace {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

constexpr int kDim = 3;
constexpr int kMaxResamples = 50;
constexpr double kTolX = 1e-12;
constexpr double kMaxCondition = 1e14;

struct Candidate {
    Vec3 x;  // unit cube
    double cost = 0.0;
};

class UnitMap {
public:
    explicit UnitMap(const SearchBox& box) : box_(box) {}

    std::array<double, 3> to_box(const Vec3& u) const {
        return {box_.tc.lo + u[0] * box_.tc.width(), box_.m.lo + u[1] * box_.m.width(),
                box_.omega.lo + u[2] * box_.omega.width()};
    }

    Vec3 to_unit(const std::array<double, 3>& p) const {
        return {(p[0] - box_.tc.lo) / box_.tc.width(), (p[1] - box_.m.lo) / box_.m.width(),
                (p[2] - box_.omega.lo) / box_.omega.width()};
    }

private:
    SearchBox box_;
};

bool inside_unit(const Vec3& x) {
    return (x.array() >= 0.0).all() && (x.array() <= 1.0).all();
}

struct RestartOutcome {
    Candidate best;
    int evaluations = 0;
};

RestartOutcome run_once(const Objective& objective, const UnitMap& map, const Vec3& start,
                        const OptimizerConfig& cfg, std::uint64_t seed) {
    const int lambda = cfg.population_size;
    const int mu = std::max(1, lambda / 2);

    std::vector<double> weights(static_cast<std::size_t>(mu));
    for (int i = 0; i < mu; ++i) {
        weights[static_cast<std::size_t>(i)] = std::log((lambda + 1) / 2.0) - std::log(i + 1.0);
    }
    const double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (double& w : weights) w /= wsum;
    double w2 = 0.0;
    for (double w : weights) w2 += w * w;
    const double mueff = 1.0 / w2;

    const double n = kDim;
    const double cs = (mueff + 2.0) / (n + mueff + 5.0);
    const double ds = 1.0 + 2.0 * std::max(0.0, std::sqrt((mueff - 1.0) / (n + 1.0)) - 1.0) + cs;
    const double cc = (4.0 + mueff / n) / (n + 4.0 + 2.0 * mueff / n);
    const double c1 = 2.0 / ((n + 1.3) * (n + 1.3) + mueff);
    const double cmu =
        std::min(1.0 - c1, 2.0 * (mueff - 2.0 + 1.0 / mueff) / ((n + 2.0) * (n + 2.0) + mueff));
    const double chi_n = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));
    const auto history_len =
        static_cast<std::size_t>(10 + std::ceil(30.0 * n / static_cast<double>(lambda)));

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    Vec3 mean = start;
    double sigma = cfg.initial_step_fraction;
    Mat3 C = Mat3::Identity();
    Mat3 B = Mat3::Identity();
    Vec3 D = Vec3::Ones();
    Vec3 ps = Vec3::Zero();
    Vec3 pc = Vec3::Zero();

    RestartOutcome out;
    out.best.cost = std::numeric_limits<double>::infinity();
    out.best.x = mean;

    std::deque<double> best_history;
    std::vector<Candidate> pop(static_cast<std::size_t>(lambda));
    int generation = 0;

    while (out.evaluations + lambda <= cfg.max_evaluations) {
        for (auto& cand : pop) {
            Vec3 x;
            int tries = 0;
            do {
                Vec3 z;
                for (int k = 0; k < kDim; ++k) z[k] = normal(rng);
                x = mean + sigma * (B * D.cwiseProduct(z));
            } while (!inside_unit(x) && ++tries < kMaxResamples);
            cand.x = x.cwiseMax(0.0).cwiseMin(1.0);
            const auto p = map.to_box(cand.x);
            const double c = objective(p[0], p[1], p[2]);
            cand.cost = std::isnan(c) ? std::numeric_limits<double>::infinity() : c;
            ++out.evaluations;
        }
        std::stable_sort(pop.begin(), pop.end(),
                         [](const Candidate& a, const Candidate& b) { return a.cost < b.cost; });
        if (pop.front().cost < out.best.cost) out.best = pop.front();

        const Vec3 old_mean = mean;
        mean.setZero();
        for (int i = 0; i < mu; ++i) mean += weights[static_cast<std::size_t>(i)] * pop[static_cast<std::size_t>(i)].x;
        const Vec3 y_w = (mean - old_mean) / sigma;

        const Mat3 inv_sqrt_c = B * D.cwiseInverse().asDiagonal() * B.transpose();
        ps = (1.0 - cs) * ps + std::sqrt(cs * (2.0 - cs) * mueff) * (inv_sqrt_c * y_w);
        ++generation;
        const double ps_norm = ps.norm();
        const bool hsig =
            ps_norm / std::sqrt(1.0 - std::pow(1.0 - cs, 2.0 * generation)) <
            (1.4 + 2.0 / (n + 1.0)) * chi_n;
        pc = (1.0 - cc) * pc + (hsig ? std::sqrt(cc * (2.0 - cc) * mueff) : 0.0) * y_w;

        Mat3 rank_mu = Mat3::Zero();
        for (int i = 0; i < mu; ++i) {
            const Vec3 yi = (pop[static_cast<std::size_t>(i)].x - old_mean) / sigma;
            rank_mu += weights[static_cast<std::size_t>(i)] * yi * yi.transpose();
        }
        C = (1.0 - c1 - cmu) * C +
            c1 * (pc * pc.transpose() + (hsig ? 0.0 : cc * (2.0 - cc)) * C) + cmu * rank_mu;
        C = 0.5 * (C + C.transpose());
        sigma *= std::exp((cs / ds) * (ps_norm / chi_n - 1.0));
        sigma = std::min(sigma, 1.0);

        Eigen::SelfAdjointEigenSolver<Mat3> eig(C);
        Vec3 ev = eig.eigenvalues().cwiseMax(1e-300);
        B = eig.eigenvectors();
        D = ev.cwiseSqrt();

        // Stopping rules.
        best_history.push_back(pop.front().cost);
        if (best_history.size() > history_len) best_history.pop_front();
        const double best = out.best.cost;
        if (std::isfinite(best) && std::isfinite(pop.back().cost) &&
            best_history.size() == history_len) {
            const auto [lo, hi] = std::minmax_element(best_history.begin(), best_history.end());
            const double tol = cfg.tolerance_cost * std::abs(best);
            if (*hi - *lo <= tol && pop.back().cost - pop.front().cost <= tol) break;
        }
        if (sigma * D.maxCoeff() < kTolX) break;
        if (ev.maxCoeff() > kMaxCondition * ev.minCoeff()) break;
    }
    return out;
}

}  // namespace

SearchBox SearchBox::for_window(std::size_t t1, std::size_t t2) {
    if (t2 <= t1) throw std::invalid_argument("window needs t2 > t1");
    SearchBox box;
    const auto end = static_cast<double>(t2);
    box.tc = {end, end + static_cast<double>(t2 - t1) / 3.0};
    return box;
}

void OptimizerConfig::validate() const {
    if (population_size < 2) throw std::invalid_argument("population_size must be >= 2");
    if (max_evaluations < population_size) {
        throw std::invalid_argument("max_evaluations must cover at least one generation");
    }
    if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
    if (!(initial_step_fraction > 0.0 && initial_step_fraction <= 1.0)) {
        throw std::invalid_argument("initial_step_fraction must lie in (0, 1]");
    }
    if (!(tolerance_cost >= 0.0)) throw std::invalid_argument("tolerance_cost must be >= 0");
}

Optimum cma_es_minimize(const Objective& objective, const SearchBox& box,
                        const OptimizerConfig& config) {
    config.validate();
    if (!(box.tc.width() > 0.0 && box.m.width() > 0.0 && box.omega.width() > 0.0)) {
        throw std::invalid_argument("search box must have positive width in every coordinate");
    }
    const UnitMap map(box);
    Vec3 start = Vec3::Constant(0.5);
    if (config.initial_mean) start = map.to_unit(*config.initial_mean).cwiseMax(0.0).cwiseMin(1.0);

    Candidate best;
    best.cost = std::numeric_limits<double>::infinity();
    best.x = start;
    int evaluations = 0;
    for (int r = 0; r < config.restarts; ++r) {
        const auto seed = derive_seed(config.seed, {static_cast<std::uint64_t>(r)});
        const auto outcome = run_once(objective, map, start, config, seed);
        evaluations += outcome.evaluations;
        if (outcome.best.cost < best.cost) best = outcome.best;
    }
    if (!std::isfinite(best.cost)) {
        throw InfeasibleError("no feasible point found in any restart");
    }
    const auto p = map.to_box(best.x);
    return {p[0], p[1], p[2], best.cost, evaluations};
}

}  // namespace lppls
