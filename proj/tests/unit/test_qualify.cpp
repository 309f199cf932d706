#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "lppls/optimizer.hpp"
#include "lppls/qualify.hpp"
#include "lppls/synth.hpp"
#include "oracles.hpp"

using namespace lppls;

namespace {

FitResult exact_fit(const SynthSpec& spec, const Window& w) {
    FitResult f;
    f.window = w;
    f.params = spec.params;
    f.fitted = true;
    f.cost = 0.0;
    f.residuals.assign(w.size(), 0.0);
    return f;
}

std::vector<double> ar1_path(std::mt19937_64& rng, std::size_t n, double phi) {
    std::normal_distribution<double> N(0.0, 1.0);
    std::vector<double> e(n);
    double x = 0.0;
    for (auto& v : e) {
        x = phi * x + N(rng);
        v = x;
    }
    return e;
}

}  // namespace

TEST(FilterConfig, Validate) {
    FilterConfig c;
    EXPECT_NO_THROW(c.validate());
    c.ar1_alpha = 0.02;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.m = {0.9, 0.1};
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.lomb_alpha = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Bounds, InclusiveEdges) {
    FitResult f;
    f.window = {100, 200};
    f.params = {.tc = 220.0, .m = 0.01, .omega = 25.0};
    auto b = check_bounds(f, FilterConfig{});
    EXPECT_TRUE(b.m && b.omega && b.tc);
    f.params.tc = 220.0 + 1e-9;
    f.params.m = 0.0099;
    f.params.omega = 1.99;
    b = check_bounds(f, FilterConfig{});
    EXPECT_FALSE(b.m);
    EXPECT_FALSE(b.omega);
    EXPECT_FALSE(b.tc);
}

TEST(Oscillation, Formula) {
    FitResult f;
    f.window = {100, 300};
    f.params = {.tc = 320.0, .m = 0.5, .omega = 9.0};
    const auto o = oscillation_count(f, FilterConfig{});
    EXPECT_DOUBLE_EQ(o.value, 0.5 * 9.0 * std::log(220.0 / 20.0));
    EXPECT_TRUE(o.passed);
    FilterConfig pi_variant;
    pi_variant.oscillation_coefficient = 1.0 / std::numbers::pi;
    EXPECT_NEAR(oscillation_count(f, pi_variant).value,
                9.0 / std::numbers::pi * std::log(11.0), 1e-12);
    f.params.tc = 300.0;
    EXPECT_THROW(oscillation_count(f, FilterConfig{}), std::domain_error);
}

TEST(RelativeError, MatchesDirectComputation) {
    auto spec = paper_like();
    spec.noise_sigma = 0.02;
    const auto s = generate(spec);
    const Window w{100, 499};
    const auto f = exact_fit(spec, w);
    double worst = 0.0;
    for (std::size_t t = w.t1; t <= w.t2; ++t) {
        const double fitted = std::exp(lppls_eval(spec.params, static_cast<double>(t)));
        worst = std::max(worst, std::abs(fitted - s.close(t)) / s.close(t));
    }
    const auto r = max_relative_error(f, s, FilterConfig{});
    EXPECT_DOUBLE_EQ(r.value, worst);
    EXPECT_TRUE(r.passed);
}

TEST(Detrended, NoiselessIsPureOscillation) {
    const auto spec = paper_like();
    const auto s = generate(spec);
    const auto r = detrended_residuals(s, exact_fit(spec, Window{0, 499}));
    const auto& p = spec.params;
    for (std::size_t i = 0; i < r.value.size(); i += 37) {
        const double u = std::log(p.tc - static_cast<double>(i));
        EXPECT_NEAR(r.position[i], u, 1e-14);
        EXPECT_NEAR(r.value[i], p.C1 * std::cos(p.omega * u) + p.C2 * std::sin(p.omega * u), 1e-10);
    }
}

TEST(LombTest, NoiselessOscillationPasses) {
    const auto spec = paper_like();
    const auto s = generate(spec);
    const auto out = lomb_test(s, exact_fit(spec, Window{200, 499}), FilterConfig{});
    EXPECT_TRUE(out.passed);
    EXPECT_TRUE(out.frequency_consistent);
    EXPECT_NEAR(out.peak_omega, 9.0, 1.0);
}

TEST(LombTest, ZeroResidualsAreDegeneratePass) {
    const std::vector<double> u{1, 2, 3, 4, 5}, zero(5, 0.0);
    const auto out = lomb_test(u, zero, 9.0, FilterConfig{});
    EXPECT_TRUE(out.degenerate);
    EXPECT_TRUE(out.passed);
}

TEST(LombTest, WhiteNoiseRarelySignificant) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> N(0.0, 1.0);
    std::vector<double> u;
    for (int i = 0; i < 250; ++i) u.push_back(std::log(270.0 - i));
    int significant = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> y;
        for (std::size_t i = 0; i < u.size(); ++i) y.push_back(N(rng));
        significant += lomb_test(u, y, 9.0, FilterConfig{}).significant;
    }
    EXPECT_LE(significant, 25);
}

TEST(DickeyFuller, TableValues) {
    EXPECT_DOUBLE_EQ(df_critical_value(25, 0.01), -2.66);
    EXPECT_DOUBLE_EQ(df_critical_value(25, 0.05), -1.95);
    EXPECT_DOUBLE_EQ(df_critical_value(100, 0.10), -1.61);
    EXPECT_DOUBLE_EQ(df_critical_value(500, 0.01), -2.58);
    EXPECT_DOUBLE_EQ(df_critical_value(100000, 0.10), -1.62);
    EXPECT_DOUBLE_EQ(df_critical_value(10, 0.01), -2.66);  // clamps below the table
    const double mid = df_critical_value(75, 0.01);
    EXPECT_LT(mid, -2.60);
    EXPECT_GT(mid, -2.62);
    EXPECT_THROW(df_critical_value(100, 0.025), std::invalid_argument);
}

TEST(DickeyFuller, StatisticMatchesOls) {
    std::mt19937_64 rng(31);
    const auto e = ar1_path(rng, 300, 0.7);
    // Regress diff on lag through the origin with Eigen.
    Eigen::VectorXd x(299), y(299);
    for (int t = 1; t < 300; ++t) {
        x(t - 1) = e[static_cast<std::size_t>(t - 1)];
        y(t - 1) = e[static_cast<std::size_t>(t)] - e[static_cast<std::size_t>(t - 1)];
    }
    const double beta = x.dot(y) / x.dot(x);
    const double s2 = (y - beta * x).squaredNorm() / (299 - 1);
    const double tstat = beta / std::sqrt(s2 / x.dot(x));
    const auto out = ar1_test(e, 0.05);
    EXPECT_NEAR(out.slope, beta, 1e-12);
    EXPECT_NEAR(out.statistic, tstat, 1e-9);
    EXPECT_TRUE(out.passed);
}

TEST(DickeyFuller, PowerAndSize) {
    std::mt19937_64 rng(32);
    int mean_reverting = 0, random_walk = 0;
    for (int i = 0; i < 200; ++i) {
        mean_reverting += ar1_test(ar1_path(rng, 250, 0.5), 0.05).passed;
        random_walk += ar1_test(ar1_path(rng, 250, 1.0), 0.05).passed;
    }
    EXPECT_GE(mean_reverting, 190);
    EXPECT_LE(random_walk, 20);
}

TEST(DickeyFuller, ConstantResidualsAreDegeneratePass) {
    const std::vector<double> e(40, 1e-15);
    const auto out = ar1_test(e, 0.05);
    EXPECT_TRUE(out.degenerate);
    EXPECT_TRUE(out.passed);
    EXPECT_THROW(ar1_test(std::vector<double>(10, 0.0), 0.05), std::invalid_argument);
}

TEST(Qualify, NoiselessPositiveBubble) {
    const auto spec = paper_like();
    const auto s = generate(spec);
    const auto fit = calibrate(s, Window{250, 499}, OptimizerConfig{});
    const auto q = qualify(fit, s, FilterConfig{});
    EXPECT_TRUE(q.passed);
    EXPECT_TRUE(q.spectral_evaluated);
    EXPECT_EQ(q.bubble_sign, BubbleSign::positive);
}

TEST(Qualify, NegativeBubbleSign) {
    auto spec = paper_like();
    spec.params.B = -spec.params.B;
    spec.params.A = 6.0;
    const auto s = generate(spec);
    const auto q = qualify(exact_fit(spec, Window{250, 499}), s, FilterConfig{});
    EXPECT_TRUE(q.passed);
    EXPECT_EQ(q.bubble_sign, BubbleSign::negative);
}

TEST(Qualify, ZeroPowerLawDisqualifies) {
    auto spec = paper_like();
    spec.params.B = 0.0;
    const auto s = generate(spec);
    const auto q = qualify(exact_fit(spec, Window{250, 499}), s, FilterConfig{});
    EXPECT_EQ(q.bubble_sign, BubbleSign::none);
    EXPECT_FALSE(q.passed);
}

TEST(Qualify, SpectralTestsSkippedAfterCheapFailure) {
    const auto spec = paper_like();
    const auto s = generate(spec);
    // Window of 60 days: tc = t2 + 20 exceeds t2 + 0.2 * 59.
    const auto q = qualify(exact_fit(spec, Window{440, 499}), s, FilterConfig{});
    EXPECT_FALSE(q.tc_bound);
    EXPECT_FALSE(q.spectral_evaluated);
    EXPECT_FALSE(q.lomb_significance);
    EXPECT_FALSE(q.passed);
}

TEST(Qualify, UnfittedIsNotQualified) {
    const auto s = generate(paper_like());
    FitResult f;
    f.window = {0, 100};
    const auto q = qualify(f, s, FilterConfig{});
    EXPECT_FALSE(q.passed);
    EXPECT_EQ(q.bubble_sign, BubbleSign::none);
}

TEST(Qualify, RandomBubblesRoundTrip) {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 10; ++i) {
        const bool positive = i % 2 == 0;
        const auto spec = oracle::random_bubble(rng, 300, positive);
        const auto s = generate(spec);
        const auto q = qualify(exact_fit(spec, Window{0, 299}), s, FilterConfig{});
        EXPECT_TRUE(q.passed) << "bubble " << i;
        EXPECT_EQ(q.bubble_sign, positive ? BubbleSign::positive : BubbleSign::negative);
    }
}
