#include <benchmark/benchmark.h>

#include <random>

#include "lppls/lomb.hpp"
#include "lppls/model.hpp"
#include "lppls/optimizer.hpp"
#include "lppls/postmortem.hpp"
#include "lppls/qualify.hpp"
#include "lppls/synth.hpp"

using namespace lppls;

namespace {

const PriceSeries& noisy_bubble() {
    static const PriceSeries s = [] {
        auto spec = paper_like();
        spec.n_days = 700;
        spec.params.tc = 720.0;
        spec.noise_sigma = 0.01;
        return generate(spec);
    }();
    return s;
}

Window tail_window(std::int64_t len) {
    const auto n = noisy_bubble().size();
    return {n - static_cast<std::size_t>(len), n - 1};
}

}  // namespace

static void BM_WindowCost(benchmark::State& state) {
    const auto w = tail_window(state.range(0));
    WindowCost cost(noisy_bubble(), w);
    const double tc = static_cast<double>(w.t2) + 20.0;
    for (auto _ : state) benchmark::DoNotOptimize(cost(tc, 0.5, 9.0));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_WindowCost)->Arg(30)->Arg(250)->Arg(650);

static void BM_SolveLinear(benchmark::State& state) {
    const auto w = tail_window(state.range(0));
    const double tc = static_cast<double>(w.t2) + 20.0;
    for (auto _ : state) benchmark::DoNotOptimize(solve_linear(noisy_bubble(), w, tc, 0.5, 9.0));
}
BENCHMARK(BM_SolveLinear)->Arg(250)->Arg(650);

static void BM_Calibrate(benchmark::State& state) {
    const auto w = tail_window(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(calibrate(noisy_bubble(), w, OptimizerConfig{}));
}
BENCHMARK(BM_Calibrate)->Arg(30)->Arg(250)->Arg(650)->Unit(benchmark::kMillisecond);

static void BM_Qualify(benchmark::State& state) {
    const auto w = tail_window(state.range(0));
    const auto fit = calibrate(noisy_bubble(), w, OptimizerConfig{});
    for (auto _ : state) benchmark::DoNotOptimize(qualify(fit, noisy_bubble(), FilterConfig{}));
}
BENCHMARK(BM_Qualify)->Arg(250)->Arg(650)->Unit(benchmark::kMicrosecond);

static void BM_Lomb(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> N(0.0, 1.0);
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<double> u, y;
    for (std::size_t i = 0; i < n; ++i) {
        u.push_back(std::log(static_cast<double>(n + 20 - i)));
        y.push_back(N(rng));
    }
    for (auto _ : state) benchmark::DoNotOptimize(lomb_periodogram(u, y, 4));
}
BENCHMARK(BM_Lomb)->Arg(250)->Arg(650)->Unit(benchmark::kMicrosecond);

static void BM_Kde(benchmark::State& state) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> N(500.0, 20.0);
    std::vector<double> v(static_cast<std::size_t>(state.range(0)));
    for (auto& x : v) x = N(rng);
    for (auto _ : state) benchmark::DoNotOptimize(estimate_density(v));
}
BENCHMARK(BM_Kde)->Arg(100)->Arg(1000)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
