#include "lppls/indicator.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

#include "lppls/errors.hpp"
#include "lppls/optimizer.hpp"
#include "lppls/seed.hpp"

namespace lppls {

namespace {

struct EndpointSlot {
    std::size_t index = 0;
    WindowPlan plan;
    bool too_early = false;
};

struct Task {
    std::size_t slot = 0;
    Window window;
};

FitResult run_task(const PriceSeries& series, const Window& w, const ScanConfig& cfg) {
    OptimizerConfig opt = cfg.optimizer;
    opt.seed = window_seed(cfg.optimizer.seed, w.t2, w.size());
    FitResult fit = calibrate(series, w, opt);
    fit.qualification = qualify(fit, series, cfg.filters);
    fit.residuals.clear();
    fit.residuals.shrink_to_fit();
    return fit;
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count && !failed; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        if (!failed.exchange(true)) failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

int ScanConfig::windows_per_endpoint() const {
    return (max_window - min_window) / window_step + 1;
}

void ScanConfig::validate() const {
    if (min_window < 30) throw std::invalid_argument("min_window must be >= 30");
    if (max_window < min_window) throw std::invalid_argument("max_window must be >= min_window");
    if (window_step < 1) throw std::invalid_argument("window_step must be >= 1");
    optimizer.validate();
    filters.validate();
}

WindowPlan enumerate_windows(std::size_t endpoint_index, const ScanConfig& cfg) {
    cfg.validate();
    WindowPlan plan;
    for (int len = cfg.max_window; len >= cfg.min_window; len -= cfg.window_step) {
        const auto length = static_cast<std::size_t>(len);
        if (length > endpoint_index + 1) {
            plan.short_history = true;
            continue;
        }
        plan.windows.push_back({endpoint_index + 1 - length, endpoint_index});
    }
    if (plan.windows.empty()) {
        throw DataError("endpoint too early for a " + std::to_string(cfg.min_window) +
                        "-day window");
    }
    return plan;
}

std::uint64_t window_seed(std::uint64_t base, std::size_t t2, std::size_t length) {
    return derive_seed(base, {static_cast<std::uint64_t>(t2), static_cast<std::uint64_t>(length)});
}

ScanResult scan(const PriceSeries& series, const ScanConfig& cfg, unsigned workers) {
    cfg.validate();
    ScanResult result;

    const auto dates = series.dates();
    std::size_t first = static_cast<std::size_t>(cfg.min_window - 1);
    if (cfg.endpoint_start) {
        const auto it = std::lower_bound(dates.begin(), dates.end(), *cfg.endpoint_start);
        first = static_cast<std::size_t>(it - dates.begin());
    }
    std::size_t stop = series.size();  // exclusive
    if (cfg.endpoint_end) {
        const auto it = std::upper_bound(dates.begin(), dates.end(), *cfg.endpoint_end);
        stop = static_cast<std::size_t>(it - dates.begin());
    }
    if (first >= stop) return result;

    std::vector<EndpointSlot> slots;
    std::vector<Task> tasks;
    for (std::size_t e = first; e < stop; ++e) {
        EndpointSlot slot;
        slot.index = e;
        if (e + 1 < static_cast<std::size_t>(cfg.min_window)) {
            slot.too_early = true;
        } else {
            slot.plan = enumerate_windows(e, cfg);
            for (const auto& w : slot.plan.windows) tasks.push_back({slots.size(), w});
        }
        slots.push_back(std::move(slot));
    }

    std::vector<FitResult> fits(tasks.size());
    parallel_for(tasks.size(), workers,
                 [&](std::size_t i) { fits[i] = run_task(series, tasks[i].window, cfg); });

    result.points.reserve(slots.size());
    for (const auto& slot : slots) {
        ConfidencePoint point;
        point.endpoint_date = series.date(slot.index);
        point.short_history = slot.too_early || slot.plan.short_history;
        point.windows_total = static_cast<int>(slot.plan.windows.size());
        result.points.push_back(point);
    }
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        auto& point = result.points[tasks[i].slot];
        auto& fit = fits[i];
        if (fit.fitted) ++point.windows_fitted;
        if (!fit.qualified()) continue;
        if (fit.qualification->bubble_sign == BubbleSign::positive) ++point.qualified_positive;
        if (fit.qualification->bubble_sign == BubbleSign::negative) ++point.qualified_negative;
        result.fits.push_back({point.endpoint_date, std::move(fit)});
    }
    for (auto& point : result.points) {
        if (point.windows_total > 0) {
            point.positive_ci = static_cast<double>(point.qualified_positive) / point.windows_total;
            point.negative_ci = static_cast<double>(point.qualified_negative) / point.windows_total;
        }
    }
    return result;
}

ConfidencePoint confidence_at(const PriceSeries& series, Date endpoint, const ScanConfig& cfg,
                              unsigned workers) {
    const std::size_t index = date_to_index(series, endpoint, DateMatch::exact);
    enumerate_windows(index, cfg);  // throws for endpoints without history
    ScanConfig one = cfg;
    one.endpoint_start = endpoint;
    one.endpoint_end = endpoint;
    return scan(series, one, workers).points.front();
}

}  // namespace lppls
