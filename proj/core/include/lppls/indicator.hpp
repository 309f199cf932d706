#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "lppls/cma_es.hpp"
#include "lppls/date.hpp"
#include "lppls/fit_result.hpp"
#include "lppls/qualify.hpp"
#include "lppls/timeseries.hpp"

namespace lppls {

struct ScanConfig {
    int max_window = 650;  ///< trading days
    int min_window = 30;
    int window_step = 5;
    std::optional<Date> endpoint_start;  ///< defaults to the first usable date
    std::optional<Date> endpoint_end;    ///< defaults to the last date
    OptimizerConfig optimizer;
    FilterConfig filters;

    /// floor((max_window - min_window) / window_step) + 1
    int windows_per_endpoint() const;

    void validate() const;
};

struct WindowPlan {
    std::vector<Window> windows;
    bool short_history = false;  ///< some windows would start before the data
};

/// Windows ending at `endpoint_index` with lengths max_window, max_window -
/// step, ... down to min_window, longest first. Windows that would start
/// before index 0 are dropped and flagged. Throws DataError when not even the
/// shortest window fits.
WindowPlan enumerate_windows(std::size_t endpoint_index, const ScanConfig& cfg);

struct ConfidencePoint {
    Date endpoint_date;
    double positive_ci = 0.0;
    double negative_ci = 0.0;
    int windows_total = 0;
    int windows_fitted = 0;
    int qualified_positive = 0;
    int qualified_negative = 0;
    bool short_history = false;
};

/// A qualified fit tagged with the endpoint whose scan produced it.
struct FitRecord {
    Date endpoint_date;
    FitResult fit;
};

struct ScanResult {
    std::vector<ConfidencePoint> points;
    std::vector<FitRecord> fits;  ///< qualified fits, ordered by (endpoint, window)
};

/// Seed for one window: a fixed mix of (base seed, t2, window length).
std::uint64_t window_seed(std::uint64_t base, std::size_t t2, std::size_t length);

/// Confidence indicators at one endpoint. Reads only data up to the endpoint.
ConfidencePoint confidence_at(const PriceSeries& series, Date endpoint, const ScanConfig& cfg,
                              unsigned workers = 1);

/// One ConfidencePoint per trading day in [endpoint_start, endpoint_end].
/// Every (endpoint, window) pair is an independent task; results are merged
/// by task index so any worker count yields identical output.
ScanResult scan(const PriceSeries& series, const ScanConfig& cfg, unsigned workers = 1);

}  // namespace lppls
