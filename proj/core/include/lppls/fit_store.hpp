#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "lppls/fit_result.hpp"
#include "lppls/indicator.hpp"
#include "lppls/timeseries.hpp"

namespace lppls {

nlohmann::json report_to_json(const QualificationReport& report);

/// Single-fit document: window, parameters, tc date, cost, seed, filters.
nlohmann::json fit_to_json(const FitResult& fit, const PriceSeries& series);

/// One fit-store line (adds endpoint_date to fit_to_json).
nlohmann::json record_to_json(const FitRecord& record, const PriceSeries& series);

/// Inverse of record_to_json. Residuals are not stored and come back empty.
FitRecord record_from_json(const nlohmann::json& j);

void write_fit_store(const std::filesystem::path& path, std::span<const FitRecord> records,
                     const PriceSeries& series);

/// Reads a JSON-lines store. When `series` is given, each record's dates are
/// checked against its trading-day indices. Throws DataError.
std::vector<FitRecord> read_fit_store(const std::filesystem::path& path,
                                      const PriceSeries* series = nullptr);

void write_indicator_csv(const std::filesystem::path& path, std::span<const ConfidencePoint> rows);
void write_indicator_json(const std::filesystem::path& path,
                          std::span<const ConfidencePoint> rows);

/// Fixed-precision formatting used by every CSV writer.
std::string format_fixed(double value, int digits);

}  // namespace lppls
