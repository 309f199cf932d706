#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "lppls/date.hpp"

namespace lppls {

/// Daily closing prices on a dense trading-day index 0..N-1.
///
/// Immutable after construction. The constructor enforces strictly
/// increasing dates and strictly positive closes; log closes are cached.
class PriceSeries {
public:
    PriceSeries(std::vector<Date> dates, std::vector<double> closes);

    std::size_t size() const { return closes_.size(); }

    std::span<const Date> dates() const { return dates_; }
    std::span<const double> closes() const { return closes_; }
    std::span<const double> log_closes() const { return log_closes_; }

    Date date(std::size_t i) const { return dates_.at(i); }
    double close(std::size_t i) const { return closes_.at(i); }
    double log_close(std::size_t i) const { return log_closes_.at(i); }

    Date front_date() const { return dates_.front(); }
    Date back_date() const { return dates_.back(); }

    friend bool operator==(const PriceSeries&, const PriceSeries&) = default;

private:
    std::vector<Date> dates_;
    std::vector<double> closes_;
    std::vector<double> log_closes_;
};

enum class RowPolicy { strict, skip };

struct CsvOptions {
    /// Price column; empty selects "Adj Close" when present, else "Close".
    std::string column;
    RowPolicy policy = RowPolicy::strict;
};

/// Loads a comma-delimited file with a "Date" column. Throws DataError.
PriceSeries load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Writes "Date,<column>" rows with round-trip precision.
void write_csv(const PriceSeries& series, const std::filesystem::path& path,
               const std::string& column = "Close");

enum class DateMatch {
    exact,  ///< the date must be a trading date of the series
    next,   ///< first trading date on or after the requested date
};

std::size_t date_to_index(const PriceSeries& series, Date d, DateMatch match = DateMatch::exact);

struct FractionalDate {
    Date date;
    double fraction = 0.0;  ///< in [0, 1): part of a trading day past `date`
};

/// Maps a real trading-day position to a calendar date. Positions past the
/// last observation advance on a Monday-Friday calendar.
FractionalDate index_to_fractional_date(const PriceSeries& series, double position);

struct CrashStats {
    Date peak_date;
    double peak_price = 0.0;
    Date valley_date;
    double valley_price = 0.0;
    double crash_size = 0.0;
};

/// Peak = highest close in [start, end]; valley = lowest close after the peak.
CrashStats crash_stats(const PriceSeries& series, Date start, Date end);

}  // namespace lppls
