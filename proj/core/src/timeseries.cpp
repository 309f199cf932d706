#include "lppls/timeseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>

#include "lppls/errors.hpp"

namespace lppls {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

// RFC-4180 style split of one line; doubled quotes inside a quoted field
// collapse to a single quote.
std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(trim(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(trim(current));
    return fields;
}

std::optional<double> parse_price(const std::string& text) {
    if (text.empty()) return std::nullopt;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

}  // namespace

PriceSeries::PriceSeries(std::vector<Date> dates, std::vector<double> closes)
    : dates_(std::move(dates)), closes_(std::move(closes)) {
    if (dates_.size() != closes_.size()) {
        throw DataError("dates and closes differ in length");
    }
    if (closes_.empty()) {
        throw DataError("empty price series");
    }
    log_closes_.reserve(closes_.size());
    for (std::size_t i = 0; i < closes_.size(); ++i) {
        if (!(closes_[i] > 0.0) || !std::isfinite(closes_[i])) {
            throw DataError("non-positive price on " + format_date(dates_[i]));
        }
        if (i > 0 && !(dates_[i - 1] < dates_[i])) {
            throw DataError("dates not strictly increasing at " + format_date(dates_[i]));
        }
        log_closes_.push_back(std::log(closes_[i]));
    }
}

PriceSeries load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("file not found: " + path.string());
    }

    std::string line;
    if (!std::getline(in, line)) {
        throw DataError("malformed header: empty file " + path.string());
    }
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    const auto header = split_csv_line(line);

    auto find_column = [&](std::string_view name) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };

    const auto date_col = find_column("Date");
    if (!date_col) {
        throw DataError("malformed header: no 'Date' column in " + path.string());
    }
    std::optional<std::size_t> price_col;
    if (!options.column.empty()) {
        price_col = find_column(options.column);
        if (!price_col) {
            throw DataError("malformed header: no '" + options.column + "' column in " +
                            path.string());
        }
    } else {
        price_col = find_column("Adj Close");
        if (!price_col) price_col = find_column("Close");
        if (!price_col) {
            throw DataError("malformed header: neither 'Adj Close' nor 'Close' in " +
                            path.string());
        }
    }

    std::vector<Date> dates;
    std::vector<double> closes;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        const auto where = path.filename().string() + ":" + std::to_string(line_no);
        if (fields.size() <= std::max(*date_col, *price_col)) {
            if (options.policy == RowPolicy::skip) continue;
            throw DataError("missing price at " + where);
        }
        const Date d = parse_date(fields[*date_col]);
        const auto price = parse_price(fields[*price_col]);
        if (!price) {
            if (options.policy == RowPolicy::skip) continue;
            throw DataError("unparseable price '" + fields[*price_col] + "' at " + where);
        }
        if (!(*price > 0.0)) {
            if (options.policy == RowPolicy::skip) continue;
            throw DataError("non-positive price at " + where);
        }
        if (!dates.empty() && !(dates.back() < d)) {
            throw DataError("non-monotone dates at " + where);
        }
        dates.push_back(d);
        closes.push_back(*price);
    }
    if (closes.empty()) {
        throw DataError("empty series after filtering: " + path.string());
    }
    return PriceSeries(std::move(dates), std::move(closes));
}

void write_csv(const PriceSeries& series, const std::filesystem::path& path,
               const std::string& column) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write " + path.string());
    }
    out << "Date," << column << '\n';
    char buf[64];
    for (std::size_t i = 0; i < series.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", series.close(i));
        out << format_date(series.date(i)) << ',' << buf << '\n';
    }
}

std::size_t date_to_index(const PriceSeries& series, Date d, DateMatch match) {
    const auto dates = series.dates();
    const auto it = std::lower_bound(dates.begin(), dates.end(), d);
    if (it == dates.end()) {
        throw DataError("date " + format_date(d) + " is beyond the series range");
    }
    if (match == DateMatch::exact && *it != d) {
        throw DataError("date " + format_date(d) + " is not a trading date of the series");
    }
    return static_cast<std::size_t>(it - dates.begin());
}

FractionalDate index_to_fractional_date(const PriceSeries& series, double position) {
    if (!(position >= 0.0)) {
        throw std::invalid_argument("trading-day position must be >= 0");
    }
    const double whole = std::floor(position);
    const double fraction = position - whole;
    const auto last = static_cast<double>(series.size() - 1);
    if (whole <= last) {
        return {series.date(static_cast<std::size_t>(whole)), fraction};
    }
    const auto ahead = static_cast<long>(whole - last);
    return {add_business_days(series.back_date(), ahead), fraction};
}

CrashStats crash_stats(const PriceSeries& series, Date start, Date end) {
    const std::size_t lo = date_to_index(series, start, DateMatch::next);
    const auto dates = series.dates();
    const auto end_it = std::upper_bound(dates.begin(), dates.end(), end);
    const auto hi = static_cast<std::size_t>(end_it - dates.begin());  // exclusive
    if (hi < lo + 2) {
        throw DataError("crash window needs at least two trading days");
    }
    std::size_t peak = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
        if (series.close(i) > series.close(peak)) peak = i;
    }
    if (peak + 1 >= hi) {
        throw DataError("no post-peak valley: the window closes at its maximum");
    }
    std::size_t valley = peak + 1;
    for (std::size_t i = peak + 2; i < hi; ++i) {
        if (series.close(i) < series.close(valley)) valley = i;
    }
    CrashStats stats;
    stats.peak_date = series.date(peak);
    stats.peak_price = series.close(peak);
    stats.valley_date = series.date(valley);
    stats.valley_price = series.close(valley);
    stats.crash_size = (stats.peak_price - stats.valley_price) / stats.peak_price;
    return stats;
}

}  // namespace lppls
