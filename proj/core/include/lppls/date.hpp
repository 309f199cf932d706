#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace lppls {

using Date = std::chrono::year_month_day;

/// Parses an ISO-8601 calendar date (YYYY-MM-DD). Throws DataError.
Date parse_date(std::string_view text);

std::string format_date(Date d);

bool is_weekday(Date d);

Date add_days(Date d, long days);

/// Moves forward n Monday-Friday days. Holidays are not modelled.
Date add_business_days(Date d, long n);

}  // namespace lppls
