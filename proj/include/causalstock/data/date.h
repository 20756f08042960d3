#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace causalstock::data {

using Date = std::chrono::year_month_day;
using Timestamp = std::chrono::sys_seconds;

// Strict YYYY-MM-DD. Throws DataError on anything else.
Date parse_date(std::string_view text);
std::string format_date(const Date& d);

// RFC 3339 date-time, e.g. 2015-10-01T14:30:00Z or 2015-10-01T09:30:00-05:00.
// A bare date is accepted as midnight UTC.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);

Date utc_date(Timestamp ts);

inline int days_between(const Date& a, const Date& b) {
    return static_cast<int>((std::chrono::sys_days(b) - std::chrono::sys_days(a)).count());
}

}  // namespace causalstock::data
