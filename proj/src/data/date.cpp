#include "causalstock/data/date.h"

#include "causalstock/error.h"

#include <charconv>
#include <cstdio>

namespace causalstock::data {

namespace {

bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    for (std::size_t k = pos; k < pos + len; ++k) {
        if (s[k] < '0' || s[k] > '9') return false;
    }
    auto res = std::from_chars(s.data() + pos, s.data() + pos + len, out);
    return res.ec == std::errc();
}

Date parse_date_prefix(std::string_view text, std::string_view whole) {
    int y = 0, m = 0, d = 0;
    if (text.size() < 10 || text[4] != '-' || text[7] != '-' || !read_int(text, 0, 4, y) ||
        !read_int(text, 5, 2, m) || !read_int(text, 8, 2, d)) {
        throw DataError("invalid date '" + std::string(whole) + "' (expected YYYY-MM-DD)");
    }
    Date date{std::chrono::year(y), std::chrono::month(static_cast<unsigned>(m)),
              std::chrono::day(static_cast<unsigned>(d))};
    if (!date.ok()) throw DataError("invalid calendar date '" + std::string(whole) + "'");
    return date;
}

}  // namespace

Date parse_date(std::string_view text) {
    if (text.size() != 10) throw DataError("invalid date '" + std::string(text) + "' (expected YYYY-MM-DD)");
    return parse_date_prefix(text, text);
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                  static_cast<unsigned>(d.day()));
    return buf;
}

Timestamp parse_timestamp(std::string_view text) {
    const Date date = parse_date_prefix(text, text);
    Timestamp ts{std::chrono::sys_days(date)};
    if (text.size() == 10) return ts;
    auto bad = [&] { return DataError("invalid RFC 3339 timestamp '" + std::string(text) + "'"); };
    if (text[10] != 'T' && text[10] != 't' && text[10] != ' ') throw bad();
    int hh = 0, mm = 0, ss = 0;
    if (text.size() < 19 || text[13] != ':' || text[16] != ':' || !read_int(text, 11, 2, hh) ||
        !read_int(text, 14, 2, mm) || !read_int(text, 17, 2, ss) || hh > 23 || mm > 59 || ss > 60) {
        throw bad();
    }
    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    }
    if (pos >= text.size()) throw bad();
    int offset_minutes = 0;
    if (text[pos] == 'Z' || text[pos] == 'z') {
        if (pos + 1 != text.size()) throw bad();
    } else if (text[pos] == '+' || text[pos] == '-') {
        int oh = 0, om = 0;
        if (pos + 6 != text.size() || text[pos + 3] != ':' || !read_int(text, pos + 1, 2, oh) ||
            !read_int(text, pos + 4, 2, om)) {
            throw bad();
        }
        offset_minutes = (text[pos] == '+' ? 1 : -1) * (oh * 60 + om);
    } else {
        throw bad();
    }
    ts += std::chrono::hours(hh) + std::chrono::minutes(mm) + std::chrono::seconds(ss);
    ts -= std::chrono::minutes(offset_minutes);
    return ts;
}

std::string format_timestamp(Timestamp ts) {
    const auto day = std::chrono::floor<std::chrono::days>(ts);
    const auto secs = (ts - day).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, "%sT%02lld:%02lld:%02lldZ", format_date(Date{day}).c_str(),
                  static_cast<long long>(secs / 3600), static_cast<long long>((secs / 60) % 60),
                  static_cast<long long>(secs % 60));
    return buf;
}

Date utc_date(Timestamp ts) {
    return Date{std::chrono::floor<std::chrono::days>(ts)};
}

}  // namespace causalstock::data
