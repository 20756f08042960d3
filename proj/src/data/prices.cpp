#include "causalstock/data/prices.h"

#include "causalstock/data/text.h"
#include "causalstock/error.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace causalstock::data {

namespace {

constexpr double kTolerance = 1e-9;

bool consistent(const PriceRecord& r, std::string& why) {
    const double scale = std::max({1.0, std::abs(r.high), std::abs(r.low)}) * kTolerance;
    if (r.high + scale < std::max({r.open, r.close, r.low})) {
        why = "high below open/close/low";
        return false;
    }
    if (r.low - scale > std::min({r.open, r.close, r.high})) {
        why = "low above open/close/high";
        return false;
    }
    if (r.volume < 0) {
        why = "negative volume";
        return false;
    }
    return true;
}

}  // namespace

PriceFormat detect_price_format(const std::string& header_line) {
    std::string h = to_lower(trim(header_line));
    h.erase(std::remove_if(h.begin(), h.end(), [](unsigned char c) { return c == ' ' || c == '\t'; }), h.end());
    if (h == kRawPriceHeader) return PriceFormat::Raw;
    if (h == kAcl18PriceHeader) return PriceFormat::Acl18;
    throw DataError("unknown price header '" + trim(header_line) + "' (expected '" + kRawPriceHeader + "' or '" +
                    kAcl18PriceHeader + "')");
}

PriceSeries parse_prices(std::istream& in, const std::string& symbol, std::optional<PriceFormat> format,
                         AdjCloseMode adj_mode, PriceLoadReport* report) {
    PriceSeries series;
    series.symbol = symbol;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    PriceFormat fmt = PriceFormat::Raw;
    std::vector<RowIssue> issues;
    std::vector<double> movements;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (!have_header) {
            const PriceFormat detected = detect_price_format(line);
            if (format && *format != detected) {
                throw DataError(fmt::format("{}: header on line {} does not match the requested price format", symbol,
                                            line_no));
            }
            fmt = detected;
            have_header = true;
            continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 7) {
            issues.push_back({line_no, fmt::format("expected 7 fields, found {}", fields.size())});
            continue;
        }
        PriceRecord r;
        try {
            r.date = parse_date(trim(fields[0]));
        } catch (const DataError& e) {
            issues.push_back({line_no, e.what()});
            continue;
        }
        std::array<double, 6> v{};
        bool ok = true;
        for (std::size_t k = 0; k < 6; ++k) {
            if (!parse_double(trim(fields[k + 1]), v[k]) || !std::isfinite(v[k])) {
                issues.push_back({line_no, fmt::format("field {} is not a finite number", k + 2)});
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        double movement = 0.0;
        if (fmt == PriceFormat::Raw) {
            r.adj_close = v[0];
            r.high = v[1];
            r.low = v[2];
            r.open = v[3];
            r.close = v[4];
            r.volume = v[5];
        } else {
            movement = v[0];
            r.open = v[1];
            r.high = v[2];
            r.low = v[3];
            r.close = v[4];
            r.volume = v[5];
            r.adj_close = r.close;
        }
        std::string why;
        if (!consistent(r, why)) {
            issues.push_back({line_no, why});
            continue;
        }
        series.records.push_back(r);
        movements.push_back(movement);
    }

    if (!issues.empty()) {
        std::string msg = fmt::format("{}: {} malformed price row(s):", symbol, issues.size());
        for (const auto& i : issues) msg += fmt::format(" line {} ({});", i.line, i.reason);
        throw DataError(msg);
    }
    if (series.records.empty()) {
        if (report) report->warnings.push_back(symbol + ": price file has no rows");
        return series;
    }

    auto& recs = series.records;
    bool ascending = true;
    bool descending = true;
    for (std::size_t k = 1; k < recs.size(); ++k) {
        if (recs[k].date == recs[k - 1].date) {
            throw DataError(symbol + ": duplicated date " + format_date(recs[k].date));
        }
        if (recs[k].date < recs[k - 1].date) ascending = false;
        if (recs[k].date > recs[k - 1].date) descending = false;
    }
    if (!ascending && !descending) throw DataError(symbol + ": dates are not monotone");
    if (!ascending) {
        std::reverse(recs.begin(), recs.end());
        std::reverse(movements.begin(), movements.end());
    }

    if (fmt == PriceFormat::Acl18 && adj_mode == AdjCloseMode::FromMovement) {
        for (std::size_t k = 1; k < recs.size(); ++k) {
            recs[k].adj_close = recs[k - 1].adj_close * (1.0 + movements[k]);
        }
    }
    for (const auto& r : recs) {
        if (!(r.adj_close > 0)) throw DataError(symbol + ": non-positive adjusted close on " + format_date(r.date));
    }
    return series;
}

PriceSeries load_prices(const std::filesystem::path& path, const std::string& symbol,
                        std::optional<PriceFormat> format, AdjCloseMode adj_mode, PriceLoadReport* report) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open price file " + path.string());
    return parse_prices(in, symbol, format, adj_mode, report);
}

void write_prices(const std::filesystem::path& path, const PriceSeries& series) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write price file " + path.string());
    out << kRawPriceHeader << '\n';
    for (const auto& r : series.records) {
        out << fmt::format("{},{},{},{},{},{},{}\n", format_date(r.date), r.adj_close, r.high, r.low, r.open, r.close,
                           r.volume);
    }
}

}  // namespace causalstock::data
