#pragma once

#include "causalstock/data/date.h"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace causalstock::data {

// One stock-day of raw prices and volume.
struct PriceRecord {
    Date date;
    double adj_close = 0.0;
    double high = 0.0;
    double low = 0.0;
    double open = 0.0;
    double close = 0.0;
    double volume = 0.0;

    // Encoder input order: adjusted close, high, low, open, close, volume.
    std::array<double, 6> features() const { return {adj_close, high, low, open, close, volume}; }
};

inline constexpr std::size_t kPriceFeatures = 6;

struct PriceSeries {
    std::string symbol;
    std::vector<PriceRecord> records;  // strictly increasing dates
};

enum class PriceFormat {
    Raw,    // date,adj_close,high,low,open,close,volume
    Acl18,  // date,movement_pct,open,high,low,close,volume
};

// How ACL18-style files obtain an adjusted close.
enum class AdjCloseMode {
    EqualClose,    // adj_close = close
    FromMovement,  // adj_close chained from movement_pct, anchored at the first close
};

struct RowIssue {
    std::size_t line = 0;
    std::string reason;
};

struct PriceLoadReport {
    std::vector<std::string> warnings;
};

inline constexpr const char* kRawPriceHeader = "date,adj_close,high,low,open,close,volume";
inline constexpr const char* kAcl18PriceHeader = "date,movement_pct,open,high,low,close,volume";

// Throws DataError (format error) when the header matches neither layout.
PriceFormat detect_price_format(const std::string& header_line);

// Parses a price CSV. `format` nullopt means detect from the header. Rows are
// validated (field count, numbers, high/low/volume invariants); all malformed
// rows are reported together with line numbers in one DataError. Duplicate or
// non-monotone dates are data errors. Descending files are reversed.
PriceSeries parse_prices(std::istream& in, const std::string& symbol, std::optional<PriceFormat> format,
                         AdjCloseMode adj_mode = AdjCloseMode::EqualClose, PriceLoadReport* report = nullptr);

PriceSeries load_prices(const std::filesystem::path& path, const std::string& symbol,
                        std::optional<PriceFormat> format, AdjCloseMode adj_mode = AdjCloseMode::EqualClose,
                        PriceLoadReport* report = nullptr);

// Writes the raw layout with round-trip precision.
void write_prices(const std::filesystem::path& path, const PriceSeries& series);

}  // namespace causalstock::data
