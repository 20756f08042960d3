#pragma once

#include "causalstock/data/labels.h"
#include "causalstock/data/panel.h"
#include "causalstock/data/prices.h"
#include "causalstock/data/text.h"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace causalstock::data {

// Dataset manifest (plain-text key = value):
//
//   symbols       = AAPL, GOOG, META
//   price_dir     = prices            # <price_dir>/<symbol>.csv
//   price.AAPL    = other/aapl.csv    # optional per-symbol override
//   price_format  = auto | raw | acl18
//   adj_close     = close | movement  # acl18 only
//   news          = news.jsonl        # optional raw news items
//   scores        = scores.jsonl      # optional score cache
//   market_values = market_values.csv # optional
//   valid_start   = 2015-08-03
//   test_start    = 2015-10-01
//   label_mode    = strict | threshold
//   rise_threshold = 0.0055
//   fall_threshold = -0.005
//   calendar      = intersection | union_ffill | union_drop
//
// Relative paths resolve against the manifest's directory.
struct Manifest {
    std::filesystem::path base_dir;
    std::vector<std::string> symbols;
    std::map<std::string, std::filesystem::path> price_files;
    std::optional<PriceFormat> price_format;
    AdjCloseMode adj_close = AdjCloseMode::EqualClose;
    std::optional<std::filesystem::path> news_file;
    std::optional<std::filesystem::path> scores_file;
    std::optional<std::filesystem::path> market_values_file;
    SplitDates splits;
    LabelMode label_mode;
    CalendarPolicy calendar = CalendarPolicy::Intersection;
    KeyValueFile source;

    static Manifest parse(const KeyValueFile& kv, const std::filesystem::path& base_dir);
    static Manifest load(const std::filesystem::path& path);

    // Accepts a manifest file or a directory holding manifest.txt.
    static std::filesystem::path resolve(const std::filesystem::path& file_or_dir);
};

std::vector<PriceSeries> load_all_prices(const Manifest& m, std::vector<std::string>* warnings = nullptr);

}  // namespace causalstock::data
