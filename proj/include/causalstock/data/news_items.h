#pragma once

#include "causalstock/data/date.h"
#include "causalstock/news/score.h"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace causalstock::data {

struct NewsItem {
    std::string symbol;
    Timestamp published;
    std::string published_text;  // as given in the source, used in prompts and cache keys
    std::string text;
};

// A news item after scoring, as consumed by the encoders.
struct ScoredNews {
    std::string symbol;
    Timestamp published;
    news::NewsScore score;
};

struct NewsLoadReport {
    std::vector<std::string> warnings;
};

// JSONL with keys symbol, timestamp (RFC 3339), text. Items whose text is
// empty after trimming are skipped with a warning; malformed lines are data
// errors carrying the line number.
std::vector<NewsItem> parse_news(std::istream& in, NewsLoadReport* report = nullptr);
std::vector<NewsItem> load_news(const std::filesystem::path& path, NewsLoadReport* report = nullptr);
void write_news(const std::filesystem::path& path, const std::vector<NewsItem>& items);

}  // namespace causalstock::data
