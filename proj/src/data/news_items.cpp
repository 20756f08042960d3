#include "causalstock/data/news_items.h"

#include "causalstock/data/text.h"
#include "causalstock/error.h"

#include <fstream>

#include <nlohmann/json.hpp>

namespace causalstock::data {

std::vector<NewsItem> parse_news(std::istream& in, NewsLoadReport* report) {
    std::vector<NewsItem> items;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        NewsItem item;
        try {
            const auto j = nlohmann::json::parse(line);
            item.symbol = j.at("symbol").get<std::string>();
            item.published_text = j.at("timestamp").get<std::string>();
            item.text = j.at("text").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw DataError("news line " + std::to_string(line_no) + ": " + e.what());
        }
        try {
            item.published = parse_timestamp(item.published_text);
        } catch (const DataError& e) {
            throw DataError("news line " + std::to_string(line_no) + ": " + e.what());
        }
        if (trim(item.text).empty()) {
            if (report) report->warnings.push_back("news line " + std::to_string(line_no) + ": empty text skipped");
            continue;
        }
        if (trim(item.symbol).empty()) throw DataError("news line " + std::to_string(line_no) + ": empty symbol");
        items.push_back(std::move(item));
    }
    return items;
}

std::vector<NewsItem> load_news(const std::filesystem::path& path, NewsLoadReport* report) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open news file " + path.string());
    return parse_news(in, report);
}

void write_news(const std::filesystem::path& path, const std::vector<NewsItem>& items) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write news file " + path.string());
    for (const auto& item : items) {
        nlohmann::json j;
        j["symbol"] = item.symbol;
        j["timestamp"] = item.published_text.empty() ? format_timestamp(item.published) : item.published_text;
        j["text"] = item.text;
        out << j.dump() << '\n';
    }
}

}  // namespace causalstock::data
