#pragma once

#include "causalstock/news/score.h"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace causalstock::news {

inline constexpr const char* kCacheFormat = "1";

struct CacheEntry {
    std::string key;
    std::string symbol;
    std::string ts;  // canonical publish time
    NewsScore scores;
    std::string model;
    std::string prompt_version;
    std::string retrieved_at;
    bool fallback = false;  // neutral score after every attempt failed

    friend bool operator==(const CacheEntry&, const CacheEntry&) = default;
};

// Hex SHA-256 over the unit-separated fields.
// Lower-case hex SHA-256.
std::string sha256_hex(std::string_view bytes);

std::string cache_key(std::string_view symbol, std::string_view text, std::string_view ts,
                      std::string_view prompt_version);

// Thread-safe score store. Reads may run concurrently; writes are serialized.
class ScoreCache {
public:
    ScoreCache() = default;
    ScoreCache(const ScoreCache& other);
    ScoreCache& operator=(const ScoreCache& other);

    std::optional<CacheEntry> find(const std::string& key) const;
    void put(CacheEntry entry);
    std::size_t size() const;
    // Sorted by key.
    std::vector<CacheEntry> entries() const;

    friend bool operator==(const ScoreCache& a, const ScoreCache& b) { return a.entries() == b.entries(); }

private:
    mutable std::shared_mutex mutex_;
    std::map<std::string, CacheEntry> entries_;
};

// JSONL with a leading "# causalstock-score-cache ..." comment line.
void export_scores(const ScoreCache& cache, std::ostream& out, std::string_view prompt_version);
void export_scores(const ScoreCache& cache, const std::filesystem::path& path, std::string_view prompt_version);

// Rejects files written for another format or prompt version.
ScoreCache import_scores(std::istream& in, std::string_view prompt_version);
ScoreCache import_scores(const std::filesystem::path& path, std::string_view prompt_version);

}  // namespace causalstock::news
