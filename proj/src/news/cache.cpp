#include "causalstock/news/cache.h"

#include "causalstock/data/text.h"
#include "causalstock/error.h"

#include <fstream>
#include <mutex>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

namespace causalstock::news {

namespace {

constexpr std::string_view kHeaderTag = "# causalstock-score-cache";

std::string header_field(const std::string& line, const std::string& name) {
    const std::string needle = name + "=";
    const auto pos = line.find(needle);
    if (pos == std::string::npos) return {};
    const auto start = pos + needle.size();
    const auto end = line.find(' ', start);
    return line.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw DataError("SHA-256 digest failed");
    }
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int k = 0; k < len; ++k) hex += fmt::format("{:02x}", digest[k]);
    return hex;
}

std::string cache_key(std::string_view symbol, std::string_view text, std::string_view ts,
                      std::string_view prompt_version) {
    std::string payload;
    payload.reserve(symbol.size() + text.size() + ts.size() + prompt_version.size() + 3);
    payload.append(symbol).append(1, '\x1f').append(text).append(1, '\x1f').append(ts).append(1, '\x1f');
    payload.append(prompt_version);
    return sha256_hex(payload);
}

ScoreCache::ScoreCache(const ScoreCache& other) {
    std::shared_lock lock(other.mutex_);
    entries_ = other.entries_;
}

ScoreCache& ScoreCache::operator=(const ScoreCache& other) {
    if (this == &other) return *this;
    std::map<std::string, CacheEntry> copy;
    {
        std::shared_lock lock(other.mutex_);
        copy = other.entries_;
    }
    std::unique_lock lock(mutex_);
    entries_ = std::move(copy);
    return *this;
}

std::optional<CacheEntry> ScoreCache::find(const std::string& key) const {
    std::shared_lock lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void ScoreCache::put(CacheEntry entry) {
    entry.scores = entry.scores.clamped();
    std::unique_lock lock(mutex_);
    entries_[entry.key] = std::move(entry);
}

std::size_t ScoreCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

std::vector<CacheEntry> ScoreCache::entries() const {
    std::shared_lock lock(mutex_);
    std::vector<CacheEntry> out;
    out.reserve(entries_.size());
    for (const auto& [key, e] : entries_) out.push_back(e);
    return out;
}

void export_scores(const ScoreCache& cache, std::ostream& out, std::string_view prompt_version) {
    out << kHeaderTag << " format=" << kCacheFormat << " prompt_version=" << prompt_version << '\n';
    for (const auto& e : cache.entries()) {
        nlohmann::json j = {{"key", e.key},
                            {"symbol", e.symbol},
                            {"ts", e.ts},
                            {"scores", e.scores.as_array()},
                            {"model", e.model},
                            {"prompt_version", e.prompt_version},
                            {"retrieved_at", e.retrieved_at}};
        if (e.fallback) j["fallback"] = true;
        out << j.dump() << '\n';
    }
}

void export_scores(const ScoreCache& cache, const std::filesystem::path& path, std::string_view prompt_version) {
    // Write beside the target and rename so a crash never truncates the cache.
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw DataError("cannot write score cache " + tmp.string());
        export_scores(cache, out, prompt_version);
        if (!out) throw DataError("failed writing score cache " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

ScoreCache import_scores(std::istream& in, std::string_view prompt_version) {
    ScoreCache cache;
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (data::trim(line).empty()) continue;
        if (line.rfind('#', 0) == 0) {
            if (line.rfind(kHeaderTag, 0) != 0) continue;
            const std::string format = header_field(line, "format");
            const std::string version = header_field(line, "prompt_version");
            if (format != kCacheFormat) {
                throw DataError(fmt::format("score cache format {} does not match expected {}", format, kCacheFormat));
            }
            if (version != prompt_version) {
                throw DataError(fmt::format("score cache prompt version {} does not match current {}", version,
                                            prompt_version));
            }
            header = true;
            continue;
        }
        if (!header) throw DataError(fmt::format("score cache line {}: missing header comment", line_no));
        CacheEntry e;
        try {
            const auto j = nlohmann::json::parse(line);
            e.key = j.at("key").get<std::string>();
            e.symbol = j.at("symbol").get<std::string>();
            e.ts = j.at("ts").get<std::string>();
            const auto scores = j.at("scores").get<std::vector<double>>();
            if (scores.size() != 5) throw DataError("expected 5 scores");
            e.scores = NewsScore::from_array({scores[0], scores[1], scores[2], scores[3], scores[4]});
            e.model = j.at("model").get<std::string>();
            e.prompt_version = j.at("prompt_version").get<std::string>();
            e.retrieved_at = j.value("retrieved_at", std::string());
            e.fallback = j.value("fallback", false);
        } catch (const std::exception& ex) {
            throw DataError(fmt::format("score cache line {}: {}", line_no, ex.what()));
        }
        if (e.prompt_version != prompt_version) {
            throw DataError(fmt::format("score cache line {}: prompt version {} does not match current {}", line_no,
                                        e.prompt_version, prompt_version));
        }
        if (!e.scores.in_range()) throw DataError(fmt::format("score cache line {}: score out of range", line_no));
        cache.put(std::move(e));
    }
    return cache;
}

ScoreCache import_scores(const std::filesystem::path& path, std::string_view prompt_version) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open score cache " + path.string());
    return import_scores(in, prompt_version);
}

}  // namespace causalstock::news
