#pragma once

#include "causalstock/data/news_items.h"
#include "causalstock/news/cache.h"
#include "causalstock/news/client.h"

#include <chrono>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

namespace causalstock::news {

struct ScoringConfig {
    int retries = 3;          // extra attempts after a network failure
    int parse_attempts = 2;   // prompts sent before giving up on parsing
    double backoff_seconds = 0.5;
    double backoff_factor = 2.0;
    int concurrency = 4;
    double requests_per_second = 5.0;
    double burst = 5.0;
    bool offline = false;
    // Replaced in tests to avoid real sleeps.
    std::function<void(std::chrono::duration<double>)> sleep;
};

struct ScoringReport {
    std::size_t items = 0;
    std::size_t cache_hits = 0;
    std::size_t requests = 0;   // HTTP calls issued, including retries
    std::size_t scored = 0;     // newly scored and cached
    std::size_t fallbacks = 0;  // neutral score after every attempt failed
    std::vector<std::string> failures;
};

// Token bucket shared by the worker threads.
class RateLimiter {
public:
    RateLimiter(double per_second, double burst);
    void acquire();

private:
    std::mutex mutex_;
    double rate_;
    double capacity_;
    double tokens_;
    std::chrono::steady_clock::time_point last_;
};

// Cache-first scoring; one score per input item in input order. Duplicate
// items share one request. In offline mode any miss is a DataError listing
// the missing keys. AuthError aborts the whole run.
std::vector<NewsScore> score_news(const std::vector<data::NewsItem>& items, ChatClient* client, ScoreCache& cache,
                                  const ScoringConfig& config, ScoringReport* report = nullptr);

std::string item_key(const data::NewsItem& item);

}  // namespace causalstock::news
