#include "causalstock/news/scorer.h"

#include "causalstock/news/parser.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <thread>

#include <fmt/format.h>

namespace causalstock::news {

namespace {

constexpr std::string_view kReminder =
    "\n\nReply only with the five lines of the Output format, each followed by a number.";

std::string now_text() {
    return data::format_timestamp(std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now()));
}

struct Outcome {
    NewsScore score;
    bool fallback = false;
    std::string failure;
};

}  // namespace

RateLimiter::RateLimiter(double per_second, double burst)
    : rate_(per_second), capacity_(std::max(1.0, burst)), tokens_(capacity_), last_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
    if (!(rate_ > 0)) return;
    for (;;) {
        std::chrono::duration<double> wait{};
        {
            std::lock_guard lock(mutex_);
            const auto now = std::chrono::steady_clock::now();
            tokens_ = std::min(capacity_, tokens_ + rate_ * std::chrono::duration<double>(now - last_).count());
            last_ = now;
            if (tokens_ >= 1.0) {
                tokens_ -= 1.0;
                return;
            }
            wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
        }
        std::this_thread::sleep_for(wait);
    }
}

std::string item_key(const data::NewsItem& item) {
    return cache_key(item.symbol, item.text, data::format_timestamp(item.published), kPromptVersion);
}

std::vector<NewsScore> score_news(const std::vector<data::NewsItem>& items, ChatClient* client, ScoreCache& cache,
                                  const ScoringConfig& config, ScoringReport* report) {
    ScoringReport local;
    ScoringReport& rep = report ? *report : local;
    rep.items += items.size();

    std::vector<std::string> keys;
    keys.reserve(items.size());
    std::map<std::string, std::size_t> pending;  // key -> first item index
    for (std::size_t k = 0; k < items.size(); ++k) {
        keys.push_back(item_key(items[k]));
        const auto hit = cache.find(keys.back());
        // Fallback entries are retried whenever an endpoint is available.
        if (hit && (!hit->fallback || config.offline)) {
            ++rep.cache_hits;
        } else {
            pending.emplace(keys.back(), k);
        }
    }

    if (!pending.empty() && config.offline) {
        std::string msg = fmt::format("offline scoring: {} item(s) missing from the cache:", pending.size());
        for (const auto& [key, idx] : pending) msg += fmt::format("\n  {} ({} {})", key, items[idx].symbol,
                                                                    data::format_timestamp(items[idx].published));
        throw DataError(msg);
    }
    if (!pending.empty() && !client) throw ConfigError("cache misses but no chat client configured");

    const std::vector<std::pair<std::string, std::size_t>> work(pending.begin(), pending.end());
    RateLimiter limiter(config.requests_per_second, config.burst);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> requests{0};
    std::atomic<bool> abort{false};
    std::mutex report_mutex;
    std::exception_ptr fatal;

    auto sleep = [&](double seconds) {
        if (seconds <= 0) return;
        if (config.sleep) {
            config.sleep(std::chrono::duration<double>(seconds));
        } else {
            std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
        }
    };

    auto score_one = [&](const data::NewsItem& item) -> Outcome {
        Prompt prompt = build_prompt(item.symbol, item.text, item.published_text.empty()
                                                                 ? data::format_timestamp(item.published)
                                                                 : item.published_text);
        std::string last_error;
        for (int attempt = 0; attempt < std::max(1, config.parse_attempts); ++attempt) {
            if (attempt > 0) prompt.user += kReminder;
            std::string response;
            bool got = false;
            double backoff = config.backoff_seconds;
            for (int tries = 0; tries <= config.retries; ++tries) {
                if (abort) return {};
                limiter.acquire();
                ++requests;
                try {
                    response = client->complete(prompt);
                    got = true;
                    break;
                } catch (const AuthError&) {
                    throw;
                } catch (const NetworkError& e) {
                    last_error = e.what();
                    if (tries < config.retries) sleep(backoff);
                    backoff *= config.backoff_factor;
                }
            }
            if (!got) break;
            try {
                return {parse_scores(response), false, {}};
            } catch (const ParseError& e) {
                last_error = e.what();
            }
        }
        return {NewsScore::neutral(), true, last_error};
    };

    auto worker = [&]() {
        for (;;) {
            const std::size_t w = next++;
            if (w >= work.size() || abort) return;
            const auto& [key, idx] = work[w];
            const auto& item = items[idx];
            Outcome out;
            try {
                out = score_one(item);
            } catch (...) {
                std::lock_guard lock(report_mutex);
                if (!fatal) fatal = std::current_exception();
                abort = true;
                return;
            }
            if (abort) return;
            cache.put({key, item.symbol, data::format_timestamp(item.published), out.score, client->model(),
                       kPromptVersion, now_text(), out.fallback});
            std::lock_guard lock(report_mutex);
            if (out.fallback) {
                ++rep.fallbacks;
                rep.failures.push_back(fmt::format("{} {}: {}", item.symbol, data::format_timestamp(item.published),
                                                   out.failure));
            } else {
                ++rep.scored;
            }
        }
    };

    const std::size_t threads = std::min<std::size_t>(work.size(), static_cast<std::size_t>(std::max(1, config.concurrency)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    rep.requests += requests;
    if (fatal) std::rethrow_exception(fatal);

    std::vector<NewsScore> out;
    out.reserve(items.size());
    for (const auto& key : keys) out.push_back(cache.find(key)->scores);
    return out;
}

}  // namespace causalstock::news
