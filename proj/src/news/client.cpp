#include "causalstock/news/client.h"

#include <cstdlib>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace causalstock::news {

namespace {

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return (v && *v) ? std::string(v) : fallback;
}

}  // namespace

HttpClientConfig HttpClientConfig::from_env() {
    HttpClientConfig c;
    c.url = env_or("CAUSALSTOCK_LLM_URL", "");
    c.api_key = env_or("CAUSALSTOCK_LLM_API_KEY", "");
    c.model = env_or("CAUSALSTOCK_LLM_MODEL", "gpt-3.5-turbo");
    const std::string timeout = env_or("CAUSALSTOCK_LLM_TIMEOUT", "");
    if (!timeout.empty()) {
        char* end = nullptr;
        const double t = std::strtod(timeout.c_str(), &end);
        if (end == timeout.c_str() || *end != '\0' || !(t > 0)) {
            throw ConfigError("CAUSALSTOCK_LLM_TIMEOUT must be a positive number of seconds, got '" + timeout + "'");
        }
        c.timeout_seconds = t;
    }
    return c;
}

HttpChatClient::HttpChatClient(HttpClientConfig config) : config_(std::move(config)) {
    if (config_.url.empty()) throw ConfigError("no chat endpoint configured (set CAUSALSTOCK_LLM_URL)");
    const auto scheme = config_.url.find("://");
    if (scheme == std::string::npos) throw ConfigError("chat endpoint URL lacks a scheme: " + config_.url);
    const auto slash = config_.url.find('/', scheme + 3);
    base_ = config_.url.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : config_.url.substr(slash);
}

std::string HttpChatClient::complete(const Prompt& prompt) {
    httplib::Client cli(base_);
    const auto secs = static_cast<time_t>(config_.timeout_seconds);
    const auto usecs = static_cast<time_t>((config_.timeout_seconds - static_cast<double>(secs)) * 1e6);
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);

    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

    const nlohmann::json body = {
        {"model", config_.model},
        {"temperature", 0},
        {"messages",
         {{{"role", "system"}, {"content", prompt.system}}, {{"role", "user"}, {"content", prompt.user}}}},
    };
    auto res = cli.Post(path_, headers, body.dump(), "application/json");
    if (!res) throw NetworkError(fmt::format("chat request to {} failed: {}", base_, httplib::to_string(res.error())));
    if (res->status == 401 || res->status == 403) {
        throw AuthError(fmt::format("chat endpoint rejected credentials (HTTP {})", res->status));
    }
    if (res->status != 200) throw NetworkError(fmt::format("chat endpoint returned HTTP {}", res->status));

    try {
        const auto j = nlohmann::json::parse(res->body);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const std::exception& e) {
        throw NetworkError(std::string("malformed chat completion body: ") + e.what());
    }
}

}  // namespace causalstock::news
