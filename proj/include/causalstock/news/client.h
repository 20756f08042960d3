#pragma once

#include "causalstock/error.h"
#include "causalstock/news/prompt.h"

#include <string>

namespace causalstock::news {

// Rejected credentials. Never retried.
class AuthError : public NetworkError {
public:
    explicit AuthError(const std::string& what) : NetworkError(what) {}
};

// A chat-completion endpoint. Implementations throw AuthError on rejected
// credentials and NetworkError on anything worth retrying.
class ChatClient {
public:
    virtual ~ChatClient() = default;
    virtual std::string complete(const Prompt& prompt) = 0;
    virtual std::string model() const = 0;
};

struct HttpClientConfig {
    std::string url;  // full endpoint, e.g. https://host/v1/chat/completions
    std::string api_key;
    std::string model;
    double timeout_seconds = 60.0;

    // CAUSALSTOCK_LLM_URL, CAUSALSTOCK_LLM_API_KEY, CAUSALSTOCK_LLM_MODEL,
    // CAUSALSTOCK_LLM_TIMEOUT.
    static HttpClientConfig from_env();
};

// OpenAI-style JSON chat completions at temperature 0.
class HttpChatClient : public ChatClient {
public:
    explicit HttpChatClient(HttpClientConfig config);
    std::string complete(const Prompt& prompt) override;
    std::string model() const override { return config_.model; }

private:
    HttpClientConfig config_;
    std::string base_;
    std::string path_;
};

}  // namespace causalstock::news
