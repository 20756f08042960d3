#pragma once

#include <string>
#include <string_view>

namespace causalstock::news {

// Bumping this invalidates every cached score.
inline constexpr const char* kPromptVersion = "v1";

struct Prompt {
    std::string system;
    std::string user;
};

// System role text and the fixed instruction block sent before the input.
std::string_view system_message();
std::string_view instruction_block();

// Instruction block followed by the stock / content / publish-time fields.
Prompt build_prompt(std::string_view symbol, std::string_view text, std::string_view publish_time);

}  // namespace causalstock::news
