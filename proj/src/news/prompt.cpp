#include "causalstock/news/prompt.h"

namespace causalstock::news {

namespace {

constexpr std::string_view kSystem =
    "As a stock trading news analyst, you are a helpful and precise assistant. Your task is to analyze the "
    "correlation between news and the given stock, sentiment polarity of the news, importance of the news, the "
    "impact of the news on stock prices, and the duration of the news impact.";

constexpr std::string_view kInstructions =
    "I need you to analyze the provided stock-related news from five dimensions:\n"
    "\n"
    "1. Correlation between the news and the given stock: Rate the correlation on a scale of 0 to 10, where a "
    "higher score indicates a stronger correlation between the news and the given stock.\n"
    "\n"
    "2. Sentiment polarity of the news: Rate the sentiment polarity on a scale of -1 to 1, where a value closer to "
    "-1 indicates stronger negative sentiment and a value closer to 1 indicates stronger positive sentiment.\n"
    "\n"
    "3. Importance of the news event: Rate the importance on a scale of 0 to 10, where a higher score indicates "
    "higher importance of the news event.\n"
    "\n"
    "4. Impact of the news on stock prices: Rate the impact on a scale of 0 to 10, where a higher score indicates "
    "a greater impact of the news on stock prices.\n"
    "\n"
    "5. Duration of the news impact: Rate the duration on a scale of 0 to 10, where a higher score indicates a "
    "longer potential duration of the news impact.\n"
    "\n"
    "(When you encounter a situation where analysis is not possible, please try to avoid assigning all-zero "
    "scores and instead make an effort to analyze the text content and derive scores accordingly. Only when "
    "analysis is truly impossible should you assign a score of 0 to all factors.)\n"
    "\n"
    "(Please refrain from providing analysis and simply provide the answer according to the following format.)\n"
    "\n"
    "Output format:\n"
    "\n"
    "Correlation: <Correlation score between the news and the stock>\n"
    "\n"
    "Sentiment: <Sentiment polarity score of the news>\n"
    "\n"
    "Importance: <Importance score of the news event>\n"
    "\n"
    "Impact: <Impact score of the news on stock prices>\n"
    "\n"
    "Duration: <Duration score of the news impact>";

}  // namespace

std::string_view system_message() { return kSystem; }

std::string_view instruction_block() { return kInstructions; }

Prompt build_prompt(std::string_view symbol, std::string_view text, std::string_view publish_time) {
    Prompt p;
    p.system = std::string(kSystem);
    p.user.reserve(kInstructions.size() + text.size() + 96);
    p.user.append(kInstructions);
    p.user.append("\n\n[Stock Name]: ").append(symbol);
    p.user.append("\n\n[News Content]:").append(text);
    p.user.append("\n\n[Publish Time]:").append(publish_time);
    return p;
}

}  // namespace causalstock::news
