#pragma once

#include <algorithm>
#include <array>

namespace causalstock::news {

// Five-dimension denoised representation of one news item.
struct NewsScore {
    double correlation = 0.0;  // [0, 10]
    double sentiment = 0.0;    // [-1, 1]
    double importance = 0.0;   // [0, 10]
    double impact = 0.0;       // [0, 10]
    double duration = 0.0;     // [0, 10]

    std::array<double, 5> as_array() const { return {correlation, sentiment, importance, impact, duration}; }

    static NewsScore from_array(const std::array<double, 5>& a) { return {a[0], a[1], a[2], a[3], a[4]}; }

    // Neutral fallback for items that could not be scored.
    static NewsScore neutral() { return {}; }

    NewsScore clamped() const {
        return {std::clamp(correlation, 0.0, 10.0), std::clamp(sentiment, -1.0, 1.0), std::clamp(importance, 0.0, 10.0),
                std::clamp(impact, 0.0, 10.0), std::clamp(duration, 0.0, 10.0)};
    }

    bool in_range() const {
        return correlation >= 0 && correlation <= 10 && sentiment >= -1 && sentiment <= 1 && importance >= 0 &&
               importance <= 10 && impact >= 0 && impact <= 10 && duration >= 0 && duration <= 10;
    }

    friend bool operator==(const NewsScore&, const NewsScore&) = default;
};

}  // namespace causalstock::news
