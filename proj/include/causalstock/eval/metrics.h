#pragma once

#include <cstddef>
#include <vector>

namespace causalstock::eval {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
    ConfusionCounts& operator+=(const ConfusionCounts& o);
};

// Predictions at threshold 0.5; labels negative (Skip) are ignored.
ConfusionCounts confusion(const std::vector<double>& prob, const std::vector<int>& labels);

// Throws ConfigError on empty counts.
double accuracy(const ConfusionCounts& c);
// 0 when any factor of the denominator is 0.
double mcc(const ConfusionCounts& c);

}  // namespace causalstock::eval
