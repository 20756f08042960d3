#pragma once

#include <cstdint>
#include <string>

namespace causalstock::data {

enum class Movement : std::int8_t { Fall = 0, Rise = 1, Skip = -1 };

struct LabelMode {
    enum class Kind { Strict, Threshold };
    Kind kind = Kind::Strict;
    // Returns are fractions: 0.0055 means +0.55%.
    double rise_threshold = 0.0;
    double fall_threshold = 0.0;

    static LabelMode strict() { return {}; }
    static LabelMode threshold(double fall, double rise) { return {Kind::Threshold, rise, fall}; }
};

// Strict: Rise iff adj_close > prev_adj_close. Threshold: Rise when the
// return reaches rise_threshold, Fall at or below fall_threshold, Skip
// between. Non-positive prices are data errors.
Movement movement_label(double prev_adj_close, double adj_close, const LabelMode& mode);

std::string to_string(Movement m);

}  // namespace causalstock::data
