#include "causalstock/data/labels.h"

#include "causalstock/error.h"

namespace causalstock::data {

Movement movement_label(double prev_adj_close, double adj_close, const LabelMode& mode) {
    if (!(prev_adj_close > 0) || !(adj_close > 0)) {
        throw DataError("movement label needs positive prices, got " + std::to_string(prev_adj_close) + " -> " +
                        std::to_string(adj_close));
    }
    if (mode.kind == LabelMode::Kind::Strict) {
        return adj_close > prev_adj_close ? Movement::Rise : Movement::Fall;
    }
    const double ret = adj_close / prev_adj_close - 1.0;
    if (ret >= mode.rise_threshold) return Movement::Rise;
    if (ret <= mode.fall_threshold) return Movement::Fall;
    return Movement::Skip;
}

std::string to_string(Movement m) {
    switch (m) {
        case Movement::Fall: return "0";
        case Movement::Rise: return "1";
        case Movement::Skip: return "skip";
    }
    return "?";
}

}  // namespace causalstock::data
