#include "causalstock/eval/metrics.h"

#include "causalstock/error.h"

#include <cmath>

namespace causalstock::eval {

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
}

ConfusionCounts confusion(const std::vector<double>& prob, const std::vector<int>& labels) {
    if (prob.size() != labels.size()) throw ConfigError("confusion: prediction and label lengths differ");
    ConfusionCounts c;
    for (std::size_t k = 0; k < prob.size(); ++k) {
        if (labels[k] < 0) continue;
        const bool predicted = prob[k] > 0.5;
        const bool actual = labels[k] == 1;
        if (predicted && actual) ++c.tp;
        else if (predicted) ++c.fp;
        else if (actual) ++c.fn;
        else ++c.tn;
    }
    return c;
}

double accuracy(const ConfusionCounts& c) {
    if (c.total() == 0) throw ConfigError("accuracy of an empty confusion matrix");
    return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

double mcc(const ConfusionCounts& c) {
    const double tp = static_cast<double>(c.tp);
    const double fp = static_cast<double>(c.fp);
    const double tn = static_cast<double>(c.tn);
    const double fn = static_cast<double>(c.fn);
    const double a = tp + fp;
    const double b = tp + fn;
    const double d = tn + fp;
    const double e = tn + fn;
    if (a == 0 || b == 0 || d == 0 || e == 0) return 0.0;
    return (tp * tn - fp * fn) / std::sqrt(a * b * d * e);
}

}  // namespace causalstock::eval
