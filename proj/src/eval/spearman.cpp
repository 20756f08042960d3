#include "causalstock/eval/spearman.h"

#include "causalstock/error.h"
#include "causalstock/numerics/rng.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace causalstock::eval {

namespace {

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        sab += (a[k] - ma) * (b[k] - mb);
        saa += (a[k] - ma) * (a[k] - ma);
        sbb += (b[k] - mb) * (b[k] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

void check_inputs(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ConfigError("spearman inputs differ in length");
    if (x.size() < 3) throw ConfigError("spearman needs at least three points");
    auto constant = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
    };
    if (constant(x) || constant(y)) throw ConfigError("spearman is undefined for a constant vector");
}

}  // namespace

std::vector<double> average_ranks(const std::vector<double>& x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
    check_inputs(x, y);
    return pearson(average_ranks(x), average_ranks(y));
}

SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y, std::size_t shuffles,
                        std::uint64_t seed) {
    check_inputs(x, y);
    const auto rx = average_ranks(x);
    auto ry = average_ranks(y);
    SpearmanResult res;
    res.rho = pearson(rx, ry);
    res.shuffles = shuffles;
    numerics::Rng rng(seed);
    std::size_t hits = 0;
    const double observed = std::abs(res.rho) - 1e-12;
    for (std::size_t s = 0; s < shuffles; ++s) {
        rng.shuffle(ry.begin(), ry.end());
        if (std::abs(pearson(rx, ry)) >= observed) ++hits;
    }
    res.p_value = static_cast<double>(1 + hits) / static_cast<double>(1 + shuffles);
    return res;
}

}  // namespace causalstock::eval
