#pragma once

#include <cstdint>
#include <vector>

namespace causalstock::eval {

// 1-based ranks; tied values share the mean of their positions.
std::vector<double> average_ranks(const std::vector<double>& x);

struct SpearmanResult {
    double rho = 0.0;
    double p_value = 1.0;  // two-sided permutation test, (1 + hits) / (1 + shuffles)
    std::size_t shuffles = 0;
};

// Pearson correlation of average ranks. Needs equal lengths >= 3 and
// non-constant inputs (ConfigError otherwise).
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);
SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y, std::size_t shuffles = 10000,
                        std::uint64_t seed = 1);

}  // namespace causalstock::eval
