#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace causalstock::numerics {

// Seeded generator with distribution transforms written out explicitly so
// that streams are identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on the open interval (0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();
    double gumbel();
    bool bernoulli(double p) { return uniform() < p; }
    // Uniform integer in [0, n).
    std::size_t index(std::size_t n);

    template <typename It>
    void shuffle(It first, It last) {
        const auto n = static_cast<std::size_t>(last - first);
        for (std::size_t i = n; i > 1; --i) {
            std::swap(first[i - 1], first[index(i)]);
        }
    }

    // Child generator for an independent stream.
    Rng split() { return Rng(next_u64() ^ 0x9E3779B97F4A7C15ULL); }

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace causalstock::numerics
