#include "causalstock/data/panel.h"
#include "causalstock/error.h"
#include "causalstock/numerics/rng.h"
#include "causalstock/synth/system.h"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>

using namespace causalstock;
using namespace causalstock::synth;

namespace {

double lagged_corr(const MatD& x, Eigen::Index from, Eigen::Index to) {
    const Eigen::Index n = x.rows() - 1;
    const Eigen::VectorXd a = x.col(from).head(n);
    const Eigen::VectorXd b = x.col(to).tail(n);
    const double ma = a.mean();
    const double mb = b.mean();
    const double cov = ((a.array() - ma) * (b.array() - mb)).sum();
    return cov / std::sqrt((a.array() - ma).square().sum() * (b.array() - mb).square().sum());
}

}  // namespace

TEST(System, ForcingGivesEveryStockAParent) {
    for (std::uint64_t seed = 1; seed < 20; ++seed) {
        const auto sys = generate_system(6, 2, 1e-9, Link::Linear, seed);
        for (Eigen::Index i = 0; i < 6; ++i) EXPECT_EQ(sys.graph.col(i).sum(), 1.0);
    }
}

TEST(System, SameSeedSameEdges) {
    const auto a = generate_system(8, 2, 0.15, Link::Linear, 42);
    const auto b = generate_system(8, 2, 0.15, Link::Linear, 42);
    const auto c = generate_system(8, 2, 0.15, Link::Linear, 43);
    EXPECT_EQ(a.graph, b.graph);
    EXPECT_EQ(a.weights, b.weights);
    EXPECT_NE(a.graph, c.graph);
    EXPECT_THROW(generate_system(8, 2, 0.0, Link::Linear, 1), ConfigError);
}

TEST(System, ExpectedEdgeCount) {
    const double p = 0.15;
    const double d = 8, l = 2;
    // Bernoulli edges plus one forced edge for each parentless stock
    const double q = std::pow(1 - p, l * d);
    const double expect = l * d * d * p + d * q;
    double sum = 0;
    const int n = 400;
    for (int s = 0; s < n; ++s) sum += static_cast<double>(generate_system(8, 2, p, Link::Linear, 1000 + s).edge_count());
    const double se = std::sqrt(l * d * d * p * (1 - p) + d * q * (1 - q)) / std::sqrt(n);
    EXPECT_NEAR(sum / n, expect, 4 * se);
}

TEST(System, WeightsAndStability) {
    const auto sys = generate_system(8, 2, 0.3, Link::Linear, 3);
    for (Eigen::Index k = 0; k < sys.graph.size(); ++k) {
        const double w = std::abs(sys.weights.data()[k]);
        if (sys.graph.data()[k] > 0) {
            EXPECT_GE(w, 0.5);
            EXPECT_LE(w, 1.5);
        } else {
            EXPECT_EQ(w, 0.0);
        }
    }
    EXPECT_LT(spectral_radius(sys), 1.0);
}

TEST(Simulate, SameSeedBitwiseIdentical) {
    const auto sys = generate_system(4, 2, 0.3, Link::Tanh, 7);
    SimulateOptions o;
    o.steps = 200;
    o.news = true;
    const auto a = simulate(sys, o);
    const auto b = simulate(sys, o);
    EXPECT_EQ(a.latent, b.latent);
    ASSERT_EQ(a.prices.size(), b.prices.size());
    for (std::size_t s = 0; s < a.prices.size(); ++s) {
        ASSERT_EQ(a.prices[s].records.size(), 200u);
        for (std::size_t t = 0; t < 200; ++t) {
            EXPECT_EQ(a.prices[s].records[t].features(), b.prices[s].records[t].features());
        }
    }
    EXPECT_EQ(a.news.size(), b.news.size());
}

TEST(Simulate, LabelsFollowLatentSign) {
    const auto sys = generate_system(3, 1, 0.3, Link::Linear, 11);
    SimulateOptions o;
    o.steps = 300;
    const auto m = simulate(sys, o);
    const auto panel = data::align(m.prices, data::CalendarPolicy::Intersection, data::LabelMode::strict());
    for (std::size_t s = 0; s < 3; ++s) {
        for (std::size_t t = 1; t < 300; ++t) {
            const auto expect = m.latent(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(s)) > 0
                                    ? data::Movement::Rise
                                    : data::Movement::Fall;
            EXPECT_EQ(panel.labels[s][t], expect);
        }
    }
}

TEST(Simulate, StrongEdgeDominatesLaggedCorrelation) {
    GroundTruthSystem sys;
    sys.stocks = 4;
    sys.lags = 1;
    sys.density = 0.1;
    sys.seed = 5;
    sys.graph = MatD::Zero(4, 4);
    sys.weights = MatD::Zero(4, 4);
    sys.graph(1, 3) = 1;  // stock 1 -> stock 3
    sys.weights(1, 3) = 0.9;
    sys.noise_scale.assign(4, 1.0);
    SimulateOptions o;
    o.steps = 4000;
    const auto m = simulate(sys, o);
    const double edge = lagged_corr(m.latent, 1, 3);
    for (Eigen::Index j = 0; j < 4; ++j) {
        for (Eigen::Index i = 0; i < 4; ++i) {
            if (j == 1 && i == 3) continue;
            EXPECT_GT(edge, std::abs(lagged_corr(m.latent, j, i)));
        }
    }
}

TEST(Simulate, ZeroWeightsAreCoinFlips) {
    const auto sys = zero_system(4, 2, 3);
    SimulateOptions o;
    o.steps = 4000;
    const auto m = simulate(sys, o);
    const auto panel = data::align(m.prices, data::CalendarPolicy::Intersection, data::LabelMode::strict());
    for (std::size_t s = 0; s < 4; ++s) {
        double rises = 0;
        for (std::size_t t = 1; t < panel.days(); ++t) rises += panel.labels[s][t] == data::Movement::Rise;
        const double n = static_cast<double>(panel.days() - 1);
        EXPECT_NEAR(rises / n, 0.5, 4 * 0.5 / std::sqrt(n));
    }
}

TEST(Recovery, AurocExamples) {
    const auto sys = generate_system(6, 2, 0.2, Link::Linear, 9);
    const MatD& g = sys.graph;
    const auto perfect = recovery_score(g, g);
    EXPECT_EQ(perfect.auroc, 1.0);
    EXPECT_EQ(perfect.shd, 0u);
    EXPECT_EQ(perfect.f1, 1.0);
    EXPECT_EQ(auroc(MatD::Ones(g.rows(), g.cols()) - g, g), 0.0);
    EXPECT_THROW(auroc(g, MatD::Zero(g.rows(), g.cols())), ConfigError);
    EXPECT_THROW(auroc(g, MatD::Ones(g.rows(), g.cols())), ConfigError);

    numerics::Rng rng(3);
    double sum = 0;
    const int trials = 100;
    for (int t = 0; t < trials; ++t) {
        MatD s(g.rows(), g.cols());
        for (Eigen::Index k = 0; k < s.size(); ++k) s.data()[k] = rng.uniform();
        sum += auroc(s, g);
    }
    // Mann-Whitney null variance (n1 + n2 + 1) / (12 n1 n2)
    const double pos = g.sum();
    const double neg = static_cast<double>(g.size()) - pos;
    const double sd = std::sqrt((pos + neg + 1) / (12 * pos * neg));
    EXPECT_NEAR(sum / trials, 0.5, 4 * sd / std::sqrt(trials));
}

TEST(System, JsonRoundTrip) {
    const auto sys = generate_system(5, 2, 0.2, Link::Tanh, 21);
    const auto back = system_from_json(to_json(sys));
    EXPECT_EQ(back.graph, sys.graph);
    EXPECT_EQ(back.weights, sys.weights);
    EXPECT_EQ(back.link, sys.link);
    EXPECT_EQ(back.stability, sys.stability);
}
