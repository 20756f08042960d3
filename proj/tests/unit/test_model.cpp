#include "causalstock/error.h"
#include "causalstock/model/batch.h"
#include "causalstock/model/causal_graph.h"
#include "causalstock/model/encoders.h"
#include "causalstock/model/fcm.h"
#include "causalstock/model/model.h"
#include "causalstock/numerics/rng.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <fmt/format.h>

using namespace causalstock;
using namespace causalstock::model;
using numerics::MatD;

namespace {

ModelConfig small_config(std::size_t d, std::size_t l, bool news) {
    ModelConfig c;
    c.stocks = d;
    c.lags = l;
    c.price_dim = 4;
    c.news_dim = 8;
    c.hidden = 6;
    c.branch_width = 3;
    c.depth = 2;
    c.use_news = news;
    return c;
}

// Random batch with a few news items on some stock-days.
Batch<double> random_batch(std::size_t windows, std::size_t d, std::size_t l, bool news, numerics::Rng& rng) {
    Batch<double> b;
    b.windows = windows;
    b.stocks = d;
    b.lags = l;
    const auto rows = static_cast<Eigen::Index>(b.rows());
    b.prices = MatD(rows, 6);
    for (Eigen::Index k = 0; k < b.prices.size(); ++k) b.prices.data()[k] = rng.normal();
    b.no_news = MatD::Ones(rows, 1);
    std::vector<std::array<double, 5>> items;
    if (news) {
        for (Eigen::Index r = 0; r < rows; r += 2) {
            b.news_slot.push_back(static_cast<int>(r));
            items.push_back({rng.uniform(0, 10), rng.uniform(-1, 1), rng.uniform(0, 10), rng.uniform(0, 10),
                             rng.uniform(0, 10)});
            b.no_news(r, 0) = 0;
        }
    }
    b.news = MatD(static_cast<Eigen::Index>(items.size()), 5);
    for (std::size_t k = 0; k < items.size(); ++k) {
        for (int c = 0; c < 5; ++c) b.news(static_cast<Eigen::Index>(k), c) = items[k][static_cast<std::size_t>(c)];
    }
    b.labels = MatD(static_cast<Eigen::Index>(d * windows), 1);
    for (Eigen::Index k = 0; k < b.labels.rows(); ++k) b.labels(k, 0) = rng.bernoulli(0.5) ? 1 : 0;
    b.mask = MatD::Ones(b.labels.rows(), 1);
    return b;
}

}  // namespace

TEST(EdgeProbability, ClosedForms) {
    EXPECT_DOUBLE_EQ(edge_probability(0.3, 0.3), 0.5);
    EXPECT_DOUBLE_EQ(edge_probability(-4.0, -4.0), 0.5);
    EXPECT_NEAR(edge_probability(std::log(2.0), 0.0), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(edge_probability(800.0, 0.0), 1.0, 1e-15);
}

TEST(CausalGraph, EqualLogitsGiveHalf) {
    auto cfg = small_config(3, 1, false);
    Model<double> m(cfg, 3);
    m.params().value("graph.V") = m.params().value("graph.U");
    const MatD s = m.sigma();
    for (Eigen::Index k = 0; k < s.size(); ++k) EXPECT_DOUBLE_EQ(s.data()[k], 0.5);
}

TEST(CausalGraph, LagIndependentIgnoresTransform) {
    auto cfg = small_config(3, 3, false);
    cfg.graph_mode = GraphMode::LagIndependent;
    Model<double> ind(cfg, 5);
    EXPECT_FALSE(ind.params().contains("graph.h_u.l0.W"));
    const MatD u = ind.params().value("graph.U");
    const MatD v = ind.params().value("graph.V");
    const MatD s = ind.sigma();
    for (Eigen::Index r = 0; r < s.rows(); ++r) {
        for (Eigen::Index c = 0; c < s.cols(); ++c) {
            EXPECT_NEAR(s(r, c), 1.0 / (1.0 + std::exp(-(u(r, c) - v(r, c)))), 1e-14);
        }
    }

    cfg.graph_mode = GraphMode::LagDependent;
    Model<double> dep(cfg, 5);
    const MatD before = dep.sigma();
    dep.params().value("graph.h_u.l0.W").array() += 0.5;
    const MatD after = dep.sigma();
    // lag 1 passes through, later lags move with h_u
    EXPECT_TRUE(before.topRows(3).isApprox(after.topRows(3), 0));
    EXPECT_GT((before.bottomRows(6) - after.bottomRows(6)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(CausalGraph, ExtremeLogitsAreClamped) {
    auto cfg = small_config(2, 1, false);
    Model<double> m(cfg, 1);
    m.params().value("graph.U").setConstant(500);
    m.params().value("graph.V").setConstant(-500);
    const MatD s = m.sigma();
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        EXPECT_LT(s.data()[k], 1.0);
        EXPECT_GT(s.data()[k], 1.0 - 1e-12);
    }
    numerics::Tape<double> tape(&m.params());
    const auto e = m.graph().edges(tape);
    EXPECT_TRUE(e.log_one_minus.value().allFinite());
}

TEST(LogPrior, Examples) {
    MatD g = MatD::Zero(4, 2);
    g(0, 1) = g(2, 0) = g(3, 1) = 1;
    EXPECT_DOUBLE_EQ(log_prior_value(g, 1.0, 0.0, nullptr), -3.0);
    EXPECT_DOUBLE_EQ(log_prior_value(g, 0.0, 2.5, &g), 0.0);
    const MatD empty = MatD::Zero(4, 2);
    EXPECT_DOUBLE_EQ(log_prior_value(empty, 0.7, 3.0, &empty), 0.0);
    const MatD wrong = MatD::Zero(2, 2);
    EXPECT_THROW(log_prior_value(g, 1.0, 1.0, &wrong), ConfigError);

    numerics::Tape<double> tape;
    const auto v = tape.constant(g);
    EXPECT_DOUBLE_EQ(log_prior<double>(v, 1.0, 0.0, nullptr).value()(0, 0), -3.0);
}

TEST(Entropy, Examples) {
    EXPECT_NEAR(posterior_entropy_value(MatD::Constant(1, 1, 0.5)), std::log(2.0), 1e-15);
    EXPECT_NEAR(posterior_entropy_value(MatD::Constant(2, 2, 0.5)), 4 * std::log(2.0), 1e-15);
    EXPECT_NEAR(posterior_entropy_value(MatD::Constant(1, 1, 1e-12)), 0.0, 1e-9);
    EXPECT_DOUBLE_EQ(posterior_entropy_value(MatD::Constant(1, 1, 1.0)), 0.0);
}

TEST(Strength, Examples) {
    numerics::Rng rng(4);
    MatD sigma(4, 2);
    for (Eigen::Index k = 0; k < sigma.size(); ++k) sigma.data()[k] = rng.uniform();
    const auto ones = causal_strength(sigma, MatD::Ones(4, 2), 2);
    EXPECT_TRUE(ones.per_lag.isApprox(sigma, 0));
    EXPECT_TRUE(ones.mean.isApprox(0.5 * (sigma.topRows(2) + sigma.bottomRows(2)), 1e-15));

    const auto zero = causal_strength(MatD::Zero(4, 2), sigma, 2);
    EXPECT_EQ(zero.mean.cwiseAbs().maxCoeff(), 0.0);

    MatD g(4, 2);
    g << 1, 0, 0, 1, 1, 1, 0, 0;
    MatD w(4, 2);
    w << 2, 5, 7, 4, 6, -2, 9, 9;
    const auto s = causal_strength(g, w, 2);
    // (1*2 + 1*6)/2, (0 + 1*-2)/2, (0 + 0)/2, (1*4 + 0)/2
    EXPECT_DOUBLE_EQ(s.mean(0, 0), 4.0);
    EXPECT_DOUBLE_EQ(s.mean(0, 1), -1.0);
    EXPECT_DOUBLE_EQ(s.mean(1, 0), 0.0);
    EXPECT_DOUBLE_EQ(s.mean(1, 1), 2.0);
}

TEST(PriorGraph, LoadsEdgesBySymbol) {
    const auto path = std::filesystem::temp_directory_path() / "cs_prior.csv";
    std::ofstream(path) << "lag,from_symbol,to_symbol,value\n1,A,B,1\n2,B,A,1\n";
    const MatD p = load_prior_graph(path, {"A", "B"}, 2);
    MatD expect = MatD::Zero(4, 2);
    expect(0, 1) = 1;
    expect(3, 0) = 1;
    EXPECT_EQ(p, expect);
    std::ofstream(path) << "lag,from_symbol,to_symbol,value\n3,A,B,1\n";
    EXPECT_THROW(load_prior_graph(path, {"A", "B"}, 2), ConfigError);
    std::filesystem::remove(path);
}

TEST(Gumbel, FixedSeedReproduces) {
    numerics::Rng a(9);
    numerics::Rng b(9);
    const auto x = GumbelNoise<double>::draw(4, 3, a);
    const auto y = GumbelNoise<double>::draw(4, 3, b);
    EXPECT_EQ(x.exist, y.exist);
    EXPECT_EQ(x.absent, y.absent);
}

TEST(Encoders, ShapesWithAndWithoutNews) {
    numerics::Rng rng(2);
    auto cfg = small_config(3, 5, true);
    cfg.news_dim = 64;
    Model<double> with(cfg, 1);
    const auto b = random_batch(2, 3, 5, true, rng);
    const MatD x = with.encoders().assemble(b, 1);
    EXPECT_EQ(x.rows(), 15);
    EXPECT_EQ(x.cols(), 68);

    cfg.use_news = false;
    Model<double> without(cfg, 1);
    const MatD y = without.encoders().assemble(b, 1);
    EXPECT_EQ(y.rows(), 15);
    EXPECT_EQ(y.cols(), 4);
}

TEST(Encoders, PriceEmbeddingIsAffine) {
    auto cfg = small_config(2, 1, false);
    cfg.price_dim = 6;
    Model<double> m(cfg, 1);
    m.params().value("price_embed.W") = MatD::Identity(6, 6);
    m.params().value("price_embed.b").setZero();
    numerics::Tape<double> tape(&m.params());
    MatD p(2, 6);
    p << 0, 0, 0, 0, 0, 0, 1, 2, 3, 4, 5, 6;
    const MatD out = m.encoders().price(tape, p).value();
    EXPECT_EQ(out, p);
}

TEST(Encoders, NewsPooling) {
    auto cfg = small_config(1, 1, true);
    Model<double> m(cfg, 1);
    numerics::Tape<double> tape(&m.params());
    MatD item(1, 5);
    item << 3, -0.2, 4, 5, 6;
    MatD two(2, 5);
    two << item, item;
    const MatD one = m.encoders().news(tape, item, {0}, MatD::Zero(1, 1)).value();
    const MatD pair = m.encoders().news(tape, two, {0, 0}, MatD::Zero(1, 1)).value();
    EXPECT_TRUE(one.isApprox(pair, 1e-15));
    const MatD direct = item * m.params().value("news_embed.W") + m.params().value("news_embed.b");
    EXPECT_TRUE(one.isApprox(direct, 1e-15));
    const MatD empty = m.encoders().news(tape, MatD(0, 5), {}, MatD::Ones(1, 1)).value();
    EXPECT_EQ(empty, m.params().value("no_news"));
}

TEST(Fcm, EmptyGraphIgnoresInputs) {
    numerics::Rng rng(3);
    auto cfg = small_config(3, 2, true);
    Model<double> m(cfg, 7);
    const auto a = random_batch(4, 3, 2, true, rng);
    auto b = random_batch(4, 3, 2, true, rng);
    const MatD zero = MatD::Zero(6, 3);
    const MatD pa = m.predict(a, zero);
    const MatD pb = m.predict(b, zero);
    EXPECT_TRUE(pa.isApprox(pb, 1e-15));
    // equals zeta_i applied to the zero vector
    for (std::size_t i = 0; i < 3; ++i) {
        numerics::Tape<double> tape(&m.params());
        MatD z = MatD::Zero(1, 6);
        for (int k = 0; k < 2; ++k) {
            const auto w = m.params().value(fmt::format("zeta{}.l{}.W", i, k));
            const auto bias = m.params().value(fmt::format("zeta{}.l{}.b", i, k));
            z = z * w + bias;
            if (k == 0) z = z.array().tanh().matrix();
        }
        EXPECT_NEAR(pa(static_cast<Eigen::Index>(i * 4), 0), 1.0 / (1.0 + std::exp(-z(0, 0))), 1e-14);
    }
}

TEST(Fcm, HandComputedOneEdge) {
    ModelConfig cfg;
    cfg.stocks = 2;
    cfg.lags = 1;
    cfg.price_dim = 1;
    cfg.branch_width = 1;
    cfg.depth = 1;
    cfg.use_news = false;
    Model<double> m(cfg, 1);
    auto& p = m.params();
    p.value("price_embed.W") = MatD::Zero(6, 1);
    p.value("price_embed.W")(0, 0) = 1;
    p.value("price_embed.b").setZero();
    p.value("ell.l0.W").setConstant(0.5);
    p.value("ell.l0.b").setConstant(0.1);
    p.value("zeta0.l0.W").setConstant(1);
    p.value("zeta0.l0.b").setConstant(-0.2);
    p.value("zeta1.l0.W").setConstant(3);
    p.value("zeta1.l0.b").setConstant(0);
    p.value("graph.Ghat").setConstant(2);

    Batch<double> b;
    b.windows = 1;
    b.stocks = 2;
    b.lags = 1;
    b.prices = MatD::Zero(2, 6);
    b.prices(0, 0) = 0.8;   // stock 0
    b.prices(1, 0) = -1.5;  // stock 1
    b.news = MatD(0, 5);
    b.no_news = MatD::Ones(2, 1);
    b.labels = MatD::Zero(2, 1);
    b.mask = MatD::Ones(2, 1);

    MatD g = MatD::Zero(2, 2);
    g(0, 1) = 1;  // stock 0 -> stock 1
    const MatD y = m.predict(b, g);
    // stock 0 has no parents: sigmoid(-0.2)
    EXPECT_NEAR(y(0, 0), 1.0 / (1.0 + std::exp(0.2)), 1e-15);
    // stock 1: ell(0.8) = 0.5 * 0.8 + 0.1 = 0.5, times G*Ghat = 2 -> 1.0, head 3 * 1.0
    EXPECT_NEAR(y(1, 0), 1.0 / (1.0 + std::exp(-3.0)), 1e-15);
}

TEST(Fcm, ResidualAndLikelihood) {
    const auto z = residual_noise({1, 0}, {1 - 1e-9, 0.5});
    EXPECT_GT(z[0], 0);
    EXPECT_LT(z[0], 1e-8);
    EXPECT_DOUBLE_EQ(z[1], -0.5);
    EXPECT_NEAR(gaussian_loglik_value({0}, {0}, {true}), -0.9189385332, 1e-9);
    EXPECT_NEAR(gaussian_loglik_value({1}, {0}, {true}), -1.4189385332, 1e-9);
    EXPECT_DOUBLE_EQ(gaussian_loglik_value({1, 5}, {0, 0}, {true, false}), gaussian_loglik_value({1}, {0}, {true}));
    EXPECT_THROW(residual_noise({1}, {0.5, 0.5}), ConfigError);

    numerics::Rng rng(1);
    auto cfg = small_config(2, 1, false);
    Model<double> m(cfg, 1);
    auto b = random_batch(3, 2, 1, false, rng);
    b.mask(1, 0) = 0;
    m.params().value("noise.log_var") << 0.3, -0.4;
    numerics::Tape<double> tape(&m.params());
    const MatD g = MatD::Ones(2, 2);
    auto prob = tape.constant(m.predict(b, g));
    const double ll = m.fcm().gaussian_loglik(tape, b, prob).value()(0, 0);
    std::vector<double> zz, lv;
    std::vector<bool> mask;
    for (Eigen::Index r = 0; r < 6; ++r) {
        zz.push_back(b.labels(r, 0) - prob.value()(r, 0));
        lv.push_back(r < 3 ? 0.3 : -0.4);
        mask.push_back(b.mask(r, 0) > 0);
    }
    EXPECT_NEAR(ll, gaussian_loglik_value(zz, lv, mask), 1e-12);
}

TEST(Batch, NonFinitePriceNamesStockAndDay) {
    data::MarketWindow w;
    w.target = data::parse_date("2015-10-05");
    w.stocks = 2;
    w.lags = 1;
    w.prices.assign(2, {1, 1, 1, 1, 1, 1});
    w.prices[1][0] = std::nan("");
    w.news.resize(2);
    w.labels = {data::Movement::Rise, data::Movement::Fall};
    const std::vector<std::string> symbols{"A", "B"};
    try {
        make_batch<double>({&w}, data::Normalizer{}, false, 10, &symbols);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("B"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("2015-10-0"), std::string::npos);
    }
}

TEST(Batch, SkipLabelsAreMasked) {
    data::MarketWindow w;
    w.stocks = 2;
    w.lags = 1;
    w.prices.assign(2, {1, 1, 1, 1, 1, 1});
    w.news.resize(2);
    w.labels = {data::Movement::Skip, data::Movement::Rise};
    const auto b = make_batch<double>({&w}, data::Normalizer{}, false, 10);
    EXPECT_EQ(b.mask(0, 0), 0);
    EXPECT_EQ(b.mask(1, 0), 1);
    EXPECT_EQ(b.labeled(), 1u);
}
