// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include "causalstock/cli/commands.h"
#include "causalstock/data/panel.h"
#include "causalstock/error.h"
#include "causalstock/eval/backtest.h"
#include "causalstock/eval/metrics.h"
#include "causalstock/model/causal_graph.h"
#include "causalstock/model/model.h"
#include "causalstock/news/parser.h"
#include "causalstock/news/prompt.h"
#include "causalstock/numerics/ops.h"
#include "causalstock/numerics/rng.h"
#include "causalstock/synth/bench.h"
#include "causalstock/train/audit.h"
#include "causalstock/train/loss.h"
#include "causalstock/train/trainer.h"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace causalstock;
using numerics::MatD;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 1 -------------------------------------------------------------------------

Outcome gradient_audit() {
    const auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    double worst = 0.0;
    std::string failed;
    for (bool detach : {false, true}) {
        auto fx = train::make_audit_fixture(1, detach);
        train::AuditOptions ao;
        ao.step = 1e-5;
        ao.tolerance = 1e-4;
        const auto rep = train::gradient_audit(*fx->model, fx->batch, fx->options, ao);
        for (const auto& g : rep.groups) worst = std::max(worst, g.rel_error);
        for (const auto& f : rep.failures()) failed += " " + f;
        pass = pass && rep.pass() && !rep.groups.empty();
    }
    const double secs = seconds_since(t0);
    pass = pass && secs < 60.0;
    return {pass, fmt::format("max rel error {:.3g} (tol 1e-4), {:.1f}s{}", worst, secs,
                              failed.empty() ? "" : ", failing:" + failed)};
}

// 2 -------------------------------------------------------------------------

Outcome synthetic_recovery() {
    const auto t0 = std::chrono::steady_clock::now();
    synth::BenchConfig cfg;
    const auto res = synth::run_bench(cfg);
    const double secs = seconds_since(t0);
    bool all_above = true;
    std::string per;
    for (const auto& t : res.trials) {
        all_above = all_above && t.beats_baseline();
        per += fmt::format(" [{:.3f} vs p95 {:.3f}]", t.recovery.auroc, t.baseline_p95);
    }
    const double mean = res.mean_auroc();
    const bool pass = mean >= 0.85 && all_above && res.trials.size() == 5 && secs < 900.0;
    return {pass, fmt::format("mean AUROC {:.4f} (>= 0.85), trials{}, {:.0f}s", mean, per, secs)};
}

// 3 -------------------------------------------------------------------------

Outcome detachment() {
    auto on = train::make_audit_fixture(5, true);
    auto off = train::make_audit_fixture(5, false);
    const auto uid = on->model->params().id("graph.U");

    // The sampled graph at the base point, frozen as a constant news graph.
    MatD frozen;
    {
        numerics::Tape<double> tape(&off->model->params());
        numerics::Rng rng(1);
        frozen = train::compute_loss(tape, *off->model, off->batch, off->options, rng).graph.value();
    }
    auto frozen_opts = off->options;
    frozen_opts.news_graph = &frozen;

    const MatD g_on = train::analytic_gradients(*on->model, on->batch, on->options)[uid];
    const MatD g_off = train::analytic_gradients(*off->model, off->batch, off->options)[uid];
    const MatD g_frozen = train::analytic_gradients(*off->model, off->batch, frozen_opts)[uid];

    // Detach on: the news path adds nothing at all to dL/dU.
    const double news_path_on = (g_on - g_frozen).cwiseAbs().maxCoeff();

    // Detach off: the news-path contribution measured by finite differences.
    const MatD fd_full = train::numeric_gradient(*off->model, off->batch, off->options, uid, 1e-5);
    const MatD fd_frozen = train::numeric_gradient(*off->model, off->batch, frozen_opts, uid, 1e-5);
    const MatD fd_path = fd_full - fd_frozen;
    const MatD an_path = g_off - g_frozen;
    const double rel = (fd_path - an_path).norm() / std::max(fd_path.norm(), an_path.norm());
    const double toggle = (g_on - g_off).norm();

    const bool pass = news_path_on == 0.0 && fd_path.norm() > 1e-8 && rel <= 1e-4 && toggle > 1e-8;
    return {pass, fmt::format("detach on: news-path |dL/dU| max {:.3g} (= 0); detach off: FD news-path norm {:.3g}, "
                              "analytic vs FD rel {:.3g}; |g_on - g_off| {:.3g}",
                              news_path_on, fd_path.norm(), rel, toggle)};
}

// 4 -------------------------------------------------------------------------

model::Batch<double> random_batch(std::size_t d, std::size_t l, numerics::Rng& rng) {
    model::Batch<double> b;
    b.windows = 1;
    b.stocks = d;
    b.lags = l;
    const auto rows = static_cast<Eigen::Index>(b.rows());
    b.prices = MatD(rows, 6);
    for (Eigen::Index k = 0; k < b.prices.size(); ++k) b.prices.data()[k] = rng.normal();
    b.no_news = MatD::Ones(rows, 1);
    std::vector<int> slots;
    for (Eigen::Index r = 0; r < rows; ++r) {
        const int items = static_cast<int>(rng.index(3));
        for (int n = 0; n < items; ++n) slots.push_back(static_cast<int>(r));
        if (items > 0) b.no_news(r, 0) = 0;
    }
    b.news_slot = slots;
    b.news = MatD(static_cast<Eigen::Index>(slots.size()), 5);
    for (Eigen::Index r = 0; r < b.news.rows(); ++r) {
        b.news(r, 0) = rng.uniform(0, 10);
        b.news(r, 1) = rng.uniform(-1, 1);
        for (int c = 2; c < 5; ++c) b.news(r, c) = rng.uniform(0, 10);
    }
    b.labels = MatD::Zero(static_cast<Eigen::Index>(d), 1);
    b.mask = MatD::Ones(static_cast<Eigen::Index>(d), 1);
    return b;
}

Outcome masking() {
    constexpr std::size_t d = 4;
    constexpr std::size_t l = 2;
    numerics::Rng rng(2024);
    std::size_t checks = 0;
    std::size_t violations = 0;
    std::size_t child_moves = 0;
    std::unique_ptr<model::Model<double>> m;
    for (int pair = 0; pair < 1000; ++pair) {
        if (pair % 50 == 0) {
            model::ModelConfig cfg;
            cfg.stocks = d;
            cfg.lags = l;
            cfg.price_dim = 4;
            cfg.news_dim = 8;
            cfg.hidden = 16;
            cfg.branch_width = 4;
            cfg.depth = 3;
            cfg.use_news = true;
            m = std::make_unique<model::Model<double>>(cfg, 100 + static_cast<std::uint64_t>(pair));
        }
        MatD g(static_cast<Eigen::Index>(l * d), static_cast<Eigen::Index>(d));
        for (Eigen::Index k = 0; k < g.size(); ++k) g.data()[k] = rng.bernoulli(0.3) ? 1.0 : 0.0;
        auto batch = random_batch(d, l, rng);
        const MatD base = m->predict(batch, g);

        // Perturb every input coordinate of one stock-day slot.
        const std::size_t k = rng.index(l);
        const std::size_t j = rng.index(d);
        const auto slot = static_cast<Eigen::Index>(batch.slot(0, k, j));
        auto moved = batch;
        for (int c = 0; c < 6; ++c) moved.prices(slot, c) += rng.normal() * 3.0;
        for (Eigen::Index r = 0; r < moved.news.rows(); ++r) {
            if (moved.news_slot[static_cast<std::size_t>(r)] != slot) continue;
            moved.news(r, 0) = rng.uniform(0, 10);
            moved.news(r, 1) = rng.uniform(-1, 1);
        }
        const MatD after = m->predict(moved, g);
        for (std::size_t i = 0; i < d; ++i) {
            const bool parent = g(static_cast<Eigen::Index>(k * d + j), static_cast<Eigen::Index>(i)) > 0;
            const double delta = after(static_cast<Eigen::Index>(i), 0) - base(static_cast<Eigen::Index>(i), 0);
            if (parent) {
                child_moves += delta != 0.0;
                continue;
            }
            ++checks;
            violations += delta != 0.0;
        }
    }
    const bool pass = violations == 0 && checks > 0 && child_moves > 0;
    return {pass, fmt::format("{} non-child outputs checked, {} changed (= 0); {} child outputs moved", checks,
                              violations, child_moves)};
}

// 5 -------------------------------------------------------------------------

Outcome closed_forms() {
    constexpr int n_sigma = 20;
    constexpr int n_samples = 100000;
    constexpr int chunk = 10000;
    constexpr Eigen::Index rows = 4;  // L = 2, D = 2... flattened edges below
    constexpr Eigen::Index cols = 3;
    const double lambda_s = 0.7;
    const double lambda_d = 0.4;
    numerics::Rng rng(77);
    int fails = 0;
    double worst_entropy = 0, worst_prior = 0, worst_count = 0, worst_edge = 0;

    for (int s = 0; s < n_sigma; ++s) {
        MatD sigma(rows, cols);
        MatD prior(rows, cols);
        for (Eigen::Index k = 0; k < sigma.size(); ++k) {
            sigma.data()[k] = rng.uniform(0.02, 0.98);
            prior.data()[k] = rng.bernoulli(0.4) ? 1.0 : 0.0;
        }
        const Eigen::Index e = sigma.size();
        MatD log_s(chunk, e), log_1ms(chunk, e);
        for (Eigen::Index c = 0; c < e; ++c) {
            log_s.col(c).setConstant(std::log(sigma.data()[c]));
            log_1ms.col(c).setConstant(std::log1p(-sigma.data()[c]));
        }

        double sum_nlq = 0, sum_nlq2 = 0, sum_lp = 0, sum_lp2 = 0, edges_total = 0;
        Eigen::VectorXd edge_hits = Eigen::VectorXd::Zero(e);
        for (int start = 0; start < n_samples; start += chunk) {
            MatD ga(chunk, e), gb(chunk, e);
            for (Eigen::Index k = 0; k < ga.size(); ++k) {
                ga.data()[k] = rng.gumbel();
                gb.data()[k] = rng.gumbel();
            }
            numerics::Tape<double> tape;
            const auto a = tape.constant(log_s);
            const auto b = tape.constant(log_1ms);
            const MatD hard = numerics::straight_through(numerics::gumbel_softmax2(a, b, ga, gb, 1.0)).value();
            for (Eigen::Index r = 0; r < chunk; ++r) {
                MatD g(rows, cols);
                double nlq = 0;
                for (Eigen::Index c = 0; c < e; ++c) {
                    const double x = hard(r, c);
                    g.data()[c] = x;
                    nlq -= x > 0.5 ? log_s(0, c) : log_1ms(0, c);
                }
                const double lp = model::log_prior_value(g, lambda_s, lambda_d, &prior);
                sum_nlq += nlq;
                sum_nlq2 += nlq * nlq;
                sum_lp += lp;
                sum_lp2 += lp * lp;
                edges_total += g.sum();
            }
            edge_hits += hard.colwise().sum().transpose();
        }
        const double n = n_samples;
        auto z_of = [&](double sum, double sum2, double target) {
            const double mean = sum / n;
            const double var = (sum2 - n * mean * mean) / (n - 1);
            return (mean - target) / std::sqrt(var / n);
        };
        // Expected log prior under independent Bernoulli(sigma) edges.
        double expected_lp = 0;
        for (Eigen::Index c = 0; c < e; ++c) {
            const double p = sigma.data()[c];
            const double gp = prior.data()[c];
            expected_lp += -lambda_s * p - lambda_d * (p * (1 - 2 * gp) + gp);
        }
        const double z_h = z_of(sum_nlq, sum_nlq2, model::posterior_entropy_value(sigma));
        const double z_p = z_of(sum_lp, sum_lp2, expected_lp);
        const double mean_edges = sigma.sum();
        double var_edges = 0;
        for (Eigen::Index c = 0; c < e; ++c) var_edges += sigma.data()[c] * (1 - sigma.data()[c]);
        const double z_c = (edges_total / n - mean_edges) / std::sqrt(var_edges / n);
        for (Eigen::Index c = 0; c < e; ++c) {
            const double p = sigma.data()[c];
            worst_edge = std::max(worst_edge, std::abs(edge_hits(c) / n - p) / std::sqrt(p * (1 - p) / n));
        }
        fails += std::abs(z_h) > 3;
        fails += std::abs(z_p) > 3;
        fails += std::abs(z_c) > 3;
        worst_entropy = std::max(worst_entropy, std::abs(z_h));
        worst_prior = std::max(worst_prior, std::abs(z_p));
        worst_count = std::max(worst_count, std::abs(z_c));
    }
    return {fails == 0, fmt::format("max |z| over 20 Sigma: entropy {:.2f}, log prior {:.2f}, edge count {:.2f} "
                                    "(<= 3); per-edge max |z| {:.2f} over {} edges",
                                    worst_entropy, worst_prior, worst_count, worst_edge, n_sigma * rows * cols)};
}

// 6 -------------------------------------------------------------------------

Outcome metric_oracles() {
    numerics::Rng rng(6);
    int mismatches = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::uint64_t want[4] = {rng.index(200), rng.index(200), rng.index(200), rng.index(200)};
        std::vector<std::pair<double, int>> items;
        // tp: predicted rise, rose; fp: predicted rise, fell; tn; fn.
        for (std::uint64_t k = 0; k < want[0]; ++k) items.emplace_back(rng.uniform(0.5001, 1.0), 1);
        for (std::uint64_t k = 0; k < want[1]; ++k) items.emplace_back(rng.uniform(0.5001, 1.0), 0);
        for (std::uint64_t k = 0; k < want[2]; ++k) items.emplace_back(rng.uniform(0.0, 0.4999), 0);
        for (std::uint64_t k = 0; k < want[3]; ++k) items.emplace_back(rng.uniform(0.0, 0.4999), 1);
        if (items.empty()) continue;
        rng.shuffle(items.begin(), items.end());
        std::vector<double> prob;
        std::vector<int> labels;
        for (const auto& [p, y] : items) prob.push_back(p), labels.push_back(y);
        // Brute force: walk the items directly.
        std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0, correct = 0;
        for (std::size_t k = 0; k < prob.size(); ++k) {
            const bool up = prob[k] > 0.5;
            const int y = labels[k];
            tp += up && y == 1;
            fp += up && y == 0;
            tn += !up && y == 0;
            fn += !up && y == 1;
            correct += (up ? 1 : 0) == y;
        }
        const auto c = eval::confusion(prob, labels);
        if (c.tp != tp || c.fp != fp || c.tn != tn || c.fn != fn) ++mismatches;
        const double acc = static_cast<double>(correct) / static_cast<double>(prob.size());
        if (eval::accuracy(c) != acc) ++mismatches;
        // MCC from exact integer numerator and denominator
        const std::int64_t num = static_cast<std::int64_t>(tp * tn) - static_cast<std::int64_t>(fp * fn);
        const unsigned __int128 den =
            static_cast<unsigned __int128>(tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
        const double m = den == 0 ? 0.0 : static_cast<double>(num) / std::sqrt(static_cast<double>(den));
        if (eval::mcc(c) != m) ++mismatches;
    }
    const bool zero_edge = eval::mcc({5, 0, 0, 0}) == 0.0 && eval::mcc({0, 0, 7, 0}) == 0.0 &&
                           eval::mcc({3, 2, 0, 0}) == 0.0 && eval::mcc({0, 0, 4, 2}) == 0.0;
    const double worked = eval::mcc({2, 1, 3, 0});
    const bool pass = mismatches == 0 && zero_edge && std::abs(worked - 0.7071) <= 1e-4;
    return {pass, fmt::format("{} mismatches over 1000 random matrices, zero-denominator cases {}, "
                              "worked example MCC {:.6f}",
                              mismatches, zero_edge ? "ok" : "wrong", worked)};
}

// 7 -------------------------------------------------------------------------

double spreadsheet_sharpe(const std::vector<double>& x, double rf) {
    long double sum = 0;
    for (double v : x) sum += static_cast<long double>(v) - rf;
    const long double mean = sum / x.size();
    long double ss = 0;
    for (double v : x) ss += (v - rf - mean) * (v - rf - mean);
    return static_cast<double>(mean / std::sqrt(ss / (x.size() - 1)));
}

data::PriceSeries series_from(const std::string& sym, const std::vector<double>& adj, const data::Date& first) {
    data::PriceSeries s;
    s.symbol = sym;
    auto day = std::chrono::sys_days(first);
    for (double p : adj) {
        data::PriceRecord r;
        r.date = data::Date(day);
        r.adj_close = r.close = r.open = r.high = r.low = p;
        s.records.push_back(r);
        day += std::chrono::days(1);
    }
    return s;
}

Outcome backtest_arithmetic() {
    const auto d0 = data::parse_date("2021-03-01");
    std::map<std::string, data::PriceSeries> px;
    px["A"] = series_from("A", {100, 110, 104.5}, d0);
    px["B"] = series_from("B", {100, 90, 99}, d0);
    const auto d1 = data::Date(std::chrono::sys_days(d0) + std::chrono::days(1));
    const auto d2 = data::Date(std::chrono::sys_days(d0) + std::chrono::days(2));
    std::vector<eval::PredictionRow> preds{{d1, "A", 0.9, 1}, {d1, "B", 0.2, 0}, {d2, "A", 0.7, 0}, {d2, "B", 0.6, 1}};
    eval::BacktestOptions o;
    o.k = 1;
    const auto r = eval::backtest(preds, px, o);
    const double e1 = std::abs(r.apv.at(0) - 1.10);
    const double e2 = std::abs(r.apv.at(1) - 1.045);

    // A longer random run checked against an independent recomputation.
    numerics::Rng rng(71);
    std::map<std::string, data::PriceSeries> many;
    std::vector<eval::PredictionRow> rows;
    const std::vector<std::string> syms{"AA", "BB", "CC", "DD"};
    for (const auto& s : syms) {
        std::vector<double> adj{50};
        for (int t = 0; t < 80; ++t) adj.push_back(adj.back() * std::exp(0.02 * rng.normal()));
        many[s] = series_from(s, adj, d0);
    }
    for (int t = 1; t <= 80; ++t) {
        for (const auto& s : syms) {
            rows.push_back({data::Date(std::chrono::sys_days(d0) + std::chrono::days(t)), s, rng.uniform(), -1});
        }
    }
    eval::BacktestOptions o2;
    o2.k = 1;
    o2.risk_free = 0.0001;
    const auto r2 = eval::backtest(rows, many, o2);
    std::vector<double> rets;
    for (int t = 1; t <= 80; ++t) {
        const eval::PredictionRow* best = nullptr;
        for (const auto& p : rows) {
            if (p.date != data::Date(std::chrono::sys_days(d0) + std::chrono::days(t))) continue;
            if (!best || p.probability > best->probability) best = &p;
        }
        const auto& rec = many[best->symbol].records;
        rets.push_back(rec[static_cast<std::size_t>(t)].adj_close / rec[static_cast<std::size_t>(t) - 1].adj_close - 1);
    }
    std::vector<double> apv;
    double v = 1;
    for (double x : rets) apv.push_back(v *= 1 + x);
    const double sr_err = std::max({std::abs(r.sharpe_apv - spreadsheet_sharpe({1.10, 1.045}, 0)),
                                    std::abs(r2.sharpe_apv - spreadsheet_sharpe(apv, 0.0001)),
                                    std::abs(r2.sharpe_daily - spreadsheet_sharpe(rets, 0.0001))});
    const bool pass = e1 <= 1e-12 && e2 <= 1e-12 && sr_err <= 1e-9;
    return {pass, fmt::format("APV [{:.15g}, {:.15g}], max SR deviation {:.3g} (<= 1e-9)", r.apv[0], r.apv[1], sr_err)};
}

// 8 -------------------------------------------------------------------------

Outcome prompt_fidelity() {
    const std::string dir = CAUSALSTOCK_GOLDEN_DIR;
    const std::string system = slurp(dir + "/system_prompt.txt");
    const std::string block = slurp(dir + "/default_prompt.txt");
    const std::string input = slurp(dir + "/input_fixture.txt");
    const auto p = news::build_prompt("AAPL", "Apple may delay the launch of its 5G iPhone by several months.",
                                      "2020-04-14T13:05:00Z");
    const bool system_ok = p.system == system;
    const bool block_ok = p.user.find(block) == 0 && p.user.find(input) != std::string::npos &&
                          p.user.find("Correlation: <Correlation score between the news and the stock>") !=
                              std::string::npos;
    const auto s = news::parse_scores(slurp(dir + "/response_aapl.txt"));
    const auto s2 = news::parse_scores("Correlation: 8\nSentiment: -0.7\nImportance: 8\nImpact: 9\nDuration: 6");
    const bool parse_ok = s == news::NewsScore{9, -0.7, 8, 9, 6} && s2 == news::NewsScore{8, -0.7, 8, 9, 6};
    return {system_ok && block_ok && parse_ok,
            fmt::format("system block {}, default prompt block {}, response parse {} (sentiment {}, impact {})",
                        system_ok ? "exact" : "differs", block_ok ? "exact" : "differs", parse_ok ? "ok" : "wrong",
                        s.sentiment, s.impact)};
}

// 9 -------------------------------------------------------------------------

struct SanityRun {
    double initial = 0, final = 0, data_initial = 0, data_final = 0, valid_acc = 0, best_valid = 0;
    int epochs = 0;
};

SanityRun sanity_run(bool zero_weights, std::uint64_t seed) {
    synth::BenchConfig cfg;
    auto run = synth::BenchConfig::bench_run_config();
    run.train.epochs = 200;
    run.train.patience = 200;
    run.train.seed = seed;
    run.model.stocks = cfg.stocks;
    run.model.lags = cfg.lags;
    run.model.use_news = false;
    const auto sys = zero_weights ? synth::zero_system(cfg.stocks, cfg.lags, seed)
                                  : synth::generate_system(cfg.stocks, cfg.lags, cfg.density, cfg.link, seed);
    synth::SimulateOptions so;
    so.steps = cfg.steps;
    const auto market = synth::simulate(sys, so);
    const auto panel = data::align(market.prices, data::CalendarPolicy::Intersection, data::LabelMode::strict());
    auto windows = data::build_windows(panel, nullptr, cfg.lags, run.model.max_news);
    const std::size_t n = panel.days();
    const data::SplitDates dates{panel.dates[n * 70 / 100], panel.dates[n * 85 / 100]};
    const auto splits = data::chronological_split(std::move(windows), dates);
    train::TrainOptions opts;
    opts.symbols = market.symbols;
    opts.normalizer = data::fit_normalizer(panel, dates.valid_start);
    opts.run = run;
    model::Model<float> m(run.model, seed);
    const auto tr = train::train(m, splits.train, splits.valid, run.train, opts);
    SanityRun s;
    const auto data_term = [&](const train::LossBreakdown& l) {
        return (-l.loglik + run.train.lambda * l.bce) / static_cast<double>(cfg.stocks);
    };
    s.initial = tr.history.front().loss.total;
    s.final = tr.history.back().loss.total;
    s.data_initial = data_term(tr.history.front().loss);
    s.data_final = data_term(tr.history.back().loss);
    s.valid_acc = tr.history.back().valid_acc;
    s.best_valid = tr.best_valid_acc;
    s.epochs = static_cast<int>(tr.history.size()) - 1;
    return s;
}

Outcome training_sanity() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto sig = sanity_run(false, 1);
    const auto ctl = sanity_run(true, 1);
    const double secs = seconds_since(t0);
    const double drop = (sig.initial - sig.final) / std::abs(sig.initial);
    const double data_drop = (sig.data_initial - sig.data_final) / std::abs(sig.data_initial);
    const bool pass = drop >= 0.30 && sig.valid_acc > 0.55 && std::abs(ctl.valid_acc - 0.5) <= 0.05 && secs < 600.0;
    return {pass, fmt::format("loss {:.4f} -> {:.4f} over {} epochs, decrease {:.1f}% (>= 30%; data term {:.4f} -> "
                              "{:.4f}, {:.1f}%); valid ACC signal {:.4f} (> 0.55), zero-weight control {:.4f} "
                              "(~0.50); {:.0f}s",
                              sig.initial, sig.final, sig.epochs, 100 * drop, sig.data_initial, sig.data_final,
                              100 * data_drop, sig.valid_acc, ctl.valid_acc, secs)};
}

// 10 ------------------------------------------------------------------------

Outcome determinism() {
    const auto root = fs::temp_directory_path() / "causalstock_acceptance_determinism";
    fs::remove_all(root);
    cli::SynthArgs s;
    s.stocks = 4;
    s.lags = 2;
    s.density = 0.2;
    s.steps = 400;
    s.seed = 3;
    s.out = root / "data";
    cli::synth_data(s);

    std::vector<std::string> train_logs;
    for (int run = 0; run < 2; ++run) {
        cli::TrainArgs t;
        t.data = s.out;
        t.out = root / fmt::format("train_{}", run);
        t.quiet = true;
        t.overrides = {"epochs=5", "hidden=16", "branch_width=4", "lags=2", "learning_rate=0.003", "seed=11"};
        cli::train(t);
        train_logs.push_back(slurp(t.out / "metrics.csv"));
    }

    std::vector<std::string> bench_logs;
    for (int run = 0; run < 2; ++run) {
        cli::SynthBenchArgs b;
        b.system.stocks = 4;
        b.system.lags = 2;
        b.system.density = 0.2;
        b.system.steps = 400;
        b.system.seed = 5;
        b.system.out = root / fmt::format("bench_{}", run);
        b.trials = 2;
        b.permutations = 100;
        b.overrides = {"epochs=5"};
        b.quiet = true;
        cli::synth_bench(b);
        std::string all = slurp(b.system.out / "synth_bench.csv");
        for (int t = 0; t < 2; ++t) all += slurp(b.system.out / fmt::format("trial_{}", t) / "metrics.csv");
        bench_logs.push_back(all);
    }
    const bool train_same = !train_logs[0].empty() && train_logs[0] == train_logs[1];
    const bool bench_same = !bench_logs[0].empty() && bench_logs[0] == bench_logs[1];
    fs::remove_all(root);
    return {train_same && bench_same,
            fmt::format("train metrics.csv {}; synth-bench summary and trial logs {}",
                        train_same ? "byte-identical" : "differ", bench_same ? "byte-identical" : "differ")};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"gradient audit", gradient_audit},
        {"synthetic causal recovery", synthetic_recovery},
        {"detachment contract", detachment},
        {"masking exactness", masking},
        {"closed-form cross-checks", closed_forms},
        {"metric oracles", metric_oracles},
        {"backtest arithmetic", backtest_arithmetic},
        {"prompt fidelity", prompt_fidelity},
        {"training sanity", training_sanity},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << fmt::format("{} criterion {:>2} {}: {}", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                                 o.detail)
                  << std::endl;
    }
    std::cout << fmt::format("{} of {} criteria passed", criteria.size() - static_cast<std::size_t>(failed),
                             criteria.size())
              << std::endl;
    return failed == 0 ? 0 : 1;
}
