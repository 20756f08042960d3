#include "causalstock/synth/system.h"

#include "causalstock/error.h"
#include "causalstock/news/prompt.h"
#include "causalstock/news/scorer.h"
#include "causalstock/numerics/rng.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace causalstock::synth {

using numerics::Rng;

namespace {

constexpr double kStableRadius = 0.9;

std::string link_name(Link l) { return l == Link::Linear ? "linear" : "tanh"; }

nlohmann::json matrix_json(const MatD& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        std::vector<double> row(static_cast<std::size_t>(m.cols()));
        for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(r, c);
        rows.push_back(row);
    }
    return rows;
}

MatD matrix_from_json(const nlohmann::json& j) {
    const auto rows = j.size();
    const auto cols = rows ? j[0].size() : 0;
    MatD m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
    return m;
}

std::vector<data::Date> business_days(std::size_t n) {
    using namespace std::chrono;
    std::vector<data::Date> out;
    out.reserve(n);
    sys_days d = sys_days(year{2000} / January / 3);
    while (out.size() < n) {
        const weekday w{d};
        if (w != Saturday && w != Sunday) out.emplace_back(d);
        d += days{1};
    }
    return out;
}

}  // namespace

std::size_t GroundTruthSystem::edge_count() const {
    return static_cast<std::size_t>((graph.array() > 0.5).count());
}

MatD GroundTruthSystem::effective_weights() const {
    MatD w = graph.cwiseProduct(weights);
    const auto d = static_cast<Eigen::Index>(stocks);
    for (std::size_t l = 0; l < lags; ++l) {
        w.middleRows(static_cast<Eigen::Index>(l) * d, d) *= std::pow(stability, static_cast<double>(l + 1));
    }
    return w;
}

double spectral_radius(const GroundTruthSystem& sys) {
    const auto d = static_cast<Eigen::Index>(sys.stocks);
    const auto n = d * static_cast<Eigen::Index>(sys.lags);
    const MatD w = sys.effective_weights();
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t l = 0; l < sys.lags; ++l) {
        // A_l(i, j) is the weight from stock j at lag l + 1 onto stock i.
        companion.block(0, static_cast<Eigen::Index>(l) * d, d, d) =
            w.middleRows(static_cast<Eigen::Index>(l) * d, d).transpose();
    }
    if (n > d) companion.block(d, 0, n - d, n - d).setIdentity();
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

GroundTruthSystem generate_system(std::size_t stocks, std::size_t lags, double density, Link link,
                                  std::uint64_t seed, double noise_scale) {
    if (stocks < 2) throw ConfigError("synthetic system needs D >= 2");
    if (lags < 1) throw ConfigError("synthetic system needs L >= 1");
    if (!(density > 0.0 && density <= 0.5)) throw ConfigError("edge density must lie in (0, 0.5]");
    GroundTruthSystem sys;
    sys.stocks = stocks;
    sys.lags = lags;
    sys.density = density;
    sys.link = link;
    sys.seed = seed;
    sys.noise_scale.assign(stocks, noise_scale);
    const auto rows = static_cast<Eigen::Index>(stocks * lags);
    const auto d = static_cast<Eigen::Index>(stocks);
    sys.graph = MatD::Zero(rows, d);
    sys.weights = MatD::Zero(rows, d);

    Rng rng(seed);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) sys.graph(r, c) = rng.bernoulli(density) ? 1.0 : 0.0;
    }
    for (Eigen::Index i = 0; i < d; ++i) {
        if (sys.graph.col(i).sum() == 0.0) sys.graph(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(rows))), i) = 1.0;
    }
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
            const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
            const double mag = rng.uniform(0.5, 1.5);
            if (sys.graph(r, c) > 0.5) sys.weights(r, c) = sign * mag;
        }
    }
    if (link == Link::Linear) {
        const double rho = spectral_radius(sys);
        if (rho >= 1.0) sys.stability = kStableRadius / rho;
    }
    return sys;
}

GroundTruthSystem zero_system(std::size_t stocks, std::size_t lags, std::uint64_t seed) {
    GroundTruthSystem sys = generate_system(stocks, lags, 0.5, Link::Linear, seed);
    sys.weights.setZero();
    sys.stability = 1.0;
    return sys;
}

SimulatedMarket simulate(const GroundTruthSystem& sys, const SimulateOptions& opts) {
    const std::size_t burn = 10 * sys.lags;
    if (opts.steps <= burn) throw ConfigError(fmt::format("simulation needs more than {} steps", burn));
    const std::size_t d = sys.stocks;
    const std::size_t total = burn + opts.steps;
    const MatD w = sys.effective_weights();

    Rng rng(sys.seed ^ 0x51D0C0DEULL);
    MatD x = MatD::Zero(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(d));
    for (std::size_t t = 0; t < total; ++t) {
        for (std::size_t i = 0; i < d; ++i) {
            double pre = 0.0;
            for (std::size_t l = 0; l < sys.lags && l < t; ++l) {
                for (std::size_t j = 0; j < d; ++j) {
                    pre += w(static_cast<Eigen::Index>(l * d + j), static_cast<Eigen::Index>(i)) *
                           x(static_cast<Eigen::Index>(t - l - 1), static_cast<Eigen::Index>(j));
                }
            }
            const double f = sys.link == Link::Linear ? pre : std::tanh(pre);
            x(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i)) = f + sys.noise_scale[i] * rng.normal();
        }
    }

    SimulatedMarket m;
    m.latent = x.bottomRows(static_cast<Eigen::Index>(opts.steps));
    const auto dates = business_days(opts.steps);
    for (std::size_t i = 0; i < d; ++i) {
        m.symbols.push_back(fmt::format("S{:02d}", i));
        data::PriceSeries s;
        s.symbol = m.symbols.back();
        double prev = 100.0;
        for (std::size_t t = 0; t < opts.steps; ++t) {
            const double v = m.latent(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(i));
            data::PriceRecord r;
            r.date = dates[t];
            r.open = prev;
            r.adj_close = prev * std::exp(opts.price_scale * v);
            r.close = r.adj_close;
            r.high = std::max(r.open, r.close) * (1.0 + 0.001 * std::abs(v));
            r.low = std::min(r.open, r.close) * (1.0 - 0.001 * std::abs(v));
            r.volume = 1e6 * std::exp(0.3 * v);
            prev = r.adj_close;
            s.records.push_back(r);
        }
        m.prices.push_back(std::move(s));
    }

    if (opts.news) {
        Rng nrng(sys.seed ^ 0x4E3A5ULL);
        for (std::size_t t = 0; t + 1 < opts.steps; ++t) {
            for (std::size_t i = 0; i < d; ++i) {
                if (opts.news_coverage < 1.0 && !nrng.bernoulli(opts.news_coverage)) continue;
                const double next = m.latent(static_cast<Eigen::Index>(t + 1), static_cast<Eigen::Index>(i));
                news::NewsScore score;
                score.correlation = 8.0;
                score.sentiment = std::clamp(0.5 * next + opts.news_noise * nrng.normal(), -1.0, 1.0);
                score.importance = 5.0;
                score.impact = std::clamp(5.0 + 2.0 * std::abs(next), 0.0, 10.0);
                score.duration = 5.0;
                data::NewsItem item;
                item.symbol = m.symbols[i];
                item.published_text = data::format_date(dates[t]) + "T16:00:00Z";
                item.published = data::parse_timestamp(item.published_text);
                item.text = fmt::format("Synthetic bulletin for {} on {}: outlook {:.4f}.", item.symbol,
                                        data::format_date(dates[t]), score.sentiment);
                m.news.push_back(item);
                m.scored.push_back({item.symbol, item.published, score});
            }
        }
    }
    return m;
}

double auroc(const MatD& scores, const MatD& truth) {
    numerics::require_same_shape(numerics::shape_of(scores), numerics::shape_of(truth), "auroc");
    const auto n = static_cast<std::size_t>(scores.size());
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return scores.data()[a] < scores.data()[b]; });
    double rank_sum = 0.0;
    std::size_t pos = 0;
    for (std::size_t k = 0; k < n;) {
        std::size_t e = k;
        while (e + 1 < n && scores.data()[idx[e + 1]] == scores.data()[idx[k]]) ++e;
        const double avg = 0.5 * static_cast<double>(k + e) + 1.0;
        for (std::size_t q = k; q <= e; ++q) {
            if (truth.data()[idx[q]] > 0.5) {
                rank_sum += avg;
                ++pos;
            }
        }
        k = e + 1;
    }
    const std::size_t neg = n - pos;
    if (pos == 0 || neg == 0) throw ConfigError("AUROC is undefined when the true graph is all zeros or all ones");
    const double p = static_cast<double>(pos);
    return (rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(neg));
}

Recovery recovery_score(const MatD& sigma, const MatD& truth) {
    Recovery r;
    r.auroc = auroc(sigma, truth);
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    for (Eigen::Index k = 0; k < sigma.size(); ++k) {
        const bool p = sigma.data()[k] > 0.5;
        const bool t = truth.data()[k] > 0.5;
        tp += p && t;
        fp += p && !t;
        fn += !p && t;
    }
    r.f1 = (2 * tp + fp + fn) == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
    r.shd = fp + fn;
    return r;
}

nlohmann::json to_json(const GroundTruthSystem& sys) {
    nlohmann::json j;
    j["format"] = "causalstock.ground_truth/1";
    j["stocks"] = sys.stocks;
    j["lags"] = sys.lags;
    j["density"] = sys.density;
    j["link"] = link_name(sys.link);
    j["seed"] = sys.seed;
    j["stability"] = sys.stability;
    j["layout"] = "row (lag - 1) * D + from, column to";
    j["graph"] = matrix_json(sys.graph);
    j["weights"] = matrix_json(sys.weights);
    j["noise_scale"] = sys.noise_scale;
    return j;
}

GroundTruthSystem system_from_json(const nlohmann::json& j) {
    GroundTruthSystem sys;
    try {
        sys.stocks = j.at("stocks").get<std::size_t>();
        sys.lags = j.at("lags").get<std::size_t>();
        sys.density = j.at("density").get<double>();
        sys.link = j.at("link").get<std::string>() == "tanh" ? Link::Tanh : Link::Linear;
        sys.seed = j.at("seed").get<std::uint64_t>();
        sys.stability = j.at("stability").get<double>();
        sys.graph = matrix_from_json(j.at("graph"));
        sys.weights = matrix_from_json(j.at("weights"));
        sys.noise_scale = j.at("noise_scale").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed ground-truth file: ") + e.what());
    }
    return sys;
}

void write_dataset(const std::filesystem::path& dir, const GroundTruthSystem& sys, const SimulatedMarket& market) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "prices");
    for (const auto& s : market.prices) data::write_prices(dir / "prices" / (s.symbol + ".csv"), s);
    const auto& days = market.prices.front().records;
    const std::size_t n = days.size();

    std::ofstream manifest(dir / "manifest.txt");
    if (!manifest) throw DataError("cannot write " + (dir / "manifest.txt").string());
    std::string symbols;
    for (const auto& s : market.symbols) symbols += (symbols.empty() ? "" : ", ") + s;
    manifest << "# synthetic market, seed " << sys.seed << "\n";
    manifest << "symbols = " << symbols << "\n";
    manifest << "price_dir = prices\n";
    manifest << "price_format = raw\n";
    manifest << "valid_start = " << data::format_date(days[n * 70 / 100].date) << "\n";
    manifest << "test_start = " << data::format_date(days[n * 85 / 100].date) << "\n";
    manifest << "calendar = intersection\n";
    if (!market.news.empty()) {
        data::write_news(dir / "news.jsonl", market.news);
        news::ScoreCache cache;
        for (std::size_t k = 0; k < market.news.size(); ++k) {
            const auto& item = market.news[k];
            cache.put({news::item_key(item), item.symbol, data::format_timestamp(item.published),
                       market.scored[k].score, "synthetic", news::kPromptVersion, "", false});
        }
        news::export_scores(cache, dir / "scores.jsonl", news::kPromptVersion);
        manifest << "news = news.jsonl\n";
        manifest << "scores = scores.jsonl\n";
    }
    std::ofstream truth(dir / "ground_truth.json");
    if (!truth) throw DataError("cannot write " + (dir / "ground_truth.json").string());
    truth << to_json(sys).dump(2) << '\n';
}

}  // namespace causalstock::synth
