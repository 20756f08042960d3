#include "causalstock/cli/commands.h"

#include "causalstock/data/manifest.h"
#include "causalstock/data/news_items.h"
#include "causalstock/error.h"
#include "causalstock/eval/backtest.h"
#include "causalstock/eval/strength.h"
#include "causalstock/model/config.h"
#include "causalstock/news/cache.h"
#include "causalstock/news/client.h"
#include "causalstock/news/prompt.h"
#include "causalstock/news/scorer.h"
#include "causalstock/synth/bench.h"
#include "causalstock/synth/system.h"
#include "causalstock/train/audit.h"
#include "causalstock/train/checkpoint.h"
#include "causalstock/train/dataset.h"
#include "causalstock/train/trainer.h"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#ifndef CAUSALSTOCK_VERSION
#define CAUSALSTOCK_VERSION "unknown"
#endif

namespace causalstock::cli {

using numerics::MatD;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw DataError("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + p.string());
    out << text;
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

data::KeyValueFile overrides_file(const std::vector<std::string>& overrides) {
    std::string text;
    for (const auto& o : overrides) {
        if (o.find('=') == std::string::npos) throw ConfigError("override '" + o + "' is not key=value");
        text += o + "\n";
    }
    return data::KeyValueFile::parse(text, "--set");
}

// One `lag,from,to,value` row per entry of an (L*D) x D tensor.
void write_lag_cube(const fs::path& p, const MatD& m, const std::vector<std::string>& symbols, std::size_t lags) {
    const std::size_t d = symbols.size();
    std::string out = "lag,from,to,value\n";
    for (std::size_t l = 0; l < lags; ++l) {
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t i = 0; i < d; ++i) {
                out += fmt::format("{},{},{},{:.17g}\n", l + 1, symbols[j], symbols[i],
                                   m(static_cast<Eigen::Index>(l * d + j), static_cast<Eigen::Index>(i)));
            }
        }
    }
    write_text(p, out);
}

std::vector<fs::path> dataset_inputs(const data::Manifest& m, bool news) {
    std::vector<fs::path> in{fs::path(m.source.origin())};
    for (const auto& s : m.symbols) in.push_back(m.price_files.at(s));
    if (news) {
        if (m.news_file) in.push_back(*m.news_file);
        if (m.scores_file) in.push_back(*m.scores_file);
    }
    return in;
}

template <typename T>
std::vector<train::WindowPrediction> run_prediction(const train::Checkpoint& ckpt,
                                                    const std::vector<data::MarketWindow>& windows) {
    auto m = train::restore_model<T>(ckpt);
    numerics::Rng rng(ckpt.config.train.seed ^ 0x5EEDULL);
    return train::predict_windows(*m, windows, ckpt.normalizer, m->inference_graph(&rng));
}

template <typename T>
nlohmann::json run_training(const model::RunConfig& cfg, const train::Dataset& ds, const fs::path& out,
                            const MatD* prior, bool quiet) {
    model::Model<T> m(cfg.model, cfg.train.seed);
    train::TrainOptions opts;
    opts.out_dir = out;
    opts.symbols = ds.symbols();
    opts.normalizer = ds.normalizer;
    opts.run = cfg;
    opts.prior = prior;
    if (!quiet) {
        opts.on_epoch = [](const train::EpochMetrics& e) {
            std::cerr << fmt::format("epoch {:3d}  loss {:.5g}  valid acc {:.4f}  mcc {:.4f}\n", e.epoch,
                                     e.loss.total, e.valid_acc, e.valid_mcc);
        };
    }
    const auto res = train::train(m, ds.splits.train, ds.splits.valid, cfg.train, opts);

    nlohmann::json summary;
    summary["best_epoch"] = res.best_epoch;
    summary["best_valid_acc"] = res.best_valid_acc;
    summary["early_stopped"] = res.early_stopped;
    summary["epochs_run"] = res.history.empty() ? 0 : res.history.back().epoch;
    summary["mean_sigma"] = m.sigma().mean();
    if (!ds.splits.test.empty()) {
        numerics::Rng rng(cfg.train.seed ^ 0x5EEDULL);
        const auto preds = train::predict_windows(m, ds.splits.test, ds.normalizer, m.inference_graph(&rng));
        const auto c = train::confusion(preds);
        if (c.total() > 0) {
            summary["test_acc"] = eval::accuracy(c);
            summary["test_mcc"] = eval::mcc(c);
        }
    }
    auto warnings = ds.warnings;
    warnings.insert(warnings.end(), res.warnings.begin(), res.warnings.end());
    summary["warnings"] = warnings;
    return summary;
}

synth::Link parse_link(const std::string& s) {
    if (s == "linear") return synth::Link::Linear;
    if (s == "tanh") return synth::Link::Tanh;
    throw ConfigError("unknown link '" + s + "' (linear or tanh)");
}

nlohmann::json synth_json(const SynthArgs& a) {
    return {{"stocks", a.stocks}, {"lags", a.lags},   {"density", a.density}, {"link", a.link},
            {"steps", a.steps},   {"seed", a.seed},   {"news", a.news},       {"zero_weights", a.zero_weights}};
}

}  // namespace

nlohmann::json digest_inputs(const std::vector<fs::path>& paths) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& p : paths) {
        if (fs::is_directory(p)) {
            std::vector<fs::path> files;
            for (const auto& e : fs::recursive_directory_iterator(p)) {
                if (e.is_regular_file()) files.push_back(e.path());
            }
            std::sort(files.begin(), files.end());
            for (const auto& f : files) out[f.generic_string()] = news::sha256_hex(read_file(f));
        } else if (fs::is_regular_file(p)) {
            out[p.generic_string()] = news::sha256_hex(read_file(p));
        } else {
            out[p.generic_string()] = nullptr;
        }
    }
    return out;
}

void write_run_manifest(const fs::path& file, const RunManifest& m) {
    nlohmann::json j;
    j["format"] = "causalstock.run/1";
    j["command"] = m.command;
    j["code_version"] = CAUSALSTOCK_VERSION;
    j["seed"] = m.seed;
    j["config"] = m.config;
    j["inputs"] = digest_inputs(m.inputs);
    std::vector<std::string> outs;
    for (const auto& o : m.outputs) outs.push_back(o.generic_string());
    j["outputs"] = outs;
    j["created_at"] = utc_now();
    write_text(file, j.dump(2) + "\n");
}

void ingest(const IngestArgs& a) {
    const auto m = data::Manifest::load(data::Manifest::resolve(a.manifest));
    const bool news = a.news && m.news_file && m.scores_file;
    const auto ds = train::load_dataset(a.manifest, a.lags, a.max_news, news);

    nlohmann::json j;
    j["symbols"] = ds.symbols();
    j["days"] = ds.panel.days();
    if (ds.panel.days() > 0) {
        j["first_date"] = data::format_date(ds.panel.dates.front());
        j["last_date"] = data::format_date(ds.panel.dates.back());
    }
    j["lags"] = a.lags;
    j["news_items"] = ds.news.size();
    std::string windows = "target,split\n";
    auto split_summary = [&](const std::vector<data::MarketWindow>& ws, const char* name) {
        std::size_t rise = 0, fall = 0, skip = 0;
        for (const auto& w : ws) {
            windows += fmt::format("{},{}\n", data::format_date(w.target), name);
            for (auto l : w.labels) {
                if (l == data::Movement::Rise) ++rise;
                else if (l == data::Movement::Fall) ++fall;
                else ++skip;
            }
        }
        j["splits"][name] = {{"windows", ws.size()}, {"rise", rise}, {"fall", fall}, {"skip", skip}};
    };
    split_summary(ds.splits.train, "train");
    split_summary(ds.splits.valid, "valid");
    split_summary(ds.splits.test, "test");
    j["normalizer"] = ds.normalizer.to_json();
    j["warnings"] = ds.warnings;

    fs::create_directories(a.out);
    write_text(a.out / "dataset_summary.json", j.dump(2) + "\n");
    write_text(a.out / "windows.csv", windows);
    for (const auto& w : ds.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << fmt::format("{} stocks, {} days, windows train/valid/test = {}/{}/{}\n", ds.symbols().size(),
                             ds.panel.days(), ds.splits.train.size(), ds.splits.valid.size(), ds.splits.test.size());
    write_run_manifest(a.out / "run_manifest.json",
                       {"ingest",
                        {{"lags", a.lags}, {"max_news", a.max_news}, {"news", news}},
                        0,
                        dataset_inputs(m, news),
                        {a.out / "dataset_summary.json", a.out / "windows.csv"}});
}

void score_news(const ScoreNewsArgs& a) {
    const auto m = data::Manifest::load(data::Manifest::resolve(a.manifest));
    if (!m.news_file) throw ConfigError("manifest has no `news` file to score");
    fs::path cache_path = a.cache;
    if (cache_path.empty()) {
        if (!m.scores_file) throw ConfigError("no score cache given and the manifest has no `scores` entry");
        cache_path = *m.scores_file;
    }
    news::ScoreCache cache;
    if (fs::exists(cache_path)) cache = news::import_scores(cache_path, news::kPromptVersion);
    data::NewsLoadReport load_report;
    const auto items = data::load_news(*m.news_file, &load_report);
    for (const auto& w : load_report.warnings) std::cerr << "warning: " << w << '\n';

    std::unique_ptr<news::ChatClient> client;
    if (!a.offline) {
        auto hc = news::HttpClientConfig::from_env();
        if (hc.url.empty()) throw ConfigError("CAUSALSTOCK_LLM_URL is not set (or pass --offline)");
        client = std::make_unique<news::HttpChatClient>(hc);
    }
    news::ScoringConfig sc;
    sc.offline = a.offline;
    sc.concurrency = a.concurrency;
    sc.requests_per_second = a.requests_per_second;
    news::ScoringReport rep;
    try {
        news::score_news(items, client.get(), cache, sc, &rep);
    } catch (...) {
        // Keep whatever was scored before the failure.
        if (!a.offline) news::export_scores(cache, cache_path, news::kPromptVersion);
        throw;
    }
    news::export_scores(cache, cache_path, news::kPromptVersion);
    for (const auto& f : rep.failures) std::cerr << "failed: " << f << '\n';
    std::cout << fmt::format("{} items: {} cached, {} scored, {} fallbacks, {} requests\n", rep.items,
                             rep.cache_hits, rep.scored, rep.fallbacks, rep.requests);
    fs::path mf = cache_path;
    mf += ".run.json";
    write_run_manifest(mf, {"score-news",
                            {{"offline", a.offline},
                             {"prompt_version", news::kPromptVersion},
                             {"model", client ? client->model() : std::string()}},
                            0,
                            {*m.news_file},
                            {cache_path}});
}

void train(const TrainArgs& a) {
    model::RunConfig cfg;
    if (!a.config.empty()) cfg = model::config_from_file(data::KeyValueFile::load(a.config));
    if (!a.overrides.empty()) model::apply_overrides(cfg, overrides_file(a.overrides));
    if (a.lag_independent && a.existence_only) {
        throw ConfigError("--lag-independent and --existence-only are mutually exclusive");
    }
    if (a.no_news) cfg.model.use_news = false;
    if (a.lag_independent) cfg.model.graph_mode = model::GraphMode::LagIndependent;
    if (a.existence_only) cfg.model.graph_mode = model::GraphMode::ExistenceOnly;

    const auto ds = train::load_dataset(a.data, cfg.model.lags, cfg.model.max_news, cfg.model.use_news);
    cfg.model.stocks = ds.symbols().size();
    model::validate(cfg);
    for (const auto& w : ds.warnings) std::cerr << "warning: " << w << '\n';

    MatD prior;
    if (!cfg.train.prior_graph.empty()) {
        prior = model::load_prior_graph(cfg.train.prior_graph, ds.symbols(), cfg.model.lags);
    }
    const MatD* prior_ptr = cfg.train.prior_graph.empty() ? nullptr : &prior;

    fs::create_directories(a.out);
    write_text(a.out / "config.txt", model::config_to_file(cfg).to_string());
    const auto summary = cfg.train.precision == model::Precision::F64
                             ? run_training<double>(cfg, ds, a.out, prior_ptr, a.quiet)
                             : run_training<float>(cfg, ds, a.out, prior_ptr, a.quiet);
    write_text(a.out / "summary.json", summary.dump(2) + "\n");
    if (!a.quiet) {
        std::cout << fmt::format("best epoch {} valid acc {:.4f}", summary["best_epoch"].get<int>(),
                                 summary["best_valid_acc"].get<double>());
        if (summary.contains("test_acc")) {
            std::cout << fmt::format(", test acc {:.4f} mcc {:.4f}", summary["test_acc"].get<double>(),
                                     summary["test_mcc"].get<double>());
        }
        std::cout << '\n';
    }

    auto inputs = dataset_inputs(ds.manifest, cfg.model.use_news);
    if (!a.config.empty()) inputs.push_back(a.config);
    if (prior_ptr) inputs.push_back(cfg.train.prior_graph);
    write_run_manifest(a.out / "run_manifest.json",
                       {"train", model::to_json(cfg), cfg.train.seed, inputs,
                        {a.out / "config.txt", a.out / "metrics.csv", a.out / "timing.csv", a.out / "best.json",
                         a.out / "last.json", a.out / "summary.json"}});
}

void discover(const DiscoverArgs& a) {
    const auto ckpt = train::load_checkpoint(a.checkpoint);
    const auto m = train::restore_model<double>(ckpt);
    const MatD sigma = m->sigma();
    const MatD ghat = m->ghat();
    numerics::Rng rng(a.seed);
    MatD hard(sigma.rows(), sigma.cols());
    for (Eigen::Index k = 0; k < sigma.size(); ++k) hard.data()[k] = rng.bernoulli(sigma.data()[k]) ? 1.0 : 0.0;
    const std::size_t lags = ckpt.config.model.lags;
    const auto strength = model::causal_strength(sigma, ghat, lags);

    fs::create_directories(a.out);
    write_text(a.out / "graph.json", model::graph_export(ckpt.symbols, lags, sigma, ghat, hard).dump(2) + "\n");
    write_lag_cube(a.out / "sigma.csv", sigma, ckpt.symbols, lags);
    write_lag_cube(a.out / "ghat.csv", ghat, ckpt.symbols, lags);
    write_lag_cube(a.out / "strength_per_lag.csv", strength.per_lag, ckpt.symbols, lags);
    std::string mean = "from";
    for (const auto& s : ckpt.symbols) mean += "," + s;
    mean += "\n";
    for (Eigen::Index r = 0; r < strength.mean.rows(); ++r) {
        mean += ckpt.symbols[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < strength.mean.cols(); ++c) mean += fmt::format(",{:.17g}", strength.mean(r, c));
        mean += "\n";
    }
    write_text(a.out / "strength_matrix.csv", mean);
    write_run_manifest(a.out / "run_manifest.json",
                       {"discover",
                        {{"sample_seed", a.seed}},
                        a.seed,
                        {a.checkpoint},
                        {a.out / "graph.json", a.out / "sigma.csv", a.out / "ghat.csv",
                         a.out / "strength_per_lag.csv", a.out / "strength_matrix.csv"}});
}

void predict(const PredictArgs& a) {
    const auto ckpt = train::load_checkpoint(a.checkpoint);
    const auto& mc = ckpt.config.model;
    const std::set<std::string> known = {"train", "valid", "test", "all"};
    if (!known.count(a.split)) throw ConfigError("unknown split '" + a.split + "' (train, valid, test or all)");
    const auto ds = train::load_dataset(a.data, mc.lags, mc.max_news, mc.use_news);
    if (ds.symbols() != ckpt.symbols) {
        throw DataError(fmt::format("dataset symbols do not match the checkpoint (trained on {})",
                                    fmt::join(ckpt.symbols, ",")));
    }
    std::vector<data::MarketWindow> windows;
    auto add = [&](const std::vector<data::MarketWindow>& ws) { windows.insert(windows.end(), ws.begin(), ws.end()); };
    if (a.split == "train" || a.split == "all") add(ds.splits.train);
    if (a.split == "valid" || a.split == "all") add(ds.splits.valid);
    if (a.split == "test" || a.split == "all") add(ds.splits.test);

    const auto preds = ckpt.config.train.precision == model::Precision::F64 ? run_prediction<double>(ckpt, windows)
                                                                           : run_prediction<float>(ckpt, windows);
    std::vector<eval::PredictionRow> rows;
    for (const auto& p : preds) {
        for (std::size_t s = 0; s < p.prob.size(); ++s) {
            rows.push_back({p.target, ckpt.symbols[s], p.prob[s], static_cast<int>(p.labels[s])});
        }
    }
    if (a.out.has_parent_path()) fs::create_directories(a.out.parent_path());
    eval::write_predictions(a.out, rows);
    const auto c = train::confusion(preds);
    if (c.total() > 0) {
        std::cout << fmt::format("{} windows, acc {:.4f} mcc {:.4f}\n", preds.size(), eval::accuracy(c), eval::mcc(c));
    }
    fs::path mf = a.out;
    mf += ".run.json";
    auto inputs = dataset_inputs(ds.manifest, mc.use_news);
    inputs.insert(inputs.begin(), a.checkpoint);
    write_run_manifest(mf, {"predict", {{"split", a.split}, {"inference", model::to_string(mc.inference)}},
                            ckpt.config.train.seed, inputs, {a.out}});
}

void backtest(const BacktestArgs& a) {
    const auto preds = eval::load_predictions(a.predictions);
    std::map<std::string, data::PriceSeries> prices;
    std::vector<fs::path> inputs{a.predictions};
    const bool is_manifest = fs::is_regular_file(a.prices) || fs::exists(a.prices / "manifest.txt");
    if (is_manifest) {
        const auto m = data::Manifest::load(data::Manifest::resolve(a.prices));
        for (auto& s : data::load_all_prices(m)) prices.emplace(s.symbol, std::move(s));
        for (const auto& s : m.symbols) inputs.push_back(m.price_files.at(s));
    } else {
        std::set<std::string> symbols;
        for (const auto& p : preds) symbols.insert(p.symbol);
        for (const auto& s : symbols) {
            const fs::path file = a.prices / (s + ".csv");
            if (!fs::exists(file)) {
                std::cerr << "warning: no price file for " << s << '\n';
                continue;
            }
            prices.emplace(s, data::load_prices(file, s, std::nullopt));
            inputs.push_back(file);
        }
    }
    eval::BacktestOptions bo;
    bo.k = a.k;
    bo.risk_free = a.risk_free;
    bo.cost_per_turnover = a.cost;
    const auto res = eval::backtest(preds, prices, bo);
    for (const auto& l : res.log) std::cerr << "note: " << l << '\n';

    fs::create_directories(a.out);
    std::string apv = "date,return,apv,holdings\n";
    for (std::size_t t = 0; t < res.dates.size(); ++t) {
        apv += fmt::format("{},{:.17g},{:.17g},{}\n", data::format_date(res.dates[t]), res.returns[t], res.apv[t],
                           fmt::join(res.holdings[t], " "));
    }
    write_text(a.out / "apv.csv", apv);
    std::string metrics = "metric,value\n";
    metrics += fmt::format("k,{}\n", a.k);
    metrics += fmt::format("days,{}\n", res.dates.size());
    metrics += fmt::format("final_apv,{:.17g}\n", res.final_apv);
    metrics += fmt::format("sharpe_apv,{:.17g}\n", res.sharpe_apv);
    metrics += fmt::format("sharpe_daily,{:.17g}\n", res.sharpe_daily);
    metrics += fmt::format("risk_free,{:.17g}\n", res.risk_free);
    metrics += fmt::format("cost_per_turnover,{:.17g}\n", a.cost);
    write_text(a.out / "metrics.csv", metrics);
    std::cout << fmt::format("{} days, final APV {:.6f}, SR(APV) {:.6f}, SR(daily) {:.6f}, risk-free {}\n",
                             res.dates.size(), res.final_apv, res.sharpe_apv, res.sharpe_daily, res.risk_free);
    write_run_manifest(a.out / "run_manifest.json",
                       {"backtest",
                        {{"k", a.k}, {"risk_free", a.risk_free}, {"cost_per_turnover", a.cost}},
                        0,
                        inputs,
                        {a.out / "apv.csv", a.out / "metrics.csv"}});
}

void synth_data(const SynthArgs& a) {
    const auto sys = a.zero_weights ? synth::zero_system(a.stocks, a.lags, a.seed)
                                    : synth::generate_system(a.stocks, a.lags, a.density, parse_link(a.link), a.seed);
    synth::SimulateOptions so;
    so.steps = a.steps;
    so.news = a.news;
    const auto market = synth::simulate(sys, so);
    synth::write_dataset(a.out, sys, market);
    std::cout << fmt::format("{} stocks, {} edges, {} days written to {}\n", a.stocks, sys.edge_count(), a.steps,
                             a.out.string());
    write_run_manifest(a.out / "run_manifest.json",
                       {"synth-data", synth_json(a), a.seed, {}, {a.out / "manifest.txt", a.out / "ground_truth.json"}});
}

bool synth_bench(const SynthBenchArgs& a) {
    synth::BenchConfig cfg;
    cfg.stocks = a.system.stocks;
    cfg.lags = a.system.lags;
    cfg.density = a.system.density;
    cfg.link = parse_link(a.system.link);
    cfg.steps = a.system.steps;
    cfg.seed = a.system.seed;
    cfg.news = a.system.news;
    cfg.zero_weights = a.system.zero_weights;
    cfg.trials = a.trials;
    cfg.permutations = a.permutations;
    if (!a.overrides.empty()) model::apply_overrides(cfg.run, overrides_file(a.overrides));
    if (cfg.trials < 1) throw ConfigError("--trials must be >= 1");

    const auto res = synth::run_bench(cfg, a.system.out, [&](const synth::TrialResult& t) {
        if (!a.quiet) {
            std::cerr << fmt::format("trial {}  auroc {:.4f}  baseline p95 {:.4f}  f1 {:.3f}  shd {}  valid acc {:.4f}\n",
                                     t.trial, t.recovery.auroc, t.baseline_p95, t.recovery.f1, t.recovery.shd,
                                     t.best_valid_acc);
        }
    });
    const bool all_beat = std::all_of(res.trials.begin(), res.trials.end(),
                                      [](const synth::TrialResult& t) { return t.beats_baseline(); });
    const bool pass = res.mean_auroc() >= 0.85 && all_beat;
    if (!a.quiet) {
        std::cout << fmt::format("mean AUROC {:.4f} over {} trials; every trial above baseline: {}\n",
                                 res.mean_auroc(), res.trials.size(), all_beat ? "yes" : "no");
    }
    if (!a.system.out.empty()) {
        auto config = synth_json(a.system);
        config["trials"] = a.trials;
        config["permutations"] = a.permutations;
        config["run"] = model::to_json(cfg.run);
        std::vector<fs::path> outputs{a.system.out / "synth_bench.csv"};
        for (const auto& t : res.trials) outputs.push_back(a.system.out / fmt::format("trial_{}", t.trial));
        write_run_manifest(a.system.out / "run_manifest.json", {"synth-bench", config, a.system.seed, {}, outputs});
    }
    return pass;
}

void strength(const StrengthArgs& a) {
    const auto graph = nlohmann::json::parse(read_file(a.graph));
    const auto values = eval::load_market_values(a.market_values);
    const auto rep = eval::strength_report(graph, values, a.shuffles, a.seed);
    for (const auto& l : rep.log) std::cerr << "note: " << l << '\n';
    eval::write_strength_report(a.out, rep);
    write_run_manifest(a.out / "run_manifest.json",
                       {"strength",
                        {{"shuffles", a.shuffles}},
                        a.seed,
                        {a.graph, a.market_values},
                        {a.out / "strength.csv", a.out / "strength_matrix.csv", a.out / "spearman.json"}});
    if (!rep.correlation) throw ConfigError(rep.correlation_error);
    std::cout << fmt::format("Spearman rho {:.4f}, permutation p {:.4f} ({} shuffles)\n", rep.correlation->rho,
                             rep.correlation->p_value, rep.correlation->shuffles);
}

bool audit(const AuditArgs& a) {
    auto fx = train::make_audit_fixture(a.seed, a.detach);
    train::AuditOptions ao;
    ao.step = a.step;
    ao.tolerance = a.tolerance;
    const auto rep = train::gradient_audit(*fx->model, fx->batch, fx->options, ao);
    for (const auto& g : rep.groups) {
        std::cout << fmt::format("{:<22} {:5d}  |a| {:.3e}  |n| {:.3e}  rel {:.2e}  {}\n", g.name, g.entries,
                                 g.analytic_norm, g.numeric_norm, g.rel_error, g.pass ? "ok" : "FAIL");
    }
    return rep.pass();
}

}  // namespace causalstock::cli
