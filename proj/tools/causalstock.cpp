#include "causalstock/cli/commands.h"
#include "causalstock/error.h"

#include <CLI11.hpp>

#include <iostream>

using namespace causalstock;

namespace {

constexpr const char* kFooter = R"(Exit codes:
  0  success
  1  unexpected internal error
  2  configuration or usage error (bad flag, unknown key, invalid value)
  3  data error (malformed or inconsistent input, unparseable response)
  4  network error (endpoint unreachable, rejected credentials)
  5  numeric error (divergence, non-finite values)
  6  synth-bench or audit ran but missed its target)";

void add_synth_flags(CLI::App* cmd, cli::SynthArgs& s) {
    cmd->add_option("--D", s.stocks, "number of stocks")->capture_default_str();
    cmd->add_option("--L", s.lags, "number of lags")->capture_default_str();
    cmd->add_option("--density", s.density, "edge probability")->capture_default_str();
    cmd->add_option("--link", s.link, "linear or tanh")->capture_default_str();
    cmd->add_option("--steps", s.steps, "simulated trading days")->capture_default_str();
    cmd->add_option("--seed", s.seed, "base seed")->capture_default_str();
    cmd->add_flag("--news", s.news, "emit synthetic news with scores");
    cmd->add_flag("--zero-weights", s.zero_weights, "control system without signal");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal discovery and movement prediction for multi-stock markets"};
    app.footer(kFooter);
    app.require_subcommand(1);

    cli::IngestArgs ingest;
    auto* c_ingest = app.add_subcommand("ingest", "validate a dataset and summarise its windows");
    c_ingest->add_option("--manifest", ingest.manifest, "manifest file or dataset directory")->required();
    c_ingest->add_option("--out", ingest.out, "output directory")->required();
    c_ingest->add_option("--lags", ingest.lags, "window length L")->capture_default_str();
    c_ingest->add_option("--max-news", ingest.max_news, "news items kept per stock-day")->capture_default_str();

    cli::ScoreNewsArgs score;
    auto* c_score = app.add_subcommand("score-news", "score news items through the chat endpoint with caching");
    c_score->add_option("--manifest", score.manifest, "manifest file or dataset directory")->required();
    c_score->add_option("--cache", score.cache, "score cache (default: the manifest's scores file)");
    c_score->add_flag("--offline", score.offline, "never call the endpoint; cache misses are errors");
    c_score->add_option("--concurrency", score.concurrency, "parallel requests")->capture_default_str();
    c_score->add_option("--rps", score.requests_per_second, "request rate limit")->capture_default_str();
    c_score->footer("Endpoint settings: CAUSALSTOCK_LLM_URL, CAUSALSTOCK_LLM_API_KEY, CAUSALSTOCK_LLM_MODEL, "
                    "CAUSALSTOCK_LLM_TIMEOUT.");

    cli::TrainArgs train;
    auto* c_train = app.add_subcommand("train", "train the model with checkpoints and metric logs");
    c_train->add_option("--config", train.config, "key = value configuration file");
    c_train->add_option("--data", train.data, "manifest file or dataset directory")->required();
    c_train->add_option("--out", train.out, "output directory")->required();
    c_train->add_option("--set", train.overrides, "override a configuration key (key=value), repeatable");
    c_train->add_flag("--no-news", train.no_news, "train on prices only");
    c_train->add_flag("--lag-independent", train.lag_independent, "drop the lag-dependent transform");
    c_train->add_flag("--existence-only", train.existence_only, "model link existence only (no V)");
    c_train->add_flag("--quiet", train.quiet, "no per-epoch progress");

    cli::DiscoverArgs discover;
    auto* c_discover = app.add_subcommand("discover", "export Sigma, G-hat and strength matrices");
    c_discover->add_option("--checkpoint", discover.checkpoint, "checkpoint file")->required();
    c_discover->add_option("--out", discover.out, "output directory")->required();
    c_discover->add_option("--seed", discover.seed, "seed of the exported hard sample")->capture_default_str();

    cli::PredictArgs predict;
    auto* c_predict = app.add_subcommand("predict", "per-date movement probabilities");
    c_predict->add_option("--checkpoint", predict.checkpoint, "checkpoint file")->required();
    c_predict->add_option("--data", predict.data, "manifest file or dataset directory")->required();
    c_predict->add_option("--out", predict.out, "output CSV")->required();
    c_predict->add_option("--split", predict.split, "train, valid, test or all")->capture_default_str();

    cli::BacktestArgs backtest;
    auto* c_backtest = app.add_subcommand("backtest", "top-k equal-weight backtest of a prediction file");
    c_backtest->add_option("--predictions", backtest.predictions, "CSV from predict")->required();
    c_backtest->add_option("--prices", backtest.prices, "price directory or dataset manifest")->required();
    c_backtest->add_option("--out", backtest.out, "output directory")->required();
    c_backtest->add_option("--k", backtest.k, "stocks held per day")->capture_default_str();
    c_backtest->add_option("--risk-free", backtest.risk_free, "risk-free level subtracted in SR")->capture_default_str();
    c_backtest->add_option("--cost", backtest.cost, "cost per unit turnover")->capture_default_str();

    cli::SynthBenchArgs bench;
    auto* c_bench = app.add_subcommand("synth-bench", "generate, train and score graph recovery on synthetic markets");
    add_synth_flags(c_bench, bench.system);
    c_bench->add_option("--trials", bench.trials, "independent systems")->capture_default_str();
    c_bench->add_option("--permutations", bench.permutations, "shuffled-Sigma baseline draws")->capture_default_str();
    c_bench->add_option("--set", bench.overrides, "override a training key (key=value), repeatable");
    c_bench->add_option("--out", bench.system.out, "output directory");
    c_bench->add_flag("--quiet", bench.quiet, "no per-trial progress");

    cli::SynthArgs synth;
    auto* c_synth = app.add_subcommand("synth-data", "write a synthetic dataset with its ground-truth graph");
    add_synth_flags(c_synth, synth);
    c_synth->add_option("--out", synth.out, "output directory")->required();

    cli::StrengthArgs strength;
    auto* c_strength = app.add_subcommand("strength", "outgoing causal strength against market value");
    c_strength->add_option("--graph", strength.graph, "graph.json from discover")->required();
    c_strength->add_option("--market-values", strength.market_values, "CSV symbol,market_value")->required();
    c_strength->add_option("--out", strength.out, "output directory")->required();
    c_strength->add_option("--shuffles", strength.shuffles, "permutation-test shuffles")->capture_default_str();
    c_strength->add_option("--seed", strength.seed, "permutation seed")->capture_default_str();

    cli::AuditArgs audit;
    auto* c_audit = app.add_subcommand("audit", "finite-difference gradient check on a small model");
    c_audit->add_option("--seed", audit.seed, "fixture seed")->capture_default_str();
    c_audit->add_option("--step", audit.step, "central-difference step")->capture_default_str();
    c_audit->add_option("--tolerance", audit.tolerance, "relative error bound")->capture_default_str();
    c_audit->add_flag("--detach", audit.detach, "detach the news branch from the graph");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        if (e.get_exit_code() != 0) std::cerr << app.help();
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (*c_ingest) cli::ingest(ingest);
        if (*c_score) cli::score_news(score);
        if (*c_train) cli::train(train);
        if (*c_discover) cli::discover(discover);
        if (*c_predict) cli::predict(predict);
        if (*c_backtest) cli::backtest(backtest);
        if (*c_synth) cli::synth_data(synth);
        if (*c_strength) cli::strength(strength);
        if (*c_bench && !cli::synth_bench(bench)) return 6;
        if (*c_audit && !cli::audit(audit)) return 6;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
