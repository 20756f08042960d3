#include "causalstock/model/config.h"

#include "causalstock/error.h"

#include <functional>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace causalstock::model {

namespace {

struct Field {
    std::string key;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const data::KeyValueFile&)> set;
};


Field count(std::string key, std::function<std::size_t&(RunConfig&)> ref) {
    return {key, [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); },
            [key, ref](RunConfig& c, const data::KeyValueFile& f) {
                const long v = f.get_int(key, static_cast<long>(ref(c)));
                if (v < 0) throw ConfigError(fmt::format("{}: {} must be non-negative", f.origin(), key));
                ref(c) = static_cast<std::size_t>(v);
            }};
}

Field integer(std::string key, std::function<int&(RunConfig&)> ref) {
    return {key, [ref](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); },
            [key, ref](RunConfig& c, const data::KeyValueFile& f) { ref(c) = static_cast<int>(f.get_int(key, ref(c))); }};
}

Field real(std::string key, std::function<double&(RunConfig&)> ref) {
    return {key, [ref](const RunConfig& c) { return fmt::format("{}", ref(const_cast<RunConfig&>(c))); },
            [key, ref](RunConfig& c, const data::KeyValueFile& f) { ref(c) = f.get_double(key, ref(c)); }};
}

Field flag(std::string key, std::function<bool&(RunConfig&)> ref) {
    return {key, [ref](const RunConfig& c) { return ref(const_cast<RunConfig&>(c)) ? "true" : "false"; },
            [key, ref](RunConfig& c, const data::KeyValueFile& f) { ref(c) = f.get_bool(key, ref(c)); }};
}

template <typename E>
Field choice(std::string key, std::function<E&(RunConfig&)> ref, std::vector<E> options) {
    return {key, [ref](const RunConfig& c) { return to_string(ref(const_cast<RunConfig&>(c))); },
            [key, ref, options](RunConfig& c, const data::KeyValueFile& f) {
                const auto v = f.get(key);
                if (!v) return;
                std::string names;
                for (E o : options) {
                    if (to_string(o) == data::to_lower(*v)) {
                        ref(c) = o;
                        return;
                    }
                    names += (names.empty() ? "" : ", ") + to_string(o);
                }
                throw ConfigError(fmt::format("{}: {} must be one of {}, got '{}'", f.origin(), key, names, *v));
            }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> all = {
        count("lags", [](RunConfig& c) -> std::size_t& { return c.model.lags; }),
        integer("price_dim", [](RunConfig& c) -> int& { return c.model.price_dim; }),
        integer("news_dim", [](RunConfig& c) -> int& { return c.model.news_dim; }),
        count("max_news", [](RunConfig& c) -> std::size_t& { return c.model.max_news; }),
        integer("depth", [](RunConfig& c) -> int& { return c.model.depth; }),
        integer("hidden", [](RunConfig& c) -> int& { return c.model.hidden; }),
        integer("branch_width", [](RunConfig& c) -> int& { return c.model.branch_width; }),
        integer("graph_depth", [](RunConfig& c) -> int& { return c.model.graph_depth; }),
        integer("graph_hidden", [](RunConfig& c) -> int& { return c.model.graph_hidden; }),
        flag("use_news", [](RunConfig& c) -> bool& { return c.model.use_news; }),
        flag("detach_news", [](RunConfig& c) -> bool& { return c.model.detach_news; }),
        flag("shared_heads", [](RunConfig& c) -> bool& { return c.model.shared_heads; }),
        choice<GraphMode>("graph_mode", [](RunConfig& c) -> GraphMode& { return c.model.graph_mode; },
                          {GraphMode::LagDependent, GraphMode::LagIndependent, GraphMode::ExistenceOnly}),
        choice<InferenceGraph>("inference_graph", [](RunConfig& c) -> InferenceGraph& { return c.model.inference; },
                               {InferenceGraph::Map, InferenceGraph::Mean, InferenceGraph::Sample}),
        real("learning_rate", [](RunConfig& c) -> double& { return c.train.learning_rate; }),
        count("batch_size", [](RunConfig& c) -> std::size_t& { return c.train.batch_size; }),
        real("lambda", [](RunConfig& c) -> double& { return c.train.lambda; }),
        real("lambda_s", [](RunConfig& c) -> double& { return c.train.lambda_s; }),
        real("lambda_d", [](RunConfig& c) -> double& { return c.train.lambda_d; }),
        {"prior_graph", [](const RunConfig& c) { return c.train.prior_graph; },
         [](RunConfig& c, const data::KeyValueFile& f) { c.train.prior_graph = f.get("prior_graph").value_or(c.train.prior_graph); }},
        integer("epochs", [](RunConfig& c) -> int& { return c.train.epochs; }),
        integer("patience", [](RunConfig& c) -> int& { return c.train.patience; }),
        {"seed", [](const RunConfig& c) { return std::to_string(c.train.seed); },
         [](RunConfig& c, const data::KeyValueFile& f) {
             const long v = f.get_int("seed", static_cast<long>(c.train.seed));
             if (v < 0) throw ConfigError(f.origin() + ": seed must be non-negative");
             c.train.seed = static_cast<std::uint64_t>(v);
         }},
        real("tau", [](RunConfig& c) -> double& { return c.train.tau; }),
        flag("anneal", [](RunConfig& c) -> bool& { return c.train.anneal; }),
        real("tau_start", [](RunConfig& c) -> double& { return c.train.tau_start; }),
        real("tau_end", [](RunConfig& c) -> double& { return c.train.tau_end; }),
        choice<Precision>("precision", [](RunConfig& c) -> Precision& { return c.train.precision; },
                          {Precision::F32, Precision::F64}),
    };
    return all;
}

}  // namespace

std::string to_string(GraphMode m) {
    switch (m) {
        case GraphMode::LagDependent: return "lag-dependent";
        case GraphMode::LagIndependent: return "lag-independent";
        case GraphMode::ExistenceOnly: return "existence-only";
    }
    return "?";
}

std::string to_string(InferenceGraph m) {
    switch (m) {
        case InferenceGraph::Map: return "map";
        case InferenceGraph::Mean: return "mean";
        case InferenceGraph::Sample: return "sample";
    }
    return "?";
}

std::string to_string(Precision p) { return p == Precision::F32 ? "f32" : "f64"; }

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& f : fields()) k.push_back(f.key);
        return k;
    }();
    return keys;
}

void apply_overrides(RunConfig& cfg, const data::KeyValueFile& overrides) {
    overrides.require_known(config_keys());
    for (const auto& f : fields()) f.set(cfg, overrides);
}

RunConfig config_from_file(const data::KeyValueFile& file) {
    RunConfig cfg;
    apply_overrides(cfg, file);
    return cfg;
}

data::KeyValueFile config_to_file(const RunConfig& cfg) {
    data::KeyValueFile out;
    for (const auto& f : fields()) out.set(f.key, f.get(cfg));
    return out;
}

void validate(const RunConfig& cfg) {
    const auto& m = cfg.model;
    const auto& t = cfg.train;
    auto need = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError("invalid configuration: " + what);
    };
    need(m.lags >= 1, "lags must be >= 1");
    need(m.price_dim >= 1, "price_dim must be >= 1");
    need(m.news_dim >= 1, "news_dim must be >= 1");
    need(m.max_news >= 1, "max_news must be >= 1");
    need(m.depth >= 1, "depth must be >= 1");
    need(m.hidden >= 1, "hidden must be >= 1");
    need(m.branch_width >= 1, "branch_width must be >= 1");
    need(m.graph_depth >= 1, "graph_depth must be >= 1");
    need(m.graph_hidden >= 1, "graph_hidden must be >= 1");
    need(t.learning_rate >= 0, "learning_rate must be >= 0");
    need(t.batch_size >= 1, "batch_size must be >= 1");
    need(t.lambda >= 0 && t.lambda_s >= 0 && t.lambda_d >= 0, "loss weights must be >= 0");
    need(t.lambda_d == 0 || !t.prior_graph.empty(), "lambda_d > 0 requires prior_graph");
    need(t.epochs >= 0, "epochs must be >= 0");
    need(t.patience >= 1, "patience must be >= 1");
    need(t.tau > 0 && t.tau_start > 0 && t.tau_end > 0, "temperatures must be > 0");
}

nlohmann::json to_json(const RunConfig& cfg) {
    nlohmann::json j = nlohmann::json::object();
    j["stocks"] = cfg.model.stocks;
    for (const auto& f : fields()) j[f.key] = f.get(cfg);
    return j;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
    data::KeyValueFile file;
    std::size_t stocks = 0;
    for (const auto& [k, v] : j.items()) {
        if (k == "stocks") {
            stocks = v.get<std::size_t>();
        } else {
            file.set(k, v.get<std::string>());
        }
    }
    RunConfig cfg = config_from_file(file);
    cfg.model.stocks = stocks;
    return cfg;
}

}  // namespace causalstock::model
