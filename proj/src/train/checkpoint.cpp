#include "causalstock/train/checkpoint.h"

#include "causalstock/error.h"
#include "causalstock/numerics/checkpoint.h"

#include <fstream>

namespace causalstock::train {

template <typename T>
void save_checkpoint(const std::filesystem::path& path, const model::RunConfig& cfg,
                     const std::vector<std::string>& symbols, const data::Normalizer& norm,
                     const numerics::ParamStore<T>& params, int epoch) {
    nlohmann::json j;
    j["format"] = kCheckpointFormat;
    j["config"] = model::to_json(cfg);
    j["symbols"] = symbols;
    j["normalizer"] = norm.to_json();
    j["epoch"] = epoch;
    j["params"] = numerics::params_to_json(params, true);
    const auto tmp = std::filesystem::path(path.string() + ".tmp");
    {
        std::ofstream out(tmp);
        if (!out) throw DataError("cannot write checkpoint " + tmp.string());
        out << j.dump() << '\n';
        if (!out) throw DataError("failed writing checkpoint " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open checkpoint " + path.string());
    Checkpoint c;
    try {
        const auto j = nlohmann::json::parse(in);
        const auto tag = j.at("format").get<std::string>();
        if (tag != kCheckpointFormat) {
            throw DataError("checkpoint format '" + tag + "' is not supported (expected '" + kCheckpointFormat + "')");
        }
        c.config = model::run_config_from_json(j.at("config"));
        c.symbols = j.at("symbols").get<std::vector<std::string>>();
        c.normalizer = data::Normalizer::from_json(j.at("normalizer"));
        c.epoch = j.value("epoch", 0);
        c.params = j.at("params");
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed checkpoint " + path.string() + ": " + e.what());
    }
    return c;
}

template <typename T>
std::unique_ptr<model::Model<T>> restore_model(const Checkpoint& ckpt) {
    auto m = std::make_unique<model::Model<T>>(ckpt.config.model, ckpt.config.train.seed);
    m->load(numerics::params_from_json<T>(ckpt.params));
    return m;
}

template void save_checkpoint(const std::filesystem::path&, const model::RunConfig&, const std::vector<std::string>&,
                              const data::Normalizer&, const numerics::ParamStore<float>&, int);
template void save_checkpoint(const std::filesystem::path&, const model::RunConfig&, const std::vector<std::string>&,
                              const data::Normalizer&, const numerics::ParamStore<double>&, int);
template std::unique_ptr<model::Model<float>> restore_model(const Checkpoint&);
template std::unique_ptr<model::Model<double>> restore_model(const Checkpoint&);

}  // namespace causalstock::train
