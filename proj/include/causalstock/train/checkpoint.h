#pragma once

#include "causalstock/data/panel.h"
#include "causalstock/model/config.h"
#include "causalstock/model/model.h"

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace causalstock::train {

inline constexpr const char* kCheckpointFormat = "causalstock.checkpoint/1";

struct Checkpoint {
    model::RunConfig config;
    std::vector<std::string> symbols;
    data::Normalizer normalizer;
    int epoch = 0;
    nlohmann::json params;
};

template <typename T>
void save_checkpoint(const std::filesystem::path& path, const model::RunConfig& cfg,
                     const std::vector<std::string>& symbols, const data::Normalizer& norm,
                     const numerics::ParamStore<T>& params, int epoch);

Checkpoint load_checkpoint(const std::filesystem::path& path);

// Rebuilds the model described by the checkpoint and loads its parameters.
template <typename T>
std::unique_ptr<model::Model<T>> restore_model(const Checkpoint& ckpt);

}  // namespace causalstock::train
