#pragma once

#include "causalstock/numerics/param_store.h"

#include <nlohmann/json.hpp>

namespace causalstock::numerics {

inline constexpr const char* kParamFormatTag = "causalstock.params/1";

// name -> shape -> values, plus optional Adam moments and step count.
template <typename T>
nlohmann::json params_to_json(const ParamStore<T>& store, bool include_moments);

// Rejects unknown format tags and malformed entries with DataError.
template <typename T>
ParamStore<T> params_from_json(const nlohmann::json& j);

extern template nlohmann::json params_to_json(const ParamStore<float>&, bool);
extern template nlohmann::json params_to_json(const ParamStore<double>&, bool);
extern template ParamStore<float> params_from_json(const nlohmann::json&);
extern template ParamStore<double> params_from_json(const nlohmann::json&);

}  // namespace causalstock::numerics
