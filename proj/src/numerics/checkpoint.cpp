#include "causalstock/numerics/checkpoint.h"

#include "causalstock/error.h"

#include <string>
#include <vector>

namespace causalstock::numerics {

namespace {

template <typename T>
nlohmann::json flat(const Mat<T>& m) {
    std::vector<double> v(static_cast<std::size_t>(m.size()));
    for (Eigen::Index k = 0; k < m.size(); ++k) v[static_cast<std::size_t>(k)] = static_cast<double>(m.data()[k]);
    return v;
}

template <typename T>
Mat<T> unflat(const nlohmann::json& values, Eigen::Index rows, Eigen::Index cols, const std::string& name) {
    if (!values.is_array() || static_cast<Eigen::Index>(values.size()) != rows * cols) {
        throw DataError("checkpoint entry '" + name + "' has " + std::to_string(values.size()) +
                        " values, expected " + std::to_string(rows * cols));
    }
    Mat<T> m(rows, cols);
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = static_cast<T>(values[static_cast<std::size_t>(k)].get<double>());
    return m;
}

}  // namespace

template <typename T>
nlohmann::json params_to_json(const ParamStore<T>& store, bool include_moments) {
    nlohmann::json out;
    out["format"] = kParamFormatTag;
    out["step"] = store.step();
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t i = 0; i < store.size(); ++i) {
        const auto& v = store.value(i);
        nlohmann::json e;
        e["name"] = store.name(i);
        e["shape"] = {v.rows(), v.cols()};
        e["values"] = flat(v);
        if (include_moments) {
            e["m"] = flat(store.first_moment(i));
            e["v"] = flat(store.second_moment(i));
        }
        entries.push_back(std::move(e));
    }
    out["params"] = std::move(entries);
    return out;
}

template <typename T>
ParamStore<T> params_from_json(const nlohmann::json& j) {
    try {
        const auto tag = j.at("format").get<std::string>();
        if (tag != kParamFormatTag) {
            throw DataError("checkpoint format '" + tag + "' is not supported (expected '" + kParamFormatTag + "')");
        }
        ParamStore<T> store;
        for (const auto& e : j.at("params")) {
            const auto name = e.at("name").get<std::string>();
            const auto rows = e.at("shape").at(0).get<Eigen::Index>();
            const auto cols = e.at("shape").at(1).get<Eigen::Index>();
            const auto id = store.add(name, unflat<T>(e.at("values"), rows, cols, name));
            if (e.contains("m")) store.first_moment(id) = unflat<T>(e.at("m"), rows, cols, name);
            if (e.contains("v")) store.second_moment(id) = unflat<T>(e.at("v"), rows, cols, name);
        }
        store.step() = j.value("step", 0L);
        return store;
    } catch (const nlohmann::json::exception& ex) {
        throw DataError(std::string("malformed checkpoint: ") + ex.what());
    }
}

template nlohmann::json params_to_json(const ParamStore<float>&, bool);
template nlohmann::json params_to_json(const ParamStore<double>&, bool);
template ParamStore<float> params_from_json(const nlohmann::json&);
template ParamStore<double> params_from_json(const nlohmann::json&);

}  // namespace causalstock::numerics
