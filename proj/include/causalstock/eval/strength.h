#pragma once

#include "causalstock/eval/spearman.h"
#include "causalstock/numerics/tensor.h"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace causalstock::eval {

// CSV `symbol,market_value`, header optional.
std::map<std::string, double> load_market_values(const std::filesystem::path& path);

struct StrengthRow {
    std::string symbol;
    double outgoing = 0.0;
    std::optional<double> market_value;
};

struct StrengthReport {
    std::vector<std::string> symbols;
    numerics::MatD strength;  // D x D, [from][to]
    std::vector<StrengthRow> rows;
    std::optional<SpearmanResult> correlation;
    std::string correlation_error;  // set when the correlation could not be computed
    std::vector<std::string> log;
};

// Outgoing strength is the row sum of the lag-averaged strength matrix.
std::vector<double> outgoing_strength(const numerics::MatD& strength);

StrengthReport strength_report(const std::vector<std::string>& symbols, const numerics::MatD& strength,
                               const std::map<std::string, double>& market_values, std::size_t shuffles = 10000,
                               std::uint64_t seed = 1);
// Reads `symbols` and `strength` from a graph export.
StrengthReport strength_report(const nlohmann::json& graph, const std::map<std::string, double>& market_values,
                               std::size_t shuffles = 10000, std::uint64_t seed = 1);

// strength.csv (symbol,outgoing,market_value), strength_matrix.csv and
// spearman.json under `dir`.
void write_strength_report(const std::filesystem::path& dir, const StrengthReport& report);

}  // namespace causalstock::eval
