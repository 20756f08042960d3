#include "causalstock/eval/strength.h"

#include "causalstock/data/text.h"
#include "causalstock/error.h"

#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace causalstock::eval {

std::map<std::string, double> load_market_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open market-value file " + path.string());
    std::map<std::string, double> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = data::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto f = data::split(t, ',');
        double v = 0.0;
        if (f.size() != 2 || !data::parse_double(data::trim(f[1]), v)) {
            if (line_no == 1) continue;  // header
            throw DataError(fmt::format("{}:{}: expected symbol,market_value", path.string(), line_no));
        }
        out[data::trim(f[0])] = v;
    }
    return out;
}

std::vector<double> outgoing_strength(const numerics::MatD& strength) {
    std::vector<double> out(static_cast<std::size_t>(strength.rows()));
    for (Eigen::Index r = 0; r < strength.rows(); ++r) out[static_cast<std::size_t>(r)] = strength.row(r).sum();
    return out;
}

StrengthReport strength_report(const std::vector<std::string>& symbols, const numerics::MatD& strength,
                               const std::map<std::string, double>& market_values, std::size_t shuffles,
                               std::uint64_t seed) {
    const auto d = static_cast<Eigen::Index>(symbols.size());
    if (strength.rows() != d || strength.cols() != d) {
        throw ConfigError(fmt::format("strength matrix is {}x{} but there are {} symbols", strength.rows(),
                                      strength.cols(), d));
    }
    StrengthReport rep;
    rep.symbols = symbols;
    rep.strength = strength;
    const auto out = outgoing_strength(strength);
    std::vector<double> xs, ys;
    for (std::size_t s = 0; s < symbols.size(); ++s) {
        StrengthRow row{symbols[s], out[s], std::nullopt};
        auto it = market_values.find(symbols[s]);
        if (it == market_values.end()) {
            rep.log.push_back(symbols[s] + ": no market value, excluded from the correlation");
        } else {
            row.market_value = it->second;
            xs.push_back(it->second);
            ys.push_back(out[s]);
        }
        rep.rows.push_back(row);
    }
    try {
        rep.correlation = spearman(xs, ys, shuffles, seed);
    } catch (const ConfigError& e) {
        rep.correlation_error = e.what();
    }
    return rep;
}

StrengthReport strength_report(const nlohmann::json& graph, const std::map<std::string, double>& market_values,
                               std::size_t shuffles, std::uint64_t seed) {
    const auto symbols = graph.at("symbols").get<std::vector<std::string>>();
    const auto rows = graph.at("strength").get<std::vector<std::vector<double>>>();
    const auto d = static_cast<Eigen::Index>(symbols.size());
    numerics::MatD m(d, d);
    if (static_cast<Eigen::Index>(rows.size()) != d) throw DataError("graph export strength has the wrong shape");
    for (Eigen::Index r = 0; r < d; ++r) {
        if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)].size()) != d) {
            throw DataError("graph export strength has the wrong shape");
        }
        for (Eigen::Index c = 0; c < d; ++c) m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
    return strength_report(symbols, m, market_values, shuffles, seed);
}

void write_strength_report(const std::filesystem::path& dir, const StrengthReport& report) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "strength.csv");
        out << "symbol,outgoing,market_value\n";
        for (const auto& r : report.rows) {
            out << fmt::format("{},{:.17g},{}\n", r.symbol, r.outgoing,
                               r.market_value ? fmt::format("{:.17g}", *r.market_value) : "");
        }
    }
    {
        std::ofstream out(dir / "strength_matrix.csv");
        out << "from";
        for (const auto& s : report.symbols) out << ',' << s;
        out << '\n';
        for (Eigen::Index r = 0; r < report.strength.rows(); ++r) {
            out << report.symbols[static_cast<std::size_t>(r)];
            for (Eigen::Index c = 0; c < report.strength.cols(); ++c) out << fmt::format(",{:.17g}", report.strength(r, c));
            out << '\n';
        }
    }
    nlohmann::json j;
    if (report.correlation) {
        j["rho"] = report.correlation->rho;
        j["p_value"] = report.correlation->p_value;
        j["shuffles"] = report.correlation->shuffles;
    } else {
        j["error"] = report.correlation_error;
    }
    j["excluded"] = report.log;
    std::ofstream(dir / "spearman.json") << j.dump(2) << '\n';
}

}  // namespace causalstock::eval
