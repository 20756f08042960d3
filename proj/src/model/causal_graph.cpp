#include "causalstock/model/causal_graph.h"

#include "causalstock/data/text.h"
#include "causalstock/numerics/ops.h"

#include <cmath>
#include <fstream>
#include <map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace causalstock::model {

using namespace numerics;

template <typename T>
GumbelNoise<T> GumbelNoise<T>::draw(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
    GumbelNoise n;
    n.exist.resize(rows, cols);
    n.absent.resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        for (Eigen::Index c = 0; c < cols; ++c) {
            n.exist(r, c) = static_cast<T>(rng.gumbel());
            n.absent(r, c) = static_cast<T>(rng.gumbel());
        }
    }
    return n;
}

template <typename T>
CausalGraph<T>::CausalGraph(ParamStore<T>& store, const ModelConfig& cfg, Rng& rng)
    : store_(&store), stocks_(cfg.stocks), lags_(cfg.lags), mode_(cfg.graph_mode) {
    if (stocks_ < 1 || lags_ < 1) throw ConfigError("causal graph needs D >= 1 and L >= 1");
    const auto rows = static_cast<Eigen::Index>(lags_ * stocks_);
    const auto cols = static_cast<Eigen::Index>(stocks_);
    // Fans of one D x D lag slice.
    const double fan = static_cast<double>(stocks_);
    u_ = store.add("graph.U", xavier_uniform<T>(rows, cols, fan, fan, rng));
    if (mode_ != GraphMode::ExistenceOnly) v_ = store.add("graph.V", xavier_uniform<T>(rows, cols, fan, fan, rng));
    ghat_ = store.add("graph.Ghat", xavier_uniform<T>(rows, cols, fan, fan, rng));
    if (mode_ != GraphMode::LagIndependent && lags_ > 1) {
        h_u_ = Mlp<T>(store, "graph.h_u", 2, cfg.graph_hidden, 1, cfg.graph_depth, rng);
        if (mode_ != GraphMode::ExistenceOnly) {
            h_v_ = Mlp<T>(store, "graph.h_v", 2, cfg.graph_hidden, 1, cfg.graph_depth, rng);
        }
    }
}

template <typename T>
Var<T> CausalGraph<T>::transformed(Tape<T>& tape, typename ParamStore<T>::Id raw, const Mlp<T>& h) const {
    Var<T> x = tape.param(raw);
    if (mode_ == GraphMode::LagIndependent || lags_ == 1) return x;
    const auto d = static_cast<Eigen::Index>(stocks_);
    const auto later = static_cast<Eigen::Index>((lags_ - 1) * stocks_);
    // Lag 1 has no predecessor and passes through untouched.
    Var<T> first = slice_rows(x, 0, d);
    Var<T> cur = reshape(slice_rows(x, d, later), later * d, 1);
    Var<T> prev = reshape(slice_rows(x, 0, later), later * d, 1);
    Var<T> out = reshape(h(tape, concat_cols<T>({cur, prev})), later, d);
    return concat_rows<T>({first, out});
}

template <typename T>
EdgeTerms<T> CausalGraph<T>::edges(Tape<T>& tape) const {
    EdgeTerms<T> e;
    Var<T> u = transformed(tape, u_, h_u_);
    Var<T> logit = mode_ == GraphMode::ExistenceOnly ? u : u - transformed(tape, v_, h_v_);
    const T c = static_cast<T>(kLogitClamp);
    e.logit = clamp(logit, -c, c);
    e.sigma = sigmoid(e.logit);
    e.log_sigma = log(e.sigma);
    e.log_one_minus = log(sigmoid(-e.logit));
    return e;
}

template <typename T>
Var<T> CausalGraph<T>::relaxed(const EdgeTerms<T>& e, const GumbelNoise<T>& noise, T tau) const {
    return gumbel_softmax2(e.log_sigma, e.log_one_minus, noise.exist, noise.absent, tau);
}

template <typename T>
Mat<T> CausalGraph<T>::probabilities() const {
    Tape<T> tape(store_);
    return edges(tape).sigma.value();
}

template <typename T>
Var<T> posterior_entropy(const EdgeTerms<T>& e) {
    Var<T> one_minus = add_scalar(-e.sigma, T(1));
    return -sum(e.sigma * e.log_sigma + one_minus * e.log_one_minus);
}

template <typename T>
Var<T> log_prior(const Var<T>& graph, T lambda_s, T lambda_d, const Mat<T>* prior) {
    Var<T> out = scale(sum(graph * graph), -lambda_s);
    if (lambda_d != T(0)) {
        if (!prior) throw ConfigError("lambda_d > 0 without a prior graph");
        require_same_shape(graph.shape(), shape_of(*prior), "prior graph");
        Var<T> diff = graph - graph.tape()->constant(*prior);
        out = out + scale(sum(diff * diff), -lambda_d);
    }
    return out;
}

double edge_probability(double u, double v) {
    // exp(u) / (exp(u) + exp(v)) with the larger exponent factored out.
    const double m = std::max(u, v);
    const double a = std::exp(u - m);
    const double b = std::exp(v - m);
    return a / (a + b);
}

double posterior_entropy_value(const MatD& sigma) {
    double h = 0.0;
    for (Eigen::Index k = 0; k < sigma.size(); ++k) {
        const double s = sigma.data()[k];
        if (s > 0) h -= s * std::log(s);
        if (s < 1) h -= (1 - s) * std::log1p(-s);
    }
    return h;
}

double log_prior_value(const MatD& graph, double lambda_s, double lambda_d, const MatD* prior) {
    double out = -lambda_s * graph.squaredNorm();
    if (lambda_d != 0.0) {
        if (!prior) throw ConfigError("lambda_d > 0 without a prior graph");
        require_same_shape(shape_of(graph), shape_of(*prior), "prior graph");
        out -= lambda_d * (graph - *prior).squaredNorm();
    }
    return out;
}

Strength causal_strength(const MatD& graph, const MatD& ghat, std::size_t lags) {
    require_same_shape(shape_of(graph), shape_of(ghat), "causal strength");
    if (lags == 0 || graph.rows() % static_cast<Eigen::Index>(lags) != 0) {
        throw ConfigError("causal strength: graph rows are not a multiple of L");
    }
    Strength s;
    s.per_lag = graph.cwiseProduct(ghat);
    const Eigen::Index d = graph.cols();
    s.mean = MatD::Zero(d, d);
    for (std::size_t l = 0; l < lags; ++l) s.mean += s.per_lag.middleRows(static_cast<Eigen::Index>(l) * d, d);
    s.mean /= static_cast<double>(lags);
    return s;
}

MatD load_prior_graph(const std::filesystem::path& path, const std::vector<std::string>& symbols, std::size_t lags) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open prior graph " + path.string());
    std::map<std::string, Eigen::Index> index;
    for (std::size_t k = 0; k < symbols.size(); ++k) index.emplace(symbols[k], static_cast<Eigen::Index>(k));
    const auto d = static_cast<Eigen::Index>(symbols.size());
    MatD g = MatD::Zero(static_cast<Eigen::Index>(lags) * d, d);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = data::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto f = data::split(t, ',');
        long lag = 0;
        if (f.size() != 4) throw ConfigError(fmt::format("{}:{}: expected lag,from,to,value", path.string(), line_no));
        if (!data::parse_int(data::trim(f[0]), lag)) {
            if (line_no == 1) continue;  // header
            throw ConfigError(fmt::format("{}:{}: lag is not an integer", path.string(), line_no));
        }
        long value = 0;
        if (!data::parse_int(data::trim(f[3]), value) || (value != 0 && value != 1)) {
            throw ConfigError(fmt::format("{}:{}: value must be 0 or 1", path.string(), line_no));
        }
        if (lag < 1 || lag > static_cast<long>(lags)) {
            throw ConfigError(fmt::format("{}:{}: lag {} outside 1..{}", path.string(), line_no, lag, lags));
        }
        auto from = index.find(data::trim(f[1]));
        auto to = index.find(data::trim(f[2]));
        if (from == index.end() || to == index.end()) {
            throw ConfigError(fmt::format("{}:{}: unknown symbol", path.string(), line_no));
        }
        g((lag - 1) * d + from->second, to->second) = static_cast<double>(value);
    }
    return g;
}

namespace {

nlohmann::json cube(const MatD& m, std::size_t lags) {
    const Eigen::Index d = m.cols();
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t l = 0; l < lags; ++l) {
        nlohmann::json slice = nlohmann::json::array();
        for (Eigen::Index j = 0; j < d; ++j) {
            std::vector<double> row(static_cast<std::size_t>(d));
            for (Eigen::Index i = 0; i < d; ++i) row[static_cast<std::size_t>(i)] = m(static_cast<Eigen::Index>(l) * d + j, i);
            slice.push_back(row);
        }
        out.push_back(slice);
    }
    return out;
}

}  // namespace

nlohmann::json graph_export(const std::vector<std::string>& symbols, std::size_t lags, const MatD& sigma,
                            const MatD& ghat, const MatD& hard) {
    const Strength from_sigma = causal_strength(sigma, ghat, lags);
    nlohmann::json j;
    j["format"] = "causalstock.graph/1";
    j["symbols"] = symbols;
    j["lags"] = lags;
    j["layout"] = "[lag][from][to], lag 1 = day T-1";
    j["sigma"] = cube(sigma, lags);
    j["ghat"] = cube(ghat, lags);
    j["hard"] = cube(hard, lags);
    j["strength"] = cube(from_sigma.mean, 1)[0];
    return j;
}

template struct GumbelNoise<float>;
template struct GumbelNoise<double>;
template class CausalGraph<float>;
template class CausalGraph<double>;
template Var<float> posterior_entropy(const EdgeTerms<float>&);
template Var<double> posterior_entropy(const EdgeTerms<double>&);
template Var<float> log_prior(const Var<float>&, float, float, const Mat<float>*);
template Var<double> log_prior(const Var<double>&, double, double, const Mat<double>*);

}  // namespace causalstock::model
