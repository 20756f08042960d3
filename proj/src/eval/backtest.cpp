#include "causalstock/eval/backtest.h"

#include "causalstock/data/text.h"
#include "causalstock/error.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>

namespace causalstock::eval {

void write_predictions(const std::filesystem::path& path, const std::vector<PredictionRow>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write predictions " + path.string());
    out << "date,symbol,probability,label\n";
    for (const auto& r : rows) {
        out << fmt::format("{},{},{:.17g},{}\n", data::format_date(r.date), r.symbol, r.probability, r.label);
    }
}

std::vector<PredictionRow> load_predictions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open predictions " + path.string());
    std::vector<PredictionRow> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = data::trim(line);
        if (t.empty() || (line_no == 1 && t.rfind("date,", 0) == 0)) continue;
        const auto f = data::split(t, ',');
        PredictionRow r;
        long label = -1;
        if (f.size() < 3 || !data::parse_double(data::trim(f[2]), r.probability) ||
            (f.size() > 3 && !data::parse_int(data::trim(f[3]), label))) {
            throw DataError(fmt::format("{}:{}: expected date,symbol,probability[,label]", path.string(), line_no));
        }
        try {
            r.date = data::parse_date(data::trim(f[0]));
        } catch (const DataError& e) {
            throw DataError(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
        }
        r.symbol = data::trim(f[1]);
        r.label = static_cast<int>(label);
        rows.push_back(r);
    }
    return rows;
}

std::vector<double> accumulate_apv(const std::vector<double>& returns) {
    std::vector<double> apv;
    apv.reserve(returns.size());
    double v = 1.0;
    for (double r : returns) {
        v *= 1.0 + r;
        apv.push_back(v);
    }
    return apv;
}

double sharpe(const std::vector<double>& series, double risk_free) {
    if (series.size() < 2) throw ConfigError("Sharpe ratio is undefined for fewer than two points");
    const double n = static_cast<double>(series.size());
    double mean = 0.0;
    for (double x : series) mean += x - risk_free;
    mean /= n;
    double ss = 0.0;
    for (double x : series) ss += (x - risk_free - mean) * (x - risk_free - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    if (!(sd > 0.0)) throw ConfigError("Sharpe ratio is undefined for a zero-variance series");
    return mean / sd;
}

BacktestResult backtest(const std::vector<PredictionRow>& predictions,
                        const std::map<std::string, data::PriceSeries>& prices, const BacktestOptions& opts) {
    if (opts.k < 1) throw ConfigError("backtest needs k >= 1");
    std::map<data::Date, std::vector<const PredictionRow*>> by_date;
    for (const auto& p : predictions) by_date[p.date].push_back(&p);

    BacktestResult res;
    res.risk_free = opts.risk_free;
    std::map<std::string, double> previous_weights;
    for (auto& [date, rows] : by_date) {
        std::sort(rows.begin(), rows.end(), [](const PredictionRow* a, const PredictionRow* b) {
            if (a->probability != b->probability) return a->probability > b->probability;
            return a->symbol < b->symbol;
        });
        std::vector<std::string> chosen;
        std::vector<double> rets;
        for (const auto* r : rows) {
            if (chosen.size() == opts.k) break;
            auto it = prices.find(r->symbol);
            if (it == prices.end()) continue;
            const auto& recs = it->second.records;
            auto pos = std::lower_bound(recs.begin(), recs.end(), date,
                                        [](const data::PriceRecord& rec, const data::Date& d) { return rec.date < d; });
            if (pos == recs.end() || pos->date != date || pos == recs.begin()) continue;
            const double prev = std::prev(pos)->adj_close;
            chosen.push_back(r->symbol);
            rets.push_back(pos->adj_close / prev - 1.0);
        }
        if (chosen.size() < opts.k) {
            res.log.push_back(fmt::format("{}: only {} of {} stocks priced", data::format_date(date), chosen.size(),
                                          opts.k));
        }
        double r = 0.0;
        std::map<std::string, double> weights;
        if (!chosen.empty()) {
            r = std::accumulate(rets.begin(), rets.end(), 0.0) / static_cast<double>(rets.size());
            for (const auto& s : chosen) weights[s] = 1.0 / static_cast<double>(chosen.size());
        }
        if (opts.cost_per_turnover != 0.0) {
            double turnover = 0.0;
            for (const auto& [s, w] : weights) {
                auto it = previous_weights.find(s);
                turnover += std::abs(w - (it == previous_weights.end() ? 0.0 : it->second));
            }
            for (const auto& [s, w] : previous_weights) {
                if (!weights.count(s)) turnover += w;
            }
            r -= opts.cost_per_turnover * turnover;
        }
        previous_weights = std::move(weights);
        res.dates.push_back(date);
        res.returns.push_back(r);
        res.holdings.push_back(std::move(chosen));
    }
    res.apv = accumulate_apv(res.returns);
    if (!res.apv.empty()) res.final_apv = res.apv.back();
    res.sharpe_apv = sharpe(res.apv, opts.risk_free);
    res.sharpe_daily = sharpe(res.returns, opts.risk_free);
    return res;
}

}  // namespace causalstock::eval
