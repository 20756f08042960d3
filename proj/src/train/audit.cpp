#include "causalstock/train/audit.h"

#include "causalstock/data/panel.h"
#include "causalstock/synth/system.h"

#include <fmt/format.h>

namespace causalstock::train {

using numerics::MatD;

namespace {

double loss_value(model::Model<double>& m, const Batch<double>& batch, const LossOptions<double>& opts) {
    numerics::Rng unused(0);
    numerics::Tape<double> tape(&m.params());
    return compute_loss(tape, m, batch, opts, unused).parts.total;
}

void require_fixed_noise(const LossOptions<double>& opts) {
    if (!opts.noise) throw ConfigError("gradient audit needs fixed Gumbel noise");
}

}  // namespace

std::vector<std::string> AuditReport::failures() const {
    std::vector<std::string> out;
    for (const auto& g : groups) {
        if (!g.pass) out.push_back(g.name);
    }
    return out;
}

std::vector<MatD> analytic_gradients(model::Model<double>& m, const Batch<double>& batch,
                                     const LossOptions<double>& opts) {
    require_fixed_noise(opts);
    numerics::Rng unused(0);
    numerics::Tape<double> tape(&m.params());
    const auto r = compute_loss(tape, m, batch, opts, unused);
    m.params().zero_grad();
    tape.backward(r.total);
    std::vector<MatD> out;
    for (std::size_t k = 0; k < m.params().size(); ++k) out.push_back(m.params().grad(k));
    return out;
}

MatD numeric_gradient(model::Model<double>& m, const Batch<double>& batch, const LossOptions<double>& opts,
                      std::size_t group, double step) {
    require_fixed_noise(opts);
    MatD& value = m.params().value(group);
    MatD out(value.rows(), value.cols());
    for (Eigen::Index k = 0; k < value.size(); ++k) {
        const double saved = value.data()[k];
        value.data()[k] = saved + step;
        const double up = loss_value(m, batch, opts);
        value.data()[k] = saved - step;
        const double down = loss_value(m, batch, opts);
        value.data()[k] = saved;
        out.data()[k] = (up - down) / (2.0 * step);
    }
    return out;
}

AuditReport gradient_audit(model::Model<double>& m, const Batch<double>& batch, const LossOptions<double>& opts,
                           const AuditOptions& audit) {
    if (opts.sample != SampleMode::Relaxed) throw ConfigError("gradient audit runs on the relaxed objective");
    require_fixed_noise(opts);
    // A detached news branch sees the graph as a constant, so the differences must too.
    LossOptions<double> fd = opts;
    MatD frozen;
    if (m.config().detach_news && !opts.news_graph) {
        numerics::Rng unused(0);
        numerics::Tape<double> tape(&m.params());
        frozen = compute_loss(tape, m, batch, opts, unused).graph.value();
        fd.news_graph = &frozen;
    }
    auto analytic = analytic_gradients(m, batch, opts);
    if (!audit.corrupt_group.empty()) analytic.at(m.params().id(audit.corrupt_group)) *= 1.01;

    AuditReport report;
    report.tolerance = audit.tolerance;
    for (std::size_t k = 0; k < m.params().size(); ++k) {
        const MatD numeric = numeric_gradient(m, batch, fd, k, audit.step);
        AuditGroup g;
        g.name = m.params().name(k);
        g.entries = static_cast<std::size_t>(numeric.size());
        g.analytic_norm = analytic[k].norm();
        g.numeric_norm = numeric.norm();
        const double scale = std::max(g.analytic_norm, g.numeric_norm);
        // Both sides vanish: nothing to compare.
        g.rel_error = scale < 1e-12 ? 0.0 : (analytic[k] - numeric).norm() / scale;
        g.pass = g.rel_error <= audit.tolerance;
        report.groups.push_back(g);
    }
    return report;
}

std::unique_ptr<AuditFixture> make_audit_fixture(std::uint64_t seed, bool detach_news, model::GraphMode mode) {
    constexpr std::size_t kStocks = 3;
    constexpr std::size_t kLags = 2;
    const auto sys = synth::generate_system(kStocks, kLags, 0.3, synth::Link::Linear, seed + 6);
    synth::SimulateOptions so;
    so.steps = 60;
    so.news = true;
    so.news_coverage = 0.7;
    const auto market = synth::simulate(sys, so);
    const auto panel = data::align(market.prices, data::CalendarPolicy::Intersection, data::LabelMode::strict());
    const auto buckets = data::bucket_news(panel, market.scored);
    const auto windows = data::build_windows(panel, &buckets, kLags, 10);
    const auto norm = data::fit_normalizer(panel, panel.dates.back());

    auto fx = std::make_unique<AuditFixture>();
    const std::vector<const data::MarketWindow*> picked = {&windows[3], &windows[10], &windows[20], &windows[30]};
    fx->batch = model::make_batch<double>(picked, norm, true, 10);

    model::ModelConfig mc;
    mc.stocks = kStocks;
    mc.lags = kLags;
    mc.price_dim = 4;
    mc.news_dim = 8;
    mc.hidden = 16;
    mc.branch_width = 4;
    mc.detach_news = detach_news;
    mc.graph_mode = mode;
    fx->model = std::make_unique<model::Model<double>>(mc, seed + 2);

    numerics::Rng rng(seed + 10);
    const auto rows = static_cast<Eigen::Index>(kStocks * kLags);
    fx->noise = model::GumbelNoise<double>::draw(rows, kStocks, rng);
    fx->prior = MatD(rows, kStocks);
    for (Eigen::Index k = 0; k < fx->prior.size(); ++k) fx->prior.data()[k] = rng.bernoulli(0.3) ? 1.0 : 0.0;

    auto& o = fx->options;
    o.sample = SampleMode::Relaxed;
    o.noise = &fx->noise;
    o.lambda = 0.5;
    o.lambda_s = 1.0;
    o.lambda_d = 0.5;
    o.prior = &fx->prior;
    return fx;
}

}  // namespace causalstock::train
