#pragma once

#include "causalstock/train/loss.h"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace causalstock::train {

struct AuditGroup {
    std::string name;
    std::size_t entries = 0;
    double analytic_norm = 0.0;
    double numeric_norm = 0.0;
    double rel_error = 0.0;  // |a - n| / max(|a|, |n|), Euclidean over the group
    bool pass = true;
};

struct AuditReport {
    std::vector<AuditGroup> groups;
    double tolerance = 1e-4;

    std::vector<std::string> failures() const;
    bool pass() const { return failures().empty(); }
};

struct AuditOptions {
    double step = 1e-5;
    double tolerance = 1e-4;
    // Fault injection: scales the analytic gradient of this group by 1.01.
    std::string corrupt_group;
};

// Gradients of the total loss for every parameter, in store order. `opts`
// must carry fixed Gumbel noise.
std::vector<numerics::MatD> analytic_gradients(model::Model<double>& m, const Batch<double>& batch,
                                               const LossOptions<double>& opts);

// Central differences of the total loss over every entry of one group.
numerics::MatD numeric_gradient(model::Model<double>& m, const Batch<double>& batch, const LossOptions<double>& opts,
                                std::size_t group, double step);

// Compares analytic against central-difference gradients group by group on
// the relaxed (soft-sample) objective with the noise held fixed.
AuditReport gradient_audit(model::Model<double>& m, const Batch<double>& batch, const LossOptions<double>& opts,
                           const AuditOptions& audit = {});

// D=3, L=2, d_p=4, d_m=8 model in 64-bit mode with a four-window batch of
// simulated prices and news (some stock-days without news), fixed Gumbel
// noise and a random domain prior so that every loss term is live.
struct AuditFixture {
    std::unique_ptr<model::Model<double>> model;
    Batch<double> batch;
    model::GumbelNoise<double> noise;
    numerics::MatD prior;
    LossOptions<double> options;  // points into this fixture; do not copy
};

std::unique_ptr<AuditFixture> make_audit_fixture(std::uint64_t seed, bool detach_news,
                                                 model::GraphMode mode = model::GraphMode::LagDependent);

}  // namespace causalstock::train
