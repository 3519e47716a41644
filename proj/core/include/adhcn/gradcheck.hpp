#pragma once

#include "adhcn/dataset.hpp"
#include "adhcn/fusion.hpp"
#include "adhcn/model.hpp"

#include <string>
#include <vector>

namespace adhcn {

// Central finite-difference verification of the analytic gradients on a
// seeded random instance. Parameters are redrawn until every channel
// pre-activation is at least 1e-4 away from the ReLU kink, so both loss
// evaluations of each difference stay on the same linear piece.
struct GradCheckOptions {
    Index num_nodes = 12;
    Index num_edges = 6;
    Index num_features = 5;
    Index hidden = 4;
    Index num_classes = 3;
    std::uint64_t seed = 42;
    double weight_decay = 0.0005;
    double step = 1e-6;
    double tolerance = 1e-4;
    FusionStrategy strategy;
    bool corrupt_gradient = false; // test hook: breaks one analytic entry
};

struct GradCheckGroup {
    std::string name;
    double max_rel_error = 0.0;
    double analytic_at_worst = 0.0;
    double numeric_at_worst = 0.0;
};

struct GradCheckResult {
    std::vector<GradCheckGroup> groups;
    double max_rel_error = 0.0;

    bool passed(double tolerance) const { return max_rel_error < tolerance; }
};

GradCheckResult gradient_check(const GradCheckOptions& options);

} // namespace adhcn
