#include "adhcn/gradcheck.hpp"

#include "adhcn/errors.hpp"
#include "adhcn/rng.hpp"

#include <algorithm>
#include <cmath>

namespace adhcn {

namespace {

// random hypergraph with edge sizes 2..4 plus normal features/uniform labels
struct Instance {
    Hypergraph hg;
    Matrix features;
    LabelVector labels;
    std::vector<Index> mask;
};

Instance make_instance(const GradCheckOptions& opt, RandomStream& stream) {
    Instance inst;
    std::vector<std::vector<Index>> edges;
    std::vector<Index> nodes(static_cast<std::size_t>(opt.num_nodes));
    for (Index i = 0; i < opt.num_nodes; ++i) nodes[static_cast<std::size_t>(i)] = i;
    for (Index e = 0; e < opt.num_edges; ++e) {
        const std::size_t size = 2 + static_cast<std::size_t>(stream.uniform_int(3));
        for (std::size_t i = 0; i < size; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(stream.uniform_int(nodes.size() - i));
            std::swap(nodes[i], nodes[j]);
        }
        std::vector<Index> edge(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(size));
        std::sort(edge.begin(), edge.end());
        edges.push_back(std::move(edge));
    }
    inst.hg = Hypergraph::make(opt.num_nodes, std::move(edges));
    inst.features = Matrix(opt.num_nodes, opt.num_features);
    for (double& v : inst.features.data()) v = stream.normal();
    inst.labels.num_classes = static_cast<int>(opt.num_classes);
    inst.labels.values.resize(static_cast<std::size_t>(opt.num_nodes));
    for (auto& y : inst.labels.values)
        y = static_cast<int>(stream.uniform_int(static_cast<std::uint64_t>(opt.num_classes)));
    inst.mask.resize(static_cast<std::size_t>(opt.num_nodes));
    for (Index i = 0; i < opt.num_nodes; ++i) inst.mask[static_cast<std::size_t>(i)] = i;
    return inst;
}

double min_abs_preactivation(const ForwardCache& cache, const FusionStrategy& strategy) {
    double lo = std::numeric_limits<double>::infinity();
    if (strategy.uses_hg_channel())
        for (double v : cache.hg.pre.data()) lo = std::min(lo, std::abs(v));
    if (strategy.uses_le_channel())
        for (double v : cache.le.pre.data()) lo = std::min(lo, std::abs(v));
    return lo;
}

} // namespace

GradCheckResult gradient_check(const GradCheckOptions& opt) {
    RandomStream data_stream(opt.seed, kStreamGradCheck);
    const Instance inst = make_instance(opt, data_stream);
    const PipelineOperators ops = PipelineOperators::build(inst.hg);
    const ModelDims dims{opt.num_features, opt.hidden, opt.num_classes};

    // Rejection sampling away from the ReLU kinks. Every entry is drawn,
    // biases included: a zero bias would pin isolated-node pre-activations
    // exactly onto the kink, which no redraw of the weights could fix.
    RandomStream init_stream(opt.seed, kStreamInit);
    ModelParams params;
    bool accepted = false;
    for (int attempt = 0; attempt < 100; ++attempt) {
        params = zero_params(dims, opt.strategy);
        params.for_each_param([&](const char*, Matrix& m, bool) {
            for (double& v : m.data()) v = init_stream.uniform(-0.6, 0.6);
        });
        const ForwardCache cache = forward_pass(ops, inst.features, params);
        if (min_abs_preactivation(cache, opt.strategy) >= 1e-4) {
            accepted = true;
            break;
        }
    }
    if (!accepted)
        throw NumericError("gradient_check: could not draw parameters away from ReLU kinks");

    GradientResult analytic = compute_gradients(ops, inst.features, inst.labels, inst.mask, params,
                                                opt.weight_decay);
    if (opt.corrupt_gradient) {
        analytic.gradients.for_each_param([used = false](const char*, Matrix& g, bool) mutable {
            if (!used && g.size() > 0) {
                g.data()[0] += 1e-2;
                used = true;
            }
        });
    }

    std::vector<Matrix*> param_blocks;
    std::vector<std::string> names;
    params.for_each_param([&](const char* name, Matrix& m, bool) {
        param_blocks.push_back(&m);
        names.emplace_back(name);
    });
    std::vector<const Matrix*> grad_blocks;
    analytic.gradients.for_each_param(
        [&](const char*, const Matrix& g, bool) { grad_blocks.push_back(&g); });

    GradCheckResult result;
    for (std::size_t b = 0; b < param_blocks.size(); ++b) {
        GradCheckGroup group;
        group.name = names[b];
        Matrix& block = *param_blocks[b];
        for (std::size_t i = 0; i < block.data().size(); ++i) {
            const double original = block.data()[i];
            block.data()[i] = original + opt.step;
            const double plus = evaluate_loss(ops, inst.features, inst.labels, inst.mask, params,
                                              opt.weight_decay);
            block.data()[i] = original - opt.step;
            const double minus = evaluate_loss(ops, inst.features, inst.labels, inst.mask, params,
                                               opt.weight_decay);
            block.data()[i] = original;

            const double numeric = (plus - minus) / (2.0 * opt.step);
            const double analytic_v = grad_blocks[b]->data()[i];
            const double rel = std::abs(analytic_v - numeric) /
                               std::max({1.0, std::abs(analytic_v), std::abs(numeric)});
            if (rel > group.max_rel_error) {
                group.max_rel_error = rel;
                group.analytic_at_worst = analytic_v;
                group.numeric_at_worst = numeric;
            }
        }
        result.max_rel_error = std::max(result.max_rel_error, group.max_rel_error);
        result.groups.push_back(std::move(group));
    }
    return result;
}

} // namespace adhcn
