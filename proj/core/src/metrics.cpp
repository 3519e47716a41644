#include "adhcn/metrics.hpp"

#include <numeric>
#include <stdexcept>

namespace adhcn {

std::int64_t ConfusionMatrix::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

ConfusionMatrix confusion(const LabelVector& labels, const std::vector<int>& predictions,
                          std::span<const Index> mask) {
    if (labels.values.size() != predictions.size())
        throw std::invalid_argument("confusion: labels/predictions length mismatch");
    if (mask.empty()) throw std::invalid_argument("confusion: empty mask");
    ConfusionMatrix cm;
    cm.num_classes = labels.num_classes;
    cm.counts.assign(static_cast<std::size_t>(labels.num_classes) *
                         static_cast<std::size_t>(labels.num_classes),
                     0);
    for (Index i : mask) {
        if (i < 0 || i >= labels.size())
            throw std::invalid_argument("confusion: mask index out of range");
        const int truth = labels.values[static_cast<std::size_t>(i)];
        const int pred = predictions[static_cast<std::size_t>(i)];
        if (pred < 0 || pred >= labels.num_classes)
            throw std::invalid_argument("confusion: prediction out of class range");
        ++cm.counts[static_cast<std::size_t>(truth * cm.num_classes + pred)];
    }
    return cm;
}

namespace {

double safe_ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

} // namespace

double accuracy(const ConfusionMatrix& cm) {
    std::int64_t trace = 0;
    for (int c = 0; c < cm.num_classes; ++c) trace += cm.at(c, c);
    return safe_ratio(static_cast<double>(trace), static_cast<double>(cm.total()));
}

double macro_recall(const ConfusionMatrix& cm) {
    double sum = 0.0;
    for (int c = 0; c < cm.num_classes; ++c) {
        std::int64_t row = 0;
        for (int p = 0; p < cm.num_classes; ++p) row += cm.at(c, p);
        sum += safe_ratio(static_cast<double>(cm.at(c, c)), static_cast<double>(row));
    }
    return sum / static_cast<double>(cm.num_classes);
}

double macro_f1(const ConfusionMatrix& cm) {
    double sum = 0.0;
    for (int c = 0; c < cm.num_classes; ++c) {
        std::int64_t row = 0, col = 0;
        for (int p = 0; p < cm.num_classes; ++p) {
            row += cm.at(c, p);
            col += cm.at(p, c);
        }
        const double recall = safe_ratio(static_cast<double>(cm.at(c, c)), static_cast<double>(row));
        const double precision =
            safe_ratio(static_cast<double>(cm.at(c, c)), static_cast<double>(col));
        sum += safe_ratio(2.0 * precision * recall, precision + recall);
    }
    return sum / static_cast<double>(cm.num_classes);
}

double micro_recall(const ConfusionMatrix& cm) {
    // micro-averaged TP / (TP + FN) collapses to trace/total for single labels
    return accuracy(cm);
}

SplitMetrics evaluate(const ConfusionMatrix& cm) {
    return {accuracy(cm), macro_recall(cm), macro_f1(cm), micro_recall(cm)};
}

} // namespace adhcn
