#pragma once

#include "adhcn/dense.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace adhcn {

// c x c count matrix, rows indexed by true class, columns by prediction.
struct ConfusionMatrix {
    int num_classes = 0;
    std::vector<std::int64_t> counts; // row-major c x c

    std::int64_t at(int truth, int predicted) const {
        return counts[static_cast<std::size_t>(truth * num_classes + predicted)];
    }
    std::int64_t total() const;
};

ConfusionMatrix confusion(const LabelVector& labels, const std::vector<int>& predictions,
                          std::span<const Index> mask);

// trace / total
double accuracy(const ConfusionMatrix& cm);
// unweighted mean of per-class recall; 0/0 counts as 0
double macro_recall(const ConfusionMatrix& cm);
// unweighted mean of per-class F1 (harmonic mean of precision and recall)
double macro_f1(const ConfusionMatrix& cm);
// equals accuracy in the single-label setting; kept as a named quantity
double micro_recall(const ConfusionMatrix& cm);

struct SplitMetrics {
    double accuracy = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    double micro_recall = 0.0;
};

SplitMetrics evaluate(const ConfusionMatrix& cm);

} // namespace adhcn
