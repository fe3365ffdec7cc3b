#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "calrisk/error.hpp"

namespace calrisk {

/// One scored prediction: true class, predicted class, the confidence
/// assigned to the predicted class, and (optionally) the full per-class
/// confidence vector. When class_confs is present, class_confs[pred_label]
/// must equal conf to within 1e-9.
struct PredictionRecord {
    int true_label = 0;
    int pred_label = 0;
    double conf = 0.0;
    std::optional<std::vector<double>> class_confs;

    bool correct() const noexcept { return true_label == pred_label; }
};

/// Validated, clipped, immutable collection of predictions.
///
/// Invariants established at construction and relied on by every metric:
///   - non-empty, all labels in [0, k), k >= 2
///   - every confidence (and class_confs entry) lies in [epsilon, 1-epsilon]
///   - a canonical summation order (stable sort by (conf, true, pred)) is
///     precomputed so metric sums are bit-stable under record permutation
class EvaluationSet {
public:
    std::size_t size() const noexcept { return records_.size(); }
    int num_classes() const noexcept { return k_; }
    double epsilon() const noexcept { return epsilon_; }

    const std::vector<PredictionRecord>& records() const noexcept { return records_; }
    const PredictionRecord& record(std::size_t i) const { return records_[i]; }

    /// Indices in canonical summation order.
    const std::vector<std::size_t>& ordered() const noexcept { return order_; }

    friend EvaluationSet clip_confidences(std::vector<PredictionRecord> raw,
                                          int k, double epsilon);

private:
    EvaluationSet() = default;

    std::vector<PredictionRecord> records_;
    std::vector<std::size_t> order_;
    int k_ = 2;
    double epsilon_ = 1e-8;
};

/// Validates `raw` against class count `k`, clips every confidence
/// c -> min(max(c, epsilon), 1-epsilon), and freezes the set.
/// Record order is preserved.
EvaluationSet clip_confidences(std::vector<PredictionRecord> raw,
                               int k, double epsilon = 1e-8);

/// Same, inferring k from the records (max label + 1, or the class_confs
/// width when present; the two must agree). k is floored at 2.
EvaluationSet clip_confidences(std::vector<PredictionRecord> raw,
                               double epsilon = 1e-8);

} // namespace calrisk
