#include "calrisk/cw_confusion.hpp"

#include <cmath>
#include <string>

namespace calrisk {

CwCounts cw_counts(const EvaluationSet& set, int class_id) {
    if (class_id < 0 || class_id >= set.num_classes()) {
        throw Error(ErrorCode::LabelOutOfRange,
                    "class_id " + std::to_string(class_id) + " outside [0, " +
                    std::to_string(set.num_classes()) + ")");
    }
    CwCounts c;
    c.class_id = class_id;
    for (std::size_t i : set.ordered()) {
        const auto& rec = set.record(i);
        const double w = rec.conf;
        const bool is_true = rec.true_label == class_id;
        const bool is_pred = rec.pred_label == class_id;
        const bool correct = rec.correct();
        c.total_mass += w;
        if (is_true) {
            c.cw_p += w;
            if (correct) c.cw_tp += w; else c.cw_fn += w;
        } else {
            c.cw_n += w;
            if (is_pred) c.cw_fp += w;
        }
        if (!is_pred && !is_true) c.cw_tn += w;
    }
    return c;
}

std::vector<CwCounts> all_cw_counts(const EvaluationSet& set) {
    std::vector<CwCounts> rows;
    rows.reserve(static_cast<std::size_t>(set.num_classes()));
    for (int k = 0; k < set.num_classes(); ++k) rows.push_back(cw_counts(set, k));
    return rows;
}

CwMetricRow cw_metrics(const CwCounts& c) {
    CwMetricRow row;
    row.class_id = c.class_id;
    const double pred_mass = c.cw_tp + c.cw_fp;
    if (pred_mass > 0.0) row.cw_precision = c.cw_tp / pred_mass;
    if (c.cw_p > 0.0) row.cw_recall = c.cw_tp / c.cw_p;
    if (c.cw_n > 0.0) row.cw_specificity = c.cw_tn / c.cw_n;
    const double f1_den = 2.0 * c.cw_tp + c.cw_fp + c.cw_fn;
    if (f1_den > 0.0) row.cw_f1 = 2.0 * c.cw_tp / f1_den;
    const double mcc_den2 = (c.cw_tp + c.cw_fp) * (c.cw_tp + c.cw_fn) *
                            (c.cw_tn + c.cw_fp) * (c.cw_tn + c.cw_fn);
    if (mcc_den2 > 0.0) {
        row.cw_mcc = (c.cw_tp * c.cw_tn - c.cw_fp * c.cw_fn) / std::sqrt(mcc_den2);
    }
    row.cw_acc = (c.cw_tp + c.cw_tn) / c.total_mass;
    return row;
}

double cwa_from_counts(const std::vector<CwCounts>& all_counts) {
    if (all_counts.empty()) {
        throw Error(ErrorCode::InconsistentCounts, "no per-class rows given");
    }
    const double mass = all_counts.front().total_mass;
    double tp = 0.0, p = 0.0;
    for (const auto& c : all_counts) {
        if (std::abs(c.total_mass - mass) > 1e-9 * std::max(1.0, mass)) {
            throw Error(ErrorCode::InconsistentCounts,
                        "per-class rows disagree on total confidence mass");
        }
        tp += c.cw_tp;
        p += c.cw_p;
    }
    return tp / p;
}

double macro_identity_check(const std::vector<CwCounts>& all_counts, double cwa_value) {
    const double k = static_cast<double>(all_counts.size());
    double sum_acc = 0.0;
    for (const auto& c : all_counts) sum_acc += (c.cw_tp + c.cw_tn) / c.total_mass;
    return std::abs(sum_acc - (k - 2.0) - 2.0 * cwa_value);
}

} // namespace calrisk
