#pragma once

#include <optional>
#include <vector>

#include "calrisk/record.hpp"

namespace calrisk {

/// Per-class confusion masses weighted by predicted-class confidence.
/// Structural relations (each to ~1e-12):
///   cw_p = cw_tp + cw_fn,  cw_n = cw_fp + cw_tn,
///   cw_p + cw_n = total_mass = cw_tp + cw_fp + cw_fn + cw_tn.
struct CwCounts {
    int class_id = 0;
    double cw_tp = 0.0;
    double cw_fp = 0.0;
    double cw_fn = 0.0;
    double cw_tn = 0.0;
    double cw_p = 0.0;
    double cw_n = 0.0;
    double total_mass = 0.0;

    friend bool operator==(const CwCounts&, const CwCounts&) = default;
};

/// Classical ratio metrics evaluated on confidence masses. A metric whose
/// denominator vanishes is left empty rather than forced to 0 or NaN.
struct CwMetricRow {
    int class_id = 0;
    std::optional<double> cw_precision;
    std::optional<double> cw_recall;
    std::optional<double> cw_specificity;
    std::optional<double> cw_f1;
    std::optional<double> cw_mcc;
    double cw_acc = 0.0;

    friend bool operator==(const CwMetricRow&, const CwMetricRow&) = default;
};

/// Confidence-weighted confusion masses for one class.
CwCounts cw_counts(const EvaluationSet& set, int class_id);

/// All K rows in class-index order.
std::vector<CwCounts> all_cw_counts(const EvaluationSet& set);

CwMetricRow cw_metrics(const CwCounts& counts);

/// Overall cwA from per-class rows: sum cwTP / sum cwP. Rows must come from
/// one set (consistent total_mass).
double cwa_from_counts(const std::vector<CwCounts>& all_counts);

/// Residual of the macro identity sum_k cwAcc_k = (K-2) + 2*cwA;
/// contract: <= 1e-10.
double macro_identity_check(const std::vector<CwCounts>& all_counts, double cwa_value);

} // namespace calrisk
