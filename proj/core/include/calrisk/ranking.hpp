#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "calrisk/record.hpp"

namespace calrisk {

struct CurvePoint {
    double x = 0.0; ///< FPR (or cwFPR)
    double y = 0.0; ///< TPR (or cwTPR)
};

/// An ROC-style curve for one class. Points run from (0,0) to (1,1) with
/// nondecreasing x; tied scores form a single diagonal segment, so the
/// trapezoidal area equals the pairwise formula with the 1/2-tie convention.
struct CurveSeries {
    int class_id = 0;
    std::vector<CurvePoint> points;
    double area = 0.0;
    bool weighted = false;
};

/// AUC, cwAUC and their gap for one class. delta comes from the curve
/// route, cov_form from the pairwise route Cov(w, z)/E[w]; the two agree
/// to 1e-10 by construction.
struct AucGap {
    int class_id = 0;
    double auc = 0.0;
    double cw_auc = 0.0;
    double delta = 0.0;
    double cov_form = 0.0;

    friend bool operator==(const AucGap&, const AucGap&) = default;
};

struct MacroAuc {
    double auc = 0.0;
    double cw_auc = 0.0;
    std::vector<int> evaluated_classes;
    std::vector<int> skipped_classes; ///< degenerate (single-outcome) classes
};

/// Scores for class k: class_confs[k] when records carry per-class vectors.
/// Binary sets without vectors synthesize them from the predicted-class
/// confidence c: the predicted class scores c, the other class min(1-c, c),
/// so the predicted class is always the argmax of the synthesized pair.
/// K > 2 without class_confs is an error (MissingClassConfs).
std::vector<double> class_scores(const EvaluationSet& set, int class_id);

/// Classical ROC for class k (positives: true_label == k). Thresholds sweep
/// the distinct scores descending. DegenerateClass when the class has no
/// positives or no negatives.
CurveSeries roc_curve(const EvaluationSet& set, int class_id);

/// Confidence-weighted ROC: step sizes proportional to predicted-class
/// confidence mass instead of counts.
CurveSeries cw_roc_curve(const EvaluationSet& set, int class_id);

AucGap auc_gap(const EvaluationSet& set, int class_id);

/// Gaps for all classes in index order; degenerate classes come back empty.
std::vector<std::optional<AucGap>> all_auc_gaps(const EvaluationSet& set);

/// |AUC(phi . scores) - AUC(scores)| for a strictly increasing phi;
/// contract: <= 1e-12. cwAUC is deliberately not checked (it is sensitive
/// to score magnitudes by design).
double monotone_invariance_check(const EvaluationSet& set, int class_id,
                                 const std::function<double(double)>& phi);

/// Unweighted mean over classes with defined gaps. NoValidClasses when
/// every class is degenerate.
MacroAuc macro_average(const std::vector<std::optional<AucGap>>& per_class);

} // namespace calrisk
