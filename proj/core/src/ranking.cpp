#include "calrisk/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace calrisk {

namespace {

void require_class(const EvaluationSet& set, int class_id) {
    if (class_id < 0 || class_id >= set.num_classes()) {
        throw Error(ErrorCode::LabelOutOfRange,
                    "class_id " + std::to_string(class_id) + " outside [0, " +
                    std::to_string(set.num_classes()) + ")");
    }
}

struct ScoredSample {
    double score = 0.0;
    double weight = 1.0; ///< predicted-class confidence
    bool positive = false;
};

/// Samples for class k in descending score order (ties adjacent, canonical
/// set order within a tie so results are permutation-stable).
std::vector<ScoredSample> gather(const EvaluationSet& set, int class_id,
                                 const std::function<double(double)>* phi = nullptr) {
    const std::vector<double> scores = class_scores(set, class_id);
    std::vector<ScoredSample> samples;
    samples.reserve(set.size());
    for (std::size_t i : set.ordered()) {
        const auto& rec = set.record(i);
        ScoredSample s;
        s.score = phi ? (*phi)(scores[i]) : scores[i];
        s.weight = rec.conf;
        s.positive = rec.true_label == class_id;
        samples.push_back(s);
    }
    std::stable_sort(samples.begin(), samples.end(),
                     [](const ScoredSample& a, const ScoredSample& b) {
                         return a.score > b.score;
                     });
    return samples;
}

struct TieGroup {
    double pos = 0.0; ///< positive mass (count when unweighted)
    double neg = 0.0;
};

/// Collapses the sorted samples into tie groups on the score value.
std::vector<TieGroup> tie_groups(const std::vector<ScoredSample>& samples, bool weighted) {
    std::vector<TieGroup> groups;
    std::size_t i = 0;
    while (i < samples.size()) {
        std::size_t j = i;
        TieGroup g;
        while (j < samples.size() && samples[j].score == samples[i].score) {
            const double w = weighted ? samples[j].weight : 1.0;
            if (samples[j].positive) g.pos += w;
            else g.neg += w;
            ++j;
        }
        groups.push_back(g);
        i = j;
    }
    return groups;
}

CurveSeries build_curve(const EvaluationSet& set, int class_id, bool weighted,
                        const std::function<double(double)>* phi = nullptr) {
    require_class(set, class_id);
    const auto samples = gather(set, class_id, phi);
    const auto groups = tie_groups(samples, weighted);

    double total_pos = 0.0, total_neg = 0.0;
    for (const auto& g : groups) {
        total_pos += g.pos;
        total_neg += g.neg;
    }
    if (total_pos <= 0.0 || total_neg <= 0.0) {
        throw Error(ErrorCode::DegenerateClass,
                    "class " + std::to_string(class_id) +
                    " lacks positives or negatives");
    }

    CurveSeries curve;
    curve.class_id = class_id;
    curve.weighted = weighted;
    curve.points.reserve(groups.size() + 1);
    curve.points.push_back({0.0, 0.0});
    double cum_pos = 0.0, cum_neg = 0.0;
    for (const auto& g : groups) {
        cum_pos += g.pos;
        cum_neg += g.neg;
        curve.points.push_back({cum_neg / total_neg, cum_pos / total_pos});
    }
    // trapezoid over the emitted points; a tie group is one diagonal segment
    double area = 0.0;
    for (std::size_t p = 1; p < curve.points.size(); ++p) {
        const auto& a = curve.points[p - 1];
        const auto& b = curve.points[p];
        area += (b.x - a.x) * (b.y + a.y) * 0.5;
    }
    curve.area = area;
    return curve;
}

struct PairwiseStats {
    double z_mean = 0.0;  ///< classical pairwise AUC
    double wz_ratio = 0.0; ///< weighted pairwise AUC = E[wz]/E[w]
    bool degenerate = true;
};

/// Grouped sweep computing the pairwise sums Sum z and Sum w*z over all
/// positive-negative pairs with the 1/2-tie convention, in O(N log N).
PairwiseStats pairwise_stats(const std::vector<ScoredSample>& samples) {
    const auto unweighted = tie_groups(samples, false);
    const auto weighted = tie_groups(samples, true);

    double pos_n = 0.0, neg_n = 0.0, pos_w = 0.0, neg_w = 0.0;
    for (const auto& g : unweighted) { pos_n += g.pos; neg_n += g.neg; }
    for (const auto& g : weighted) { pos_w += g.pos; neg_w += g.neg; }

    PairwiseStats st;
    if (pos_n <= 0.0 || neg_n <= 0.0) return st;
    st.degenerate = false;

    double above_n = 0.0, above_w = 0.0;
    double sum_z = 0.0, sum_wz = 0.0;
    for (std::size_t g = 0; g < unweighted.size(); ++g) {
        sum_z += unweighted[g].neg * (above_n + 0.5 * unweighted[g].pos);
        sum_wz += weighted[g].neg * (above_w + 0.5 * weighted[g].pos);
        above_n += unweighted[g].pos;
        above_w += weighted[g].pos;
    }
    st.z_mean = sum_z / (pos_n * neg_n);
    st.wz_ratio = sum_wz / (pos_w * neg_w);
    return st;
}

} // namespace

std::vector<double> class_scores(const EvaluationSet& set, int class_id) {
    require_class(set, class_id);
    std::vector<double> scores(set.size());
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& rec = set.record(i);
        if (rec.class_confs) {
            scores[i] = (*rec.class_confs)[class_id];
        } else if (set.num_classes() == 2) {
            const double c = rec.conf;
            scores[i] = (rec.pred_label == class_id) ? c : std::min(1.0 - c, c);
        } else {
            throw Error(ErrorCode::MissingClassConfs,
                        "per-class ROC with K > 2 needs class_confs on every record");
        }
    }
    return scores;
}

CurveSeries roc_curve(const EvaluationSet& set, int class_id) {
    return build_curve(set, class_id, /*weighted=*/false);
}

CurveSeries cw_roc_curve(const EvaluationSet& set, int class_id) {
    return build_curve(set, class_id, /*weighted=*/true);
}

AucGap auc_gap(const EvaluationSet& set, int class_id) {
    AucGap gap;
    gap.class_id = class_id;
    gap.auc = roc_curve(set, class_id).area;
    gap.cw_auc = cw_roc_curve(set, class_id).area;
    gap.delta = gap.cw_auc - gap.auc;

    const auto st = pairwise_stats(gather(set, class_id));
    gap.cov_form = st.wz_ratio - st.z_mean;
    if (std::abs(gap.delta - gap.cov_form) > 1e-10) {
        throw std::logic_error("curve-route and pairwise-route AUC gaps diverged");
    }
    return gap;
}

std::vector<std::optional<AucGap>> all_auc_gaps(const EvaluationSet& set) {
    std::vector<std::optional<AucGap>> gaps;
    gaps.reserve(static_cast<std::size_t>(set.num_classes()));
    for (int k = 0; k < set.num_classes(); ++k) {
        try {
            gaps.push_back(auc_gap(set, k));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateClass) throw;
            gaps.push_back(std::nullopt);
        }
    }
    return gaps;
}

double monotone_invariance_check(const EvaluationSet& set, int class_id,
                                 const std::function<double(double)>& phi) {
    const double base = build_curve(set, class_id, false).area;
    const double mapped = build_curve(set, class_id, false, &phi).area;
    return std::abs(mapped - base);
}

MacroAuc macro_average(const std::vector<std::optional<AucGap>>& per_class) {
    MacroAuc macro;
    double auc_sum = 0.0, cw_sum = 0.0;
    for (std::size_t k = 0; k < per_class.size(); ++k) {
        if (per_class[k]) {
            auc_sum += per_class[k]->auc;
            cw_sum += per_class[k]->cw_auc;
            macro.evaluated_classes.push_back(static_cast<int>(k));
        } else {
            macro.skipped_classes.push_back(static_cast<int>(k));
        }
    }
    if (macro.evaluated_classes.empty()) {
        throw Error(ErrorCode::NoValidClasses, "every class is degenerate");
    }
    const double m = static_cast<double>(macro.evaluated_classes.size());
    macro.auc = auc_sum / m;
    macro.cw_auc = cw_sum / m;
    return macro;
}

} // namespace calrisk
