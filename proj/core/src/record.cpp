#include "calrisk/record.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

namespace calrisk {

namespace {

double clip_one(double c, double epsilon) {
    return std::min(std::max(c, epsilon), 1.0 - epsilon);
}

void validate_record(const PredictionRecord& rec, int k, std::size_t index) {
    if (rec.true_label < 0 || rec.true_label >= k ||
        rec.pred_label < 0 || rec.pred_label >= k) {
        throw Error(ErrorCode::LabelOutOfRange,
                    "record " + std::to_string(index) + ": label outside [0, " +
                    std::to_string(k) + ")");
    }
    if (!(rec.conf >= 0.0 && rec.conf <= 1.0)) {
        throw Error(ErrorCode::InvalidConfidence,
                    "record " + std::to_string(index) + ": conf " +
                    std::to_string(rec.conf) + " outside [0, 1]");
    }
    if (rec.class_confs) {
        if (static_cast<int>(rec.class_confs->size()) != k) {
            throw Error(ErrorCode::SchemaError,
                        "record " + std::to_string(index) + ": class_confs has " +
                        std::to_string(rec.class_confs->size()) + " entries, expected " +
                        std::to_string(k));
        }
        for (double c : *rec.class_confs) {
            if (!(c >= 0.0 && c <= 1.0)) {
                throw Error(ErrorCode::InvalidConfidence,
                            "record " + std::to_string(index) +
                            ": class_confs entry outside [0, 1]");
            }
        }
        if (std::abs((*rec.class_confs)[rec.pred_label] - rec.conf) > 1e-9) {
            throw Error(ErrorCode::ConsistencyError,
                        "record " + std::to_string(index) +
                        ": class_confs[pred_label] does not match conf");
        }
    }
}

} // namespace

EvaluationSet clip_confidences(std::vector<PredictionRecord> raw, int k, double epsilon) {
    if (raw.empty()) {
        throw Error(ErrorCode::EmptySet, "cannot build an evaluation set from zero records");
    }
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
        throw Error(ErrorCode::InvalidEpsilon,
                    "epsilon must lie in (0, 0.5), got " + std::to_string(epsilon));
    }
    if (k < 2) {
        throw Error(ErrorCode::SchemaError, "class count must be >= 2");
    }

    for (std::size_t i = 0; i < raw.size(); ++i) {
        validate_record(raw[i], k, i);
    }
    for (auto& rec : raw) {
        rec.conf = clip_one(rec.conf, epsilon);
        if (rec.class_confs) {
            for (double& c : *rec.class_confs) c = clip_one(c, epsilon);
            // keep the pred entry bit-identical to conf after clipping
            (*rec.class_confs)[rec.pred_label] = rec.conf;
        }
    }

    EvaluationSet set;
    set.k_ = k;
    set.epsilon_ = epsilon;
    set.records_ = std::move(raw);
    set.order_.resize(set.records_.size());
    std::iota(set.order_.begin(), set.order_.end(), std::size_t{0});
    std::stable_sort(set.order_.begin(), set.order_.end(),
                     [&](std::size_t a, std::size_t b) {
                         const auto& ra = set.records_[a];
                         const auto& rb = set.records_[b];
                         return std::tie(ra.conf, ra.true_label, ra.pred_label) <
                                std::tie(rb.conf, rb.true_label, rb.pred_label);
                     });
    return set;
}

EvaluationSet clip_confidences(std::vector<PredictionRecord> raw, double epsilon) {
    if (raw.empty()) {
        throw Error(ErrorCode::EmptySet, "cannot build an evaluation set from zero records");
    }
    int k = 2;
    std::optional<int> width;
    for (const auto& rec : raw) {
        k = std::max({k, rec.true_label + 1, rec.pred_label + 1});
        if (rec.class_confs) {
            int w = static_cast<int>(rec.class_confs->size());
            if (width && *width != w) {
                throw Error(ErrorCode::SchemaError, "class_confs widths disagree across records");
            }
            width = w;
        }
    }
    if (width) {
        if (*width < k) {
            throw Error(ErrorCode::SchemaError,
                        "labels imply " + std::to_string(k) + " classes but class_confs has " +
                        std::to_string(*width));
        }
        k = *width;
    }
    return clip_confidences(std::move(raw), k, epsilon);
}

} // namespace calrisk
