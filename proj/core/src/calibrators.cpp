#include "calrisk/calibrators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace calrisk {

namespace {

struct Block {
    double score = 0.0;  ///< representative (distinct) score
    double sum = 0.0;    ///< summed targets
    double weight = 0.0; ///< pooled sample count
    double mean() const { return sum / weight; }
};

void check_fit_inputs(const std::vector<double>& scores,
                      const std::vector<bool>& correct, std::size_t min_n) {
    if (scores.size() != correct.size()) {
        throw Error(ErrorCode::SchemaError, "scores and targets differ in length");
    }
    if (scores.size() < min_n) {
        throw Error(ErrorCode::EmptySet, "calibrator fit needs at least " +
                                             std::to_string(min_n) + " samples");
    }
    for (double s : scores) {
        if (!std::isfinite(s)) {
            throw Error(ErrorCode::InvalidConfidence, "non-finite score in calibrator fit");
        }
    }
}

template <typename Map>
EvaluationSet apply_map(const Map& map, const EvaluationSet& set) {
    if (set.num_classes() != 2) {
        throw Error(ErrorCode::UnsupportedMulticlass,
                    "calibrators are binary; got " +
                    std::to_string(set.num_classes()) + " classes");
    }
    std::vector<PredictionRecord> recs;
    recs.reserve(set.size());
    for (const auto& rec : set.records()) {
        PredictionRecord out = rec;
        std::vector<double> confs(2);
        if (rec.class_confs) {
            confs = *rec.class_confs;
        } else {
            const double c = rec.conf;
            confs[rec.pred_label] = c;
            confs[1 - rec.pred_label] = std::min(1.0 - c, c);
        }
        for (double& c : confs) c = std::clamp(map(c), 0.0, 1.0);
        out.conf = confs[out.pred_label];
        out.class_confs = std::move(confs);
        recs.push_back(std::move(out));
    }
    return clip_confidences(std::move(recs), 2, set.epsilon());
}

} // namespace

double IsotonicMap::operator()(double score) const {
    // last breakpoint <= score; below the support, the first value
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), score);
    if (it == breakpoints.begin()) return values.front();
    return values[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

bool IsotonicMap::constant() const noexcept {
    return values.front() == values.back();
}

double PlattMap::operator()(double score) const {
    const double t = a * score + b;
    // split to avoid exp overflow on either side
    if (t >= 0.0) {
        const double e = std::exp(-t);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(t));
}

IsotonicMap fit_isotonic(const std::vector<double>& scores,
                         const std::vector<bool>& correct) {
    check_fit_inputs(scores, correct, 2);
    const std::size_t n = scores.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // pool exact score ties before PAV
    std::vector<Block> pooled;
    for (std::size_t idx = 0; idx < n;) {
        Block b;
        b.score = scores[order[idx]];
        while (idx < n && scores[order[idx]] == b.score) {
            b.sum += correct[order[idx]] ? 1.0 : 0.0;
            b.weight += 1.0;
            ++idx;
        }
        pooled.push_back(b);
    }

    // PAV: merge backwards while the monotonicity constraint is violated
    std::vector<Block> stack;
    std::vector<std::size_t> span; // pooled groups covered by each stack block
    stack.reserve(pooled.size());
    for (const Block& b : pooled) {
        stack.push_back(b);
        span.push_back(1);
        while (stack.size() > 1 &&
               stack[stack.size() - 2].mean() > stack.back().mean()) {
            stack[stack.size() - 2].sum += stack.back().sum;
            stack[stack.size() - 2].weight += stack.back().weight;
            span[span.size() - 2] += span.back();
            stack.pop_back();
            span.pop_back();
        }
    }

    IsotonicMap map;
    map.breakpoints.reserve(pooled.size());
    map.values.reserve(pooled.size());
    std::size_t g = 0;
    for (std::size_t s = 0; s < stack.size(); ++s) {
        const double v = stack[s].mean();
        for (std::size_t j = 0; j < span[s]; ++j, ++g) {
            map.breakpoints.push_back(pooled[g].score);
            map.values.push_back(v);
        }
    }
    for (std::size_t i = 1; i < map.values.size(); ++i) {
        if (map.values[i] < map.values[i - 1]) {
            throw std::logic_error("PAV produced a decreasing fit");
        }
    }
    return map;
}

PlattMap fit_platt(const std::vector<double>& scores,
                   const std::vector<bool>& correct) {
    check_fit_inputs(scores, correct, 2);
    const std::size_t n = scores.size();

    double prior1 = 0.0, prior0 = 0.0;
    for (bool c : correct) (c ? prior1 : prior0) += 1.0;
    if (prior1 == 0.0 || prior0 == 0.0) {
        throw Error(ErrorCode::DegenerateTargets,
                    "Platt fit needs both correct and incorrect samples");
    }

    constexpr int max_iter = 100;
    constexpr double grad_tol = 1e-10;
    constexpr double min_step = 1e-10;
    constexpr double ridge = 1e-12;
    const double hi_target = (prior1 + 1.0) / (prior1 + 2.0);
    const double lo_target = 1.0 / (prior0 + 2.0);

    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = correct[i] ? hi_target : lo_target;

    double a = 0.0;
    double b = std::log((prior0 + 1.0) / (prior1 + 1.0));

    const auto loss = [&](double av, double bv) {
        double f = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double fApB = scores[i] * av + bv;
            if (fApB >= 0.0) {
                f += t[i] * fApB + std::log1p(std::exp(-fApB));
            } else {
                f += (t[i] - 1.0) * fApB + std::log1p(std::exp(fApB));
            }
        }
        return f;
    };

    double fval = loss(a, b);
    for (int iter = 0; iter < max_iter; ++iter) {
        double h11 = ridge, h22 = ridge, h21 = 0.0, g1 = 0.0, g2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double fApB = scores[i] * a + b;
            double p, q;
            if (fApB >= 0.0) {
                const double e = std::exp(-fApB);
                p = e / (1.0 + e);
                q = 1.0 / (1.0 + e);
            } else {
                const double e = std::exp(fApB);
                p = 1.0 / (1.0 + e);
                q = e / (1.0 + e);
            }
            const double d2 = p * q;
            h11 += scores[i] * scores[i] * d2;
            h22 += d2;
            h21 += scores[i] * d2;
            const double d1 = t[i] - p;
            g1 += scores[i] * d1;
            g2 += d1;
        }
        if (std::max(std::abs(g1), std::abs(g2)) <= grad_tol) break;

        const double det = h11 * h22 - h21 * h21;
        const double da = -(h22 * g1 - h21 * g2) / det;
        const double db = -(-h21 * g1 + h11 * g2) / det;
        const double gd = g1 * da + g2 * db;

        double step = 1.0;
        while (step >= min_step) {
            const double na = a + step * da;
            const double nb = b + step * db;
            const double nf = loss(na, nb);
            if (nf < fval + 1e-4 * step * gd) {
                a = na;
                b = nb;
                fval = nf;
                break;
            }
            step *= 0.5;
        }
        if (step < min_step) break; // line search stalled
    }
    return PlattMap{a, b};
}

EvaluationSet apply_calibrator(const IsotonicMap& map, const EvaluationSet& set) {
    return apply_map(map, set);
}

EvaluationSet apply_calibrator(const PlattMap& map, const EvaluationSet& set) {
    return apply_map(map, set);
}

} // namespace calrisk
