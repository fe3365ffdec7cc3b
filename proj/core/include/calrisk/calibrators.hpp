#pragma once

#include <vector>

#include "calrisk/record.hpp"

namespace calrisk {

/// Nondecreasing step map fitted by pool-adjacent-violators.
/// Evaluation is piecewise-constant and right-continuous: a score takes the
/// value of the last breakpoint at or below it (scores below the first
/// breakpoint take the first value).
struct IsotonicMap {
    std::vector<double> breakpoints; ///< ascending distinct fit scores
    std::vector<double> values;      ///< nondecreasing fitted probabilities

    double operator()(double score) const;

    /// True when the fit collapsed to a single value (e.g. one-class targets).
    bool constant() const noexcept;
};

/// Sigmoid map s -> 1 / (1 + exp(a*s + b)); strictly monotone when a != 0.
struct PlattMap {
    double a = 0.0;
    double b = 0.0;

    double operator()(double score) const;
};

/// Least-squares isotonic regression of correctness on score. Exactly tied
/// scores are pooled before the PAV pass.
IsotonicMap fit_isotonic(const std::vector<double>& scores,
                         const std::vector<bool>& correct);

/// Platt scaling with the usual smoothed targets (n+ + 1)/(n+ + 2) and
/// 1/(n- + 2), fitted by damped Newton on the logistic log-loss.
/// Stops when the gradient infinity-norm falls to 1e-10 or after 100
/// iterations. Requires both target classes present.
PlattMap fit_platt(const std::vector<double>& scores,
                   const std::vector<bool>& correct);

/// Applies a fitted map to a binary set: every per-class score (synthesized
/// when the records carry none) runs through the map, the predicted-class
/// confidence follows, and the result is re-clipped to [eps, 1-eps].
/// The caller is responsible for having fitted the map on a disjoint split.
EvaluationSet apply_calibrator(const IsotonicMap& map, const EvaluationSet& set);
EvaluationSet apply_calibrator(const PlattMap& map, const EvaluationSet& set);

} // namespace calrisk
