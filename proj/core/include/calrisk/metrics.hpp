#pragma once

#include <cstddef>
#include <optional>

#include "calrisk/record.hpp"

namespace calrisk {

/// Scalar risk and usefulness summary of one evaluation set.
/// p_risk is the overconfidence risk probability: Phi(z) when CSR sits
/// above its calibrated mean of 1, and zero otherwise (a set on the
/// underconfident side carries no overconfidence risk). z is always
/// reported so callers can run their own tail analysis.
struct RiskReport {
    std::size_t n = 0;
    double acc = 0.0;
    double cwa = 0.0;
    std::optional<double> gain;            ///< empty when acc == cwa == 1
    double csr = 0.0;
    double sigma_csr = 0.0;
    double z = 0.0;
    double p_risk = 0.0;
    double ece = 0.0;
    double brier = 0.0;
    double mean_conf = 0.0;
    std::optional<double> mean_conf_wrong; ///< empty when there are no errors
    std::optional<double> jensen_lower_bound;

    friend bool operator==(const RiskReport&, const RiskReport&) = default;
};

struct ZScore {
    double z = 0.0;
    double p = 0.0;
};

/// Calibrated size ratio: (1/N) * sum over incorrect of 1/(1-conf).
/// 1 under perfect calibration; > 1 flags overconfidence risk; 0 when
/// every prediction is correct.
double csr(const EvaluationSet& set);

/// Null standard deviation of CSR: sqrt((1/N^2) * sum of conf/(1-conf))
/// over all records, correct and incorrect.
double sigma_csr(const EvaluationSet& set);

/// z = (csr_value - 1)/sigma and the upper-tail risk probability Phi(z).
/// sigma must be positive.
ZScore p_risk(double csr_value, double sigma);

/// Confidence-weighted accuracy: confidence mass on correct predictions
/// divided by total confidence mass.
double cwa(const EvaluationSet& set);

/// cwA through the covariance identity acc + Cov(conf, correct)/mean_conf;
/// equal to cwa() to ~1e-12, kept as an independent route for checks.
double cwa_covariance_form(const EvaluationSet& set);

/// Fraction of the gap to perfect accuracy closed by confidence weighting:
/// (cwa - acc) / (1 - min(cwa, acc)). Empty when min(cwa, acc) == 1.
std::optional<double> gain(double acc, double cwa_value);

/// Expected calibration error over m_bins equal-width bins.
/// Bin rule: a confidence on an interior boundary belongs to the higher
/// bin; conf = 1 belongs to the top bin; empty bins contribute 0.
double ece(const EvaluationSet& set, int m_bins);

/// ECE through the per-bin indicator sums (1/N * sum_m |sum_in_bin
/// (correct - conf)|); agrees with ece() to ~1e-12.
double ece_indicator_form(const EvaluationSet& set, int m_bins);

/// Mean squared gap between confidence and correctness indicator.
double brier(const EvaluationSet& set);

double mean_conf(const EvaluationSet& set);

/// Mean confidence over incorrect predictions; empty when none.
std::optional<double> mean_conf_wrong(const EvaluationSet& set);

/// Jensen bound (1 - acc)/(1 - E[conf | wrong]) <= CSR.
/// Empty when there are no errors.
std::optional<double> jensen_lower_bound(const EvaluationSet& set);

/// Builds a profile with ECE < 1/n and CSR > lambda simultaneously:
/// an exactly calibrated bulk (a 50/50 block at conf 0.5 plus a correct
/// block at conf 1-eps) and one incorrect sample at conf 1-delta with
/// delta chosen from (n, lambda, m_bins). Throws ClippingConflict when the
/// configured epsilon cannot accommodate the requested lambda; the message
/// reports the maximum achievable lambda.
EvaluationSet adversarial_profile(int n, double lambda, int m_bins,
                                  double epsilon = 1e-8);

/// Assembles every RiskReport field. Degenerate cases (no errors, perfect
/// accuracy) surface as empty optionals, never as errors.
RiskReport risk_report(const EvaluationSet& set, int m_bins);

} // namespace calrisk
