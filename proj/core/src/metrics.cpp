#include "calrisk/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "calrisk/normal.hpp"

namespace calrisk {

namespace {

int bin_index(double conf, int m_bins) {
    // floor(conf * M) puts an interior boundary value in the higher bin;
    // the top bin absorbs conf = 1.
    int b = static_cast<int>(conf * m_bins);
    return std::min(b, m_bins - 1);
}

void require_bins(int m_bins) {
    if (m_bins < 1) {
        throw Error(ErrorCode::InvalidBins,
                    "bin count must be >= 1, got " + std::to_string(m_bins));
    }
}

} // namespace

double csr(const EvaluationSet& set) {
    double sum = 0.0;
    for (std::size_t i : set.ordered()) {
        const auto& rec = set.record(i);
        if (rec.correct()) continue;
        if (rec.conf >= 1.0) {
            throw Error(ErrorCode::DivisionByZeroRisk,
                        "incorrect prediction with conf >= 1 makes CSR infinite");
        }
        sum += 1.0 / (1.0 - rec.conf);
    }
    return sum / static_cast<double>(set.size());
}

double sigma_csr(const EvaluationSet& set) {
    double sum = 0.0;
    for (std::size_t i : set.ordered()) {
        const auto& rec = set.record(i);
        if (rec.conf >= 1.0) {
            throw Error(ErrorCode::DivisionByZeroRisk,
                        "conf >= 1 makes the CSR variance infinite");
        }
        sum += rec.conf / (1.0 - rec.conf);
    }
    const double n = static_cast<double>(set.size());
    return std::sqrt(sum / (n * n));
}

ZScore p_risk(double csr_value, double sigma) {
    if (!(sigma > 0.0)) {
        throw Error(ErrorCode::DegenerateSigma,
                    "sigma_csr must be positive (all-zero odds set?)");
    }
    ZScore out;
    out.z = (csr_value - 1.0) / sigma;
    out.p = normal_cdf(out.z);
    return out;
}

double cwa(const EvaluationSet& set) {
    double mass = 0.0, correct_mass = 0.0;
    for (std::size_t i : set.ordered()) {
        const auto& rec = set.record(i);
        mass += rec.conf;
        if (rec.correct()) correct_mass += rec.conf;
    }
    return correct_mass / mass;
}

double cwa_covariance_form(const EvaluationSet& set) {
    const double n = static_cast<double>(set.size());
    double sum_c = 0.0, sum_p = 0.0, sum_cp = 0.0;
    for (std::size_t i : set.ordered()) {
        const auto& rec = set.record(i);
        const double correct = rec.correct() ? 1.0 : 0.0;
        sum_c += rec.conf;
        sum_p += correct;
        sum_cp += rec.conf * correct;
    }
    const double mean_c = sum_c / n;
    const double mean_p = sum_p / n;
    const double cov = sum_cp / n - mean_c * mean_p;
    return mean_p + cov / mean_c;
}

std::optional<double> gain(double acc, double cwa_value) {
    const double lo = std::min(acc, cwa_value);
    if (lo >= 1.0) return std::nullopt;
    return (cwa_value - acc) / (1.0 - lo);
}

double ece(const EvaluationSet& set, int m_bins) {
    require_bins(m_bins);
    std::vector<std::size_t> count(m_bins, 0);
    std::vector<double> conf_sum(m_bins, 0.0);
    std::vector<double> correct_sum(m_bins, 0.0);
    for (std::size_t i : set.ordered()) {
        const auto& rec = set.record(i);
        const int b = bin_index(rec.conf, m_bins);
        ++count[b];
        conf_sum[b] += rec.conf;
        correct_sum[b] += rec.correct() ? 1.0 : 0.0;
    }
    const double n = static_cast<double>(set.size());
    double total = 0.0;
    for (int b = 0; b < m_bins; ++b) {
        if (count[b] == 0) continue;
        const double size = static_cast<double>(count[b]);
        const double acc_b = correct_sum[b] / size;
        const double conf_b = conf_sum[b] / size;
        total += (size / n) * std::abs(acc_b - conf_b);
    }
    return total;
}

double ece_indicator_form(const EvaluationSet& set, int m_bins) {
    require_bins(m_bins);
    std::vector<double> gap(m_bins, 0.0);
    for (std::size_t i : set.ordered()) {
        const auto& rec = set.record(i);
        const int b = bin_index(rec.conf, m_bins);
        gap[b] += (rec.correct() ? 1.0 : 0.0) - rec.conf;
    }
    double total = 0.0;
    for (double g : gap) total += std::abs(g);
    return total / static_cast<double>(set.size());
}

double brier(const EvaluationSet& set) {
    double sum = 0.0;
    for (std::size_t i : set.ordered()) {
        const auto& rec = set.record(i);
        const double d = rec.conf - (rec.correct() ? 1.0 : 0.0);
        sum += d * d;
    }
    return sum / static_cast<double>(set.size());
}

double mean_conf(const EvaluationSet& set) {
    double sum = 0.0;
    for (std::size_t i : set.ordered()) sum += set.record(i).conf;
    return sum / static_cast<double>(set.size());
}

std::optional<double> mean_conf_wrong(const EvaluationSet& set) {
    double sum = 0.0;
    std::size_t wrong = 0;
    for (std::size_t i : set.ordered()) {
        const auto& rec = set.record(i);
        if (!rec.correct()) {
            sum += rec.conf;
            ++wrong;
        }
    }
    if (wrong == 0) return std::nullopt;
    return sum / static_cast<double>(wrong);
}

std::optional<double> jensen_lower_bound(const EvaluationSet& set) {
    const auto wrong_mean = mean_conf_wrong(set);
    if (!wrong_mean) return std::nullopt;
    std::size_t correct = 0;
    for (const auto& rec : set.records()) {
        if (rec.correct()) ++correct;
    }
    const double acc = static_cast<double>(correct) / static_cast<double>(set.size());
    return (1.0 - acc) / (1.0 - *wrong_mean);
}

EvaluationSet adversarial_profile(int n, double lambda, int m_bins, double epsilon) {
    require_bins(m_bins);
    if (n < 2) {
        throw Error(ErrorCode::EmptySet, "adversarial profile needs n >= 2");
    }
    if (!(lambda > 0.0)) {
        throw Error(ErrorCode::InvalidConfidence, "lambda must be positive");
    }
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
        throw Error(ErrorCode::InvalidEpsilon, "epsilon must lie in (0, 0.5)");
    }

    // Exactly calibrated block at conf 0.5: even size, half correct.
    const int half_block = 2 * ((n - 1) / 4);
    const int top_correct = n - 1 - half_block;

    // One injected error at 1 - delta; delta small enough that CSR > lambda
    // and that 1 - delta stays inside the top bin. Clipping floors the
    // effective delta at epsilon.
    const double delta = 0.5 * std::min({1.0 / (static_cast<double>(n) * lambda),
                                         1.0 / static_cast<double>(n),
                                         1.0 / static_cast<double>(m_bins)});
    const double delta_eff = std::max(delta, epsilon);
    const double csr_bound =
        (half_block + 1.0 / delta_eff) / static_cast<double>(n);
    const double top_mass = top_correct * epsilon + delta_eff;
    if (csr_bound <= lambda || top_mass >= 1.0) {
        const double max_lambda =
            (half_block + 1.0 / epsilon) / static_cast<double>(n);
        throw Error(ErrorCode::ClippingConflict,
                    "lambda " + std::to_string(lambda) +
                    " is not achievable with epsilon " + std::to_string(epsilon) +
                    "; max achievable lambda is about " + std::to_string(max_lambda));
    }

    std::vector<PredictionRecord> recs;
    recs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < half_block; ++i) {
        PredictionRecord r;
        r.pred_label = i % 2;
        r.true_label = (i % 2 == 0) ? r.pred_label : 1 - r.pred_label;
        r.conf = 0.5;
        recs.push_back(r);
    }
    for (int i = 0; i < top_correct; ++i) {
        PredictionRecord r;
        r.pred_label = i % 2;
        r.true_label = r.pred_label;
        r.conf = 1.0; // clipped to 1 - epsilon below
        recs.push_back(r);
    }
    PredictionRecord bad;
    bad.pred_label = 0;
    bad.true_label = 1;
    bad.conf = 1.0 - delta;
    recs.push_back(bad);

    return clip_confidences(std::move(recs), 2, epsilon);
}

RiskReport risk_report(const EvaluationSet& set, int m_bins) {
    RiskReport rep;
    rep.n = set.size();
    std::size_t correct = 0;
    for (const auto& rec : set.records()) {
        if (rec.correct()) ++correct;
    }
    rep.acc = static_cast<double>(correct) / static_cast<double>(set.size());
    rep.cwa = cwa(set);
    rep.gain = gain(rep.acc, rep.cwa);
    rep.csr = csr(set);
    rep.sigma_csr = sigma_csr(set);
    const ZScore zs = p_risk(rep.csr, rep.sigma_csr);
    rep.z = zs.z;
    rep.p_risk = zs.z > 0.0 ? zs.p : 0.0;
    rep.ece = ece(set, m_bins);
    rep.brier = brier(set);
    rep.mean_conf = mean_conf(set);
    rep.mean_conf_wrong = mean_conf_wrong(set);
    rep.jensen_lower_bound = jensen_lower_bound(set);
    return rep;
}

} // namespace calrisk
