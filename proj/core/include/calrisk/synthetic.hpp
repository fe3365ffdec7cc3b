#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "calrisk/metrics.hpp"
#include "calrisk/record.hpp"

namespace calrisk {

/// Confidence score generators. Sampled values always lie in [0, 1).
enum class DistributionId {
    Uniform,        ///< U(0, 1)
    SkewHigh,       ///< Beta(3, 0.5)
    SkewLow,        ///< Beta(0.5, 3)
    Bimodal,        ///< even mixture of Beta(0.5, 3) and Beta(3, 0.5)
    TightHi,        ///< U(0.8, 1.0)
    TightLo,        ///< U(0.0, 0.2)
    NormalTrunc,    ///< N(0.7, 0.1^2) restricted to [0, 1) by rejection
    LogUniformLow,  ///< exp(U(log 1e-4, log(1 - 1e-6)))
    LogUniformHigh, ///< 1 - exp(U(log 1e-6, log 0.9))
    Bell,           ///< Beta(5, 5)
};

/// Maps a confidence c to the probability the prediction is correct.
/// The two Random* modes draw a fresh uniform per sample.
enum class CalibrationModeId {
    RandomHalf,           ///< 0.5, labels carry no signal
    Perfect,              ///< c
    UnderconfAffine,      ///< 0.2 + 0.8c
    UnderconfSqrt,        ///< sqrt(c)
    RandomOver,           ///< U(c, 1)
    OverconfSqrtComplement, ///< 1 - sqrt(1 - c)
    OverconfHalf,         ///< 0.5c
    RandomUnder,          ///< U(0, c)
};

std::span<const DistributionId> all_distributions() noexcept;
std::span<const CalibrationModeId> all_calibration_modes() noexcept;

std::string to_string(DistributionId id);
std::string to_string(CalibrationModeId id);
DistributionId parse_distribution(const std::string& name);
CalibrationModeId parse_calibration_mode(const std::string& name);

struct ExperimentSpec {
    DistributionId distribution = DistributionId::Uniform;
    CalibrationModeId mode = CalibrationModeId::Perfect;
    std::size_t n = 1000;
    std::size_t reps = 100;
    std::uint64_t master_seed = 42;
    int m_bins = 15;
    double epsilon = 1e-8;
};

/// Means over repetitions plus the fraction of repetitions in which CSR
/// exceeded 1 by more than one / three of its own standard deviations.
struct AggregateReport {
    std::size_t reps = 0;
    double mean_acc = 0.0;
    double mean_cwa = 0.0;
    std::optional<double> mean_gain; ///< over reps where gain is defined
    double mean_csr = 0.0;
    double mean_sigma_csr = 0.0;
    double mean_p_risk = 0.0;
    double frac_over_1sigma = 0.0;
    double frac_over_3sigma = 0.0;
};

/// n i.i.d. draws from the named distribution; deterministic given seed.
std::vector<double> sample_confidences(DistributionId id, std::size_t n,
                                       std::uint64_t seed);

/// Binary labelling: per sample, a predicted class is drawn uniformly from
/// {0, 1}, correctness from Bernoulli(p_correct(c)), and the true label set
/// accordingly. Confidences are clipped to [epsilon, 1-epsilon] on the way
/// into the returned set. Deterministic given seed.
EvaluationSet generate_labels(const std::vector<double>& confs,
                              CalibrationModeId mode, std::uint64_t seed,
                              double epsilon = 1e-8);

/// Runs spec.reps independent repetitions (child seeds derived from
/// (master_seed, rep)), computes a RiskReport per repetition and aggregates
/// in repetition order. Repetitions may run on multiple threads; the result
/// does not depend on scheduling.
AggregateReport run_experiment(const ExperimentSpec& spec);

/// One emitted table row.
struct SummaryRow {
    DistributionId distribution;
    CalibrationModeId mode;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    AggregateReport report;
};

/// Deterministic row order: distribution id, then mode id, then n.
std::vector<SummaryRow> summary_table(std::vector<SummaryRow> rows);

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_summary_text(std::ostream& out, const std::vector<SummaryRow>& rows);

} // namespace calrisk
