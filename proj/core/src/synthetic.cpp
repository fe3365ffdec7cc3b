#include "calrisk/synthetic.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <future>
#include <ostream>
#include <thread>

#include "calrisk/rng.hpp"

namespace calrisk {

namespace {

// Stream tags: the same child seed feeds both ops without overlap.
constexpr std::uint64_t kConfStreamTag = 0x53414D50;  // confidence sampling
constexpr std::uint64_t kLabelStreamTag = 0x4C41424C; // label generation

constexpr std::array<DistributionId, 10> kDistributions = {
    DistributionId::Uniform, DistributionId::SkewHigh, DistributionId::SkewLow,
    DistributionId::Bimodal, DistributionId::TightHi, DistributionId::TightLo,
    DistributionId::NormalTrunc, DistributionId::LogUniformLow,
    DistributionId::LogUniformHigh, DistributionId::Bell,
};

constexpr std::array<CalibrationModeId, 8> kModes = {
    CalibrationModeId::RandomHalf, CalibrationModeId::Perfect,
    CalibrationModeId::UnderconfAffine, CalibrationModeId::UnderconfSqrt,
    CalibrationModeId::RandomOver, CalibrationModeId::OverconfSqrtComplement,
    CalibrationModeId::OverconfHalf, CalibrationModeId::RandomUnder,
};

double sample_one(DistributionId id, SplitMix64& rng) {
    switch (id) {
        case DistributionId::Uniform:
            return rng.next_double();
        case DistributionId::SkewHigh:
            return rng.beta(3.0, 0.5);
        case DistributionId::SkewLow:
            return rng.beta(0.5, 3.0);
        case DistributionId::Bimodal:
            return rng.bernoulli(0.5) ? rng.beta(0.5, 3.0) : rng.beta(3.0, 0.5);
        case DistributionId::TightHi:
            return rng.uniform(0.8, 1.0);
        case DistributionId::TightLo:
            return rng.uniform(0.0, 0.2);
        case DistributionId::NormalTrunc: {
            for (;;) {
                const double z = 0.7 + 0.1 * rng.normal();
                if (z >= 0.0 && z < 1.0) return z;
            }
        }
        case DistributionId::LogUniformLow: {
            static const double lo = std::log(1e-4);
            static const double hi = std::log(1.0 - 1e-6);
            return std::exp(rng.uniform(lo, hi));
        }
        case DistributionId::LogUniformHigh: {
            static const double lo = std::log(1e-6);
            static const double hi = std::log(0.9);
            return 1.0 - std::exp(rng.uniform(lo, hi));
        }
        case DistributionId::Bell:
            return rng.beta(5.0, 5.0);
    }
    throw Error(ErrorCode::UnknownDistribution, "unhandled distribution id");
}

double p_correct(CalibrationModeId mode, double c, SplitMix64& rng) {
    switch (mode) {
        case CalibrationModeId::RandomHalf: return 0.5;
        case CalibrationModeId::Perfect: return c;
        case CalibrationModeId::UnderconfAffine: return 0.2 + 0.8 * c;
        case CalibrationModeId::UnderconfSqrt: return std::sqrt(c);
        case CalibrationModeId::RandomOver: return rng.uniform(c, 1.0);
        case CalibrationModeId::OverconfSqrtComplement: return 1.0 - std::sqrt(1.0 - c);
        case CalibrationModeId::OverconfHalf: return 0.5 * c;
        case CalibrationModeId::RandomUnder: return rng.uniform(0.0, c);
    }
    throw Error(ErrorCode::UnknownMode, "unhandled calibration mode id");
}

int rank_of(DistributionId id) {
    for (std::size_t i = 0; i < kDistributions.size(); ++i) {
        if (kDistributions[i] == id) return static_cast<int>(i);
    }
    return -1;
}

int rank_of(CalibrationModeId id) {
    for (std::size_t i = 0; i < kModes.size(); ++i) {
        if (kModes[i] == id) return static_cast<int>(i);
    }
    return -1;
}

} // namespace

std::span<const DistributionId> all_distributions() noexcept { return kDistributions; }
std::span<const CalibrationModeId> all_calibration_modes() noexcept { return kModes; }

std::string to_string(DistributionId id) {
    switch (id) {
        case DistributionId::Uniform: return "uniform";
        case DistributionId::SkewHigh: return "skew_high";
        case DistributionId::SkewLow: return "skew_low";
        case DistributionId::Bimodal: return "bimodal";
        case DistributionId::TightHi: return "tight_hi";
        case DistributionId::TightLo: return "tight_lo";
        case DistributionId::NormalTrunc: return "normal_trunc";
        case DistributionId::LogUniformLow: return "log_uniform_low";
        case DistributionId::LogUniformHigh: return "log_uniform_high";
        case DistributionId::Bell: return "bell";
    }
    return "unknown";
}

std::string to_string(CalibrationModeId id) {
    switch (id) {
        case CalibrationModeId::RandomHalf: return "random_half";
        case CalibrationModeId::Perfect: return "perfect";
        case CalibrationModeId::UnderconfAffine: return "underconf_affine";
        case CalibrationModeId::UnderconfSqrt: return "underconf_sqrt";
        case CalibrationModeId::RandomOver: return "random_over";
        case CalibrationModeId::OverconfSqrtComplement: return "overconf_sqrt_complement";
        case CalibrationModeId::OverconfHalf: return "overconf_half";
        case CalibrationModeId::RandomUnder: return "random_under";
    }
    return "unknown";
}

DistributionId parse_distribution(const std::string& name) {
    for (DistributionId id : kDistributions) {
        if (to_string(id) == name) return id;
    }
    throw Error(ErrorCode::UnknownDistribution, "unknown distribution id '" + name + "'");
}

CalibrationModeId parse_calibration_mode(const std::string& name) {
    for (CalibrationModeId id : kModes) {
        if (to_string(id) == name) return id;
    }
    throw Error(ErrorCode::UnknownMode, "unknown calibration mode id '" + name + "'");
}

std::vector<double> sample_confidences(DistributionId id, std::size_t n,
                                       std::uint64_t seed) {
    SplitMix64 rng = derive_stream(seed, kConfStreamTag);
    std::vector<double> confs(n);
    for (double& c : confs) c = sample_one(id, rng);
    return confs;
}

EvaluationSet generate_labels(const std::vector<double>& confs,
                              CalibrationModeId mode, std::uint64_t seed,
                              double epsilon) {
    SplitMix64 rng = derive_stream(seed, kLabelStreamTag);
    std::vector<PredictionRecord> recs;
    recs.reserve(confs.size());
    for (double c : confs) {
        PredictionRecord r;
        r.pred_label = rng.bernoulli(0.5) ? 1 : 0;
        const double p = p_correct(mode, c, rng);
        const bool correct = rng.bernoulli(p);
        r.true_label = correct ? r.pred_label : 1 - r.pred_label;
        r.conf = c;
        recs.push_back(r);
    }
    return clip_confidences(std::move(recs), 2, epsilon);
}

AggregateReport run_experiment(const ExperimentSpec& spec) {
    if (spec.n < 1 || spec.reps < 1) {
        throw Error(ErrorCode::EmptySet, "experiment needs n >= 1 and reps >= 1");
    }
    std::vector<RiskReport> reports(spec.reps);

    const auto run_rep = [&](std::size_t r) {
        const std::uint64_t child = derive_seed(spec.master_seed, r);
        const auto confs = sample_confidences(spec.distribution, spec.n, child);
        const auto set = generate_labels(confs, spec.mode, child, spec.epsilon);
        reports[r] = risk_report(set, spec.m_bins);
    };

    const std::size_t workers =
        std::min<std::size_t>(spec.reps,
                              std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1 || spec.reps == 1) {
        for (std::size_t r = 0; r < spec.reps; ++r) run_rep(r);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::future<void>> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.push_back(std::async(std::launch::async, [&] {
                for (;;) {
                    const std::size_t r = next.fetch_add(1);
                    if (r >= spec.reps) return;
                    run_rep(r);
                }
            }));
        }
        for (auto& f : pool) f.get();
    }

    // reduce in repetition order
    AggregateReport agg;
    agg.reps = spec.reps;
    double gain_sum = 0.0;
    std::size_t gain_count = 0;
    std::size_t over1 = 0, over3 = 0;
    for (const RiskReport& rep : reports) {
        agg.mean_acc += rep.acc;
        agg.mean_cwa += rep.cwa;
        agg.mean_csr += rep.csr;
        agg.mean_sigma_csr += rep.sigma_csr;
        agg.mean_p_risk += rep.p_risk;
        if (rep.gain) {
            gain_sum += *rep.gain;
            ++gain_count;
        }
        if (rep.csr > 1.0 + rep.sigma_csr) ++over1;
        if (rep.csr > 1.0 + 3.0 * rep.sigma_csr) ++over3;
    }
    const double r = static_cast<double>(spec.reps);
    agg.mean_acc /= r;
    agg.mean_cwa /= r;
    agg.mean_csr /= r;
    agg.mean_sigma_csr /= r;
    agg.mean_p_risk /= r;
    if (gain_count > 0) agg.mean_gain = gain_sum / static_cast<double>(gain_count);
    agg.frac_over_1sigma = static_cast<double>(over1) / r;
    agg.frac_over_3sigma = static_cast<double>(over3) / r;
    return agg;
}

std::vector<SummaryRow> summary_table(std::vector<SummaryRow> rows) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const SummaryRow& a, const SummaryRow& b) {
                         const int da = rank_of(a.distribution), db = rank_of(b.distribution);
                         if (da != db) return da < db;
                         const int ma = rank_of(a.mode), mb = rank_of(b.mode);
                         if (ma != mb) return ma < mb;
                         return a.n < b.n;
                     });
    return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
    out << "dist,mode,n,reps,seed,acc,cwa,gain,csr,sigma_csr,"
           "over_1sigma,over_3sigma,p_risk\n";
    char buf[512];
    for (const auto& row : rows) {
        const auto& a = row.report;
        std::snprintf(buf, sizeof(buf),
                      "%s,%s,%zu,%zu,%llu,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n",
                      to_string(row.distribution).c_str(), to_string(row.mode).c_str(),
                      row.n, a.reps, static_cast<unsigned long long>(row.seed),
                      a.mean_acc, a.mean_cwa, a.mean_gain.value_or(0.0), a.mean_csr,
                      a.mean_sigma_csr, a.frac_over_1sigma, a.frac_over_3sigma,
                      a.mean_p_risk);
        out << buf;
    }
}

void write_summary_text(std::ostream& out, const std::vector<SummaryRow>& rows) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%-18s %-24s %8s %7s %7s %8s %12s %11s %8s %8s %8s\n",
                  "dist", "mode", "n", "Acc", "cwA", "gain", "CSR", "sigma_CSR",
                  ">1sigma", ">3sigma", "P_risk");
    out << buf;
    for (const auto& row : rows) {
        const auto& a = row.report;
        std::snprintf(buf, sizeof(buf),
                      "%-18s %-24s %8zu %7.4f %7.4f %7.2f%% %12.4f %11.4f %7.2f%% %7.2f%% %7.2f%%\n",
                      to_string(row.distribution).c_str(), to_string(row.mode).c_str(),
                      row.n, a.mean_acc, a.mean_cwa, 100.0 * a.mean_gain.value_or(0.0),
                      a.mean_csr, a.mean_sigma_csr, 100.0 * a.frac_over_1sigma,
                      100.0 * a.frac_over_3sigma, 100.0 * a.mean_p_risk);
        out << buf;
    }
}

} // namespace calrisk
