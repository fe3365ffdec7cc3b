#include "calrisk/cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "calrisk/calibrators.hpp"
#include "calrisk/io.hpp"
#include "calrisk/metrics.hpp"
#include "calrisk/ranking.hpp"
#include "calrisk/rng.hpp"
#include "calrisk/synthetic.hpp"

namespace calrisk::cli {

namespace {

void emit_error(std::ostream& err, const Error& e) {
    nlohmann::json j{{"error", {{"kind", to_string(e.code())}, {"message", e.what()}}}};
    err << j.dump() << "\n";
}

int exit_code_for(const Error& e) {
    switch (e.code()) {
        case ErrorCode::UnknownDistribution:
        case ErrorCode::UnknownMode:
            return 2;
        default:
            return 1;
    }
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        emit_error(err, e);
        return exit_code_for(e);
    }
}

std::string fmt(double v, const char* spec = "%.6f") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

std::string fmt_opt(const std::optional<double>& v, const char* spec = "%.6f") {
    return v ? fmt(*v, spec) : std::string("undefined");
}

void print_risk_text(std::ostream& out, const RiskReport& r) {
    out << "n          " << r.n << "\n"
        << "Acc        " << fmt(r.acc) << "\n"
        << "cwA        " << fmt(r.cwa) << "\n"
        << "gain       " << (r.gain ? fmt(100.0 * *r.gain, "%.2f") + "%" : "undefined") << "\n"
        << "CSR        " << fmt(r.csr, "%.6g") << "\n"
        << "sigma_CSR  " << fmt(r.sigma_csr, "%.6g") << "\n"
        << "z          " << fmt(r.z, "%.6g") << "\n"
        << "P_risk     " << fmt(100.0 * r.p_risk, "%.2f") << "%\n"
        << "ECE        " << fmt(r.ece) << "\n"
        << "Brier      " << fmt(r.brier) << "\n"
        << "mean_conf  " << fmt(r.mean_conf) << "\n"
        << "E[conf|wrong]  " << fmt_opt(r.mean_conf_wrong) << "\n"
        << "Jensen bound   " << fmt_opt(r.jensen_lower_bound, "%.6g") << "\n";
}

void print_report_text(std::ostream& out, const ReportDocument& doc) {
    out << "== risk ==\n";
    print_risk_text(out, doc.risk);

    out << "\n== confidence-weighted per class ==\n";
    out << "class  cwPrecision  cwRecall  cwSpecificity  cwF1      cwMCC     cwAcc\n";
    for (const auto& entry : doc.cw_per_class) {
        const auto& m = entry.metrics;
        char buf[256];
        std::snprintf(buf, sizeof(buf), "%-6d %-12s %-9s %-14s %-9s %-9s %.6f\n",
                      m.class_id, fmt_opt(m.cw_precision).c_str(),
                      fmt_opt(m.cw_recall).c_str(), fmt_opt(m.cw_specificity).c_str(),
                      fmt_opt(m.cw_f1).c_str(), fmt_opt(m.cw_mcc).c_str(), m.cw_acc);
        out << buf;
    }

    out << "\n== AUC per class ==\n";
    out << "class  AUC       cwAUC     delta      cov_form\n";
    for (std::size_t k = 0; k < doc.auc_per_class.size(); ++k) {
        if (doc.auc_per_class[k]) {
            const auto& g = *doc.auc_per_class[k];
            char buf[256];
            std::snprintf(buf, sizeof(buf), "%-6d %.6f  %.6f  %+.6f  %+.6f\n",
                          g.class_id, g.auc, g.cw_auc, g.delta, g.cov_form);
            out << buf;
        } else {
            out << k << "      degenerate (single-outcome class)\n";
        }
    }
    try {
        const MacroAuc macro = macro_average(doc.auc_per_class);
        out << "macro  " << fmt(macro.auc) << "  " << fmt(macro.cw_auc) << "\n";
    } catch (const Error&) {
        out << "macro  undefined (all classes degenerate)\n";
    }
}

void print_report_csv(std::ostream& out, const ReportDocument& doc) {
    const auto row = [&](const std::string& metric, const std::string& cls,
                         const std::string& value) {
        out << metric << ',' << cls << ',' << value << "\n";
    };
    const auto num = [](double v) { return fmt(v, "%.17g"); };
    out << "metric,class,value\n";
    const RiskReport& r = doc.risk;
    row("n", "", std::to_string(r.n));
    row("acc", "", num(r.acc));
    row("cwa", "", num(r.cwa));
    row("gain", "", r.gain ? num(*r.gain) : "");
    row("csr", "", num(r.csr));
    row("sigma_csr", "", num(r.sigma_csr));
    row("z", "", num(r.z));
    row("p_risk", "", num(r.p_risk));
    row("ece", "", num(r.ece));
    row("brier", "", num(r.brier));
    row("mean_conf", "", num(r.mean_conf));
    row("mean_conf_wrong", "", r.mean_conf_wrong ? num(*r.mean_conf_wrong) : "");
    row("jensen_lower_bound", "", r.jensen_lower_bound ? num(*r.jensen_lower_bound) : "");
    for (const auto& entry : doc.cw_per_class) {
        const std::string cls = std::to_string(entry.metrics.class_id);
        const auto& m = entry.metrics;
        row("cw_precision", cls, m.cw_precision ? num(*m.cw_precision) : "");
        row("cw_recall", cls, m.cw_recall ? num(*m.cw_recall) : "");
        row("cw_specificity", cls, m.cw_specificity ? num(*m.cw_specificity) : "");
        row("cw_f1", cls, m.cw_f1 ? num(*m.cw_f1) : "");
        row("cw_mcc", cls, m.cw_mcc ? num(*m.cw_mcc) : "");
        row("cw_acc", cls, num(m.cw_acc));
    }
    for (std::size_t k = 0; k < doc.auc_per_class.size(); ++k) {
        const std::string cls = std::to_string(k);
        if (doc.auc_per_class[k]) {
            row("auc", cls, num(doc.auc_per_class[k]->auc));
            row("cw_auc", cls, num(doc.auc_per_class[k]->cw_auc));
            row("auc_delta", cls, num(doc.auc_per_class[k]->delta));
        } else {
            row("auc", cls, "");
            row("cw_auc", cls, "");
            row("auc_delta", cls, "");
        }
    }
    try {
        const MacroAuc macro = macro_average(doc.auc_per_class);
        row("auc_macro", "", num(macro.auc));
        row("cw_auc_macro", "", num(macro.cw_auc));
    } catch (const Error&) {
        row("auc_macro", "", "");
        row("cw_auc_macro", "", "");
    }
}

} // namespace

int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (opt.format != "text" && opt.format != "json" && opt.format != "csv") {
            throw Error(ErrorCode::ParseError, "unknown format '" + opt.format + "'");
        }
        const ParsedPredictions parsed = parse_predictions(opt.input, opt.epsilon);
        for (const auto& w : parsed.warnings) err << "warning: " << w << "\n";

        ReportProvenance prov;
        prov.input = opt.input;
        prov.epsilon = opt.epsilon;
        prov.bins = opt.bins;
        const ReportDocument doc = build_report(parsed.set, opt.bins, std::move(prov));

        if (opt.roc_out) {
            std::filesystem::create_directories(*opt.roc_out);
            for (int k = 0; k < parsed.set.num_classes(); ++k) {
                if (!doc.auc_per_class[static_cast<std::size_t>(k)]) continue;
                const auto base = std::filesystem::path(*opt.roc_out);
                write_curve_csv((base / ("class_" + std::to_string(k) + "_roc.csv")).string(),
                                roc_curve(parsed.set, k));
                write_curve_csv((base / ("class_" + std::to_string(k) + "_cwroc.csv")).string(),
                                cw_roc_curve(parsed.set, k));
            }
        }

        if (opt.format == "json") {
            out << report_to_json(doc) << "\n";
        } else if (opt.format == "csv") {
            print_report_csv(out, doc);
        } else {
            print_report_text(out, doc);
        }
        return 0;
    });
}

int cmd_synth(const SynthOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (opt.format != "text" && opt.format != "csv") {
            throw Error(ErrorCode::ParseError, "unknown format '" + opt.format + "'");
        }
        std::vector<DistributionId> dists;
        if (opt.dist == "all") {
            dists.assign(all_distributions().begin(), all_distributions().end());
        } else {
            dists.push_back(parse_distribution(opt.dist));
        }
        std::vector<CalibrationModeId> modes;
        if (opt.mode == "all") {
            modes.assign(all_calibration_modes().begin(), all_calibration_modes().end());
        } else {
            modes.push_back(parse_calibration_mode(opt.mode));
        }

        std::vector<SummaryRow> rows;
        for (DistributionId d : dists) {
            for (CalibrationModeId m : modes) {
                ExperimentSpec spec;
                spec.distribution = d;
                spec.mode = m;
                spec.n = opt.n;
                spec.reps = opt.reps;
                spec.master_seed = opt.seed;
                spec.m_bins = opt.bins;
                rows.push_back({d, m, opt.n, opt.seed, run_experiment(spec)});
            }
        }
        rows = summary_table(std::move(rows));
        if (opt.format == "csv") {
            write_summary_csv(out, rows);
        } else {
            write_summary_text(out, rows);
        }
        return 0;
    });
}

int cmd_adversarial(const AdversarialOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const EvaluationSet set =
            adversarial_profile(opt.n, opt.lambda, opt.bins, opt.epsilon);

        // metric values are permutation-invariant; emit rows in seeded order
        std::vector<PredictionRecord> rows = set.records();
        SplitMix64 rng = derive_stream(opt.seed, 0);
        for (std::size_t i = rows.size(); i > 1; --i) {
            const std::size_t j = rng.next_u64() % i;
            std::swap(rows[i - 1], rows[j]);
        }
        write_predictions(opt.out_path, rows, set.num_classes());

        const double achieved_ece = ece(set, opt.bins);
        const double achieved_csr = csr(set);
        out << "wrote " << rows.size() << " predictions to " << opt.out_path << "\n";
        out << "ECE " << fmt(achieved_ece, "%.12g") << " (target < "
            << fmt(1.0 / opt.n, "%.12g") << ")\n";
        out << "CSR " << fmt(achieved_csr, "%.12g") << " (target > "
            << fmt(opt.lambda, "%.12g") << ")\n";
        return 0;
    });
}

int cmd_calibrate(const CalibrateOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (opt.method != "isotonic" && opt.method != "platt") {
            throw Error(ErrorCode::ParseError, "unknown method '" + opt.method + "'");
        }
        if (!(opt.split > 0.0 && opt.split < 1.0)) {
            throw Error(ErrorCode::DegenerateSplit, "split must lie in (0, 1)");
        }
        const ParsedPredictions parsed = parse_predictions(opt.input, opt.epsilon);
        for (const auto& w : parsed.warnings) err << "warning: " << w << "\n";
        const EvaluationSet& full = parsed.set;
        if (full.num_classes() != 2) {
            throw Error(ErrorCode::UnsupportedMulticlass,
                        "calibrate requires binary input");
        }

        // seeded shuffle, fit on the first fraction, evaluate on the rest
        std::vector<std::size_t> idx(full.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        SplitMix64 rng = derive_stream(opt.seed, 0);
        for (std::size_t i = idx.size(); i > 1; --i) {
            const std::size_t j = rng.next_u64() % i;
            std::swap(idx[i - 1], idx[j]);
        }
        const std::size_t n_fit =
            static_cast<std::size_t>(std::llround(opt.split * static_cast<double>(full.size())));
        if (n_fit < 2 || full.size() - n_fit < 1) {
            throw Error(ErrorCode::DegenerateSplit,
                        "split leaves too few samples (fit " + std::to_string(n_fit) +
                        ", eval " + std::to_string(full.size() - n_fit) + ")");
        }

        std::vector<double> fit_scores;
        std::vector<bool> fit_correct;
        fit_scores.reserve(n_fit);
        for (std::size_t i = 0; i < n_fit; ++i) {
            const auto& rec = full.record(idx[i]);
            fit_scores.push_back(rec.conf);
            fit_correct.push_back(rec.correct());
        }

        std::vector<std::size_t> eval_idx(idx.begin() + static_cast<std::ptrdiff_t>(n_fit),
                                          idx.end());
        std::sort(eval_idx.begin(), eval_idx.end()); // original file order
        std::vector<PredictionRecord> eval_rows;
        eval_rows.reserve(eval_idx.size());
        for (std::size_t i : eval_idx) eval_rows.push_back(full.record(i));
        const EvaluationSet raw_eval =
            clip_confidences(eval_rows, full.num_classes(), full.epsilon());

        EvaluationSet calibrated = [&] {
            if (opt.method == "isotonic") {
                return apply_calibrator(fit_isotonic(fit_scores, fit_correct), raw_eval);
            }
            return apply_calibrator(fit_platt(fit_scores, fit_correct), raw_eval);
        }();

        write_predictions(opt.out_path, calibrated.records(), calibrated.num_classes());

        const RiskReport raw_rep = risk_report(raw_eval, opt.bins);
        const RiskReport cal_rep = risk_report(calibrated, opt.bins);
        out << "fit " << n_fit << " / eval " << raw_eval.size() << " (method "
            << opt.method << ")\n\n";
        char buf[160];
        const auto line = [&](const char* name, double a, double b, const char* spec) {
            std::snprintf(buf, sizeof(buf), "%-11s %14s %14s\n", name,
                          fmt(a, spec).c_str(), fmt(b, spec).c_str());
            out << buf;
        };
        std::snprintf(buf, sizeof(buf), "%-11s %14s %14s\n", "", "raw", "calibrated");
        out << buf;
        line("Acc", raw_rep.acc, cal_rep.acc, "%.6f");
        line("cwA", raw_rep.cwa, cal_rep.cwa, "%.6f");
        line("gain", raw_rep.gain.value_or(0.0), cal_rep.gain.value_or(0.0), "%.6f");
        line("CSR", raw_rep.csr, cal_rep.csr, "%.6g");
        line("sigma_CSR", raw_rep.sigma_csr, cal_rep.sigma_csr, "%.6g");
        line("P_risk", raw_rep.p_risk, cal_rep.p_risk, "%.6f");
        line("ECE", raw_rep.ece, cal_rep.ece, "%.6f");
        line("Brier", raw_rep.brier, cal_rep.brier, "%.6f");

        const MacroAuc raw_auc = macro_average(all_auc_gaps(raw_eval));
        const MacroAuc cal_auc = macro_average(all_auc_gaps(calibrated));
        line("AUC", raw_auc.auc, cal_auc.auc, "%.12f");
        line("cwAUC", raw_auc.cw_auc, cal_auc.cw_auc, "%.12f");

        out << "\nwrote calibrated predictions to " << opt.out_path << "\n";
        return 0;
    });
}

} // namespace calrisk::cli
