#include <iostream>

#include <CLI11.hpp>

#include "calrisk/cli/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"calrisk - calibration risk and confidence-weighted metrics"};
    app.require_subcommand(1);

    calrisk::cli::EvalOptions eval_opt;
    auto* eval = app.add_subcommand("eval", "Score a prediction CSV");
    eval->add_option("--input", eval_opt.input, "prediction CSV path")->required();
    eval->add_option("--bins", eval_opt.bins, "ECE bin count")->default_val(15);
    eval->add_option("--epsilon", eval_opt.epsilon, "confidence clip")->default_val(1e-8);
    eval->add_option("--format", eval_opt.format, "text|json|csv")->default_val("text");
    std::string roc_out;
    auto* roc_opt = eval->add_option("--roc-out", roc_out, "directory for curve CSVs");

    calrisk::cli::SynthOptions synth_opt;
    auto* synth = app.add_subcommand("synth", "Run the synthetic harness");
    synth->add_option("--dist", synth_opt.dist, "distribution id or 'all'")->default_val("all");
    synth->add_option("--mode", synth_opt.mode, "calibration mode id or 'all'")->default_val("all");
    synth->add_option("--n", synth_opt.n, "samples per repetition")->default_val(1000);
    synth->add_option("--reps", synth_opt.reps, "repetition count")->default_val(100);
    synth->add_option("--seed", synth_opt.seed, "master seed")
        ->default_val(42)->envname("CALRISK_SEED");
    synth->add_option("--bins", synth_opt.bins, "ECE bin count")->default_val(15);
    synth->add_option("--format", synth_opt.format, "csv|text")->default_val("text");

    calrisk::cli::AdversarialOptions adv_opt;
    auto* adv = app.add_subcommand("adversarial",
                                   "Emit a low-ECE / high-CSR prediction file");
    adv->add_option("--n", adv_opt.n, "sample count")->required();
    adv->add_option("--lambda", adv_opt.lambda, "CSR lower bound")->required();
    adv->add_option("--bins", adv_opt.bins, "ECE bin count")->default_val(15);
    adv->add_option("--out", adv_opt.out_path, "output CSV path")->required();
    adv->add_option("--seed", adv_opt.seed, "row-order shuffle seed")
        ->default_val(42)->envname("CALRISK_SEED");
    adv->add_option("--epsilon", adv_opt.epsilon, "confidence clip")->default_val(1e-8);

    calrisk::cli::CalibrateOptions cal_opt;
    auto* cal = app.add_subcommand("calibrate",
                                   "Fit a post-hoc calibrator on a split and compare");
    cal->add_option("--input", cal_opt.input, "binary prediction CSV")->required();
    cal->add_option("--method", cal_opt.method, "isotonic|platt")->required();
    cal->add_option("--split", cal_opt.split, "fit fraction")->default_val(0.5);
    cal->add_option("--seed", cal_opt.seed, "shuffle seed")
        ->default_val(42)->envname("CALRISK_SEED");
    cal->add_option("--out", cal_opt.out_path, "calibrated CSV path")->required();
    cal->add_option("--bins", cal_opt.bins, "ECE bin count")->default_val(15);
    cal->add_option("--epsilon", cal_opt.epsilon, "confidence clip")->default_val(1e-8);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (eval->parsed()) {
        if (*roc_opt) eval_opt.roc_out = roc_out;
        return calrisk::cli::cmd_eval(eval_opt, std::cout, std::cerr);
    }
    if (synth->parsed()) return calrisk::cli::cmd_synth(synth_opt, std::cout, std::cerr);
    if (adv->parsed()) return calrisk::cli::cmd_adversarial(adv_opt, std::cout, std::cerr);
    if (cal->parsed()) return calrisk::cli::cmd_calibrate(cal_opt, std::cout, std::cerr);
    return 2;
}
