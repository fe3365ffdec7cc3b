#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace calrisk::cli {

struct EvalOptions {
    std::string input;
    int bins = 15;
    double epsilon = 1e-8;
    std::string format = "text"; ///< text | json | csv
    std::optional<std::string> roc_out; ///< directory for per-class curve CSVs
};

struct SynthOptions {
    std::string dist = "all";
    std::string mode = "all";
    std::size_t n = 1000;
    std::size_t reps = 100;
    std::uint64_t seed = 42;
    int bins = 15;
    std::string format = "text"; ///< text | csv
};

struct AdversarialOptions {
    int n = 100;
    double lambda = 1000.0;
    int bins = 15;
    std::string out_path;
    std::uint64_t seed = 42;
    double epsilon = 1e-8;
};

struct CalibrateOptions {
    std::string input;
    std::string method; ///< isotonic | platt
    double split = 0.5;
    std::uint64_t seed = 42;
    std::string out_path;
    int bins = 15;
    double epsilon = 1e-8;
};

// Each command prints its result to `out`, diagnostics to `err`, and
// returns the process exit code: 0 success, 1 data error, 2 usage error.
int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err);
int cmd_synth(const SynthOptions& opt, std::ostream& out, std::ostream& err);
int cmd_adversarial(const AdversarialOptions& opt, std::ostream& out, std::ostream& err);
int cmd_calibrate(const CalibrateOptions& opt, std::ostream& out, std::ostream& err);

} // namespace calrisk::cli
