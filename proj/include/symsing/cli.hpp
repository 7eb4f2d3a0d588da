#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "symsing/modulus.hpp"
#include "symsing/report.hpp"

namespace symsing {

enum class Subcommand { exact_p, mc_p, ek, markov, verify_lemma, verify_props, error_bound };
enum class OutputFormat { csv, json };
enum class EkMode { automatic, exact, mc };

std::string to_string(Subcommand sub);

/// Process exit codes.
enum ExitCode : int { kExitOk = 0, kExitViolation = 1, kExitUsage = 2 };

struct ExperimentConfig {
    Subcommand subcommand = Subcommand::mc_p;
    std::vector<std::uint64_t> n;  // several values only for error-bound
    std::optional<std::uint32_t> q;
    double C = 2.0;
    std::optional<double> tau;
    std::uint64_t samples = 10'000;
    std::uint64_t trials = 1'000;
    std::uint64_t seed = 0xFE12;
    OutputFormat format = OutputFormat::csv;
    unsigned threads = 1;
    EkMode ek_mode = EkMode::automatic;
    LogBase log_base = LogBase::natural;
    bool nonzero = false;     // verify-props: entries of a and l uniform in [1, q)
    bool exhaustive = false;  // verify-lemma: sweep every admissible (a, v)
    std::optional<std::string> out;
};

/// Seed used when --seed is absent: SYMSING_SEED if set, else 0xFE12.
std::uint64_t default_seed();

/// Runs the configured experiment. Guard and usage problems throw.
Report run_experiment(const ExperimentConfig& config);

/// Report text in the configured format.
std::string render(const Report& report, OutputFormat format);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace symsing
