#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "symsing/fourier.hpp"
#include "symsing/matrix_core.hpp"
#include "symsing/modulus.hpp"
#include "symsing/residue_vector.hpp"
#include "symsing/structure.hpp"

namespace symsing {

inline constexpr std::uint64_t kDefaultSeed = 0xFE12;
/// Largest n accepted by the exact (enumerating) drivers.
inline constexpr std::size_t kMaxExactDim = 7;
/// Attempts allowed when rejection-sampling a vector outside the structured family.
inline constexpr std::uint64_t kMaxRejectionAttempts = 10'000;

struct ExactSingularity {
    std::size_t n = 0;
    std::uint32_t q = 0;
    ExactFraction p_rational;
    ExactFraction p_mod_q;
    /// Matrices singular over the rationals but not mod q; always zero.
    std::uint64_t chain_exceptions = 0;
};

/// Enumerates every size-n sign matrix (n <= 7) and counts rational and mod-q singularity.
ExactSingularity run_exact_p(std::size_t n, const Modulus& q, unsigned threads = 1);

struct KernelStats {
    std::size_t n = 0;
    std::uint32_t q = 0;
    bool exact = false;
    std::map<std::size_t, std::uint64_t> nullity_histogram;
    std::uint64_t samples = 0;  // 2^(n(n+1)/2) in exact mode
    double E_K = 0.0;
    std::optional<ExactFraction> E_K_exact;
    /// Vector-wise routes to E[K] in exact mode (nullopt when a guard excluded them).
    std::optional<ExactFraction> E_K_kernel_route;  // sum over M of |kernel_vectors(M)|
    std::optional<ExactFraction> E_K_vector_route;  // sum over a of |{M : M.a = 0}|
    double E_K_stderr = 0.0;
    double p_prime_hat = 0.0;  // Pr[nullity >= 1] = Pr[K >= q]
    double p_stderr = 0.0;      // plug-in binomial standard error of p_prime_hat
    double markov_bound = 0.0;  // E_K / q

    /// The vector-wise routes that were computed agree with E_K_exact.
    [[nodiscard]] bool double_counting_holds() const;
    /// p_prime_hat <= markov_bound + 3 stderr.
    [[nodiscard]] bool markov_consistent() const { return p_prime_hat <= markov_bound + 3.0 * p_stderr; }
};

/// Monte-Carlo nullity statistics over sample indices [0, samples) of `seed`.
KernelStats run_mc_p(std::size_t n, const Modulus& q, std::uint64_t samples, std::uint64_t seed, unsigned threads = 1);

enum class KernelMode { exact, monte_carlo };

/// E[K] = E[q^nullity]. Exact mode enumerates and cross-checks the vector-wise sums;
/// throws OverflowError if an exact sum would not fit in 64 bits.
KernelStats run_expected_kernel(std::size_t n, const Modulus& q, KernelMode mode, std::uint64_t samples,
                                std::uint64_t seed, unsigned threads = 1);

/// sum_a |{M : M.a = 0}| as a fraction of 2^(n(n+1)/2); needs q^n 2^(n(n+1)/2) <= 2^32.
std::optional<ExactFraction> expected_kernel_vectorwise(std::size_t n, const Modulus& q, unsigned threads = 1);

struct MarkovReport {
    Modulus q;
    KernelStats stats;
    bool consistent = true;
};

/// Picks q = next_valid_modulus(n, C) unless `explicit_q` is given, then estimates E[K] and Pr[K >= q].
MarkovReport run_markov_report(std::size_t n, double C, std::optional<Modulus> explicit_q, std::uint64_t samples,
                               std::uint64_t seed, unsigned threads = 1, LogBase base = LogBase::natural);

/// Draws a uniform vector outside the structured family (m(a) < n - tau).
/// Throws SamplingError after kMaxRejectionAttempts.
ResidueVector sample_unstructured(CounterRng& rng, const Modulus& q, std::size_t n, double tau);

struct LemmaCase {
    ResidueVector a;
    ResidueVector v;
    ExactFraction pr_exact;
    double pr_fourier = 0.0;
    double imaginary_residual = 0.0;
    double error = 0.0;
    bool equality_ok = true;
    bool bound_ok = true;
};

struct LemmaReport {
    std::size_t n = 0;
    std::uint32_t q = 0;
    double tau = 0.0;
    std::uint64_t cases = 0;
    std::uint64_t equality_ok = 0;
    std::uint64_t bound_ok = 0;
    double max_abs_diff = 0.0;
    double max_rel_deviation = 0.0;  // max |Pr - q^-n| / q^-n
    double max_error = 0.0;
    double max_imaginary_residual = 0.0;
    std::vector<LemmaCase> violations;
};

inline constexpr double kFourierTolerance = 1e-9;

/// Compares enumeration and Fourier probabilities and the deviation bound
/// |Pr - q^-n| <= q^-n Error. With `exhaustive` every (a, v) with a outside the
/// structured family is tested; otherwise `trials` random draws.
LemmaReport run_verify_lemma(std::size_t n, const Modulus& q, std::uint64_t trials, double tau, std::uint64_t seed,
                             bool exhaustive = false, unsigned threads = 1);

struct PropsViolation {
    std::string kind;
    ResidueVector a;
    ResidueVector l;
    std::uint64_t N = 0;
    double bound = 0.0;
    SupportRegime regime = SupportRegime::small_support;
};

struct PropsReport {
    std::size_t n = 0;
    std::uint32_t q = 0;
    double tau = 0.0;
    bool nonzero = false;
    std::uint64_t trials = 0;
    std::uint64_t hypotheses_met = 0;
    std::uint64_t small_support = 0;
    std::uint64_t large_support = 0;
    std::uint64_t claims_asserted = 0;
    std::uint64_t claims_met = 0;
    /// Trials where the s^2/20 claim was below the measured count but not asserted (s < 40).
    std::uint64_t quadratic_shortfalls = 0;
    std::uint64_t inner_applicable = 0;
    std::uint64_t inner_holds = 0;
    std::uint64_t triangle_free = 0;
    std::uint64_t mantel_holds = 0;
    std::vector<PropsViolation> violations;
};

/// Random campaign over (a, l). In `nonzero` mode both vectors have entries
/// uniform in [1, q); otherwise a is uniform on Z_q^n and l has a uniform
/// support size with nonzero values on a random support.
PropsReport run_verify_props(std::size_t n, const Modulus& q, std::uint64_t trials, double tau, std::uint64_t seed,
                             bool nonzero = false, unsigned threads = 1);

struct ErrorBoundRow {
    std::uint64_t n = 0;
    std::uint32_t q = 0;
    double tau = 0.0;
    AnalyticBoundResult bound;
    double log_structured = 0.0;
    bool decreasing = true;  // log_total below the previous row's
};

struct ErrorBoundTable {
    std::vector<ErrorBoundRow> rows;
    [[nodiscard]] bool strictly_decreasing() const;
};

/// One row per n; q = next_valid_modulus(n, C) unless explicit, tau = n / log^2 n unless overridden.
ErrorBoundTable run_error_bound_table(const std::vector<std::uint64_t>& n_grid, double C,
                                      std::optional<Modulus> explicit_q = std::nullopt,
                                      std::optional<double> tau_override = std::nullopt,
                                      LogBase base = LogBase::natural);

}  // namespace symsing
