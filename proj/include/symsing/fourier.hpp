#pragma once

#include <cstdint>
#include <limits>

#include "symsing/modulus.hpp"
#include "symsing/residue_vector.hpp"

namespace symsing {

/// Largest number of frequency vectors l in Z_q^n a character sum may visit.
inline constexpr std::uint64_t kMaxCharacterTerms = 10'000'000;

/// q^n, throwing GuardError when it exceeds kMaxCharacterTerms.
std::uint64_t character_term_count(const Modulus& q, std::size_t n);

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept;
    void add(const CompensatedSum& other) noexcept {
        add(other.sum_);
        add(other.compensation_);
    }
    [[nodiscard]] double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

struct CharacterSumResult {
    double probability = 0.0;
    double imaginary_residual = 0.0;
    std::uint64_t term_count = 0;
};

/// Pr[M.a = v] as (1/q^n) sum_l e_q(-l.v) prod_{i<j} cos(2pi(l_i a_j + l_j a_i)/q) prod_i cos(2pi l_i a_i/q).
///
/// The l-sum is cut into a fixed number of contiguous blocks of the
/// mixed-radix counter; block sums are combined in block order, so the result
/// is identical for every thread count.
CharacterSumResult prob_fourier(const ResidueVector& a, const ResidueVector& v, unsigned threads = 1);

struct ErrorTermResult {
    double value = 0.0;      // sum_{l != 0} prod_{i<j} |cos(2pi(l_i a_j + l_j a_i)/q)|
    double exp_bound = 0.0;  // sum_{l != 0} exp(-2 N(l,a) / q^2), N over unordered pairs
    /// Frequencies whose cosine product exceeded exp(-2N/q^2); zero when the decay estimate holds.
    std::uint64_t dominance_failures = 0;
};

ErrorTermResult error_term(const ResidueVector& a, unsigned threads = 1);

/// |cos(pi m / q)| <= exp(-2/q^2) for every m in [1, q-1].
bool cos_decay_check(const Modulus& q);

/// Natural logs of the two sums bounding the Error term after splitting by support size s:
///   S1 = sum_{s=1}^{n} C(n,s) q^s exp(-s tau / q^2)
///   S2 = sum_{s=ceil(tau)}^{n} C(n,s) (q-1)^s exp(-s^2 / (20 q^2))
/// where tau = n / log^2 n by default, making the S1 exponent s n / (q^2 log^2 n).
struct AnalyticBoundResult {
    double log_S1 = -std::numeric_limits<double>::infinity();
    double log_S2 = -std::numeric_limits<double>::infinity();
    double log_total = -std::numeric_limits<double>::infinity();
    std::uint64_t s2_lower = 0;
};

double log_binomial(double n, double s);
/// log(exp(x) + exp(y)) with -inf as the empty sum.
double log_add_exp(double x, double y);

AnalyticBoundResult analytic_error_bound(std::uint64_t n, const Modulus& q, double tau);

/// log of C(n, tau) q^(tau+1) 2^(-n): the structured-vector contribution to E[K],
/// with the binomial continued through the gamma function.
double log_structured_contribution(std::uint64_t n, const Modulus& q, double tau);

}  // namespace symsing
