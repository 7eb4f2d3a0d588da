#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "symsing/residue_vector.hpp"
#include "symsing/rng.hpp"
#include "symsing/sign_matrix.hpp"

namespace symsing {

/// Largest free-bit count admitted by exhaustive enumeration (~10^9 matrices).
inline constexpr std::size_t kMaxEnumerationBits = 30;

/// Throws GuardError unless all sign matrices of size n can be enumerated.
void check_enumeration_guard(std::size_t n);

/// A contiguous block of packed integers [first, last) of size-n sign matrices,
/// visited in increasing packed order.
class SymmetricEnumeration {
public:
    class iterator {
    public:
        using value_type = SignMatrix;
        using difference_type = std::ptrdiff_t;

        iterator() = default;
        iterator(std::size_t n, std::uint64_t packed) : n_(n), packed_(packed) {}

        SignMatrix operator*() const { return SignMatrix::from_packed(n_, packed_); }
        iterator& operator++() {
            ++packed_;
            return *this;
        }
        iterator operator++(int) {
            auto copy = *this;
            ++packed_;
            return copy;
        }
        friend bool operator==(const iterator& a, const iterator& b) { return a.packed_ == b.packed_; }

    private:
        std::size_t n_ = 1;
        std::uint64_t packed_ = 0;
    };

    /// Every size-n matrix; throws GuardError past the enumeration guard.
    explicit SymmetricEnumeration(std::size_t n);

    [[nodiscard]] std::size_t dim() const noexcept { return n_; }
    [[nodiscard]] std::uint64_t first() const noexcept { return first_; }
    [[nodiscard]] std::uint64_t last() const noexcept { return last_; }
    [[nodiscard]] std::uint64_t size() const noexcept { return last_ - first_; }
    [[nodiscard]] iterator begin() const { return {n_, first_}; }
    [[nodiscard]] iterator end() const { return {n_, last_}; }

    /// The 2^prefix_bits sub-ranges sharing a fixed value of the leading
    /// (highest) packed bits, in prefix order. Only valid on a full enumeration.
    [[nodiscard]] std::vector<SymmetricEnumeration> partition_by_prefix(std::size_t prefix_bits) const;

private:
    SymmetricEnumeration(std::size_t n, std::uint64_t first, std::uint64_t last)
        : n_(n), first_(first), last_(last) {}

    std::size_t n_;
    std::uint64_t first_;
    std::uint64_t last_;
};

inline SymmetricEnumeration enumerate_symmetric(std::size_t n) { return SymmetricEnumeration(n); }

/// Uniform sign matrix whose n(n+1)/2 free bits come from rng's Philox blocks.
SignMatrix sample_symmetric(std::size_t n, const RngStream& rng);

/// M.a mod q, with +1 acting as 1 and -1 as q-1.
ResidueVector mat_vec_mod_q(const SignMatrix& M, const ResidueVector& a);

enum class EstimateMethod { enumeration, fourier, monte_carlo };
std::string_view to_string(EstimateMethod method);

/// An exact fraction numerator / denominator with 64-bit parts.
struct ExactFraction {
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 1;

    [[nodiscard]] double value() const noexcept {
        return static_cast<double>(numerator) / static_cast<double>(denominator);
    }
    friend bool operator==(const ExactFraction&, const ExactFraction&) = default;
};

/// Same-value comparison of fractions (cross multiplication).
bool equivalent(const ExactFraction& x, const ExactFraction& y);

struct ProbabilityEstimate {
    double value = 0.0;
    EstimateMethod method = EstimateMethod::enumeration;
    std::uint64_t samples = 0;
    double standard_error = 0.0;
    /// Present for enumeration results.
    std::optional<ExactFraction> exact;
};

/// |{M : M.a = v mod q}| / 2^(n(n+1)/2) by full enumeration.
ProbabilityEstimate exact_event_probability(const ResidueVector& a, const ResidueVector& v, unsigned threads = 1);

}  // namespace symsing
