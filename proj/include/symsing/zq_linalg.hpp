#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "symsing/modulus.hpp"
#include "symsing/residue_vector.hpp"
#include "symsing/sign_matrix.hpp"

namespace symsing {

/// Dense rows x cols matrix over Z_q, row-major.
class ZqMatrix {
public:
    ZqMatrix(Modulus q, std::size_t rows, std::size_t cols);
    static ZqMatrix from_sign_matrix(const SignMatrix& M, Modulus q);

    [[nodiscard]] const Modulus& modulus() const noexcept { return q_; }
    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::uint32_t& at(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    [[nodiscard]] std::uint32_t at(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
    void swap_rows(std::size_t r1, std::size_t r2) noexcept;

    /// In-place reduced row echelon form; returns the pivot column of each
    /// nonzero row. Pivot: first nonzero entry scanning columns left to right.
    std::vector<std::size_t> reduce_to_rref();

private:
    Modulus q_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::uint32_t> data_;
};

/// Rank over Z_q. The kernel has q^nullity elements; only the exponent is kept.
struct RankResult {
    std::size_t rank = 0;
    std::size_t nullity = 0;

    [[nodiscard]] std::size_t kernel_size_exponent() const noexcept { return nullity; }
    /// q^nullity, or nullopt when nullity * log2(q) > 62.
    [[nodiscard]] std::optional<std::uint64_t> kernel_size(const Modulus& q) const;
};

RankResult rank_mod_q(const SignMatrix& M, const Modulus& q);
RankResult rank_mod_q(ZqMatrix A);

/// Largest log2 of the kernel size that kernel_vectors will enumerate.
inline constexpr double kMaxKernelLog2 = 20.0;

/// Calls visit(x) once for every x with M.x = 0 mod q, the zero vector included.
/// Throws GuardError when nullity * log2(q) > 20.
void for_each_kernel_vector(const SignMatrix& M, const Modulus& q,
                            const std::function<void(const ResidueVector&)>& visit);
std::vector<ResidueVector> kernel_vectors(const SignMatrix& M, const Modulus& q);

/// Largest dimension accepted by det_integer.
inline constexpr std::size_t kMaxDeterminantDim = 12;

struct DetResult {
    std::int64_t value = 0;
};

/// Exact determinant over the integers by fraction-free (Bareiss) elimination.
DetResult det_integer(const SignMatrix& M);

struct RationalField {};
using SingularityMode = std::variant<RationalField, Modulus>;

/// Rational mode: det = 0. Mod-q mode: nullity >= 1.
bool is_singular(const SignMatrix& M, const SingularityMode& mode);

}  // namespace symsing
