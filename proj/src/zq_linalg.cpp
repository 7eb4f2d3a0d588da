#include "symsing/zq_linalg.hpp"

#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "symsing/errors.hpp"

namespace symsing {

ZqMatrix::ZqMatrix(Modulus q, std::size_t rows, std::size_t cols)
    : q_(q), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

ZqMatrix ZqMatrix::from_sign_matrix(const SignMatrix& M, Modulus q) {
    const std::size_t n = M.dim();
    ZqMatrix A(q, n, n);
    const std::uint32_t minus_one = q.value() - 1;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) A.at(i, j) = M.entry(i, j) == 1 ? 1 : minus_one;
    }
    return A;
}

void ZqMatrix::swap_rows(std::size_t r1, std::size_t r2) noexcept {
    if (r1 == r2) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap(at(r1, c), at(r2, c));
}

std::vector<std::size_t> ZqMatrix::reduce_to_rref() {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols_ && row < rows_; ++col) {
        std::size_t pivot = row;
        while (pivot < rows_ && at(pivot, col) == 0) ++pivot;
        if (pivot == rows_) continue;
        swap_rows(row, pivot);

        const std::uint32_t inv = q_.inverse(at(row, col));
        for (std::size_t c = col; c < cols_; ++c) at(row, c) = q_.mul(at(row, c), inv);

        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == row) continue;
            const std::uint32_t factor = at(r, col);
            if (factor == 0) continue;
            for (std::size_t c = col; c < cols_; ++c) {
                at(r, c) = q_.sub(at(r, c), q_.mul(factor, at(row, c)));
            }
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::optional<std::uint64_t> RankResult::kernel_size(const Modulus& q) const {
    if (static_cast<double>(nullity) * std::log2(static_cast<double>(q.value())) > 62.0) return std::nullopt;
    std::uint64_t size = 1;
    for (std::size_t k = 0; k < nullity; ++k) size *= q.value();
    return size;
}

RankResult rank_mod_q(ZqMatrix A) {
    const std::size_t rank = A.reduce_to_rref().size();
    return RankResult{rank, A.cols() - rank};
}

RankResult rank_mod_q(const SignMatrix& M, const Modulus& q) {
    // Forward elimination only; rows are small so a plain dense sweep suffices.
    const std::size_t n = M.dim();
    const std::uint32_t p = q.value();
    std::array<std::array<std::uint32_t, SignMatrix::max_dim>, SignMatrix::max_dim> a;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = M.entry(i, j) == 1 ? 1 : p - 1;
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n && rank < n; ++col) {
        std::size_t pivot = rank;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) continue;
        std::swap(a[rank], a[pivot]);
        const std::uint32_t inv = q.inverse(a[rank][col]);
        for (std::size_t r = rank + 1; r < n; ++r) {
            if (a[r][col] == 0) continue;
            const std::uint64_t minus_factor = p - q.mul(a[r][col], inv);
            for (std::size_t c = col; c < n; ++c) {
                a[r][c] = static_cast<std::uint32_t>((a[r][c] + minus_factor * a[rank][c]) % p);
            }
        }
        ++rank;
    }
    return RankResult{rank, n - rank};
}

void for_each_kernel_vector(const SignMatrix& M, const Modulus& q,
                            const std::function<void(const ResidueVector&)>& visit) {
    ZqMatrix A = ZqMatrix::from_sign_matrix(M, q);
    const auto pivots = A.reduce_to_rref();
    const std::size_t n = M.dim();
    const std::size_t nullity = n - pivots.size();
    if (static_cast<double>(nullity) * std::log2(static_cast<double>(q.value())) > kMaxKernelLog2) {
        throw GuardError("kernel too large to enumerate: q=" + std::to_string(q.value()) +
                         ", nullity=" + std::to_string(nullity));
    }

    std::vector<bool> is_pivot(n, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < n; ++c) {
        if (!is_pivot[c]) free_cols.push_back(c);
    }

    // Mixed-radix counter over the free coordinates; pivot coordinates follow from the RREF rows.
    std::vector<std::uint32_t> x(n, 0);
    while (true) {
        for (std::size_t k = 0; k < pivots.size(); ++k) {
            std::uint32_t acc = 0;
            for (auto f : free_cols) acc = q.add(acc, q.mul(A.at(k, f), x[f]));
            x[pivots[k]] = q.neg(acc);
        }
        visit(ResidueVector(q, x));

        std::size_t digit = 0;
        for (; digit < free_cols.size(); ++digit) {
            auto& xf = x[free_cols[digit]];
            if (++xf < q.value()) break;
            xf = 0;
        }
        if (digit == free_cols.size()) break;
    }
}

std::vector<ResidueVector> kernel_vectors(const SignMatrix& M, const Modulus& q) {
    std::vector<ResidueVector> out;
    for_each_kernel_vector(M, q, [&](const ResidueVector& x) { out.push_back(x); });
    return out;
}

DetResult det_integer(const SignMatrix& M) {
    const std::size_t n = M.dim();
    if (n > kMaxDeterminantDim) {
        throw GuardError("det_integer: dimension " + std::to_string(n) + " exceeds " +
                         std::to_string(kMaxDeterminantDim));
    }
    std::array<std::array<__int128, kMaxDeterminantDim>, kMaxDeterminantDim> a{};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = M.entry(i, j);
    }

    int sign = 1;
    __int128 previous = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t swap_with = k + 1;
            while (swap_with < n && a[swap_with][k] == 0) ++swap_with;
            if (swap_with == n) return DetResult{0};
            std::swap(a[k], a[swap_with]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                // Exact division: every intermediate is a minor of the input.
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / previous;
            }
        }
        previous = a[k][k];
    }
    return DetResult{static_cast<std::int64_t>(sign * a[n - 1][n - 1])};
}

bool is_singular(const SignMatrix& M, const SingularityMode& mode) {
    if (std::holds_alternative<RationalField>(mode)) return det_integer(M).value == 0;
    return rank_mod_q(M, std::get<Modulus>(mode)).nullity >= 1;
}

}  // namespace symsing
