#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace symsing {

/// Symmetric n x n matrix with entries +1/-1, stored as its n(n+1)/2 free bits.
///
/// Free bit idx(i,j) = i(2n-i+1)/2 + (j-i) for 0-based i <= j holds entry (i,j)
/// and (j,i); bit 0 means +1 and bit 1 means -1. The canonical serialization is
/// the packed integer whose most significant bit is idx 0, written in hex.
class SignMatrix {
public:
    static constexpr std::size_t max_dim = 64;

    /// Number of free bits of an n x n symmetric matrix.
    static constexpr std::size_t free_bits(std::size_t n) noexcept { return n * (n + 1) / 2; }
    static constexpr std::size_t bit_index(std::size_t n, std::size_t i, std::size_t j) noexcept {
        if (i > j) std::swap(i, j);
        return i * (2 * n - i + 1) / 2 + (j - i);
    }

    /// Matrix whose packed integer is `packed` (needs free_bits(n) <= 64).
    static SignMatrix from_packed(std::size_t n, std::uint64_t packed);
    /// Build from a bit source: bit(t) for every free-bit index t.
    static SignMatrix from_bits(std::size_t n, const std::function<bool(std::size_t)>& bit);
    /// Build from explicit rows; rejects asymmetric or non +-1 input.
    static SignMatrix from_rows(const std::vector<std::vector<int>>& rows);
    static SignMatrix from_hex(std::size_t n, std::string_view hex);
    static SignMatrix all_plus(std::size_t n);

    [[nodiscard]] std::size_t dim() const noexcept { return n_; }
    [[nodiscard]] bool bit(std::size_t t) const noexcept { return (bits_[t / 64] >> (t % 64)) & 1U; }
    [[nodiscard]] int entry(std::size_t i, std::size_t j) const noexcept {
        return ((negative_[i] >> j) & 1U) ? -1 : 1;
    }
    /// Columns of row i holding -1, as a bit mask.
    [[nodiscard]] std::uint64_t negative_mask(std::size_t row) const noexcept { return negative_[row]; }

    /// Packed integer (only when free_bits(n) <= 64).
    [[nodiscard]] std::uint64_t packed() const;
    [[nodiscard]] std::string to_hex() const;

    friend bool operator==(const SignMatrix& a, const SignMatrix& b) noexcept {
        return a.n_ == b.n_ && a.bits_ == b.bits_;
    }

private:
    static constexpr std::size_t word_count = (max_dim * (max_dim + 1) / 2 + 63) / 64;

    explicit SignMatrix(std::size_t n);
    void set_bit(std::size_t t);
    void finish();

    std::size_t n_ = 0;
    std::array<std::uint64_t, word_count> bits_{};
    std::array<std::uint64_t, max_dim> negative_{};
};

}  // namespace symsing
