#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "symsing/modulus.hpp"

namespace symsing {

/// Length-n vector over Z_q with every entry in [0, q).
class ResidueVector {
public:
    ResidueVector(Modulus q, std::vector<std::uint32_t> entries);

    static ResidueVector zero(Modulus q, std::size_t n);
    /// Reduces each signed value mod q.
    static ResidueVector reduced(Modulus q, std::span<const std::int64_t> values);

    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] const Modulus& modulus() const noexcept { return q_; }
    [[nodiscard]] std::uint32_t operator[](std::size_t i) const noexcept { return entries_[i]; }
    [[nodiscard]] std::span<const std::uint32_t> entries() const noexcept { return entries_; }
    [[nodiscard]] bool is_zero() const noexcept;
    /// Number of nonzero coordinates.
    [[nodiscard]] std::size_t support_size() const noexcept;

    /// "(1,2,0)"
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const ResidueVector&, const ResidueVector&) = default;

private:
    Modulus q_;
    std::vector<std::uint32_t> entries_;
};

ResidueVector operator+(const ResidueVector& x, const ResidueVector& y);

}  // namespace symsing
