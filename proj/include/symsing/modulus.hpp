#pragma once

#include <cstdint>

namespace symsing {

/// Base of the logarithm used in level-set thresholds and modulus selection.
enum class LogBase { natural, binary };

double log_in(double x, LogBase base);

bool is_prime(std::uint64_t x);

/// An odd prime q >= 3. Construction validates primality by trial division.
class Modulus {
public:
    explicit Modulus(std::uint32_t q);

    [[nodiscard]] std::uint32_t value() const noexcept { return q_; }

    [[nodiscard]] std::uint32_t add(std::uint32_t x, std::uint32_t y) const noexcept {
        std::uint32_t s = x + y;
        return s >= q_ ? s - q_ : s;
    }
    [[nodiscard]] std::uint32_t sub(std::uint32_t x, std::uint32_t y) const noexcept {
        return x >= y ? x - y : x + q_ - y;
    }
    [[nodiscard]] std::uint32_t neg(std::uint32_t x) const noexcept { return x == 0 ? 0 : q_ - x; }
    [[nodiscard]] std::uint32_t mul(std::uint32_t x, std::uint32_t y) const noexcept {
        return static_cast<std::uint32_t>(static_cast<std::uint64_t>(x) * y % q_);
    }
    [[nodiscard]] std::uint32_t pow(std::uint32_t base, std::uint64_t exp) const noexcept;
    /// Multiplicative inverse of a nonzero residue (Fermat).
    [[nodiscard]] std::uint32_t inverse(std::uint32_t x) const;
    /// Reduce an arbitrary signed integer into [0, q).
    [[nodiscard]] std::uint32_t reduce(std::int64_t x) const noexcept;

    friend bool operator==(const Modulus&, const Modulus&) = default;

private:
    std::uint32_t q_;
};

/// Smallest odd prime >= max(3, round(sqrt(n) / log^C n)).
///
/// When log^C n vanishes (n = 1 with C > 0) the target is undefined and the
/// floor of 3 is returned.
Modulus next_valid_modulus(std::uint64_t n, double C, LogBase base = LogBase::natural);

}  // namespace symsing
