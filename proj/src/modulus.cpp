#include "symsing/modulus.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "symsing/errors.hpp"

namespace symsing {

double log_in(double x, LogBase base) {
    return base == LogBase::natural ? std::log(x) : std::log2(x);
}

bool is_prime(std::uint64_t x) {
    if (x < 2) return false;
    if (x % 2 == 0) return x == 2;
    for (std::uint64_t d = 3; d * d <= x; d += 2) {
        if (x % d == 0) return false;
    }
    return true;
}

Modulus::Modulus(std::uint32_t q) : q_(q) {
    if (q < 3 || q % 2 == 0 || !is_prime(q)) {
        throw std::invalid_argument("modulus must be an odd prime >= 3, got " + std::to_string(q));
    }
}

std::uint32_t Modulus::pow(std::uint32_t base, std::uint64_t exp) const noexcept {
    std::uint64_t result = 1 % q_;
    std::uint64_t b = base % q_;
    while (exp > 0) {
        if (exp & 1U) result = result * b % q_;
        b = b * b % q_;
        exp >>= 1U;
    }
    return static_cast<std::uint32_t>(result);
}

std::uint32_t Modulus::inverse(std::uint32_t x) const {
    if (x % q_ == 0) throw std::domain_error("zero has no inverse mod q");
    return pow(x, q_ - 2);
}

std::uint32_t Modulus::reduce(std::int64_t x) const noexcept {
    auto r = x % static_cast<std::int64_t>(q_);
    if (r < 0) r += q_;
    return static_cast<std::uint32_t>(r);
}

Modulus next_valid_modulus(std::uint64_t n, double C, LogBase base) {
    if (n == 0) throw std::invalid_argument("next_valid_modulus: n must be >= 1");
    if (C < 0) throw std::invalid_argument("next_valid_modulus: C must be >= 0");

    const double denom = std::pow(log_in(static_cast<double>(n), base), C);
    const double target = std::sqrt(static_cast<double>(n)) / denom;

    std::uint64_t candidate = 3;
    if (std::isfinite(target) && target > 3.0) {
        candidate = static_cast<std::uint64_t>(std::llround(target));
    }
    if (candidate % 2 == 0) ++candidate;
    while (!is_prime(candidate)) candidate += 2;
    if (candidate > std::numeric_limits<std::uint32_t>::max()) {
        throw GuardError("next_valid_modulus: modulus does not fit in 32 bits");
    }
    return Modulus(static_cast<std::uint32_t>(candidate));
}

}  // namespace symsing
