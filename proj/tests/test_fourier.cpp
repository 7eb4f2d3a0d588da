#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "symsing/errors.hpp"
#include "symsing/fourier.hpp"
#include "symsing/matrix_core.hpp"
#include "symsing/structure.hpp"

using namespace symsing;

namespace {

ResidueVector vec(std::uint32_t q, std::vector<std::uint32_t> entries) { return ResidueVector(Modulus(q), entries); }

ResidueVector from_index(const Modulus& q, std::size_t n, std::uint64_t index) {
    std::vector<std::uint32_t> x(n);
    for (auto& e : x) {
        e = index % q.value();
        index /= q.value();
    }
    return ResidueVector(q, x);
}

struct DirectSums {
    double S1 = 0.0;
    double S2 = 0.0;
};

// Plain floating-point summation with binomials from the multiplicative recurrence.
DirectSums direct_sums(std::uint64_t n, double q, double tau) {
    DirectSums out;
    long double binom = 1.0L;
    const double lower = std::ceil(tau);
    for (std::uint64_t s = 1; s <= n; ++s) {
        binom = binom * static_cast<long double>(n - s + 1) / static_cast<long double>(s);
        const double sd = double(s);
        out.S1 += double(binom) * std::pow(q, sd) * std::exp(-sd * tau / (q * q));
        if (sd >= lower) out.S2 += double(binom) * std::pow(q - 1.0, sd) * std::exp(-sd * sd / (20.0 * q * q));
    }
    return out;
}

}  // namespace

TEST_CASE("prob_fourier examples") {
    // (1/3)(1 + 2 cos(2 pi / 3)) = 0
    const auto zero = prob_fourier(vec(3, {1}), vec(3, {0}));
    CHECK(std::fabs(zero.probability) <= 1e-12);
    CHECK(zero.term_count == 3);

    CHECK(std::fabs(prob_fourier(vec(3, {0}), vec(3, {0})).probability - 1.0) <= 1e-12);

    const auto a = vec(3, {1, 2});
    const auto v = vec(3, {0, 0});
    CHECK(std::fabs(prob_fourier(a, v).probability - exact_event_probability(a, v).value) <= 1e-9);

    CHECK_THROWS_AS(prob_fourier(vec(3, std::vector<std::uint32_t>(15, 1)), vec(3, std::vector<std::uint32_t>(15, 0))),
                    GuardError);
    CHECK_THROWS_AS(prob_fourier(vec(3, {1, 2}), vec(5, {1, 2})), DimensionMismatch);
}

TEST_CASE("Fourier inversion is exact against enumeration") {
    SUBCASE("every (a, v) for small (n, q)") {
        for (auto [n, qv] : {std::pair{1, 3U}, {1, 5U}, {2, 3U}, {2, 5U}, {2, 7U}, {3, 3U}}) {
            const Modulus q(qv);
            const std::uint64_t count = character_term_count(q, n);
            for (std::uint64_t ai = 0; ai < count; ++ai) {
                const auto a = from_index(q, n, ai);
                for (std::uint64_t vi = 0; vi < count; ++vi) {
                    const auto v = from_index(q, n, vi);
                    const auto f = prob_fourier(a, v);
                    REQUIRE(std::fabs(f.probability - exact_event_probability(a, v).value) <= 1e-9);
                    REQUIRE(f.imaginary_residual <= 1e-9);
                }
            }
        }
    }
    SUBCASE("random (a, v) up to q^n = 10^5") {
        std::mt19937_64 gen(4);
        for (auto [n, qv] : {std::pair{3, 5U}, {3, 7U}, {4, 3U}, {4, 5U}, {5, 3U}, {5, 7U}, {6, 3U}}) {
            const Modulus q(qv);
            const std::uint64_t count = character_term_count(q, n);
            for (int trial = 0; trial < 4; ++trial) {
                const auto a = from_index(q, n, gen() % count);
                const auto v = from_index(q, n, gen() % count);
                const auto f = prob_fourier(a, v);
                CHECK(std::fabs(f.probability - exact_event_probability(a, v).value) <= 1e-9);
                CHECK(f.imaginary_residual <= 1e-9);
            }
        }
    }
}

TEST_CASE("prob_fourier is identical across thread counts") {
    const auto a = vec(7, {1, 3, 5, 0, 6, 2});
    const auto v = vec(7, {4, 0, 0, 1, 2, 3});
    const auto one = prob_fourier(a, v, 1);
    const auto many = prob_fourier(a, v, 8);
    CHECK(one.probability == many.probability);
    CHECK(one.imaginary_residual == many.imaginary_residual);
}

TEST_CASE("error_term") {
    // empty pair product for each of the two nonzero l
    CHECK(error_term(vec(3, {1})).value == doctest::Approx(2.0));
    CHECK(error_term(vec(3, {0})).value == doctest::Approx(2.0));

    SUBCASE("n=2, q=3, a=(1,1): direct 8-term evaluation") {
        double expected = 0.0;
        for (int l1 = 0; l1 < 3; ++l1) {
            for (int l2 = 0; l2 < 3; ++l2) {
                if (l1 == 0 && l2 == 0) continue;
                expected += std::fabs(std::cos(2.0 * std::numbers::pi * (l1 + l2) / 3.0));
            }
        }
        CHECK(expected == doctest::Approx(5.0));
        CHECK(error_term(vec(3, {1, 1})).value == doctest::Approx(expected).epsilon(1e-12));
    }

    SUBCASE("Error is dominated term by term and bounds the deviation from q^-n") {
        std::mt19937_64 gen(6);
        for (auto [n, qv] : {std::pair{2, 3U}, {3, 3U}, {3, 5U}, {4, 3U}, {4, 5U}, {5, 3U}}) {
            const Modulus q(qv);
            const std::uint64_t count = character_term_count(q, n);
            const double uniform = 1.0 / double(count);
            for (int trial = 0; trial < 6; ++trial) {
                const auto a = from_index(q, n, gen() % count);
                const auto e = error_term(a);
                CHECK(e.value <= e.exp_bound * (1.0 + 1e-12));
                CHECK(e.dominance_failures == 0);
                for (std::uint64_t vi = 0; vi < std::min<std::uint64_t>(count, 30); ++vi) {
                    const auto p = prob_fourier(a, from_index(q, n, vi)).probability;
                    CHECK(std::fabs(p - uniform) <= uniform * e.value + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("cos_decay_check") {
    // max |cos(pi m / 3)| = 0.5 <= exp(-2/9)
    CHECK(0.5 <= std::exp(-2.0 / 9.0));
    CHECK(cos_decay_check(Modulus(3)));
    CHECK(cos_decay_check(Modulus(101)));
    for (std::uint32_t q = 3; q <= 101; q += 2) {
        if (is_prime(q)) CHECK(cos_decay_check(Modulus(q)));
    }
}

TEST_CASE("analytic_error_bound") {
    SUBCASE("matches direct summation where it is finite") {
        for (std::uint64_t n : {20ULL, 50ULL, 120ULL, 300ULL}) {
            for (std::uint32_t qv : {3U, 5U, 7U}) {
                const Modulus q(qv);
                const double tau = default_tau(n);
                const auto r = analytic_error_bound(n, q, tau);
                const auto d = direct_sums(n, qv, tau);
                CHECK(std::fabs(std::exp(r.log_S1) - d.S1) <= 1e-9 * d.S1);
                CHECK(std::fabs(std::exp(r.log_S2) - d.S2) <= 1e-9 * d.S2);
                CHECK(std::fabs(std::exp(r.log_total) - (d.S1 + d.S2)) <= 1e-9 * (d.S1 + d.S2));
                CHECK(r.log_total >= std::max(r.log_S1, r.log_S2));
            }
        }
    }
    SUBCASE("empty S2 when the lower limit exceeds n") {
        const auto r = analytic_error_bound(10, Modulus(3), 10.5);
        CHECK(r.s2_lower == 11);
        CHECK(std::isinf(r.log_S2));
        CHECK(r.log_S2 < 0);
        CHECK(r.log_total == r.log_S1);
    }
    SUBCASE("n up to 1e9 stays finite") {
        const std::uint64_t n = 1'000'000'000;
        const auto r = analytic_error_bound(n, next_valid_modulus(n, 2.0), default_tau(n));
        CHECK(std::isfinite(r.log_total));
    }
    CHECK_THROWS(analytic_error_bound(2, Modulus(3), 1.0));
    CHECK(log_add_exp(-INFINITY, 1.5) == 1.5);
    CHECK(log_add_exp(std::log(2.0), std::log(3.0)) == doctest::Approx(std::log(5.0)));
}
