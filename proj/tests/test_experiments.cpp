#include <doctest.h>

#include <cmath>

#include "symsing/errors.hpp"
#include "symsing/experiments.hpp"

using namespace symsing;

TEST_CASE("run_exact_p") {
    const auto one = run_exact_p(1, Modulus(3));
    CHECK(one.p_rational == ExactFraction{0, 2});

    // singular iff m11 = m22: 4 of the 8 matrices, both over Q and mod 3
    const auto two = run_exact_p(2, Modulus(3));
    CHECK(two.p_rational == ExactFraction{4, 8});
    CHECK(two.p_mod_q == ExactFraction{4, 8});

    for (std::size_t n = 1; n <= 5; ++n) {
        for (std::uint32_t q : {3U, 5U}) {
            const auto r = run_exact_p(n, Modulus(q));
            CHECK(r.chain_exceptions == 0);
            CHECK(r.p_rational.numerator <= r.p_mod_q.numerator);
        }
    }
    CHECK(run_exact_p(4, Modulus(3), 1).p_mod_q == run_exact_p(4, Modulus(3), 3).p_mod_q);
    CHECK_THROWS_AS(run_exact_p(8, Modulus(3)), GuardError);
}

TEST_CASE("run_mc_p") {
    const auto s = run_mc_p(2, Modulus(3), 100000, 42);
    CHECK(s.p_prime_hat >= 0.494);
    CHECK(s.p_prime_hat <= 0.506);
    CHECK(std::fabs(s.p_prime_hat - 0.5) <= 3.0 * s.p_stderr);
    std::uint64_t total = 0;
    for (auto [k, c] : s.nullity_histogram) total += c;
    CHECK(total == 100000);

    CHECK(run_mc_p(1, Modulus(3), 1000, 9).p_prime_hat == 0.0);

    const auto a = run_mc_p(12, Modulus(5), 3000, 77, 1);
    const auto b = run_mc_p(12, Modulus(5), 3000, 77, 8);
    CHECK(a.nullity_histogram == b.nullity_histogram);
    CHECK(a.E_K == b.E_K);
    CHECK(a.markov_consistent());
    CHECK_THROWS(run_mc_p(3, Modulus(3), 0, 1));
}

TEST_CASE("regression baseline n=50, q=5, 2e4 samples, seed 42") {
    // First pinned from this implementation: p' = 0.206 (sigma 0.00286), E[K] = 1.997 (sigma 0.0197).
    const auto s = run_mc_p(50, Modulus(5), 20000, 42);
    CHECK(std::fabs(s.p_prime_hat - 0.206) <= 3.0 * 0.00286);
    CHECK(std::fabs(s.E_K - 1.997) <= 3.0 * 0.0197);
    CHECK(s.E_K >= 1.5);
    CHECK(s.E_K <= 2.5);
}

TEST_CASE("run_expected_kernel exact") {
    const auto one = run_expected_kernel(1, Modulus(3), KernelMode::exact, 0, 0);
    CHECK(one.E_K_exact == ExactFraction{2, 2});
    CHECK(one.E_K == 1.0);

    // 4 matrices with nullity 1 contribute 3 each, 4 contribute 1
    const auto two = run_expected_kernel(2, Modulus(3), KernelMode::exact, 0, 0);
    CHECK(two.E_K_exact == ExactFraction{16, 8});
    CHECK(two.E_K == 2.0);

    for (std::size_t n = 1; n <= 4; ++n) {
        for (std::uint32_t q : {3U, 5U}) {
            const auto s = run_expected_kernel(n, Modulus(q), KernelMode::exact, 0, 0);
            REQUIRE(s.E_K_kernel_route.has_value());
            REQUIRE(s.E_K_vector_route.has_value());
            CHECK(*s.E_K_kernel_route == *s.E_K_exact);
            CHECK(*s.E_K_vector_route == *s.E_K_exact);
            CHECK(s.double_counting_holds());
        }
    }

    SUBCASE("vector route is skipped beyond its guard") {
        CHECK_FALSE(expected_kernel_vectorwise(6, Modulus(5)).has_value());
    }
    SUBCASE("kernel route is skipped when the all-ones kernel is past its guard") {
        // n=6, q=17: nullity 5 gives 17^5 > 2^20 kernel vectors
        const auto s = run_expected_kernel(6, Modulus(17), KernelMode::exact, 0, 0, 4);
        CHECK_FALSE(s.E_K_kernel_route.has_value());
        REQUIRE(s.E_K_exact.has_value());
        CHECK(s.E_K_exact->denominator == (1ULL << 21));
        CHECK(s.E_K >= 1.0);
    }
}

TEST_CASE("run_markov_report") {
    CHECK(next_valid_modulus(100, 2.0).value() == 3);
    CHECK(next_valid_modulus(10000, 0.0).value() == 101);

    const auto r = run_markov_report(40, 2.0, std::nullopt, 4000, 5);
    CHECK(r.q.value() == 3);  // sqrt(40) / ln^2 40 < 1
    CHECK(r.consistent);
    CHECK(r.stats.markov_bound == doctest::Approx(r.stats.E_K / 3.0));

    const auto explicit_q = run_markov_report(30, 2.0, Modulus(7), 2000, 5);
    CHECK(explicit_q.q.value() == 7);
    CHECK(explicit_q.consistent);
}

TEST_CASE("run_verify_lemma") {
    SUBCASE("exhaustive n=2, q=3 with tau=0.5: the six vectors with distinct entries qualify") {
        const auto r = run_verify_lemma(2, Modulus(3), 0, 0.5, 0, true);
        CHECK(r.cases == 54);
        CHECK(r.equality_ok == 54);
        CHECK(r.bound_ok == 54);
        CHECK(r.violations.empty());
        CHECK(r.max_abs_diff <= 1e-9);
    }
    SUBCASE("n=3, q=3, 50 random trials, seed 1") {
        const auto r = run_verify_lemma(3, Modulus(3), 50, 1.0, 1);
        CHECK(r.cases == 50);
        CHECK(r.bound_ok == 50);
        CHECK(r.equality_ok == 50);
    }
    SUBCASE("the sampler rejects structured vectors and gives up explicitly") {
        CounterRng rng(RngStream{1, 0});
        for (int k = 0; k < 100; ++k) {
            CHECK_FALSE(level_set_profile(sample_unstructured(rng, Modulus(5), 6, 2.0), 2.0).in_L);
        }
        CHECK_THROWS_AS(run_verify_lemma(2, Modulus(3), 5, 2.0, 1), SamplingError);
    }
    CHECK(run_verify_lemma(3, Modulus(5), 10, 1.0, 4, false, 1).max_abs_diff ==
          run_verify_lemma(3, Modulus(5), 10, 1.0, 4, false, 4).max_abs_diff);
}

TEST_CASE("run_verify_props") {
    const auto nonzero = run_verify_props(30, Modulus(7), 2000, default_tau(30), 3, true);
    CHECK(nonzero.triangle_free == 2000);
    CHECK(nonzero.mantel_holds == 2000);
    CHECK(nonzero.violations.empty());

    const auto mixed = run_verify_props(100, Modulus(5), 2000, default_tau(100), 3);
    CHECK(mixed.violations.empty());
    CHECK(mixed.small_support > 0);
    CHECK(mixed.large_support > 0);
    CHECK(mixed.inner_holds == mixed.inner_applicable);

    const auto a = run_verify_props(40, Modulus(11), 500, 3.0, 8, false, 1);
    const auto b = run_verify_props(40, Modulus(11), 500, 3.0, 8, false, 8);
    CHECK(a.claims_met == b.claims_met);
    CHECK(a.inner_applicable == b.inner_applicable);
}

TEST_CASE("run_error_bound_table") {
    const auto single = run_error_bound_table({5000}, 2.0);
    REQUIRE(single.rows.size() == 1);
    CHECK(single.strictly_decreasing());

    const auto small = run_error_bound_table({20}, 2.0, Modulus(3));
    CHECK(small.rows[0].q == 3);
    CHECK(small.rows[0].tau == doctest::Approx(default_tau(20)));

    const auto tail = run_error_bound_table({100'000, 1'000'000, 10'000'000}, 2.0);
    CHECK(tail.strictly_decreasing());
}
