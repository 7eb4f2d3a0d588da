// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "symsing/cli.hpp"
#include "symsing/experiments.hpp"
#include "symsing/fourier.hpp"
#include "symsing/matrix_core.hpp"
#include "symsing/rng.hpp"
#include "symsing/structure.hpp"
#include "symsing/zq_linalg.hpp"

using namespace symsing;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double budget_seconds;
    std::function<Verdict()> run;
};

template <typename... Args>
std::string format(const char* fmt, Args... args) {
    char buffer[512];
    std::snprintf(buffer, sizeof buffer, fmt, args...);
    return buffer;
}

ResidueVector from_index(const Modulus& q, std::size_t n, std::uint64_t index) {
    std::vector<std::uint32_t> entries(n);
    for (auto& e : entries) {
        e = static_cast<std::uint32_t>(index % q.value());
        index /= q.value();
    }
    return ResidueVector(q, entries);
}

std::uint64_t power(std::uint64_t base, std::size_t exp) {
    std::uint64_t r = 1;
    while (exp-- > 0) r *= base;
    return r;
}

Verdict fourier_inversion() {
    const Modulus q(3);
    double worst = 0.0;
    std::uint64_t pairs = 0;
    for (std::uint64_t ai = 0; ai < 9; ++ai) {
        for (std::uint64_t vi = 0; vi < 9; ++vi) {
            const auto a = from_index(q, 2, ai);
            const auto v = from_index(q, 2, vi);
            worst = std::max(worst, std::fabs(prob_fourier(a, v).probability - exact_event_probability(a, v).value));
            ++pairs;
        }
    }
    CounterRng rng(RngStream{kDefaultSeed, 1});
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = from_index(q, 3, rng.uniform_below(27));
        const auto v = from_index(q, 3, rng.uniform_below(27));
        worst = std::max(worst, std::fabs(prob_fourier(a, v).probability - exact_event_probability(a, v).value));
        ++pairs;
    }
    return {worst <= 1e-9, format("%llu pairs, max |diff| = %.3g", (unsigned long long)pairs, worst)};
}

Verdict trivial_bound() {
    const Modulus q(3);
    std::uint64_t checked = 0;
    std::uint64_t failures = 0;
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto zero = ResidueVector::zero(q, n);
        for (std::uint64_t ai = 1; ai < power(3, n); ++ai) {
            const auto est = exact_event_probability(from_index(q, n, ai), zero);
            // count / 2^T <= 2^-n, compared in integers
            if ((est.exact->numerator << n) > est.exact->denominator) ++failures;
            ++checked;
        }
    }
    return {failures == 0, format("%llu nonzero vectors, %llu above 2^-n", (unsigned long long)checked,
                                  (unsigned long long)failures)};
}

Verdict small_n_singularity() {
    const auto p1 = run_exact_p(1, Modulus(3)).p_rational;
    const auto p2 = run_exact_p(2, Modulus(3)).p_rational;
    bool ok = p1.numerator == 0 && equivalent(p2, ExactFraction{1, 2});
    std::uint64_t matrices = 0;
    std::uint64_t disagreements = 0;
    std::uint64_t chain_exceptions = 0;
    for (std::size_t n = 1; n <= 5; ++n) {
        for (std::uint32_t qv : {3U, 5U}) {
            const Modulus q(qv);
            for (const auto& M : enumerate_symmetric(n)) {
                const std::int64_t det = det_integer(M).value;
                const bool det_zero_mod_q = det % static_cast<std::int64_t>(qv) == 0;
                const bool rank_deficient = rank_mod_q(M, q).rank < n;
                if (det_zero_mod_q != rank_deficient) ++disagreements;
                if (det == 0 && !rank_deficient) ++chain_exceptions;
                ++matrices;
            }
        }
    }
    ok = ok && disagreements == 0 && chain_exceptions == 0;
    return {ok, format("p(1) = %llu/%llu, p(2) = %llu/%llu, %llu matrices, %llu disagreements, %llu chain exceptions",
                       (unsigned long long)p1.numerator, (unsigned long long)p1.denominator,
                       (unsigned long long)p2.numerator, (unsigned long long)p2.denominator,
                       (unsigned long long)matrices, (unsigned long long)disagreements,
                       (unsigned long long)chain_exceptions)};
}

Verdict triangle_freeness() {
    bool ok = true;
    std::string detail;
    for (std::uint32_t qv : {3U, 5U, 7U, 11U}) {
        const auto r = run_verify_props(30, Modulus(qv), 10'000, default_tau(30), kDefaultSeed, true, 4);
        ok = ok && r.triangle_free == r.trials && r.mantel_holds == r.trials;
        detail += format("q=%u: %llu/%llu triangle-free, %llu Mantel; ", qv, (unsigned long long)r.triangle_free,
                         (unsigned long long)r.trials, (unsigned long long)r.mantel_holds);
    }
    detail.resize(detail.size() - 2);
    return {ok, detail};
}

Verdict inner_inequality() {
    const auto r = run_verify_props(100, Modulus(5), 10'000, default_tau(100), kDefaultSeed, false, 4);
    const std::uint64_t counterexamples = r.inner_applicable - r.inner_holds;
    return {counterexamples == 0 && r.inner_applicable > 0,
            format("%llu applicable trials of %llu, %llu counterexamples", (unsigned long long)r.inner_applicable,
                   (unsigned long long)r.trials, (unsigned long long)counterexamples)};
}

Verdict deviation_bound() {
    // With tau = n every vector is structured, so the complement is empty. The bound
    // does not involve the level sets, so every a is checked, which covers any complement.
    const Modulus q(3);
    const double uniform = 1.0 / 9.0;
    std::uint64_t complement = 0;
    std::uint64_t pairs = 0;
    std::uint64_t violations = 0;
    for (std::uint64_t ai = 0; ai < 9; ++ai) {
        const auto a = from_index(q, 2, ai);
        if (!level_set_profile(a, 2.0).in_L) ++complement;
        const double error = error_term(a).value;
        for (std::uint64_t vi = 0; vi < 9; ++vi) {
            const double p = exact_event_probability(a, from_index(q, 2, vi)).value;
            if (std::fabs(p - uniform) > uniform * error + 1e-12) ++violations;
            ++pairs;
        }
    }
    const auto sweep = run_verify_lemma(2, q, 0, 0.5, kDefaultSeed, true);
    const bool ok = violations == 0 && sweep.violations.empty() && sweep.bound_ok == sweep.cases;
    return {ok, format("tau=n complement has %llu vectors; all-a sweep %llu pairs, %llu violations; "
                       "tau=0.5 sweep %llu/%llu within bound",
                       (unsigned long long)complement, (unsigned long long)pairs, (unsigned long long)violations,
                       (unsigned long long)sweep.bound_ok, (unsigned long long)sweep.cases)};
}

Verdict cosine_decay() {
    int primes = 0;
    int failures = 0;
    for (std::uint32_t q = 3; q <= 101; q += 2) {
        if (!is_prime(q)) continue;
        ++primes;
        if (!cos_decay_check(Modulus(q))) ++failures;
        // independent recomputation of the same inequality
        for (std::uint32_t m = 1; m < q; ++m) {
            const double lhs = std::fabs(std::cos(std::numbers::pi * m / q));
            if (lhs > std::exp(-2.0 / (double(q) * q))) ++failures;
        }
    }
    return {failures == 0, format("%d odd primes, %d failures", primes, failures)};
}

Verdict expected_kernel() {
    const auto two = run_expected_kernel(2, Modulus(3), KernelMode::exact, 0, 0);
    bool ok = two.E_K_exact && equivalent(*two.E_K_exact, ExactFraction{2, 1});
    int routes = 0;
    for (std::size_t n = 1; n <= 4; ++n) {
        for (std::uint32_t qv : {3U, 5U}) {
            const auto s = run_expected_kernel(n, Modulus(qv), KernelMode::exact, 0, 0, 4);
            ok = ok && s.E_K_kernel_route && s.E_K_vector_route && *s.E_K_kernel_route == *s.E_K_exact &&
                 *s.E_K_vector_route == *s.E_K_exact;
            ++routes;
        }
    }
    const auto mc = run_mc_p(50, Modulus(5), 20'000, 42, 4);
    ok = ok && mc.E_K >= 1.5 && mc.E_K <= 2.5;
    return {ok, format("E[K](2,3) = %.6g, %d exact cases with matching routes, MC E[K](50,5) = %.4f +- %.4f",
                       two.E_K, routes, mc.E_K, mc.E_K_stderr)};
}

Verdict analytic_bound() {
    // plain summation with binomials from the multiplicative recurrence
    const Modulus q3 = next_valid_modulus(20, 2.0);
    const double q = q3.value();
    const double tau = default_tau(20);
    double S1 = 0.0;
    double S2 = 0.0;
    double binom = 1.0;
    for (int s = 1; s <= 20; ++s) {
        binom = binom * (20 - s + 1) / s;
        S1 += binom * std::pow(q, s) * std::exp(-s * tau / (q * q));
        if (s >= std::ceil(tau)) S2 += binom * std::pow(q - 1.0, s) * std::exp(-double(s) * s / (20.0 * q * q));
    }
    const double direct = std::log(S1 + S2);
    const auto bound = analytic_error_bound(20, q3, tau);
    const double rel = std::fabs(std::exp(bound.log_total - direct) - 1.0);
    const bool fidelity = rel <= 1e-9;

    const auto table = run_error_bound_table({10'000, 100'000, 1'000'000, 10'000'000}, 2.0);
    std::string grid;
    for (const auto& row : table.rows) grid += format(" %.2f(q=%u)", row.bound.log_total, row.q);
    return {fidelity && table.strictly_decreasing(),
            format("n=20 rel. diff %.2g (%s); log_total over 1e4..1e7:%s (%s)", rel, fidelity ? "ok" : "too large",
                   grid.c_str(), table.strictly_decreasing() ? "decreasing" : "not strictly decreasing")};
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Verdict determinism() {
    const std::vector<std::vector<std::string>> commands{
        {"mc-p", "--n", "50", "--q", "5", "--samples", "5000", "--seed", "42"},
        {"ek", "--n", "30", "--q", "7", "--mode", "mc", "--samples", "5000", "--seed", "42"},
        {"markov", "--n", "40", "--samples", "5000", "--seed", "42", "--format", "json"},
        {"verify-lemma", "--n", "3", "--q", "5", "--tau", "1", "--trials", "100", "--seed", "42"},
        {"verify-props", "--n", "100", "--q", "5", "--trials", "2000", "--seed", "42", "--format", "json"},
    };
    const auto dir = std::filesystem::temp_directory_path() / "symsing_acceptance";
    std::filesystem::create_directories(dir);
    int identical = 0;
    for (std::size_t c = 0; c < commands.size(); ++c) {
        std::vector<std::string> texts;
        for (int rep = 0; rep < 2; ++rep) {
            for (const char* threads : {"1", "8"}) {
                const auto path = dir / format("run%zu_%d_t%s.out", c, rep, threads);
                auto args = commands[c];
                args.insert(args.begin(), "symsing");
                args.insert(args.end(), {"--threads", threads, "--out", path.string()});
                std::vector<const char*> argv;
                for (const auto& a : args) argv.push_back(a.c_str());
                std::ostringstream out, err;
                if (run_cli(static_cast<int>(argv.size()), argv.data(), out, err) != kExitOk) {
                    return {false, commands[c].front() + " failed: " + err.str()};
                }
                texts.push_back(slurp(path));
            }
        }
        bool same = !texts.front().empty();
        for (const auto& t : texts) same = same && t == texts.front();
        if (same) ++identical;
    }
    std::filesystem::remove_all(dir);
    return {identical == static_cast<int>(commands.size()),
            format("%d of %zu subcommands byte-identical over 2 runs x {1, 8} threads", identical, commands.size())};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "Fourier inversion exactness", 5, fourier_inversion},
        {2, "trivial 2^-n bound for nonzero a", 30, trivial_bound},
        {3, "exact small-n singular probabilities", 120, small_n_singularity},
        {4, "auxiliary graph triangle-free", 60, triangle_freeness},
        {5, "pair-count inner inequality", 30, inner_inequality},
        {6, "deviation bound", 10, deviation_bound},
        {7, "cosine decay", 1, cosine_decay},
        {8, "expected kernel size", 300, expected_kernel},
        {9, "analytic error bound", 10, analytic_bound},
        {10, "determinism across thread counts", 60, determinism},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds > c.budget_seconds) {
            v.pass = false;
            v.detail += format("; exceeded %.0f s budget", c.budget_seconds);
        }
        if (!v.pass) ++failed;
        std::printf("%s %2d %s [%.2f s] %s\n", v.pass ? "PASS" : "FAIL", c.id, c.title.c_str(), seconds,
                    v.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
