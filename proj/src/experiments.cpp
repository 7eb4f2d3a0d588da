#include "symsing/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "symsing/errors.hpp"
#include "symsing/parallel.hpp"
#include "symsing/zq_linalg.hpp"

namespace symsing {

namespace {

constexpr std::size_t kSampleBlocks = 256;
constexpr std::size_t kPrefixBits = 8;
constexpr std::uint64_t kMaxVectorRouteWork = std::uint64_t{1} << 28;

void check_exact_dim(std::size_t n) {
    if (n == 0 || n > kMaxExactDim) {
        throw GuardError("exact enumeration supports 1 <= n <= " + std::to_string(kMaxExactDim) + ", got " +
                         std::to_string(n));
    }
    check_enumeration_guard(n);
}

std::uint64_t checked_add(std::uint64_t x, std::uint64_t y) {
    std::uint64_t out;
    if (__builtin_add_overflow(x, y, &out)) throw OverflowError("exact kernel-size sum overflows 64 bits");
    return out;
}

std::uint64_t kernel_size_or_throw(const RankResult& r, const Modulus& q) {
    const auto size = r.kernel_size(q);
    if (!size) throw OverflowError("kernel size q^nullity does not fit in 62 bits");
    return *size;
}

/// Per-block accumulator for kernel statistics; merged in block order.
struct KernelTally {
    std::map<std::size_t, std::uint64_t> histogram;
    std::uint64_t count = 0;
    unsigned __int128 sum_K = 0;
    unsigned __int128 sum_K2 = 0;
    std::uint64_t kernel_route = 0;
    bool kernel_route_ok = true;

    void merge(const KernelTally& other) {
        for (auto [k, c] : other.histogram) histogram[k] += c;
        count += other.count;
        sum_K += other.sum_K;
        sum_K2 += other.sum_K2;
        kernel_route += other.kernel_route;
        kernel_route_ok = kernel_route_ok && other.kernel_route_ok;
    }
};

void finish_stats(KernelStats& stats, const KernelTally& tally, const Modulus& q) {
    stats.nullity_histogram = tally.histogram;
    stats.samples = tally.count;
    const double N = static_cast<double>(tally.count);
    std::uint64_t singular = 0;
    for (auto [k, c] : tally.histogram) {
        if (k >= 1) singular += c;
    }
    stats.p_prime_hat = static_cast<double>(singular) / N;
    stats.E_K = static_cast<double>(tally.sum_K) / N;
    stats.markov_bound = stats.E_K / q.value();
    if (!stats.exact) {
        stats.p_stderr = std::sqrt(stats.p_prime_hat * (1.0 - stats.p_prime_hat) / N);
        const double second = static_cast<double>(tally.sum_K2) / N;
        stats.E_K_stderr = tally.count > 1 ? std::sqrt(std::max(0.0, second - stats.E_K * stats.E_K) / (N - 1.0)) : 0.0;
    }
}

}  // namespace

ExactSingularity run_exact_p(std::size_t n, const Modulus& q, unsigned threads) {
    check_exact_dim(n);
    const SymmetricEnumeration all(n);
    const auto parts = all.partition_by_prefix(std::min(kPrefixBits, SignMatrix::free_bits(n)));
    struct Counts {
        std::uint64_t rational = 0, mod_q = 0, exceptions = 0;
    };
    const auto counts = map_chunks(parts.size(), threads, [&](std::size_t c) {
        Counts out;
        for (const auto& M : parts[c]) {
            const bool rational = det_integer(M).value == 0;
            const bool modular = rank_mod_q(M, q).nullity >= 1;
            out.rational += rational;
            out.mod_q += modular;
            out.exceptions += rational && !modular;
        }
        return out;
    });
    ExactSingularity result{n, q.value(), {0, all.size()}, {0, all.size()}, 0};
    for (const auto& c : counts) {
        result.p_rational.numerator += c.rational;
        result.p_mod_q.numerator += c.mod_q;
        result.chain_exceptions += c.exceptions;
    }
    return result;
}

bool KernelStats::double_counting_holds() const {
    if (!E_K_exact) return true;
    if (E_K_kernel_route && !equivalent(*E_K_kernel_route, *E_K_exact)) return false;
    if (E_K_vector_route && !equivalent(*E_K_vector_route, *E_K_exact)) return false;
    return true;
}

KernelStats run_mc_p(std::size_t n, const Modulus& q, std::uint64_t samples, std::uint64_t seed, unsigned threads) {
    if (samples == 0) throw std::invalid_argument("samples must be >= 1");
    KernelStats stats;
    stats.n = n;
    stats.q = q.value();
    const std::size_t blocks = std::min<std::uint64_t>(kSampleBlocks, samples);
    const auto tallies = map_chunks(blocks, threads, [&](std::size_t b) {
        const auto range = split_range(samples, blocks, b);
        KernelTally tally;
        for (std::uint64_t i = range.begin; i < range.end; ++i) {
            const auto M = sample_symmetric(n, RngStream{seed, i});
            const auto r = rank_mod_q(M, q);
            const std::uint64_t K = kernel_size_or_throw(r, q);
            ++tally.histogram[r.nullity];
            ++tally.count;
            tally.sum_K += K;
            tally.sum_K2 += static_cast<unsigned __int128>(K) * K;
        }
        return tally;
    });
    KernelTally total;
    for (const auto& t : tallies) total.merge(t);
    finish_stats(stats, total, q);
    return stats;
}

std::optional<ExactFraction> expected_kernel_vectorwise(std::size_t n, const Modulus& q, unsigned threads) {
    check_exact_dim(n);
    const std::uint64_t matrices = std::uint64_t{1} << SignMatrix::free_bits(n);
    std::uint64_t vectors = 1;
    for (std::size_t i = 0; i < n; ++i) {
        vectors *= q.value();
        if (vectors * matrices > kMaxVectorRouteWork) return std::nullopt;
    }
    const std::size_t blocks = std::min<std::uint64_t>(64, vectors);
    const auto sums = map_chunks(blocks, threads, [&](std::size_t b) {
        const auto range = split_range(vectors, blocks, b);
        std::uint64_t hits = 0;
        std::vector<std::uint32_t> digits(n);
        for (std::uint64_t idx = range.begin; idx < range.end; ++idx) {
            std::uint64_t rest = idx;
            for (auto& d : digits) {
                d = static_cast<std::uint32_t>(rest % q.value());
                rest /= q.value();
            }
            const ResidueVector a(q, digits);
            const auto zero = ResidueVector::zero(q, n);
            for (const auto& M : enumerate_symmetric(n)) {
                if (mat_vec_mod_q(M, a) == zero) ++hits;
            }
        }
        return hits;
    });
    ExactFraction out{0, matrices};
    for (auto s : sums) out.numerator = checked_add(out.numerator, s);
    return out;
}

KernelStats run_expected_kernel(std::size_t n, const Modulus& q, KernelMode mode, std::uint64_t samples,
                                std::uint64_t seed, unsigned threads) {
    if (mode == KernelMode::monte_carlo) return run_mc_p(n, q, samples, seed, threads);

    check_exact_dim(n);
    KernelStats stats;
    stats.n = n;
    stats.q = q.value();
    stats.exact = true;
    const SymmetricEnumeration all(n);
    const auto parts = all.partition_by_prefix(std::min(kPrefixBits, SignMatrix::free_bits(n)));
    // The all-ones matrix has nullity n-1 for every odd q and nothing exceeds it, so this
    // decides up front whether every kernel can be enumerated under the guard.
    const bool kernel_route = static_cast<double>(n - 1) * std::log2(static_cast<double>(q.value())) <=
                              kMaxKernelLog2;
    const auto tallies = map_chunks(parts.size(), threads, [&](std::size_t c) {
        KernelTally tally;
        tally.kernel_route_ok = kernel_route;
        for (const auto& M : parts[c]) {
            const auto r = rank_mod_q(M, q);
            const std::uint64_t K = kernel_size_or_throw(r, q);
            ++tally.histogram[r.nullity];
            ++tally.count;
            tally.sum_K += K;
            if (tally.kernel_route_ok) {
                try {
                    std::uint64_t visited = 0;
                    for_each_kernel_vector(M, q, [&](const ResidueVector&) { ++visited; });
                    tally.kernel_route += visited;
                } catch (const GuardError&) {
                    tally.kernel_route_ok = false;
                }
            }
        }
        return tally;
    });
    KernelTally total;
    for (const auto& t : tallies) total.merge(t);
    if (total.sum_K > std::numeric_limits<std::uint64_t>::max()) {
        throw OverflowError("exact E[K] numerator overflows 64 bits");
    }
    finish_stats(stats, total, q);
    stats.E_K_exact = ExactFraction{static_cast<std::uint64_t>(total.sum_K), all.size()};
    if (total.kernel_route_ok) stats.E_K_kernel_route = ExactFraction{total.kernel_route, all.size()};
    stats.E_K_vector_route = expected_kernel_vectorwise(n, q, threads);
    return stats;
}

MarkovReport run_markov_report(std::size_t n, double C, std::optional<Modulus> explicit_q, std::uint64_t samples,
                               std::uint64_t seed, unsigned threads, LogBase base) {
    const Modulus q = explicit_q ? *explicit_q : next_valid_modulus(n, C, base);
    auto stats = run_mc_p(n, q, samples, seed, threads);
    const bool consistent = stats.markov_consistent();
    return MarkovReport{q, std::move(stats), consistent};
}

ResidueVector sample_unstructured(CounterRng& rng, const Modulus& q, std::size_t n, double tau) {
    std::vector<std::uint32_t> entries(n);
    for (std::uint64_t attempt = 0; attempt < kMaxRejectionAttempts; ++attempt) {
        for (auto& e : entries) e = rng.uniform_below(q.value());
        ResidueVector a(q, entries);
        if (!level_set_profile(a, tau).in_L) return a;
    }
    throw SamplingError("no vector outside the structured family after " + std::to_string(kMaxRejectionAttempts) +
                        " attempts (n=" + std::to_string(n) + ", q=" + std::to_string(q.value()) +
                        ", tau=" + std::to_string(tau) + ")");
}

namespace {

LemmaCase evaluate_lemma_case(const ResidueVector& a, const ResidueVector& v, double error) {
    const auto exact = exact_event_probability(a, v);
    const auto fourier = prob_fourier(a, v);
    const double uniform = std::pow(static_cast<double>(a.modulus().value()), -static_cast<double>(a.size()));
    LemmaCase c{a, v, *exact.exact, fourier.probability, fourier.imaginary_residual, error};
    c.equality_ok = std::fabs(fourier.probability - exact.value) <= kFourierTolerance &&
                    fourier.imaginary_residual <= kFourierTolerance;
    c.bound_ok = std::fabs(exact.value - uniform) <= uniform * error + 1e-12;
    return c;
}

void tally_lemma_case(LemmaReport& report, LemmaCase c) {
    const double uniform = std::pow(static_cast<double>(report.q), -static_cast<double>(report.n));
    ++report.cases;
    report.equality_ok += c.equality_ok;
    report.bound_ok += c.bound_ok;
    report.max_abs_diff = std::max(report.max_abs_diff, std::fabs(c.pr_fourier - c.pr_exact.value()));
    report.max_rel_deviation = std::max(report.max_rel_deviation, std::fabs(c.pr_exact.value() - uniform) / uniform);
    report.max_error = std::max(report.max_error, c.error);
    report.max_imaginary_residual = std::max(report.max_imaginary_residual, c.imaginary_residual);
    if (!c.equality_ok || !c.bound_ok) report.violations.push_back(std::move(c));
}

ResidueVector vector_from_index(const Modulus& q, std::size_t n, std::uint64_t index) {
    std::vector<std::uint32_t> digits(n);
    for (auto& d : digits) {
        d = static_cast<std::uint32_t>(index % q.value());
        index /= q.value();
    }
    return ResidueVector(q, std::move(digits));
}

}  // namespace

LemmaReport run_verify_lemma(std::size_t n, const Modulus& q, std::uint64_t trials, double tau, std::uint64_t seed,
                             bool exhaustive, unsigned threads) {
    check_enumeration_guard(n);
    const std::uint64_t vectors = character_term_count(q, n);
    LemmaReport report;
    report.n = n;
    report.q = q.value();
    report.tau = tau;

    if (exhaustive) {
        std::vector<ResidueVector> admissible;
        for (std::uint64_t idx = 0; idx < vectors; ++idx) {
            auto a = vector_from_index(q, n, idx);
            if (!level_set_profile(a, tau).in_L) admissible.push_back(std::move(a));
        }
        const auto per_a = map_chunks(admissible.size(), threads, [&](std::size_t k) {
            const double error = error_term(admissible[k]).value;
            std::vector<LemmaCase> cases;
            for (std::uint64_t vi = 0; vi < vectors; ++vi) {
                cases.push_back(evaluate_lemma_case(admissible[k], vector_from_index(q, n, vi), error));
            }
            return cases;
        });
        for (const auto& cases : per_a) {
            for (const auto& c : cases) tally_lemma_case(report, c);
        }
        return report;
    }

    const auto cases = map_chunks(trials, threads, [&](std::size_t t) {
        CounterRng rng(RngStream{seed, t});
        auto a = sample_unstructured(rng, q, n, tau);
        std::vector<std::uint32_t> v(n);
        for (auto& e : v) e = rng.uniform_below(q.value());
        return evaluate_lemma_case(a, ResidueVector(q, v), error_term(a).value);
    });
    for (const auto& c : cases) tally_lemma_case(report, c);
    return report;
}

PropsReport run_verify_props(std::size_t n, const Modulus& q, std::uint64_t trials, double tau, std::uint64_t seed,
                             bool nonzero, unsigned threads) {
    PropsReport report;
    report.n = n;
    report.q = q.value();
    report.tau = tau;
    report.nonzero = nonzero;

    struct Trial {
        ResidueVector a;
        ResidueVector l;
        PropositionCheck check;
    };
    const std::uint32_t p = q.value();
    const auto results = map_chunks(trials, threads, [&](std::size_t t) {
        CounterRng rng(RngStream{seed, t});
        std::vector<std::uint32_t> a(n), l(n, 0);
        for (auto& e : a) e = nonzero ? 1 + rng.uniform_below(p - 1) : rng.uniform_below(p);
        if (nonzero) {
            for (auto& e : l) e = 1 + rng.uniform_below(p - 1);
        } else {
            // Uniform support size, then a uniform support of that size via a partial shuffle.
            const std::size_t s = rng.uniform_below(static_cast<std::uint32_t>(n + 1));
            std::vector<std::size_t> coords(n);
            std::iota(coords.begin(), coords.end(), std::size_t{0});
            for (std::size_t k = 0; k < s; ++k) {
                const std::size_t pick = k + rng.uniform_below(static_cast<std::uint32_t>(n - k));
                std::swap(coords[k], coords[pick]);
                l[coords[k]] = 1 + rng.uniform_below(p - 1);
            }
        }
        ResidueVector av(q, std::move(a)), lv(q, std::move(l));
        auto check = check_proposition(av, lv, tau);
        return Trial{std::move(av), std::move(lv), check};
    });

    for (const auto& [a, l, c] : results) {
        ++report.trials;
        report.hypotheses_met += c.hypotheses_met;
        if (c.hypotheses_met) {
            (c.regime == SupportRegime::small_support ? report.small_support : report.large_support) += 1;
            report.claims_asserted += c.claim_asserted;
            report.claims_met += c.claim_met;
            report.quadratic_shortfalls += !c.claim_asserted && !c.claim_met;
        }
        report.inner_applicable += c.inner_applicable;
        report.inner_holds += c.inner_applicable && c.inner_holds;
        report.triangle_free += c.triangle_free;
        report.mantel_holds += c.mantel_holds;

        auto flag = [&](std::string kind, double bound) {
            report.violations.push_back(PropsViolation{std::move(kind), a, l, c.actual_N, bound, c.regime});
        };
        if (!c.holds) flag("proposition-bound", c.claimed_bound);
        if (!c.inner_holds) flag("inner-inequality", c.inner_bound);
        if (!c.triangle_free) flag("triangle", 0.0);
        if (!c.mantel_holds) flag("mantel", static_cast<double>(c.mantel_nonedge_bound));
    }
    return report;
}

bool ErrorBoundTable::strictly_decreasing() const {
    return std::all_of(rows.begin(), rows.end(), [](const ErrorBoundRow& r) { return r.decreasing; });
}

ErrorBoundTable run_error_bound_table(const std::vector<std::uint64_t>& n_grid, double C,
                                      std::optional<Modulus> explicit_q, std::optional<double> tau_override,
                                      LogBase base) {
    ErrorBoundTable table;
    for (const auto n : n_grid) {
        const Modulus q = explicit_q ? *explicit_q : next_valid_modulus(n, C, base);
        const double tau = tau_override ? *tau_override : default_tau(n, base);
        ErrorBoundRow row{n, q.value(), tau, analytic_error_bound(n, q, tau), log_structured_contribution(n, q, tau)};
        if (!table.rows.empty()) row.decreasing = row.bound.log_total < table.rows.back().bound.log_total;
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace symsing
