#include "symsing/fourier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "symsing/errors.hpp"
#include "symsing/parallel.hpp"

namespace symsing {

namespace {

constexpr std::size_t kBlocks = 64;

/// Advances a little-endian mixed-radix counter of base q.
inline void increment(std::vector<std::uint32_t>& digits, std::uint32_t q) noexcept {
    for (auto& d : digits) {
        if (++d < q) return;
        d = 0;
    }
}

std::vector<std::uint32_t> decode(std::uint64_t index, std::size_t n, std::uint32_t q) {
    std::vector<std::uint32_t> digits(n);
    for (auto& d : digits) {
        d = static_cast<std::uint32_t>(index % q);
        index /= q;
    }
    return digits;
}

std::vector<double> cos_table(std::uint32_t q) {
    std::vector<double> t(q);
    for (std::uint32_t k = 0; k < q; ++k) t[k] = std::cos(2.0 * std::numbers::pi * k / q);
    return t;
}

std::vector<double> sin_table(std::uint32_t q) {
    std::vector<double> t(q);
    for (std::uint32_t k = 0; k < q; ++k) t[k] = std::sin(2.0 * std::numbers::pi * k / q);
    return t;
}

}  // namespace

std::uint64_t character_term_count(const Modulus& q, std::size_t n) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < n; ++i) {
        count *= q.value();
        if (count > kMaxCharacterTerms) {
            throw GuardError("character sum over Z_" + std::to_string(q.value()) + "^" + std::to_string(n) +
                             " exceeds " + std::to_string(kMaxCharacterTerms) + " terms");
        }
    }
    return count;
}

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
        compensation_ += (sum_ - t) + x;
    } else {
        compensation_ += (x - t) + sum_;
    }
    sum_ = t;
}

CharacterSumResult prob_fourier(const ResidueVector& a, const ResidueVector& v, unsigned threads) {
    if (a.size() != v.size() || a.modulus() != v.modulus()) {
        throw DimensionMismatch("prob_fourier: a and v differ in length or modulus");
    }
    const Modulus& q = a.modulus();
    const std::uint32_t p = q.value();
    const std::size_t n = a.size();
    const std::uint64_t terms = character_term_count(q, n);
    const auto cosines = cos_table(p);
    const auto sines = sin_table(p);

    struct Partial {
        CompensatedSum re, im;
    };
    const std::size_t blocks = std::min<std::uint64_t>(kBlocks, terms);
    const auto partials = map_chunks(blocks, threads, [&](std::size_t block) {
        const auto range = split_range(terms, blocks, block);
        auto l = decode(range.begin, n, p);
        Partial part;
        for (std::uint64_t idx = range.begin; idx < range.end; ++idx, increment(l, p)) {
            double product = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                product *= cosines[q.mul(l[i], a[i])];
                for (std::size_t j = i + 1; j < n; ++j) {
                    product *= cosines[q.add(q.mul(l[i], a[j]), q.mul(l[j], a[i]))];
                }
            }
            std::uint32_t dot = 0;
            for (std::size_t i = 0; i < n; ++i) dot = q.add(dot, q.mul(l[i], v[i]));
            // e_q(-l.v) = cos(2 pi dot / q) - i sin(2 pi dot / q)
            part.re.add(product * cosines[dot]);
            part.im.add(-product * sines[dot]);
        }
        return part;
    });

    Partial total;
    for (const auto& part : partials) {
        total.re.add(part.re);
        total.im.add(part.im);
    }
    const double scale = static_cast<double>(terms);
    return CharacterSumResult{total.re.value() / scale, std::fabs(total.im.value()) / scale, terms};
}

ErrorTermResult error_term(const ResidueVector& a, unsigned threads) {
    const Modulus& q = a.modulus();
    const std::uint32_t p = q.value();
    const std::size_t n = a.size();
    const std::uint64_t terms = character_term_count(q, n);
    const auto cosines = cos_table(p);
    const double decay = -2.0 / (static_cast<double>(p) * p);

    struct Partial {
        CompensatedSum value, bound;
        std::uint64_t failures = 0;
    };
    const std::size_t blocks = std::min<std::uint64_t>(kBlocks, terms);
    const auto partials = map_chunks(blocks, threads, [&](std::size_t block) {
        const auto range = split_range(terms, blocks, block);
        auto l = decode(range.begin, n, p);
        Partial part;
        for (std::uint64_t idx = range.begin; idx < range.end; ++idx, increment(l, p)) {
            if (idx == 0) continue;  // l = 0
            double product = 1.0;
            std::uint64_t nonzero_pairs = 0;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = i + 1; j < n; ++j) {
                    const std::uint32_t form = q.add(q.mul(l[i], a[j]), q.mul(l[j], a[i]));
                    product *= std::fabs(cosines[form]);
                    if (form != 0) ++nonzero_pairs;
                }
            }
            const double bound = std::exp(decay * static_cast<double>(nonzero_pairs));
            if (product > bound * (1.0 + 1e-12)) ++part.failures;
            part.value.add(product);
            part.bound.add(bound);
        }
        return part;
    });

    Partial total;
    for (const auto& part : partials) {
        total.value.add(part.value);
        total.bound.add(part.bound);
        total.failures += part.failures;
    }
    return ErrorTermResult{total.value.value(), total.bound.value(), total.failures};
}

bool cos_decay_check(const Modulus& q) {
    const double p = q.value();
    const double limit = std::exp(-2.0 / (p * p));
    for (std::uint32_t m = 1; m < q.value(); ++m) {
        if (std::fabs(std::cos(std::numbers::pi * m / p)) > limit) return false;
    }
    return true;
}

double log_binomial(double n, double s) {
    return std::lgamma(n + 1.0) - std::lgamma(s + 1.0) - std::lgamma(n - s + 1.0);
}

double log_add_exp(double x, double y) {
    if (x == -std::numeric_limits<double>::infinity()) return y;
    if (y == -std::numeric_limits<double>::infinity()) return x;
    const double hi = std::max(x, y);
    return hi + std::log1p(std::exp(std::min(x, y) - hi));
}

namespace {

/// log sum_{s=first}^{last} exp(term(s)) for a concave term sequence.
///
/// Past the peak each decrement is at least the previous one, so the remaining
/// tail is at most t_s e^{-d} / (1 - e^{-d}); summation stops once that bound
/// is below e^{-60} of the running total.
template <class Term>
double log_sum_concave(std::uint64_t first, std::uint64_t last, Term term) {
    double total = -std::numeric_limits<double>::infinity();
    double previous = -std::numeric_limits<double>::infinity();
    for (std::uint64_t s = first; s <= last; ++s) {
        const double t = term(static_cast<double>(s));
        total = log_add_exp(total, t);
        const double drop = previous - t;
        if (s > first && drop > 0.0) {
            const double log_tail = t - drop - std::log1p(-std::exp(-drop));
            if (log_tail < total - 60.0) break;
        }
        previous = t;
    }
    return total;
}

}  // namespace

AnalyticBoundResult analytic_error_bound(std::uint64_t n, const Modulus& q, double tau) {
    if (n < 3) throw std::invalid_argument("analytic_error_bound: n must be >= 3");
    if (!(tau > 0.0)) throw std::invalid_argument("analytic_error_bound: tau must be positive");
    const double nd = static_cast<double>(n);
    const double qd = q.value();
    const double log_q = std::log(qd);
    const double log_q1 = std::log(qd - 1.0);
    const double q2 = qd * qd;

    AnalyticBoundResult result;
    result.log_S1 = log_sum_concave(1, n, [&](double s) { return log_binomial(nd, s) + s * log_q - s * tau / q2; });

    const double lower = std::ceil(tau);
    result.s2_lower = static_cast<std::uint64_t>(std::max(1.0, lower));
    if (lower <= nd) {
        result.log_S2 = log_sum_concave(result.s2_lower, n, [&](double s) {
            return log_binomial(nd, s) + s * log_q1 - s * s / (20.0 * q2);
        });
    }
    result.log_total = log_add_exp(result.log_S1, result.log_S2);
    return result;
}

double log_structured_contribution(std::uint64_t n, const Modulus& q, double tau) {
    const double nd = static_cast<double>(n);
    return log_binomial(nd, tau) + (tau + 1.0) * std::log(static_cast<double>(q.value())) - nd * std::numbers::ln2;
}

}  // namespace symsing
