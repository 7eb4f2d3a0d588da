#include "symsing/matrix_core.hpp"

#include <stdexcept>
#include <string>

#include "symsing/errors.hpp"
#include "symsing/parallel.hpp"

namespace symsing {

void check_enumeration_guard(std::size_t n) {
    if (n == 0 || SignMatrix::free_bits(n) > kMaxEnumerationBits) {
        throw GuardError("dimension too large for enumeration: n=" + std::to_string(n) +
                         " has " + std::to_string(SignMatrix::free_bits(n)) + " free bits (limit " +
                         std::to_string(kMaxEnumerationBits) + ")");
    }
}

SymmetricEnumeration::SymmetricEnumeration(std::size_t n)
    : n_(n), first_(0), last_(0) {
    check_enumeration_guard(n);
    last_ = std::uint64_t{1} << SignMatrix::free_bits(n);
}

std::vector<SymmetricEnumeration> SymmetricEnumeration::partition_by_prefix(std::size_t prefix_bits) const {
    const std::size_t total = SignMatrix::free_bits(n_);
    if (first_ != 0 || last_ != (std::uint64_t{1} << total)) {
        throw std::logic_error("partition_by_prefix needs a full enumeration");
    }
    if (prefix_bits > total) prefix_bits = total;
    const std::uint64_t parts = std::uint64_t{1} << prefix_bits;
    const std::uint64_t width = std::uint64_t{1} << (total - prefix_bits);
    std::vector<SymmetricEnumeration> out;
    out.reserve(parts);
    for (std::uint64_t p = 0; p < parts; ++p) out.push_back(SymmetricEnumeration(n_, p * width, (p + 1) * width));
    return out;
}

SignMatrix sample_symmetric(std::size_t n, const RngStream& rng) {
    std::array<std::uint32_t, 4> block{};
    std::uint32_t loaded = ~std::uint32_t{0};
    return SignMatrix::from_bits(n, [&](std::size_t t) {
        const auto b = static_cast<std::uint32_t>(t / 128);
        if (b != loaded) {
            block = rng.block(b, StreamDomain::matrix);
            loaded = b;
        }
        return ((block[(t % 128) / 32] >> (t % 32)) & 1U) != 0;
    });
}

ResidueVector mat_vec_mod_q(const SignMatrix& M, const ResidueVector& a) {
    if (M.dim() != a.size()) {
        throw DimensionMismatch("mat_vec_mod_q: matrix is " + std::to_string(M.dim()) + "x" +
                                std::to_string(M.dim()) + " but vector has length " + std::to_string(a.size()));
    }
    const Modulus& q = a.modulus();
    const std::size_t n = M.dim();
    std::vector<std::uint32_t> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t neg = M.negative_mask(i);
        std::uint32_t acc = 0;
        for (std::size_t j = 0; j < n; ++j) {
            acc = ((neg >> j) & 1U) ? q.sub(acc, a[j]) : q.add(acc, a[j]);
        }
        out[i] = acc;
    }
    return ResidueVector(q, std::move(out));
}

std::string_view to_string(EstimateMethod method) {
    switch (method) {
        case EstimateMethod::enumeration: return "enumeration";
        case EstimateMethod::fourier: return "fourier";
        case EstimateMethod::monte_carlo: return "monte-carlo";
    }
    return "unknown";
}

bool equivalent(const ExactFraction& x, const ExactFraction& y) {
    return static_cast<unsigned __int128>(x.numerator) * y.denominator ==
           static_cast<unsigned __int128>(y.numerator) * x.denominator;
}

ProbabilityEstimate exact_event_probability(const ResidueVector& a, const ResidueVector& v, unsigned threads) {
    if (a.size() != v.size() || a.modulus() != v.modulus()) {
        throw DimensionMismatch("exact_event_probability: a and v differ in length or modulus");
    }
    const std::size_t n = a.size();
    const SymmetricEnumeration all(n);
    const auto parts = all.partition_by_prefix(std::min<std::size_t>(6, SignMatrix::free_bits(n)));
    const auto counts = map_chunks(parts.size(), threads, [&](std::size_t c) {
        std::uint64_t hits = 0;
        for (const auto& M : parts[c]) {
            if (mat_vec_mod_q(M, a) == v) ++hits;
        }
        return hits;
    });
    ExactFraction frac{0, all.size()};
    for (auto c : counts) frac.numerator += c;
    return ProbabilityEstimate{frac.value(), EstimateMethod::enumeration, all.size(), 0.0, frac};
}

}  // namespace symsing
