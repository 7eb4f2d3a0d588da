#include "symsing/residue_vector.hpp"

#include <algorithm>
#include <stdexcept>

#include "symsing/errors.hpp"

namespace symsing {

ResidueVector::ResidueVector(Modulus q, std::vector<std::uint32_t> entries)
    : q_(q), entries_(std::move(entries)) {
    for (auto e : entries_) {
        if (e >= q_.value()) throw std::invalid_argument("ResidueVector: entry not reduced mod q");
    }
}

ResidueVector ResidueVector::zero(Modulus q, std::size_t n) {
    return ResidueVector(q, std::vector<std::uint32_t>(n, 0));
}

ResidueVector ResidueVector::reduced(Modulus q, std::span<const std::int64_t> values) {
    std::vector<std::uint32_t> out;
    out.reserve(values.size());
    for (auto v : values) out.push_back(q.reduce(v));
    return ResidueVector(q, std::move(out));
}

bool ResidueVector::is_zero() const noexcept {
    return std::all_of(entries_.begin(), entries_.end(), [](auto e) { return e == 0; });
}

std::size_t ResidueVector::support_size() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(entries_.begin(), entries_.end(), [](auto e) { return e != 0; }));
}

std::string ResidueVector::to_string() const {
    std::string out = "(";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(entries_[i]);
    }
    return out + ")";
}

ResidueVector operator+(const ResidueVector& x, const ResidueVector& y) {
    if (x.modulus() != y.modulus() || x.size() != y.size()) {
        throw DimensionMismatch("ResidueVector addition: length or modulus mismatch");
    }
    std::vector<std::uint32_t> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x.modulus().add(x[i], y[i]);
    return ResidueVector(x.modulus(), std::move(out));
}

}  // namespace symsing
