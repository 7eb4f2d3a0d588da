#include "symsing/sign_matrix.hpp"

#include <stdexcept>

#include "symsing/errors.hpp"

namespace symsing {

SignMatrix::SignMatrix(std::size_t n) : n_(n) {
    if (n == 0 || n > max_dim) {
        throw std::invalid_argument("SignMatrix dimension must be in [1, 64], got " + std::to_string(n));
    }
}

void SignMatrix::set_bit(std::size_t t) { bits_[t / 64] |= std::uint64_t{1} << (t % 64); }

void SignMatrix::finish() {
    negative_.fill(0);
    std::size_t t = 0;
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i; j < n_; ++j, ++t) {
            if (bit(t)) {
                negative_[i] |= std::uint64_t{1} << j;
                negative_[j] |= std::uint64_t{1} << i;
            }
        }
    }
}

SignMatrix SignMatrix::from_packed(std::size_t n, std::uint64_t packed) {
    SignMatrix m(n);
    const std::size_t total = free_bits(n);
    if (total > 64) throw std::invalid_argument("from_packed: more than 64 free bits");
    if (total < 64 && (packed >> total) != 0) {
        throw std::invalid_argument("from_packed: value exceeds 2^(n(n+1)/2)");
    }
    for (std::size_t t = 0; t < total; ++t) {
        if ((packed >> (total - 1 - t)) & 1U) m.set_bit(t);
    }
    m.finish();
    return m;
}

SignMatrix SignMatrix::from_bits(std::size_t n, const std::function<bool(std::size_t)>& bit) {
    SignMatrix m(n);
    const std::size_t total = free_bits(n);
    for (std::size_t t = 0; t < total; ++t) {
        if (bit(t)) m.set_bit(t);
    }
    m.finish();
    return m;
}

SignMatrix SignMatrix::from_rows(const std::vector<std::vector<int>>& rows) {
    const std::size_t n = rows.size();
    SignMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n) throw DimensionMismatch("from_rows: matrix is not square");
        for (std::size_t j = 0; j < n; ++j) {
            const int e = rows[i][j];
            if (e != 1 && e != -1) throw std::invalid_argument("from_rows: entries must be +1 or -1");
            if (rows[j].size() != n || rows[j][i] != e) {
                throw std::invalid_argument("from_rows: matrix is not symmetric");
            }
            if (i <= j && e == -1) m.set_bit(bit_index(n, i, j));
        }
    }
    m.finish();
    return m;
}

SignMatrix SignMatrix::from_hex(std::size_t n, std::string_view hex) {
    SignMatrix m(n);
    const std::size_t total = free_bits(n);
    const std::size_t digits = (total + 3) / 4;
    if (hex.size() != digits) {
        throw std::invalid_argument("from_hex: expected " + std::to_string(digits) + " hex digits");
    }
    // The hex string is the packed integer; free bit t sits at integer bit (total-1-t).
    for (std::size_t d = 0; d < digits; ++d) {
        const char c = hex[d];
        unsigned nibble = 0;
        if (c >= '0' && c <= '9') nibble = static_cast<unsigned>(c - '0');
        else if (c >= 'a' && c <= 'f') nibble = static_cast<unsigned>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F') nibble = static_cast<unsigned>(c - 'A' + 10);
        else throw std::invalid_argument("from_hex: invalid hex digit");
        for (unsigned k = 0; k < 4; ++k) {
            const std::size_t int_bit = (digits - 1 - d) * 4 + (3 - k);
            if (!((nibble >> (3 - k)) & 1U)) continue;
            if (int_bit >= total) throw std::invalid_argument("from_hex: value out of range");
            m.set_bit(total - 1 - int_bit);
        }
    }
    m.finish();
    return m;
}

SignMatrix SignMatrix::all_plus(std::size_t n) {
    SignMatrix m(n);
    m.finish();
    return m;
}

std::uint64_t SignMatrix::packed() const {
    const std::size_t total = free_bits(n_);
    if (total > 64) throw std::logic_error("packed: more than 64 free bits");
    std::uint64_t value = 0;
    for (std::size_t t = 0; t < total; ++t) {
        value = (value << 1U) | static_cast<std::uint64_t>(bit(t));
    }
    return value;
}

std::string SignMatrix::to_hex() const {
    static constexpr char digits_table[] = "0123456789abcdef";
    const std::size_t total = free_bits(n_);
    const std::size_t digits = (total + 3) / 4;
    std::string out(digits, '0');
    for (std::size_t t = 0; t < total; ++t) {
        if (!bit(t)) continue;
        const std::size_t int_bit = total - 1 - t;
        const std::size_t d = digits - 1 - int_bit / 4;
        const auto nibble = static_cast<unsigned>(out[d] <= '9' ? out[d] - '0' : out[d] - 'a' + 10);
        out[d] = digits_table[nibble | (1U << (int_bit % 4))];
    }
    return out;
}

}  // namespace symsing
