#include "symsing/rng.hpp"

namespace symsing {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32U);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

std::array<std::uint32_t, 4> RngStream::block(std::uint32_t block_index, StreamDomain domain) const noexcept {
    return philox4x32({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32U), block_index,
                       static_cast<std::uint32_t>(domain)},
                      {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32U)});
}

CounterRng::result_type CounterRng::operator()() noexcept {
    if (used_ == 4) {
        buffer_ = stream_.block(next_block_++, domain_);
        used_ = 0;
    }
    return buffer_[used_++];
}

std::uint64_t CounterRng::next_u64() noexcept {
    const std::uint64_t hi = (*this)();
    return (hi << 32U) | (*this)();
}

std::uint32_t CounterRng::uniform_below(std::uint32_t bound) noexcept {
    // Reject the top partial bucket so every residue is equally likely.
    const std::uint32_t limit = max() - (max() % bound + 1) % bound;
    std::uint32_t x;
    do {
        x = (*this)();
    } while (x > limit);
    return x % bound;
}

}  // namespace symsing
