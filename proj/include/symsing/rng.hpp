#pragma once

#include <array>
#include <cstdint>

namespace symsing {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3").
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Key stream separating independent uses of the same (seed, index).
enum class StreamDomain : std::uint32_t { matrix = 0, vector = 1 };

/// Address of one reproducible random draw: the output is a pure function of
/// (seed, index), independent of thread count and call order.
struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t index = 0;

    /// 128 random bits for the given block of this stream.
    [[nodiscard]] std::array<std::uint32_t, 4> block(std::uint32_t block_index,
                                                     StreamDomain domain = StreamDomain::matrix) const noexcept;
};

/// Sequential generator over the blocks of one RngStream.
class CounterRng {
public:
    using result_type = std::uint32_t;

    explicit CounterRng(RngStream stream, StreamDomain domain = StreamDomain::vector) noexcept
        : stream_(stream), domain_(domain) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept;
    std::uint64_t next_u64() noexcept;
    /// Uniform integer in [0, bound) by rejection; bound > 0.
    std::uint32_t uniform_below(std::uint32_t bound) noexcept;

private:
    RngStream stream_;
    StreamDomain domain_;
    std::uint32_t next_block_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    unsigned used_ = 4;
};

}  // namespace symsing
