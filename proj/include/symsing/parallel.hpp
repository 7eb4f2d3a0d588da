#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace symsing {

/// Evaluates fn(chunk) for chunk in [0, chunks) on up to `threads` workers and
/// returns the results in chunk order. Callers fold the results left to right,
/// so the outcome does not depend on the worker count.
template <class Fn>
auto map_chunks(std::size_t chunks, unsigned threads, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using Result = decltype(fn(std::size_t{}));
    std::vector<Result> ordered;
    ordered.reserve(chunks);
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1U, threads), chunks));
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) ordered.push_back(fn(c));
        return ordered;
    }

    std::vector<std::optional<Result>> results(chunks);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t c = next++; c < chunks; c = next++) {
                    try {
                        results[c].emplace(fn(c));
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = chunks;
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
    for (auto& r : results) ordered.push_back(std::move(*r));
    return ordered;
}

/// Half-open index range [begin, end).
struct IndexRange {
    std::uint64_t begin = 0;
    std::uint64_t end = 0;
};

/// Splits [0, total) into `parts` contiguous ranges of near-equal size.
inline IndexRange split_range(std::uint64_t total, std::size_t parts, std::size_t part) {
    const std::uint64_t base = total / parts;
    const std::uint64_t extra = total % parts;
    const std::uint64_t begin = part * base + std::min<std::uint64_t>(part, extra);
    return {begin, begin + base + (part < extra ? 1 : 0)};
}

}  // namespace symsing
