#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace klsym {

inline int default_jobs() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. Rethrows the first
/// exception. Workers pull indices from a shared counter, so the work order
/// is nondeterministic; callers must only do order-independent writes.
inline void parallel_for(std::int64_t count, int jobs, const std::function<void(std::int64_t)>& fn) {
    if (count <= 0) return;
    if (jobs <= 1 || count == 1) {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    int workers = static_cast<int>(std::min<std::int64_t>(jobs, count));
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&]() {
            for (;;) {
                std::int64_t i = next.fetch_add(1);
                if (i >= count || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    if (failed.load() && error) std::rethrow_exception(error);
}

/// Chunked variant for tight loops: fn(begin, end) over a partition of
/// [0, count) into roughly jobs*4 blocks.
inline void parallel_chunks(std::int64_t count, int jobs,
                            const std::function<void(std::int64_t, std::int64_t)>& fn) {
    if (count <= 0) return;
    std::int64_t blocks = std::max<std::int64_t>(1, std::min<std::int64_t>(count, static_cast<std::int64_t>(jobs) * 4));
    std::int64_t chunk = (count + blocks - 1) / blocks;
    parallel_for(blocks, jobs, [&](std::int64_t b) {
        std::int64_t lo = b * chunk;
        std::int64_t hi = std::min(count, lo + chunk);
        if (lo < hi) fn(lo, hi);
    });
}

}  // namespace klsym
