#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace pentile {

inline int effective_workers(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(chunk_index, begin, end) over contiguous chunks of [0, n).
// Chunk boundaries depend only on n and the chunk count, never on the worker
// count, so per-chunk results can be merged in chunk order for output that is
// independent of scheduling.
template <typename Fn>
void parallel_chunks(std::size_t n, int workers, std::size_t chunks, Fn&& fn) {
    if (n == 0) return;
    if (chunks == 0) chunks = 1;
    if (chunks > n) chunks = n;
    workers = effective_workers(workers);
    if (workers == 1 || chunks == 1) {
        for (std::size_t c = 0; c < chunks; ++c) {
            std::size_t b = c * n / chunks, e = (c + 1) * n / chunks;
            fn(c, b, e);
        }
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t c = next.fetch_add(1);
                if (c >= chunks) break;
                std::size_t b = c * n / chunks, e = (c + 1) * n / chunks;
                fn(c, b, e);
            }
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace pentile
