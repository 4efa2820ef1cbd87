// parallel.hpp — Block-partitioned parallel loop over an index range

#pragma once

#include <algorithm>
#include <functional>
#include <thread>
#include <vector>

namespace tla {

// Runs fn(i) for i in [0, count) on `threads` workers (0 = hardware concurrency).
// Indices are split into contiguous blocks, so writes to disjoint per-index slots
// are race-free and results do not depend on scheduling.
inline void parallel_for(long count, int threads, const std::function<void(long)>& fn) {
    if (count <= 0) return;
    long n_workers = threads > 0 ? threads : static_cast<long>(std::thread::hardware_concurrency());
    n_workers = std::max(1L, std::min(n_workers, count));
    if (n_workers == 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    const long chunk = (count + n_workers - 1) / n_workers;
    for (int w = 0; w < n_workers; ++w) {
        const long lo = w * chunk;
        const long hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (long i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace tla
