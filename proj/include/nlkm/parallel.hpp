// Deterministic data-parallel helper. Work is split into contiguous index
// ranges; every cell's arithmetic stays sequential within its range, so
// results are bitwise independent of the worker count.
#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace nlkm {

/// Worker cap: min(hardware_concurrency, NLKM_THREADS). At least 1.
inline int max_threads() {
    static const int cached = [] {
        int n = static_cast<int>(std::thread::hardware_concurrency());
        if (n < 1) n = 1;
        if (const char* env = std::getenv("NLKM_THREADS")) {
            char* end = nullptr;
            long cap = std::strtol(env, &end, 10);
            if (end != env && cap >= 1 && cap < n) n = static_cast<int>(cap);
        }
        return n;
    }();
    return cached;
}

/// Runs fn(begin, end) over a partition of [0, n). Falls back to a single
/// inline call for small n or a single-worker cap.
template <typename Fn>
void parallel_for(std::int64_t n, Fn&& fn, std::int64_t grain = 1024) {
    if (n <= 0) return;
    const int workers = static_cast<int>(std::min<std::int64_t>(max_threads(), (n + grain - 1) / grain));
    if (workers <= 1) {
        fn(std::int64_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers - 1));
    const std::int64_t chunk = (n + workers - 1) / workers;
    for (int t = 1; t < workers; ++t) {
        const std::int64_t lo = t * chunk;
        const std::int64_t hi = std::min<std::int64_t>(lo + chunk, n);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    fn(std::int64_t{0}, std::min<std::int64_t>(chunk, n));
    for (auto& th : pool) th.join();
}

}  // namespace nlkm
