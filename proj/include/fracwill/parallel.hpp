#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace fracwill {

/// Worker count: hardware concurrency capped by FRACWILL_THREADS.
inline int thread_count() {
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* env = std::getenv("FRACWILL_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n;
}

/// Runs fn(i) for i in [0,n). Work is split into fixed chunks whose
/// boundaries do not depend on the thread count, so any per-chunk output
/// combined in chunk order is bit-identical for every FRACWILL_THREADS.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int workers = thread_count();
    if (workers <= 1 || n < 64) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t next = 0;
    const std::size_t chunk = (n + 8 * workers - 1) / (8 * workers);
    std::mutex m;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t lo, hi;
                {
                    std::lock_guard<std::mutex> lock(m);
                    if (next >= n) return;
                    lo = next;
                    hi = std::min(n, lo + chunk);
                    next = hi;
                }
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

/// Deterministic sum of f(i) over [0,n): per-index values are reduced
/// serially in index order regardless of how they were computed.
inline double parallel_sum(std::size_t n, const std::function<double(std::size_t)>& f) {
    std::vector<double> slot(n);
    parallel_for(n, [&](std::size_t i) { slot[i] = f(i); });
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += slot[i];
    return s;
}

}  // namespace fracwill
