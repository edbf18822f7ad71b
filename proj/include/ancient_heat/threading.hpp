#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace ancient_heat {

// Worker count from ANCIENT_HEAT_THREADS; default 1 (fully serial runs are the
// reproducibility baseline).
inline int thread_count() {
    const char* env = std::getenv("ANCIENT_HEAT_THREADS");
    if (!env) return 1;
    int n = std::atoi(env);
    if (n < 1) return 1;
    int hw = int(std::thread::hardware_concurrency());
    if (hw > 0 && n > hw) n = hw;
    return n;
}

// Runs fn(i) for i in [0, n). Each index writes disjoint output slots, so the
// result is identical for any worker count.
inline void parallel_for(int n, const std::function<void(int)>& fn) {
    int workers = thread_count();
    if (workers <= 1 || n < 256) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(workers));
    int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        int lo = w * chunk;
        int hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace ancient_heat
