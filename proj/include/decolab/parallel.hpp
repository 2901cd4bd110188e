#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace decolab {

// Worker count for row/column passes, from DECOHERENCE_LAB_THREADS
// (default 1). Reductions stay deterministic regardless of the setting:
// workers fill per-row slots and the caller folds them in index order.
inline int worker_count() {
    static int n = [] {
        const char* env = std::getenv("DECOHERENCE_LAB_THREADS");
        if (!env) return 1;
        int v = std::atoi(env);
        return v < 1 ? 1 : v;
    }();
    return n;
}

// Runs fn(begin, end) over a partition of [0, count) on worker_count()
// threads. fn must not touch state shared across chunks.
template <class Fn>
void parallel_chunks(int count, Fn&& fn) {
    int workers = worker_count();
    if (workers <= 1 || count < 2 * workers) {
        fn(0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    int chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        int b = w * chunk;
        int e = std::min(count, b + chunk);
        if (b >= e) break;
        pool.emplace_back([&fn, b, e] { fn(b, e); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace decolab
