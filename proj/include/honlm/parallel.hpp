#pragma once

#include <algorithm>
#include <thread>
#include <utility>
#include <vector>

namespace honlm {

/// Runs fn(i) for every i in [begin, end), split into contiguous chunks
/// across worker threads. Each index must be independent and fn must not
/// throw; results are identical for any thread count. threads <= 0 selects
/// the hardware concurrency.
template <class Fn>
void parallel_for(int begin, int end, int threads, Fn&& fn) {
    const int n = end - begin;
    if (n <= 0) return;
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, n);
    if (workers == 1) {
        for (int i = begin; i < end; ++i) fn(i);
        return;
    }
    const int chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        const int lo = begin + w * chunk;
        const int hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace honlm
