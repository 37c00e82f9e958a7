#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace sire::detail {

// Chunked index-space map.  Each worker owns a fixed contiguous range and
// writes only to its own output slots, so results are deterministic and
// independent of the worker count.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(hw, n);
    if (workers <= 1) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t k = lo; k < hi; ++k) fn(k);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace sire::detail
