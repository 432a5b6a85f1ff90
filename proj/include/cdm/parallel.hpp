#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace cdm {

/// Runs fn over [0, n) split into contiguous chunks, one per worker.
/// Callers fill preallocated slots and reduce serially afterwards, so results
/// are bitwise identical for every thread count.
inline void parallel_for(std::size_t n, int threads,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
    if (threads <= 1 || n < 2048) {
        fn(0, n);
        return;
    }
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t begin = w * chunk;
        std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back(fn, begin, end);
    }
    for (auto& t : pool) t.join();
}

} // namespace cdm
