#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace slc {

/// Runs fn(i) for i in [0, n) on up to `threads` workers.  Work is handed
/// out by atomic counter; results must be written to pre-sized slots so the
/// outcome is independent of scheduling.
inline void parallel_for(size_t n, int threads, const std::function<void(size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= n) break;
            fn(i);
        }
    };
    size_t nw = std::min<size_t>(static_cast<size_t>(threads), n);
    std::vector<std::thread> pool;
    for (size_t w = 1; w < nw; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
}

}  // namespace slc
