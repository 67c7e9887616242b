#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ifb {

// 0 means one worker per hardware thread.
inline unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Calls body(i) for i in [0, n) on at most `workers` threads. Items are
// claimed from a shared counter, so bodies must only write to per-index
// storage. After the first failure no new items are started; the exception of
// the lowest failing index among those that ran is rethrown.
inline void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body) {
    workers = static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(n, 1)));
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::size_t error_index = n;
    std::exception_ptr error;

    auto run = [&] {
        for (;;) {
            if (failed.load(std::memory_order_relaxed)) return;
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (i < error_index) {
                    error_index = i;
                    error = std::current_exception();
                }
                failed = true;
            }
        }
    };

    if (workers <= 1) {
        run();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
    }
    if (error) std::rethrow_exception(error);
}

}  // namespace ifb
