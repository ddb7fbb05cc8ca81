#pragma once

// Index-parallel loop over a fixed worker pool. Work items are claimed
// dynamically, so callers must write results into per-index slots and reduce
// them afterwards in index order; that keeps results independent of the
// worker count and of scheduling.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <stop_token>
#include <thread>
#include <vector>

#include "zetawalk/errors.hpp"

namespace zetawalk {

/// 0 selects std::thread::hardware_concurrency() (at least 1).
inline unsigned resolve_workers(unsigned requested) {
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls body(i) for every i in [0, count). The exception raised at the
/// lowest index is rethrown after all workers stop; a stop request raises
/// Cancelled.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, std::stop_token stop, Body&& body) {
    workers = static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::exception_ptr error;
    std::size_t error_index = count;

    auto run = [&] {
        while (!failed.load(std::memory_order_relaxed)) {
            if (stop.stop_requested()) {
                failed = true;
                return;
            }
            const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
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
    if (stop.stop_requested()) throw Cancelled();
}

}  // namespace zetawalk
