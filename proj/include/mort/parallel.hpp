#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace mort {

/// Resolve a thread-count request: 0 means "auto" (hardware concurrency),
/// anything else is taken as-is.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Run fn(worker, i) for i in [0, count) on up to `threads` workers. Each
/// index is processed exactly once; fn must not depend on evaluation order.
/// Worker ids are dense in [0, threads). Exceptions from workers are
/// rethrown after join so callers see the first failure.
template <typename Fn>
void parallel_for_workers(int count, int threads, Fn&& fn) {
    threads = std::min(std::max(threads, 1), count);
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(0, i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < count; i += threads) fn(w, i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Run fn(i) for i in [0, count) on up to `threads` workers.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
    parallel_for_workers(count, threads, [&](int, int i) { fn(i); });
}

} // namespace mort
