#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace casimir {

// Worker cap: CASIMIR_THREADS if set and positive, else hardware concurrency.
unsigned worker_count();

namespace detail {
inline thread_local bool inside_parallel = false;
}

// Calls f(i) for i in [0, n) on up to worker_count() threads. Callers write
// into per-index slots so results never depend on scheduling order. Nested
// calls run serially on the calling worker.
template <class F>
void parallel_for(std::size_t n, F&& f) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
    if (workers <= 1 || detail::inside_parallel) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        const bool outer = detail::inside_parallel;
        detail::inside_parallel = true;
        struct Restore {
            bool v;
            ~Restore() { detail::inside_parallel = v; }
        } restore{outer};
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace casimir
