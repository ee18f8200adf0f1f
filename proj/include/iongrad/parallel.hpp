// parallel.hpp — index-ordered scan parallelism
//
// Scan points are independent; workers pull indices from a shared counter and
// write into index-addressed slots, so results are ordered by input index
// regardless of scheduling.  Worker count comes from IONGRAD_WORKERS when
// set, otherwise the hardware concurrency.

#pragma once

#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace iongrad::experiments {

inline int worker_count() {
    if (const char* env = std::getenv("IONGRAD_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Runs f(i) for i in [0, n); rethrows the first worker exception.
template <typename F>
void parallel_for(int n, F&& f) {
    const int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) f(i);
            } catch (...) {
                errors[w] = std::current_exception();
                next.store(n); // stop handing out work
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace iongrad::experiments
