#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace brt {

// Worker count: hardware concurrency, capped by the BRT_THREADS variable.
std::size_t thread_budget();

// Runs fn(i) for i in [0,n); results must be written into index-addressed
// slots so the outcome is independent of scheduling.
template <typename Fn>
void parallel_replicates(std::size_t n, Fn&& fn) {
    const std::size_t workers = std::min(thread_budget(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n || failed.load())
                    return;
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true))
                        error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace brt
