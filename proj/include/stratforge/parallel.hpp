#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace stratforge {

// Run fn(i) for i in [0, n_jobs) on up to `workers` threads. Jobs are claimed
// in index order; callers that need a deterministic result order write into a
// pre-sized slot per index. workers <= 1 degenerates to a plain loop, which is
// what replay mode pins (scripted multi-response prompts are consumed in call
// order).
template <typename Fn>
void parallel_for(std::size_t n_jobs, std::size_t workers, Fn&& fn) {
    if (n_jobs == 0) return;
    if (workers <= 1 || n_jobs == 1) {
        for (std::size_t i = 0; i < n_jobs; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr first_error;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n_jobs) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> threads;
    std::size_t n_threads = workers < n_jobs ? workers : n_jobs;
    threads.reserve(n_threads);
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace stratforge
