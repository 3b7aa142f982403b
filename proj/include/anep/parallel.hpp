#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace anep {

// Applies fn to every index in [0, n) across `workers` threads and returns
// results in index order. Work items must be independent; result order (and
// therefore everything derived from it) does not depend on the worker count,
// which is what makes pipeline output reproducible under parallelism.
template <typename R>
std::vector<R> parallel_map(size_t n, int workers, const std::function<R(size_t)>& fn) {
    std::vector<R> results(n);
    if (n == 0) return results;
    if (workers <= 0) workers = int(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    if (size_t(workers) > n) workers = int(n);

    if (workers == 1) {
        for (size_t i = 0; i < n; ++i) results[i] = fn(i);
        return results;
    }

    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(size_t(workers));
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&] {
            while (true) {
                const size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    results[i] = fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

}  // namespace anep
