#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pplab {

// Worker count: PINGPONG_LAB_THREADS if set and positive, else hardware concurrency.
int thread_count();

// out[i] = fn(i) for i < n. Results land in index order, so the output does
// not depend on the thread count. The first exception (lowest index) is rethrown.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& fn) {
    std::vector<T> out(n);
    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(thread_count()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n);
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace pplab
