// edgeplace/parallel.hpp
//
// parallel_for(n, jobs, f): runs f(0..n-1) on up to `jobs` threads. Work is
// handed out by an atomic counter; the first exception is rethrown after all
// workers join. jobs <= 1 runs inline, in order.

#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace edgeplace {

template <class F>
void parallel_for(int n, int jobs, F&& f) {
    if (jobs <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&] {
        for (int i; (i = next.fetch_add(1)) < n;) {
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err) err = std::current_exception();
                next.store(n);
            }
        }
    };
    std::vector<std::thread> pool;
    const int k = std::min(jobs, n);
    for (int i = 0; i < k; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace edgeplace
