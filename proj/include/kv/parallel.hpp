#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace kv {

// Upper bound on worker threads for internal loops; 0 means hardware concurrency.
void set_max_threads(unsigned n);
unsigned max_threads();

// Runs body(i) for i in [0, n). Each index writes only its own slot, so the
// result does not depend on scheduling. The first exception is rethrown.
template <class F>
void parallel_for(std::size_t n, F&& body) {
    const unsigned workers = std::min<std::size_t>(max_threads(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace kv
