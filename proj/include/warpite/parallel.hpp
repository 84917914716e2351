#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace warpite {

// Runs body(i) for i in [0, n) on up to `threads` workers. Results must be written to per-index slots;
// the exception from the lowest failing index is rethrown so failures do not depend on scheduling.
template <class F>
void parallel_for(int n, int threads, F&& body) {
    if (n <= 0) return;
    threads = std::clamp(threads, 1, n);
    std::vector<std::exception_ptr> errors(n);
    if (threads == 1) {
        for (int i = 0; i < n; ++i) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
                break;
            }
        }
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (int i = next++; i < n; i = next++) {
                    try {
                        body(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace warpite
