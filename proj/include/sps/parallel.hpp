#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sps {

/// Runs body(i) for i in [0, n) on `jobs` threads with a static strided
/// schedule. Each index is written by exactly one thread, so results placed
/// by index do not depend on the schedule. The first exception is rethrown.
template <class Body>
void parallel_for(std::size_t n, int jobs, Body&& body) {
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr err;
    std::mutex m;
    {
        std::vector<std::jthread> pool;
        const std::size_t k = static_cast<std::size_t>(jobs);
        for (std::size_t t = 0; t < k && t < n; ++t)
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t i = t; i < n; i += k) body(i);
                } catch (...) {
                    std::lock_guard lock(m);
                    if (!err) err = std::current_exception();
                }
            });
    }
    if (err) std::rethrow_exception(err);
}

}  // namespace sps
