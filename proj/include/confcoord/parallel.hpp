#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace confcoord {

/// Worker count: CONFCOORD_THREADS when set to a positive integer, else the
/// hardware concurrency.
int thread_count();

/// Runs f(i) for i in [0, n) over contiguous blocks. Each index is handled by
/// exactly one worker, so results written per index do not depend on the
/// thread count. The first exception raised by a worker is rethrown.
template <class F>
void parallel_for(std::size_t n, F&& f)
{
    std::size_t workers = static_cast<std::size_t>(thread_count());
    if (workers <= 1 || n < 2 * workers) {
        for (std::size_t i = 0; i < n; ++i)
            f(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back([lo, hi, w, &f, &errors] {
            try {
                for (std::size_t i = lo; i < hi; ++i)
                    f(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace confcoord
