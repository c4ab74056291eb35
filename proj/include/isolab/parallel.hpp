#pragma once

#include <atomic>
#include <thread>
#include <vector>

#include "isolab/arith.hpp"

namespace isolab {

/// Index-parallel loop with deterministic per-index work; results must be
/// written to disjoint slots so the merge order cannot matter.
template <class Body> void parallel_for(u64 n, int threads, Body &&body) {
    threads = std::max(1, threads);
    if (threads == 1 || n < 2) {
        for (u64 i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::atomic<u64> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            try {
                for (u64 i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                    body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!err)
                    err = std::current_exception();
                next.store(n);
            }
        });
    for (auto &t : pool)
        t.join();
    if (err)
        std::rethrow_exception(err);
}

} // namespace isolab
