#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "arith.hpp"

namespace latcong {

// Runs fn(i) for i in [0, total) on up to `threads` threads, static block
// partition. fn must write only to per-index state; results are then
// independent of the thread count. The first exception thrown by any fn is
// rethrown on the caller after all threads join.
template <typename Fn>
void parallel_index_for(u64 total, int threads, Fn&& fn) {
    if (threads < 1) threads = 1;
    if (threads == 1 || total < 2) {
        for (u64 i = 0; i < total; ++i) fn(i);
        return;
    }
    u64 workers = std::min<u64>((u64)threads, total);
    u64 chunk = (total + workers - 1) / workers;
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (u64 w = 0; w < workers; ++w) {
        u64 lo = w * chunk;
        u64 hi = std::min(total, lo + chunk);
        pool.emplace_back([&, lo, hi] {
            try {
                for (u64 i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace latcong
