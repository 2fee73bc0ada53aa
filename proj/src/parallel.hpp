#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace bloc::detail {

// Runs fn(i) for i in [0, n) across hardware threads. Each index writes
// only its own preassigned output slot, so results do not depend on the
// number of threads.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    std::size_t workers = std::min<std::size_t>(
        n, std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) {
        threads.emplace_back([t, n, workers, &fn] {
            for (std::size_t i = t; i < n; i += workers) fn(i);
        });
    }
    for (auto& thread : threads) thread.join();
}

}  // namespace bloc::detail
