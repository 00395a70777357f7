#pragma once

// Minimal index-parallel loop. Worker count defaults to the hardware
// concurrency and is capped by the ZIPPER_THREADS environment variable;
// results must be written into pre-sized slots so output order never
// depends on scheduling.

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace zipper {

inline int worker_count(std::size_t jobs) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("ZIPPER_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned long>(cap) < hw) hw = static_cast<unsigned>(cap);
    }
    if (jobs < hw) hw = static_cast<unsigned>(jobs);
    return static_cast<int>(hw == 0 ? 1 : hw);
}

template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    if (count == 0) return;
    const int workers = worker_count(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace zipper
