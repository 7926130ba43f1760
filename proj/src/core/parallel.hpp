#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace varfrac {

// Worker count for assembly loops; VARFRAC_THREADS overrides the hardware default.
inline unsigned worker_count() {
    if (const char* env = std::getenv("VARFRAC_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

// Runs body(chunk) for chunk in [0, chunks). Chunk boundaries never depend on the
// worker count, so per-chunk partial results merged in index order are bit-stable.
inline void for_each_chunk(std::size_t chunks, const std::function<void(std::size_t)>& body) {
    const unsigned workers = std::min<std::size_t>(worker_count(), chunks);
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) body(c);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t c = w; c < chunks; c += workers) body(c);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace varfrac
