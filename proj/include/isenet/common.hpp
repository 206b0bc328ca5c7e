#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace isenet {

// Error taxonomy mirrored by the CLI exit codes (0 ok, 2/3/4 below).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Transient fetch failure (network); safe to retry.
struct RetriableError : DataError {
    using DataError::DataError;
};
// Downloaded or on-disk bytes fail validation.
struct IntegrityError : DataError {
    using DataError::DataError;
};

inline unsigned max_threads() {
    static unsigned n = [] {
        unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1u : (hw > 8 ? 8u : hw);
    }();
    return n;
}

// Static partition of [0, n) across worker threads. Each index is handled by
// exactly one thread, so results are identical for any thread count as long
// as iterations do not share output slots.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                         unsigned n_threads = 0) {
    if (n == 0) return;
    unsigned workers = n_threads == 0 ? max_threads() : n_threads;
    if (workers > n) workers = static_cast<unsigned>(n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = static_cast<std::size_t>(w) * chunk;
        std::size_t hi = lo + chunk < n ? lo + chunk : n;
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::size_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace isenet
