#pragma once

#include <atomic>

// Process-wide switch for the OpenMP kernels. Results are identical with
// parallelism on or off: every parallel loop writes independent per-index
// outputs, and any reduction folds per-index partials in fixed ascending
// order on a single thread. The switch exists so tests and the benchmark
// can compare the two execution modes.
namespace cge::par {

inline std::atomic<bool>& enabled_flag() {
    static std::atomic<bool> flag{true};
    return flag;
}

inline bool enabled() { return enabled_flag().load(std::memory_order_relaxed); }
inline void set_enabled(bool v) { enabled_flag().store(v, std::memory_order_relaxed); }

// Minimum number of work items before a loop goes parallel.
inline constexpr int kGrain = 64;

} // namespace cge::par
