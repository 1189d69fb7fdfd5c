#include "protoperf/clock.hpp"

#include <algorithm>
#include <chrono>

namespace protoperf {

MonotonicClock& MonotonicClock::instance() {
    static MonotonicClock clock;
    return clock;
}

std::uint64_t MonotonicClock::now_ns() {
    const auto now = std::chrono::steady_clock::now().time_since_epoch();
    return std::uint64_t(std::chrono::duration_cast<std::chrono::nanoseconds>(now).count());
}

double MonotonicClock::resolution_ns() {
    if (cached_resolution_ns_ > 0.0) return cached_resolution_ns_;
    // Smallest observed nonzero tick over a handful of trials.
    std::uint64_t best = UINT64_MAX;
    for (int trial = 0; trial < 16; ++trial) {
        const std::uint64_t t0 = now_ns();
        std::uint64_t t1 = now_ns();
        while (t1 == t0) t1 = now_ns();
        best = std::min(best, t1 - t0);
    }
    cached_resolution_ns_ = double(best);
    return cached_resolution_ns_;
}

double clock_resolution_ns() {
    return MonotonicClock::instance().resolution_ns();
}

} // namespace protoperf
