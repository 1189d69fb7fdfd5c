#pragma once

#include <cstdint>

namespace protoperf {

/// Timing source used by the harness. Real backends hand out the process
/// monotonic clock; the deterministic synthetic backend hands out a
/// simulated clock that its operations advance by their analytic cost.
class Clock {
public:
    virtual ~Clock() = default;
    virtual std::uint64_t now_ns() = 0;
    /// Smallest observable nonzero tick in nanoseconds, cached after the
    /// first call.
    virtual double resolution_ns() = 0;
};

class MonotonicClock final : public Clock {
public:
    static MonotonicClock& instance();

    std::uint64_t now_ns() override;
    double resolution_ns() override;

private:
    MonotonicClock() = default;
    double cached_resolution_ns_ = 0.0;
};

/// Resolution of the process monotonic clock (cached per process).
double clock_resolution_ns();

} // namespace protoperf
