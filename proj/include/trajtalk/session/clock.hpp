#pragma once

#include <chrono>
#include <mutex>

namespace trajtalk {

// Source of wall time (seconds) for event stamps and pauses.
class Clock {
public:
    virtual ~Clock() = default;
    [[nodiscard]] virtual double now() = 0;
    virtual void sleep_for(double seconds) = 0;
};

// Seconds since the Unix epoch, advancing monotonically.
class SystemClock final : public Clock {
public:
    SystemClock();
    [[nodiscard]] double now() override;
    void sleep_for(double seconds) override;

private:
    double epoch_offset_;
    std::chrono::steady_clock::time_point start_;
};

// Simulated time: only moves when advanced. sleep_for advances instantly.
class ManualClock final : public Clock {
public:
    explicit ManualClock(double start = 0.0) : now_(start) {}
    [[nodiscard]] double now() override;
    void sleep_for(double seconds) override { advance(seconds); }
    void advance(double seconds);

private:
    std::mutex mu_;
    double now_;
};

}  // namespace trajtalk
