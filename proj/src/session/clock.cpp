#include "trajtalk/session/clock.hpp"

#include <thread>

namespace trajtalk {

SystemClock::SystemClock()
    : epoch_offset_(std::chrono::duration<double>(std::chrono::system_clock::now().time_since_epoch()).count()),
      start_(std::chrono::steady_clock::now()) {}

double SystemClock::now() {
    return epoch_offset_ + std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

void SystemClock::sleep_for(double seconds) {
    if (seconds > 0) std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
}

double ManualClock::now() {
    std::lock_guard lock(mu_);
    return now_;
}

void ManualClock::advance(double seconds) {
    std::lock_guard lock(mu_);
    if (seconds > 0) now_ += seconds;
}

}  // namespace trajtalk
