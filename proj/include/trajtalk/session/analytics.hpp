#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "trajtalk/session/events.hpp"

namespace trajtalk {

struct CcdfPoint {
    double progress;
    double remaining;  // share of modifications made strictly after `progress`

    friend bool operator==(const CcdfPoint&, const CcdfPoint&) = default;
};

// Share of fractions strictly greater than p. Empty input gives 0.
[[nodiscard]] double ccdf_at(std::span<const double> fractions, double p);

// Right-continuous step curve of remaining modifications over task progress,
// sampled at 0 and at every distinct event fraction. Empty input -> empty curve.
// Throws ValidationError for fractions outside [0, 1].
[[nodiscard]] std::vector<CcdfPoint> ccdf_remaining(std::span<const double> fractions);

// Progress fractions of the modification events in a log.
[[nodiscard]] std::vector<double> modification_progress(std::span<const Event> log);

struct LatencyStats {
    double mean_interpret_s{0};
    double mean_apply_s{0};
    double mean_total_s{0};
    std::size_t count{0};
};

// Means over modification events' latency breakdowns; nullopt without any.
[[nodiscard]] std::optional<LatencyStats> latency_stats(std::span<const Event> log);

}  // namespace trajtalk
