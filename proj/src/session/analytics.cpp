#include "trajtalk/session/analytics.hpp"

#include <algorithm>

#include "trajtalk/error.hpp"

namespace trajtalk {

double ccdf_at(std::span<const double> fractions, double p) {
    if (fractions.empty()) return 0.0;
    const auto after = std::count_if(fractions.begin(), fractions.end(), [p](double f) { return f > p; });
    return static_cast<double>(after) / static_cast<double>(fractions.size());
}

std::vector<CcdfPoint> ccdf_remaining(std::span<const double> fractions) {
    for (double f : fractions)
        if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("progress fractions must lie in [0, 1]");
    if (fractions.empty()) return {};
    std::vector<double> points(fractions.begin(), fractions.end());
    points.push_back(0.0);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    std::vector<CcdfPoint> curve;
    curve.reserve(points.size());
    for (double p : points) curve.push_back({p, ccdf_at(fractions, p)});
    return curve;
}

std::vector<double> modification_progress(std::span<const Event> log) {
    std::vector<double> out;
    for (const auto& e : log)
        if (e.kind == EventKind::modification) out.push_back(e.progress);
    return out;
}

std::optional<LatencyStats> latency_stats(std::span<const Event> log) {
    LatencyStats s;
    for (const auto& e : log) {
        if (e.kind != EventKind::modification || !e.latency) continue;
        s.mean_interpret_s += e.latency->interpret_s;
        s.mean_apply_s += e.latency->apply_s;
        ++s.count;
    }
    if (s.count == 0) return std::nullopt;
    const auto n = static_cast<double>(s.count);
    s.mean_interpret_s /= n;
    s.mean_apply_s /= n;
    s.mean_total_s = s.mean_interpret_s + s.mean_apply_s;
    return s;
}

}  // namespace trajtalk
