#include "trajtalk/apply/fields.hpp"

#include <algorithm>
#include <cmath>

namespace trajtalk {

double gaussian_factor(double k, double d, double sigma) noexcept {
    return 1.0 + (k - 1.0) * std::exp(-(d * d) / (2.0 * sigma * sigma));
}

Vec3 attract_displacement(const Vec3& x, std::span<const PointSource> attractors, const ApplyParams& params) noexcept {
    if (attractors.empty()) return {};
    double weight_sum = 0;
    Vec3 weighted_grad;
    for (const auto& a : attractors) {
        const double w = 1.0 / std::max(distance(a.pos, x), params.eps_d);
        weight_sum += w;
        weighted_grad += (a.k * params.k_p * w) * (x - a.pos);
    }
    return weighted_grad * (-1.0 / weight_sum);
}

Vec3 repulse_displacement(const Vec3& x, std::span<const PointSource> repulsors, const ApplyParams& params) noexcept {
    Vec3 total;
    for (const auto& r : repulsors) {
        const Vec3 away = x - r.pos;
        const double raw_d = away.norm();
        if (raw_d > params.rho0 || raw_d == 0.0) continue;
        const double d = std::max(raw_d, params.eps_d);
        const double magnitude = (params.eta / r.k) * (1.0 / d - 1.0 / params.rho0) / (d * d);
        total += away * (magnitude / raw_d);
    }
    return total;
}

Vec3 cap_norm(const Vec3& d, double max_norm) noexcept {
    const double n = d.norm();
    if (n <= max_norm || n == 0.0) return d;
    return d * (max_norm / n);
}

}  // namespace trajtalk
