#pragma once

#include <span>

#include "trajtalk/apply/params.hpp"
#include "trajtalk/core/vec3.hpp"

namespace trajtalk {

// Landmark position with its attract multiplier (k > 1 attracts, 0 < k < 1 repels).
struct PointSource {
    Vec3 pos;
    double k{1};
};

// Scale applied at distance d from a landmark whose multiplier is k:
// 1 + (k - 1) * exp(-d^2 / (2 sigma^2)). Equals k at the landmark, tends to 1 far away.
[[nodiscard]] double gaussian_factor(double k, double d, double sigma) noexcept;

// Inverse-distance weighted sum of quadratic-potential pulls:
//   -sum_j (w_j / sum w) * k_j * k_p * (x - p_j),  w_j = 1 / max(|p_j - x|, eps_d)
[[nodiscard]] Vec3 attract_displacement(const Vec3& x, std::span<const PointSource> attractors,
                                        const ApplyParams& params) noexcept;

// Range-limited repulsion, summed over sources. Inside rho0 each source pushes
// along (x - p)/d with magnitude (eta / k) * (1/d - 1/rho0) / d^2, d floored at eps_d.
// Uncapped; callers bound the step.
[[nodiscard]] Vec3 repulse_displacement(const Vec3& x, std::span<const PointSource> repulsors,
                                        const ApplyParams& params) noexcept;

// Rescales d to norm max_norm when longer.
[[nodiscard]] Vec3 cap_norm(const Vec3& d, double max_norm) noexcept;

}  // namespace trajtalk
