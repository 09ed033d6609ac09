#pragma once

#include <span>

#include "decaylab/epstein.hpp"

namespace decaylab {

/// C^2 bump profile: s = 1 for t <= n, s = 0 for t >= n + 1, quintic
/// smoothstep in between so the first two derivatives vanish at both ends
/// and its Sobolev norms do not depend on n.
struct BumpValues {
    double s, ds, dss;
};

BumpValues bump(double t, double n);

/// Rotation of the D Phi eigenframe against the coordinate axes,
/// theta_z = arg(S phi(z)) - arg(psi_z'(0)^2), in (-pi, pi].
/// Undefined (throws) where the Schwarzian vanishes.
double theta_z(const UnivalentMap& map, const DiskPoint& z);

/// Closed-form pullback metric h = Phi^* g in the (x, y, t) chart:
///   h = g + lambda^2 cosh^2 t * q * P on the (x,y) block,
///   P = [[2 cos 2theta + q, 2 sin 2theta], [2 sin 2theta, -2 cos 2theta + q]],
/// with q = ||S phi(z)|| / (e^t cosh t). Exactly g for Mobius-type maps.
SymMatrix3 pullback_metric_h(const UnivalentMap& map, const FermiPoint& p);

enum class BumpProfile { QuinticSmoothstep };

struct GluedMetricSpec {
    UnivalentMap map;
    double n = 4.0; // gluing depth
    BumpProfile profile = BumpProfile::QuinticSmoothstep;

    GluedMetricSpec(UnivalentMap m, double depth, BumpProfile prof = BumpProfile::QuinticSmoothstep)
        : map(std::move(m)), n(depth), profile(prof) {
        if (!(n >= 1.0)) throw std::domain_error("GluedMetricSpec: n >= 1 required");
    }
};

/// The interpolated metric eta = (1 - s(t)) g + s(t) h. Identically h on
/// t <= n and identically g on t >= n + 1 (bit-exact plateaus).
SymMatrix3 glued_metric_eta(const GluedMetricSpec& spec, const FermiPoint& p);

enum class ChartDirection { XytToU, UToXyt };

/// Transport of a bilinear form between the (x,y,t) chart and the
/// coordinates u1 = cosh(t) x, u2 = cosh(t) y, u3 = t. The full Jacobian is
/// kept, including the dt cross terms at x, y != 0.
SymMatrix3 chart_convert(const SymMatrix3& m, const FermiPoint& p, ChartDirection direction);

struct BilipschitzReport {
    double max_distortion = 1.0;
    double jac_min = 1.0;
    double jac_max = 1.0;
};

/// Distortion and Jacobian range of the identity (g) -> (eta) over a grid.
/// Both are computed from the relative difference g^{-1}(eta - g), which
/// keeps the e^{-4n}-sized Jacobian residuals clear of cancellation noise.
BilipschitzReport bilipschitz_bounds(const GluedMetricSpec& spec,
                                     std::span<const FermiPoint> grid);

/// max_ij |eta_ij - g_ij| at p in the u chart (the quantity bounded by the
/// metric-proximity estimate).
double metric_difference_ucoords(const GluedMetricSpec& spec, const FermiPoint& p);

/// Pointwise distortion - 1 and Jacobian - 1 of (g) -> (eta), cancellation-safe.
struct PointDistortion {
    double distortion_minus_1;
    double jacobian_minus_1;
};
PointDistortion point_distortion(const GluedMetricSpec& spec, const FermiPoint& p);

} // namespace decaylab
