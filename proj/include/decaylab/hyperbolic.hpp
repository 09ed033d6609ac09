#pragma once

#include <functional>

#include "decaylab/linalg.hpp"
#include "decaylab/maps.hpp"

namespace decaylab {

/// Point of the Fermi chart Delta x R: z in the disk, t the signed distance
/// from the equatorial plane.
struct FermiPoint {
    DiskPoint z;
    double t;

    FermiPoint(DiskPoint z_, double t_) : z(z_), t(t_) {
        if (!std::isfinite(t)) throw std::domain_error("FermiPoint: t must be finite");
    }
    FermiPoint(double x, double y, double t_) : FermiPoint(DiskPoint(x, y), t_) {}
};

/// Point of the upper half-space model, w = x1 + i x2, x3 > 0.
struct HalfSpacePoint {
    Complex w;
    double x3;

    HalfSpacePoint(Complex w_, double x3_) : w(w_), x3(x3_) {
        if (!(x3 > 0.0)) throw std::domain_error("HalfSpacePoint: x3 must be positive");
    }
};

/// Fermi metric: diag(lambda^2 cosh^2 t, lambda^2 cosh^2 t, 1).
SymMatrix3 fermi_metric(const FermiPoint& p);

/// Poincare extension of a normalized Mobius transformation acting on the
/// upper half-space, written out in real arithmetic.
HalfSpacePoint mobius_act_halfspace(const MobiusTransform& m, const HalfSpacePoint& p);

double halfspace_distance(const HalfSpacePoint& p, const HalfSpacePoint& q);

/// The isometry from the Fermi chart onto the half-space model that sends
/// the t = 0 plane to the hemisphere over the unit circle and extends to
/// Delta x {+inf} -> Delta by the identity. Built by equivariance:
/// iota(z, t) = psi_z . iota(0, t) with iota(0, t) = (0, e^{-t}).
HalfSpacePoint iota(const FermiPoint& p);

/// Sign convention: at t = +inf the coordinate field d/dt points out of
/// hyperbolic space, so outward normal rays run toward increasing t.
inline constexpr double kOutwardNormalSign = +1.0;

struct PullbackResult {
    SymMatrix3 metric;
    double jacobian_condition; // condition estimate of the FD Jacobian
    bool near_singular;        // condition > 1e8
};

/// Finite-difference pullback of the half-space metric through an arbitrary
/// chart map. Used as the oracle for every closed-form metric downstream.
PullbackResult pullback_metric_numeric(
    const std::function<HalfSpacePoint(const FermiPoint&)>& fmap, const FermiPoint& p,
    double step);

/// Ideal endpoint of the geodesic ray from p with (Euclidean) initial
/// direction (dir_w, dir3). Rays are vertical lines or circular arcs
/// orthogonal to C, so the endpoint has a closed form. A ray escaping to
/// infinity throws.
Complex geodesic_ray_endpoint(const HalfSpacePoint& p, Complex dir_w, double dir3);

} // namespace decaylab
