#pragma once

#include <array>
#include <string>

#include "decaylab/hyperbolic.hpp"

namespace decaylab {

/// The Schwarzian-driven immersion Phi(z,t) = M_{phi(z)}(iota(z,t)), with
/// the osculating Mobius transformation acting through its Poincare
/// extension. Phi(z, +inf) = phi(z).
HalfSpacePoint epstein_immersion(const UnivalentMap& map, const FermiPoint& p);

/// q = ||S phi(z)|| / (e^t cosh t), the off-unit part of D Phi.
double dphi_deviation(const UnivalentMap& map, const FermiPoint& p);

/// Eigenvalues (1 + q, 1 - q, 1) of D Phi in its adapted orthonormal frames.
std::array<double, 3> dphi_eigenvalues(const UnivalentMap& map, const FermiPoint& p);

constexpr double kImmersionThreshold = 0.34657359027997264; // log sqrt(2)
constexpr double kConvexityThreshold = 0.6931471805599453;  // log 2

struct PrincipalCurvatures {
    double kappa_plus;  // branch with coefficient 1 + 2||S||, along e1
    double kappa_minus; // branch with coefficient 1 - 2||S||, along e2
};

/// Principal curvatures of the t-leaf,
///   kappa_pm = (1 - (1 pm 2||S||) e^{-2t}) / (1 + (1 pm 2||S||) e^{-2t}).
///
/// kappa_plus is carried by the e1 direction (the one D Phi stretches by
/// 1 + q); the shape-operator oracle confirms this association. The remark
/// in the source literature that the datum with coefficient -1 gives coth t
/// attaches to kappa_minus under this labeling.
PrincipalCurvatures principal_curvatures(const UnivalentMap& map, const FermiPoint& p);
PrincipalCurvatures principal_curvatures_from_norm(double norm_s, double t);

struct ShapeOperatorSample {
    double kappa_e1; // eigenvalue whose principal direction aligns with e1
    double kappa_e2;
    double dir_e1_x, dir_e1_y; // measured principal direction for kappa_e1
};

/// Principal curvatures from the finite-difference shape operator of the
/// immersed leaf: fundamental forms from 5-point stencils of the immersion,
/// normal oriented away from the center of curvature (the t -> +inf side).
/// Fully independent of the closed forms above.
ShapeOperatorSample principal_curvatures_numeric(const UnivalentMap& map, const FermiPoint& p,
                                                 double step = 1e-4);

/// theta_z = arg(S phi(z)) - arg(psi_z'(0)^2), the printed rotation datum.
/// For the rotation-free psi_z the subtracted term vanishes.
double schwarzian_argument_angle(const UnivalentMap& map, const DiskPoint& z);

/// Direction of the e1 eigenframe axis against the coordinate axes: the
/// half-angle -(theta_z + pi)/2 at which S phi(z) dz^2 is negative real.
/// The printed frame display carries the full angle theta_z, which the
/// finite-difference pullback of the immersion contradicts at points with
/// arg S != pi; the half-angle is what the oracle confirms.
double frame_angle(const UnivalentMap& map, const DiskPoint& z);

/// Gauss map of a locally convex leaf. Equals phi(z) in closed form.
Complex gauss_map(const UnivalentMap& map, const FermiPoint& p);

/// Gauss map by ray tracing: FD tangent plane, outward normal, closed-form
/// geodesic endpoint. The independent check of the factorization phi o p_t.
Complex gauss_map_ray_trace(const UnivalentMap& map, const FermiPoint& p, double step = 1e-4);

/// det D Phi in adapted frames computed from the FD Jacobian of the
/// immersion; cross-checks the closed form 1 - q^2.
double dphi_determinant_numeric(const UnivalentMap& map, const FermiPoint& p, double step = 1e-5);

struct EpsteinSample {
    double z_re, z_im, t;
    double norm_s;
    double eig_plus, eig_minus;
    double kappa_plus, kappa_minus; // NaN where Eq-(5) denominators vanish
    bool immersed;
    bool locally_convex;
};

EpsteinSample make_epstein_sample(const UnivalentMap& map, const FermiPoint& p);

std::string epstein_csv_header();
std::string epstein_csv_row(const EpsteinSample& s);

} // namespace decaylab
