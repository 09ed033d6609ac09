#pragma once

#include <functional>
#include <string>

#include "decaylab/gluing.hpp"
#include "decaylab/quadrature.hpp"

namespace decaylab {

/// A smooth metric field in the (x, y, t) chart. Evaluation must be
/// deterministic and SPD wherever the engine queries it.
struct MetricField {
    std::function<SymMatrix3(double x, double y, double t)> eval;
    std::string chart = "xyt";
};

MetricField fermi_field();
MetricField euclidean_field();
MetricField pullback_h_field(const UnivalentMap& map);
MetricField eta_field(const GluedMetricSpec& spec);
/// Stereographic coordinate patch of the round 3-sphere of radius 1
/// (sectional curvature +1); the sign-control metric.
MetricField sphere_patch_field();

/// Finite-difference step policy. The outer step differentiates the
/// Christoffel symbols inside the Ricci assembly; both shrink together
/// under Richardson extrapolation. Steps are uniform in the chart: the
/// fields' coordinate-scale variation does not grow with t, and shrinking
/// the x, y steps with cosh t would amplify second-difference roundoff
/// past the e^{-2n} signals the sweeps measure.
struct FdSteps {
    double christoffel = 1e-3;
    double outer_factor = 3.0;
    bool richardson = true;

    double outer() const { return christoffel * outer_factor; }
};

struct Christoffels {
    // symbols[l][i][j] = Gamma^l_{ij}, symmetric in (i, j)
    double symbols[3][3][3] = {};
};

/// Gamma^l_ij = (1/2) w^{kl} (d_i w_kj + d_j w_ik - d_k w_ij) with central
/// differences of the metric.
Christoffels christoffel(const MetricField& field, double x, double y, double t, double step);

/// Ricci tensor R_ij = d_l Gamma^l_ij - d_j Gamma^l_il + Gamma^l_ij
/// Gamma^m_lm - Gamma^m_il Gamma^l_jm. Two-level Richardson extrapolation
/// of the whole assembly is on by default; it is what keeps the truncation
/// error under the exponentially small curvature defects at large n.
SymMatrix3 ricci(const MetricField& field, double x, double y, double t,
                 const FdSteps& steps = {});

/// Ricci as a raw quadratic form on a tangent vector.
double ricci_quadratic(const MetricField& field, double x, double y, double t, const Vec3& u,
                       const FdSteps& steps = {});

/// Sectional curvature of the plane spanned by u, v from the dimension-3
/// identity 2K(u,v) = Ric(u) - Ric(w) + Ric(v) over an orthonormalized
/// frame. Returns -1 for hyperbolic inputs up to FD error.
double sectional(const MetricField& field, double x, double y, double t, const Vec3& u,
                 const Vec3& v, const FdSteps& steps = {});

/// Same identity applied to a Ricci matrix already in hand.
double sectional_from_ricci(const SymMatrix3& metric, const SymMatrix3& ricci_m, const Vec3& u,
                            const Vec3& v);

/// || Ric + 2 w ||_w = sqrt(w^{ik} w^{jl} T_ij T_kl), T = Ric + 2 w.
double traceless_ricci_norm(const MetricField& field, double x, double y, double t,
                            const FdSteps& steps = {});
double traceless_ricci_norm_from(const SymMatrix3& metric, const SymMatrix3& ricci_m);

double volume_element(const MetricField& field, double x, double y, double t);

/// Integration region: a coordinate box in z times a t slab.
struct Slab {
    double x0, x1;
    double y0, y1;
    double t0, t1;
};

/// Default z box for slab integrals: Euclidean square of side 0.5 centered
/// at 0.2 + 0i, clear of Schwarzian zeros for the whole catalog.
Slab default_slab(double n);

struct SlabIntegrals {
    double raw = 0.0;           // integral over the box
    double hyperbolic_area = 0.0; // area of the z box in the disk metric
    double per_unit_area = 0.0;
    double gauss_bonnet = 0.0;  // extrapolated to a surface of area -2 pi chi
};

/// sqrt of the slab integral of ||Ric + 2 eta||^2 dV, reported per unit
/// hyperbolic area and Gauss-Bonnet normalized for a nominal chi. The
/// parallel path fills the node array with OpenMP and reduces serially in
/// node order, so it is bit-identical to the serial reference.
SlabIntegrals l2_traceless_ricci(const MetricField& field, const Slab& slab,
                                 const QuadratureSpec& quad, const FdSteps& steps = {},
                                 double chi = -2.0, bool parallel = true);

/// Slab volume integral of dV, same reporting conventions.
SlabIntegrals slab_volume(const MetricField& field, const Slab& slab, const QuadratureSpec& quad,
                          double chi = -2.0, bool parallel = true);

/// Hyperbolic area of the z box.
double hyperbolic_box_area(const Slab& slab, const QuadratureSpec& quad);

struct CurvatureSample {
    double x, y, t;
    Christoffels christoffels;
    SymMatrix3 ricci;
    double sectional_xy, sectional_xt, sectional_yt;
    double traceless_norm;
    double vol_element;
};

CurvatureSample make_curvature_sample(const MetricField& field, double x, double y, double t,
                                      const FdSteps& steps = {});

std::string curvature_csv_header();
std::string curvature_csv_row(const CurvatureSample& s);

} // namespace decaylab
