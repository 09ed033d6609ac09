#include "decaylab/gluing.hpp"

#include <cmath>

namespace decaylab {

BumpValues bump(double t, double n) {
    const double u = t - n;
    if (u <= 0.0) return {1.0, 0.0, 0.0};
    if (u >= 1.0) return {0.0, 0.0, 0.0};
    // 1 - (10u^3 - 15u^4 + 6u^5)
    const double u2 = u * u;
    return {1.0 - u2 * u * (10.0 - 15.0 * u + 6.0 * u2),
            -30.0 * u2 * (1.0 - u) * (1.0 - u),
            -60.0 * u * (1.0 - u) * (1.0 - 2.0 * u)};
}

double theta_z(const UnivalentMap& map, const DiskPoint& z) {
    if (std::abs(schwarzian(map, z)) < 1e-14)
        throw ZeroSchwarzianError("theta_z: Schwarzian vanishes, angle undefined");
    return schwarzian_argument_angle(map, z);
}

namespace {

// eta - g in the (x,y,t) chart, divided by lambda^2 cosh^2 t: the dimension-
// less correction s * q * P restricted to the (x,y) block. Returns the three
// distinct entries (exx, exy, eyy); the t row and column vanish identically.
struct BlockCorrection {
    double exx = 0.0, exy = 0.0, eyy = 0.0;
    double q = 0.0, s = 1.0;
};

BlockCorrection correction_block(const UnivalentMap& map, const FermiPoint& p, double s) {
    BlockCorrection c;
    c.s = s;
    if (map.is_mobius_type() || s == 0.0) return c;
    const Complex sch = schwarzian(map, p.z);
    const double lam = hyperbolic_density(p.z);
    const double norm_s = std::abs(sch) / (lam * lam);
    if (norm_s == 0.0) return c;
    const double q = norm_s / (std::exp(p.t) * std::cosh(p.t));
    c.q = q;
    if (1.0 - q <= 1e-12) {
        const double lc = lam * std::cosh(p.t);
        throw NonImmersedError(lc * lc * (1.0 - q) * (1.0 - q));
    }
    // The coefficient below vanishes continuously with the Schwarzian, so
    // zeros of S are not special here. The rotation enters through twice the
    // eigenframe half-angle; against the printed display this negates the
    // cosine term, which is what the FD pullback of the immersion measures.
    const double alpha = frame_angle(map, p.z);
    const double c2 = std::cos(2.0 * alpha), s2 = std::sin(2.0 * alpha);
    c.exx = s * q * (2.0 * c2 + q);
    c.eyy = s * q * (-2.0 * c2 + q);
    c.exy = s * q * 2.0 * s2;
    return c;
}

SymMatrix3 assemble_from_correction(const FermiPoint& p, const BlockCorrection& c) {
    const double lam = hyperbolic_density(p.z);
    const double ct = std::cosh(p.t);
    const double base = lam * lam * ct * ct;
    SymMatrix3 m = SymMatrix3::diagonal(base * (1.0 + c.exx), base * (1.0 + c.eyy), 1.0);
    m(0, 1) = base * c.exy;
    return m;
}

} // namespace

SymMatrix3 pullback_metric_h(const UnivalentMap& map, const FermiPoint& p) {
    return assemble_from_correction(p, correction_block(map, p, 1.0));
}

SymMatrix3 glued_metric_eta(const GluedMetricSpec& spec, const FermiPoint& p) {
    const double s = bump(p.t, spec.n).s;
    if (s == 0.0) return fermi_metric(p);
    if (s == 1.0) return pullback_metric_h(spec.map, p);
    return assemble_from_correction(p, correction_block(spec.map, p, s));
}

SymMatrix3 chart_convert(const SymMatrix3& m, const FermiPoint& p, ChartDirection direction) {
    const double x = p.z.value().real();
    const double y = p.z.value().imag();
    const double ch = std::cosh(p.t), sh = std::sinh(p.t);

    // J = d(u)/d(x,y,t); u-chart values of a form transform by J^{-T} m J^{-1}.
    double J[3][3] = {{ch, 0.0, x * sh}, {0.0, ch, y * sh}, {0.0, 0.0, 1.0}};
    if (direction == ChartDirection::UToXyt) {
        // transforming back means conjugating by J itself
        SymMatrix3 out;
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                double acc = 0.0;
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l) acc += J[k][i] * m(k, l) * J[l][j];
                out(i, j) = acc;
            }
        return out;
    }
    // inverse of the upper-triangular J
    double Ji[3][3] = {{1.0 / ch, 0.0, -x * sh / ch},
                       {0.0, 1.0 / ch, -y * sh / ch},
                       {0.0, 0.0, 1.0}};
    SymMatrix3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) acc += Ji[k][i] * m(k, l) * Ji[l][j];
            out(i, j) = acc;
        }
    return out;
}

PointDistortion point_distortion(const GluedMetricSpec& spec, const FermiPoint& p) {
    const double s = bump(p.t, spec.n).s;
    const BlockCorrection c = correction_block(spec.map, p, s);

    // Eigenvalues of the relative correction E on the (x,y) block.
    const double tr = c.exx + c.eyy;
    const double det = c.exx * c.eyy - c.exy * c.exy;
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    const double mu_max = 0.5 * (tr + disc);
    const double mu_min = 0.5 * (tr - disc);

    auto sqrt1p_m1 = [](double v) { return v / (std::sqrt(1.0 + v) + 1.0); };

    const double stretch = sqrt1p_m1(mu_max);              // sqrt(1+mu_max) - 1
    const double shrink = sqrt1p_m1(mu_min);                // sqrt(1+mu_min) - 1 <= 0
    const double inv_shrink = -shrink / (1.0 + shrink);     // 1/sqrt(1+mu_min) - 1
    PointDistortion out;
    out.distortion_minus_1 = std::max(stretch, inv_shrink);
    out.jacobian_minus_1 = sqrt1p_m1(tr + det); // det(I + E) = 1 + tr + det on the block
    return out;
}

BilipschitzReport bilipschitz_bounds(const GluedMetricSpec& spec,
                                     std::span<const FermiPoint> grid) {
    if (grid.empty()) throw std::invalid_argument("bilipschitz_bounds: empty grid");
    BilipschitzReport r;
    double jac_min_m1 = 0.0, jac_max_m1 = 0.0, dist_m1 = 0.0;
    for (const FermiPoint& p : grid) {
        const PointDistortion d = point_distortion(spec, p);
        dist_m1 = std::max(dist_m1, d.distortion_minus_1);
        jac_min_m1 = std::min(jac_min_m1, d.jacobian_minus_1);
        jac_max_m1 = std::max(jac_max_m1, d.jacobian_minus_1);
    }
    r.max_distortion = 1.0 + dist_m1;
    r.jac_min = 1.0 + jac_min_m1;
    r.jac_max = 1.0 + jac_max_m1;
    return r;
}

double metric_difference_ucoords(const GluedMetricSpec& spec, const FermiPoint& p) {
    // The proximity estimate lives in u coordinates centered at the point
    // under inspection (the normalized picture with w = 0), where the chart
    // Jacobian is diag(cosh t, cosh t, 1) with no dt cross terms. A u chart
    // based elsewhere mixes the cosh^2 t growth of the xy block into the
    // t components and hides the decay.
    const SymMatrix3 diff = glued_metric_eta(spec, p) - fermi_metric(p);
    const double inv_ch = 1.0 / std::cosh(p.t);
    SymMatrix3 out;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            const double scale = (i < 2 ? inv_ch : 1.0) * (j < 2 ? inv_ch : 1.0);
            out(i, j) = diff(i, j) * scale;
        }
    return out.max_abs();
}

} // namespace decaylab
