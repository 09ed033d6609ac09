#include "decaylab/epstein.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace decaylab {

namespace {

struct Frame2 {
    Vec3 fx, fy; // d(image)/dx, d(image)/dy in Euclidean coordinates
};

Vec3 as_vec(const HalfSpacePoint& p) { return {p.w.real(), p.w.imag(), p.x3}; }

// 5-point central first derivative, O(h^4).
Vec3 fd1_5(const Vec3& m2, const Vec3& m1, const Vec3& p1, const Vec3& p2, double h) {
    Vec3 r;
    for (int k = 0; k < 3; ++k) r[k] = (m2[k] - 8.0 * m1[k] + 8.0 * p1[k] - p2[k]) / (12.0 * h);
    return r;
}

// 5-point central second derivative, O(h^4).
Vec3 fd2_5(const Vec3& m2, const Vec3& m1, const Vec3& c, const Vec3& p1, const Vec3& p2,
           double h) {
    Vec3 r;
    for (int k = 0; k < 3; ++k)
        r[k] = (-m2[k] + 16.0 * m1[k] - 30.0 * c[k] + 16.0 * p1[k] - p2[k]) / (12.0 * h * h);
    return r;
}

// Ambient covariant correction for the half-space metric delta/x3^2:
// Gamma^k_ij = d_ik f_j + d_jk f_i - d_ij f_k with f = (0, 0, -1/x3).
Vec3 covariant_correction(const Vec3& u, const Vec3& v, double x3) {
    const double f3 = -1.0 / x3;
    Vec3 r;
    r.x = f3 * (u.x * v.z + u.z * v.x);
    r.y = f3 * (u.y * v.z + u.z * v.y);
    r.z = f3 * (u.z * v.z - u.x * v.x - u.y * v.y);
    return r;
}

} // namespace

HalfSpacePoint epstein_immersion(const UnivalentMap& map, const FermiPoint& p) {
    return mobius_act_halfspace(osculating_mobius(map, p.z), iota(p));
}

double dphi_deviation(const UnivalentMap& map, const FermiPoint& p) {
    return scaled_schwarzian_norm(map, p.z) / (std::exp(p.t) * std::cosh(p.t));
}

std::array<double, 3> dphi_eigenvalues(const UnivalentMap& map, const FermiPoint& p) {
    const double q = dphi_deviation(map, p);
    return {1.0 + q, 1.0 - q, 1.0};
}

PrincipalCurvatures principal_curvatures_from_norm(double norm_s, double t) {
    const double e2t = std::exp(-2.0 * t);
    const double cp = (1.0 + 2.0 * norm_s) * e2t;
    const double cm = (1.0 - 2.0 * norm_s) * e2t;
    if (std::abs(1.0 + cp) < 1e-14 || std::abs(1.0 + cm) < 1e-14)
        throw std::domain_error("principal_curvatures: denominator vanishes at t = " +
                                std::to_string(t));
    return {(1.0 - cp) / (1.0 + cp), (1.0 - cm) / (1.0 + cm)};
}

PrincipalCurvatures principal_curvatures(const UnivalentMap& map, const FermiPoint& p) {
    return principal_curvatures_from_norm(scaled_schwarzian_norm(map, p.z), p.t);
}

double schwarzian_argument_angle(const UnivalentMap& map, const DiskPoint& z) {
    const Complex s = schwarzian(map, z);
    const MobiusTransform psi = disk_mobius_to(z);
    // theta_z = arg(S phi(z)) - arg(psi_z'(0)^2); the derivative of psi_z at
    // zero is positive real, so the subtracted term vanishes, but it is kept
    // so the computation follows its definition.
    const Complex dpsi0 = psi.jet(Complex(0.0, 0.0)).f1;
    double theta = std::arg(s) - std::arg(dpsi0 * dpsi0);
    if (theta > M_PI) theta -= 2.0 * M_PI;
    if (theta <= -M_PI) theta += 2.0 * M_PI;
    return theta;
}

double frame_angle(const UnivalentMap& map, const DiskPoint& z) {
    // quadratic differentials rotate by twice the coordinate angle, so the
    // eigenframe sits at the half-angle that makes S dz^2 negative real
    double alpha = -(schwarzian_argument_angle(map, z) + M_PI) / 2.0;
    if (alpha <= -M_PI / 2.0) alpha += M_PI; // a direction, mod pi
    return alpha;
}

ShapeOperatorSample principal_curvatures_numeric(const UnivalentMap& map, const FermiPoint& p,
                                                 double step) {
    const double q = dphi_deviation(map, p);
    if (q >= 1.0) throw NonImmersedError(1.0 - q);
    const double x = p.z.value().real();
    const double y = p.z.value().imag();
    if (std::hypot(x, y) + 2.0 * step >= 1.0 - DiskPoint::kBoundaryMargin)
        throw StencilError("principal_curvatures_numeric: stencil leaves the disk");

    auto ev = [&](double dx, double dy) {
        return as_vec(epstein_immersion(map, FermiPoint(x + dx, y + dy, p.t)));
    };

    const Vec3 c = ev(0, 0);
    const Vec3 xm2 = ev(-2 * step, 0), xm1 = ev(-step, 0), xp1 = ev(step, 0), xp2 = ev(2 * step, 0);
    const Vec3 ym2 = ev(0, -2 * step), ym1 = ev(0, -step), yp1 = ev(0, step), yp2 = ev(0, 2 * step);

    const Vec3 fx = fd1_5(xm2, xm1, xp1, xp2, step);
    const Vec3 fy = fd1_5(ym2, ym1, yp1, yp2, step);
    const Vec3 fxx = fd2_5(xm2, xm1, c, xp1, xp2, step);
    const Vec3 fyy = fd2_5(ym2, ym1, c, yp1, yp2, step);
    const Vec3 fxy = [&] {
        const Vec3 pp = ev(step, step), pm = ev(step, -step);
        const Vec3 mp = ev(-step, step), mm = ev(-step, -step);
        Vec3 r;
        for (int k = 0; k < 3; ++k)
            r[k] = (pp[k] - pm[k] - mp[k] + mm[k]) / (4.0 * step * step);
        return r;
    }();

    const double x3 = c.z;

    // Normal oriented toward t = +inf (away from the center of curvature),
    // detected from the FD derivative of the immersion in t.
    Vec3 n = Vec3::cross(fx, fy);
    const double nn = n.norm();
    if (!(nn > 0.0)) throw std::runtime_error("principal_curvatures_numeric: degenerate tangent");
    n = n * (1.0 / nn);
    {
        const Vec3 tp = as_vec(epstein_immersion(map, FermiPoint(x, y, p.t + step)));
        const Vec3 tm = as_vec(epstein_immersion(map, FermiPoint(x, y, p.t - step)));
        const Vec3 ft{(tp.x - tm.x) / (2 * step), (tp.y - tm.y) / (2 * step),
                      (tp.z - tm.z) / (2 * step)};
        if (n.dot(ft) < 0.0) n = n * -1.0;
    }

    // First and second fundamental forms; II(X,Y) = -<nabla_X Y, N>.
    const double i11 = fx.dot(fx) / (x3 * x3);
    const double i12 = fx.dot(fy) / (x3 * x3);
    const double i22 = fy.dot(fy) / (x3 * x3);
    auto ii = [&](const Vec3& second, const Vec3& u, const Vec3& v) {
        const Vec3 cov = second + covariant_correction(u, v, x3);
        return -cov.dot(n) / x3;
    };
    const double b11 = ii(fxx, fx, fx);
    const double b12 = ii(fxy, fx, fy);
    const double b22 = ii(fyy, fy, fy);

    // Shape operator A = I^{-1} II.
    const double det_i = i11 * i22 - i12 * i12;
    if (!(det_i > 0.0))
        throw std::runtime_error("principal_curvatures_numeric: singular first fundamental form");
    const double a11 = (i22 * b11 - i12 * b12) / det_i;
    const double a12 = (i22 * b12 - i12 * b22) / det_i;
    const double a21 = (i11 * b12 - i12 * b11) / det_i;
    const double a22 = (i11 * b22 - i12 * b12) / det_i;

    const double tr = a11 + a22;
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * (a11 * a22 - a12 * a21)));
    const double k1 = 0.5 * (tr + disc);
    const double k2 = 0.5 * (tr - disc);

    auto eigvec = [&](double k) {
        // row of (A - k I) with the larger norm gives the orthogonal direction
        const double r1x = a11 - k, r1y = a12;
        const double r2x = a21, r2y = a22 - k;
        double vx, vy;
        if (r1x * r1x + r1y * r1y >= r2x * r2x + r2y * r2y) {
            vx = -r1y;
            vy = r1x;
        } else {
            vx = -r2y;
            vy = r2x;
        }
        const double nv = std::hypot(vx, vy);
        return std::array<double, 2>{nv > 0 ? vx / nv : 1.0, nv > 0 ? vy / nv : 0.0};
    };

    const auto v1 = eigvec(k1);
    const auto v2 = eigvec(k2);

    ShapeOperatorSample out{};
    double theta = 0.0;
    try {
        theta = frame_angle(map, p.z);
    } catch (const std::exception&) {
        theta = 0.0; // umbilic: pairing is immaterial
    }
    const double ex = std::cos(theta), ey = std::sin(theta);
    const double align1 = std::abs(v1[0] * ex + v1[1] * ey);
    const double align2 = std::abs(v2[0] * ex + v2[1] * ey);
    if (align1 >= align2) {
        out.kappa_e1 = k1;
        out.kappa_e2 = k2;
        out.dir_e1_x = v1[0];
        out.dir_e1_y = v1[1];
    } else {
        out.kappa_e1 = k2;
        out.kappa_e2 = k1;
        out.dir_e1_x = v2[0];
        out.dir_e1_y = v2[1];
    }
    return out;
}

Complex gauss_map(const UnivalentMap& map, const FermiPoint& p) {
    const PrincipalCurvatures k = principal_curvatures(map, p);
    if (!(k.kappa_plus > 0.0 && k.kappa_minus > 0.0))
        throw std::domain_error("gauss_map: leaf is not locally convex at t = " +
                                std::to_string(p.t));
    return map.value(p.z);
}

Complex gauss_map_ray_trace(const UnivalentMap& map, const FermiPoint& p, double step) {
    const double x = p.z.value().real();
    const double y = p.z.value().imag();
    auto ev = [&](double dx, double dy, double dt) {
        return as_vec(epstein_immersion(map, FermiPoint(x + dx, y + dy, p.t + dt)));
    };
    const Vec3 c = ev(0, 0, 0);
    const Vec3 fx = fd1_5(ev(-2 * step, 0, 0), ev(-step, 0, 0), ev(step, 0, 0),
                          ev(2 * step, 0, 0), step);
    const Vec3 fy = fd1_5(ev(0, -2 * step, 0), ev(0, -step, 0), ev(0, step, 0),
                          ev(0, 2 * step, 0), step);
    Vec3 n = Vec3::cross(fx, fy);
    const Vec3 tp = ev(0, 0, step), tm = ev(0, 0, -step);
    const Vec3 ft{(tp.x - tm.x) / (2 * step), (tp.y - tm.y) / (2 * step),
                  (tp.z - tm.z) / (2 * step)};
    if (n.dot(ft) < 0.0) n = n * -1.0;
    return geodesic_ray_endpoint(HalfSpacePoint(Complex(c.x, c.y), c.z), Complex(n.x, n.y), n.z);
}

double dphi_determinant_numeric(const UnivalentMap& map, const FermiPoint& p, double step) {
    const double x = p.z.value().real();
    const double y = p.z.value().imag();
    auto ev = [&](double dx, double dy, double dt) {
        return as_vec(epstein_immersion(map, FermiPoint(x + dx, y + dy, p.t + dt)));
    };
    Vec3 col[3];
    for (int dir = 0; dir < 3; ++dir) {
        const double dx = dir == 0 ? step : 0.0;
        const double dy = dir == 1 ? step : 0.0;
        const double dt = dir == 2 ? step : 0.0;
        const Vec3 plus = ev(dx, dy, dt);
        const Vec3 minus = ev(-dx, -dy, -dt);
        col[dir] = (plus - minus) * (1.0 / (2.0 * step));
    }
    const Vec3 c = ev(0, 0, 0);
    // (x, y, t) maps to a negatively oriented Euclidean frame (d/dt points
    // down toward the boundary), so the volume factor is the magnitude.
    const double det_coords = std::abs(Vec3::cross(col[0], col[1]).dot(col[2]));
    const double lam = hyperbolic_density(p.z);
    const double ct = std::cosh(p.t);
    // source volume density lambda^2 cosh^2 t, target density x3^{-3}
    return det_coords / (c.z * c.z * c.z) / (lam * lam * ct * ct);
}

EpsteinSample make_epstein_sample(const UnivalentMap& map, const FermiPoint& p) {
    EpsteinSample s{};
    s.z_re = p.z.value().real();
    s.z_im = p.z.value().imag();
    s.t = p.t;
    s.norm_s = scaled_schwarzian_norm(map, p.z);
    const double q = s.norm_s / (std::exp(p.t) * std::cosh(p.t));
    s.eig_plus = 1.0 + q;
    s.eig_minus = 1.0 - q;
    s.immersed = s.eig_minus > 0.0 && p.t > kImmersionThreshold;
    try {
        const PrincipalCurvatures k = principal_curvatures_from_norm(s.norm_s, p.t);
        s.kappa_plus = k.kappa_plus;
        s.kappa_minus = k.kappa_minus;
        s.locally_convex = k.kappa_plus > 0.0 && k.kappa_minus > 0.0;
    } catch (const std::domain_error&) {
        s.kappa_plus = std::numeric_limits<double>::quiet_NaN();
        s.kappa_minus = std::numeric_limits<double>::quiet_NaN();
        s.locally_convex = false;
    }
    return s;
}

std::string epstein_csv_header() {
    return "z_re,z_im,t,norm_S,eig_plus,eig_minus,kappa_plus,kappa_minus,immersed,convex";
}

std::string epstein_csv_row(const EpsteinSample& s) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d",
                  s.z_re, s.z_im, s.t, s.norm_s, s.eig_plus, s.eig_minus, s.kappa_plus,
                  s.kappa_minus, s.immersed ? 1 : 0, s.locally_convex ? 1 : 0);
    return buf;
}

} // namespace decaylab
