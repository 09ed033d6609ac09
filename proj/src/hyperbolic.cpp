#include "decaylab/hyperbolic.hpp"

#include <cmath>

namespace decaylab {

SymMatrix3 fermi_metric(const FermiPoint& p) {
    const double lam = hyperbolic_density(p.z);
    const double ct = std::cosh(p.t);
    const double s = lam * lam * ct * ct;
    return SymMatrix3::diagonal(s, s, 1.0);
}

HalfSpacePoint mobius_act_halfspace(const MobiusTransform& m, const HalfSpacePoint& p) {
    // Quaternionic action on w + x3 j, expanded:
    //   denom = |c w + d|^2 + |c|^2 x3^2
    //   w'    = ((a w + b) conj(c w + d) + a conj(c) x3^2) / denom
    //   x3'   = x3 / denom
    const Complex cw_d = m.c() * p.w + m.d();
    const double denom = std::norm(cw_d) + std::norm(m.c()) * p.x3 * p.x3;
    const Complex w_out =
        ((m.a() * p.w + m.b()) * std::conj(cw_d) + m.a() * std::conj(m.c()) * p.x3 * p.x3) / denom;
    const double x3_out = p.x3 / denom;
    if (x3_out < 1e-300)
        throw std::underflow_error("mobius_act_halfspace: image height underflowed");
    return HalfSpacePoint(w_out, x3_out);
}

double halfspace_distance(const HalfSpacePoint& p, const HalfSpacePoint& q) {
    const double num = std::norm(p.w - q.w) + (p.x3 - q.x3) * (p.x3 - q.x3);
    return std::acosh(1.0 + num / (2.0 * p.x3 * q.x3));
}

HalfSpacePoint iota(const FermiPoint& p) {
    const HalfSpacePoint axis_point(Complex(0.0, 0.0), std::exp(-p.t));
    if (p.z.abs() == 0.0) return axis_point;
    return mobius_act_halfspace(disk_mobius_to(p.z), axis_point);
}

PullbackResult pullback_metric_numeric(
    const std::function<HalfSpacePoint(const FermiPoint&)>& fmap, const FermiPoint& p,
    double step) {
    if (!(step > 0.0)) throw std::domain_error("pullback_metric_numeric: step must be positive");
    const double x = p.z.value().real();
    const double y = p.z.value().imag();
    if (std::hypot(x, y) + step >= 1.0 - DiskPoint::kBoundaryMargin)
        throw StencilError("pullback_metric_numeric: stencil leaves the disk");

    auto eval = [&](double dx, double dy, double dt) {
        return fmap(FermiPoint(x + dx, y + dy, p.t + dt));
    };

    // FD Jacobian, columns = d(image)/d(x,y,t) in Euclidean coordinates.
    Vec3 col[3];
    for (int dir = 0; dir < 3; ++dir) {
        const double dx = dir == 0 ? step : 0.0;
        const double dy = dir == 1 ? step : 0.0;
        const double dt = dir == 2 ? step : 0.0;
        const HalfSpacePoint plus = eval(dx, dy, dt);
        const HalfSpacePoint minus = eval(-dx, -dy, -dt);
        col[dir] = Vec3{(plus.w.real() - minus.w.real()) / (2.0 * step),
                        (plus.w.imag() - minus.w.imag()) / (2.0 * step),
                        (plus.x3 - minus.x3) / (2.0 * step)};
    }

    const HalfSpacePoint center = eval(0, 0, 0);
    const double inv_x3sq = 1.0 / (center.x3 * center.x3);

    PullbackResult out;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) out.metric(i, j) = col[i].dot(col[j]) * inv_x3sq;

    // Crude condition estimate of J from column norms vs. the volume it spans.
    const double n0 = col[0].norm(), n1 = col[1].norm(), n2 = col[2].norm();
    const double det = std::abs(Vec3::cross(col[0], col[1]).dot(col[2]));
    const double top = std::max(n0, std::max(n1, n2));
    out.jacobian_condition = det > 0.0 ? top * top * top / det : std::numeric_limits<double>::infinity();
    out.near_singular = !(out.jacobian_condition <= 1e8);
    return out;
}

Complex geodesic_ray_endpoint(const HalfSpacePoint& p, Complex dir_w, double dir3) {
    const double horiz = std::abs(dir_w);
    const double scale = std::hypot(horiz, dir3);
    if (!(scale > 0.0)) throw std::domain_error("geodesic_ray_endpoint: zero direction");
    if (horiz < 1e-14 * scale) {
        if (dir3 > 0.0)
            throw std::domain_error("geodesic_ray_endpoint: vertical ray escapes to infinity");
        return p.w;
    }
    // Circular arc orthogonal to C in the vertical plane through dir_w:
    // in (xi, x3) coordinates along u = dir_w/|dir_w| the center sits at
    // xi_c = x3 dir3/|dir_w| and the forward ideal endpoint at xi_c + r.
    const Complex u = dir_w / horiz;
    const double xi_c = p.x3 * dir3 / horiz;
    const double r = p.x3 * scale / horiz;
    return p.w + u * (xi_c + r);
}

} // namespace decaylab
