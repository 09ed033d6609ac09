#include "decaylab/qc_bounds.hpp"

#include <cmath>

#include "json.hpp"

namespace decaylab {

Mat2 normal_projection_derivative(double k1, double k2) {
    return Mat2::diag(0.5 * (1.0 + k1), 0.5 * (1.0 + k2));
}

double dilatation(const Mat2& m) {
    const auto sv = m.singular_values();
    if (!(sv[1] > 0.0)) throw std::domain_error("dilatation: singular matrix");
    return sv[0] / sv[1];
}

double qc_bound_from_pinch(double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::domain_error("qc_bound_from_pinch: eps must be in (0, 1)");
    const double bound = (1.0 + eps) * (1.0 + eps);
    const double intermediate = (1.0 + eps / 2.0) / (1.0 - eps / 2.0);
    if (!(intermediate < bound))
        throw std::logic_error("qc_bound_from_pinch: intermediate bound exceeded (1+eps)^2");
    return bound;
}

PinchBound epstein_pinch(double t) {
    return {9.0 * std::exp(-2.0 * t), t >= std::log(9.0)};
}

double teich_distance_chain(const std::vector<double>& factors) {
    double total = 0.0;
    for (double f : factors) {
        if (!(f >= 1.0)) throw std::domain_error("teich_distance_chain: factor < 1");
        total += std::log(f);
    }
    return total;
}

ChainCheck chain_bound_check(double a4, double a5, double n) {
    ChainCheck c{};
    const double en = std::exp(-n);
    c.log_sum = std::log1p(a4 * en) + std::log1p(9.0 * en * en) + std::log1p(a5 * en);
    c.bound = 3.0 * a5 * en;
    c.dominance = a5 >= a4 && 9.0 * en * en <= a5 * en;
    c.holds = c.log_sum <= c.bound;
    return c;
}

SkinningBound skinning_diameter_bound(double d, double a6) {
    if (!(d > 9.0))
        throw std::domain_error("skinning_diameter_bound: d > 9 required so n >= 1");
    SkinningBound b{};
    b.n = std::floor(d) - kFloorOffset;
    b.raw = 7.0 * a6 * std::exp(-b.n);
    b.final = 56722.0 * a6 * std::exp(-d);
    const bool inflation_ok = 7.0 * std::exp(9.0) <= 56722.0;
    b.consistent = inflation_ok && b.raw <= b.final;
    return b;
}

std::array<double, 2> dnu_singular_values_ray_trace(const UnivalentMap& map, const FermiPoint& p,
                                                    double step) {
    const double x = p.z.value().real();
    const double y = p.z.value().imag();

    // Endpoint of the outward normal ray as a function of the leaf
    // parameters; differentiated by central differences.
    auto endpoint = [&](double dx, double dy) {
        return gauss_map_ray_trace(map, FermiPoint(x + dx, y + dy, p.t), step);
    };
    const Complex ex_p = endpoint(step, 0), ex_m = endpoint(-step, 0);
    const Complex ey_p = endpoint(0, step), ey_m = endpoint(0, -step);
    const Complex dnu_dx = (ex_p - ex_m) / (2.0 * step);
    const Complex dnu_dy = (ey_p - ey_m) / (2.0 * step);

    // Normalizing Mobius transformation R carrying the surface point to
    // (0,0,1) and the normal ray to the downward vertical: the endpoint
    // neighborhood rescales conformally by |R'(nu0)|.
    const HalfSpacePoint surf = epstein_immersion(map, p);
    const Complex nu0 = endpoint(0, 0);

    auto vec = [&](const HalfSpacePoint& q) { return Vec3{q.w.real(), q.w.imag(), q.x3}; };
    const Vec3 c = vec(surf);
    const Vec3 fxp = vec(epstein_immersion(map, FermiPoint(x + step, y, p.t)));
    const Vec3 fxm = vec(epstein_immersion(map, FermiPoint(x - step, y, p.t)));
    const Vec3 fyp = vec(epstein_immersion(map, FermiPoint(x, y + step, p.t)));
    const Vec3 fym = vec(epstein_immersion(map, FermiPoint(x, y - step, p.t)));
    const Vec3 fx = (fxp - fxm) * (1.0 / (2.0 * step));
    const Vec3 fy = (fyp - fym) * (1.0 / (2.0 * step));
    Vec3 n = Vec3::cross(fx, fy);
    {
        const Vec3 tp = vec(epstein_immersion(map, FermiPoint(x, y, p.t + step)));
        const Vec3 tm = vec(epstein_immersion(map, FermiPoint(x, y, p.t - step)));
        const Vec3 ft = (tp - tm) * (1.0 / (2.0 * step));
        if (n.dot(ft) < 0.0) n = n * -1.0;
    }

    double gamma; // |R'(nu0)|
    const double horiz = std::hypot(n.x, n.y);
    if (horiz < 1e-12 * n.norm()) {
        gamma = 1.0 / surf.x3; // vertical normal: R is an affine rescaling
    } else {
        // opposite ideal endpoint of the normal geodesic
        const Complex mu0 =
            geodesic_ray_endpoint(surf, -Complex(n.x, n.y), -n.z);
        // R(w) = alpha (w - nu0)/(w - mu0); |alpha| fixed by sending the
        // surface point to height 1.
        const MobiusTransform r0(Complex(1.0, 0.0), -nu0, Complex(1.0, 0.0), -mu0);
        const HalfSpacePoint moved = mobius_act_halfspace(r0, surf);
        const double alpha_abs = 1.0 / moved.x3;
        gamma = alpha_abs / std::abs(nu0 - mu0);
    }

    // Orthonormal frame on the leaf from the first fundamental form.
    const double x3 = c.z;
    const double i11 = fx.dot(fx) / (x3 * x3);
    const double i12 = fx.dot(fy) / (x3 * x3);
    const double i22 = fy.dot(fy) / (x3 * x3);
    // inverse square root of the SPD 2x2 form
    const double tr = i11 + i22;
    const double det = i11 * i22 - i12 * i12;
    if (!(det > 0.0))
        throw std::runtime_error("dnu_singular_values_ray_trace: degenerate leaf metric");
    const double s = std::sqrt(det);
    const double r = std::sqrt(tr + 2.0 * s);
    // I^{-1/2} = (I + s Id)^{-1} ... use the closed form ((I + s Id)/r)^{-1}
    const double a = (i11 + s) / r, b = i12 / r, dd = (i22 + s) / r; // sqrt(I)
    const double det_sqrt = a * dd - b * b;
    const double inv_a = dd / det_sqrt, inv_b = -b / det_sqrt, inv_d = a / det_sqrt;

    // D nu in frames: gamma * [dnu/dx, dnu/dy] * sqrt(I)^{-1}
    const Mat2 m{gamma * (dnu_dx.real() * inv_a + dnu_dy.real() * inv_b),
                 gamma * (dnu_dx.real() * inv_b + dnu_dy.real() * inv_d),
                 gamma * (dnu_dx.imag() * inv_a + dnu_dy.imag() * inv_b),
                 gamma * (dnu_dx.imag() * inv_b + dnu_dy.imag() * inv_d)};
    return m.singular_values();
}

BoundReport bound_report(double d, const FittedConstant& a4, const FittedConstant& a5,
                         const FittedConstant& a6, double c_tian) {
    BoundReport r;
    r.d = d;
    r.skinning = skinning_diameter_bound(d, a6.value);
    r.n = r.skinning.n;

    const double en = std::exp(-r.n);
    r.factors = {{"eta_to_rho_bilipschitz", 1.0 + a4.value * en},
                 {"epstein_leaf_to_conformal", 1.0 + 9.0 * en * en},
                 {"normal_projection", 1.0 + a5.value * en}};
    std::vector<double> fs;
    for (const auto& [label, f] : r.factors) fs.push_back(f);
    r.chain_total = teich_distance_chain(fs);
    r.paper_bound = 3.0 * a5.value * en;
    const ChainCheck chk = chain_bound_check(a4.value, a5.value, r.n);
    r.chain_consistent = !chk.dominance || chk.holds;

    r.constants["A4"] = a4;
    r.constants["A5"] = a5;
    r.constants["A6"] = a6;
    r.constants["C_tian"] = FittedConstant{c_tian, "supplied"};
    return r;
}

std::string bound_report_json(const BoundReport& r) {
    nlohmann::json j;
    j["d"] = r.d;
    j["n"] = r.n;
    j["floor_offset"] = r.floor_offset;
    nlohmann::json factors = nlohmann::json::array();
    for (const auto& [label, f] : r.factors) factors.push_back({{"label", label}, {"factor", f}});
    j["factors"] = factors;
    j["chain_total"] = r.chain_total;
    j["paper_bound"] = r.paper_bound;
    j["chain_consistent"] = r.chain_consistent;
    for (const auto& [name, c] : r.constants)
        j["constants"][name] = {{"value", c.value}, {"source", c.source}};
    j["skinning"] = {{"n", r.skinning.n},
                     {"raw_bound", r.skinning.raw},
                     {"final_bound", r.skinning.final},
                     {"consistent", r.skinning.consistent}};
    return j.dump(2);
}

} // namespace decaylab
