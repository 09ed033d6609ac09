#include "decaylab/curvature.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "decaylab/parallel.hpp"

namespace decaylab {

MetricField fermi_field() {
    return {[](double x, double y, double t) { return fermi_metric(FermiPoint(x, y, t)); },
            "xyt"};
}

MetricField euclidean_field() {
    return {[](double, double, double) { return SymMatrix3::identity(); }, "xyt"};
}

MetricField pullback_h_field(const UnivalentMap& map) {
    return {[map](double x, double y, double t) {
                return pullback_metric_h(map, FermiPoint(x, y, t));
            },
            "xyt"};
}

MetricField eta_field(const GluedMetricSpec& spec) {
    return {[spec](double x, double y, double t) {
                return glued_metric_eta(spec, FermiPoint(x, y, t));
            },
            "xyt"};
}

MetricField sphere_patch_field() {
    return {[](double x, double y, double t) {
                const double r2 = x * x + y * y + t * t;
                const double f = 2.0 / (1.0 + r2);
                return SymMatrix3::diagonal(f * f, f * f, f * f);
            },
            "xyt"};
}

namespace {

SymMatrix3 eval_checked(const MetricField& field, double x, double y, double t) {
    return field.eval(x, y, t);
}

SymMatrix3 inverse_of(const SymMatrix3& w) {
    if (!w.is_spd()) throw SingularMetricError("metric is not positive definite");
    return w.inverse_spd();
}

Christoffels christoffel_impl(const MetricField& field, double x, double y, double t,
                              double step) {
    const SymMatrix3 inv = inverse_of(eval_checked(field, x, y, t));

    SymMatrix3 dw[3];
    for (int d = 0; d < 3; ++d) {
        const double dx = d == 0 ? step : 0.0;
        const double dy = d == 1 ? step : 0.0;
        const double dt = d == 2 ? step : 0.0;
        const SymMatrix3 plus = eval_checked(field, x + dx, y + dy, t + dt);
        const SymMatrix3 minus = eval_checked(field, x - dx, y - dy, t - dt);
        dw[d] = (plus - minus) * (1.0 / (2.0 * step));
    }

    Christoffels out;
    for (int l = 0; l < 3; ++l)
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                double acc = 0.0;
                for (int k = 0; k < 3; ++k)
                    acc += inv(k, l) * (dw[i](k, j) + dw[j](i, k) - dw[k](i, j));
                out.symbols[l][i][j] = 0.5 * acc;
                out.symbols[l][j][i] = out.symbols[l][i][j];
            }
    return out;
}

SymMatrix3 ricci_raw(const MetricField& field, double x, double y, double t, double inner,
                     double outer) {
    const Christoffels gc = christoffel_impl(field, x, y, t, inner);

    Christoffels dg[3]; // dg[d] = d/dx^d of Gamma
    for (int d = 0; d < 3; ++d) {
        const double dx = d == 0 ? outer : 0.0;
        const double dy = d == 1 ? outer : 0.0;
        const double dt = d == 2 ? outer : 0.0;
        const Christoffels plus = christoffel_impl(field, x + dx, y + dy, t + dt, inner);
        const Christoffels minus = christoffel_impl(field, x - dx, y - dy, t - dt, inner);
        for (int l = 0; l < 3; ++l)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    dg[d].symbols[l][i][j] =
                        (plus.symbols[l][i][j] - minus.symbols[l][i][j]) / (2.0 * outer);
    }

    double contracted[3]; // Gamma^m_{lm} summed over m, indexed by l
    for (int l = 0; l < 3; ++l) {
        double acc = 0.0;
        for (int m = 0; m < 3; ++m) acc += gc.symbols[m][l][m];
        contracted[l] = acc;
    }

    SymMatrix3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            double term = 0.0;
            for (int l = 0; l < 3; ++l) {
                term += dg[l].symbols[l][i][j];     // d_l Gamma^l_ij
                term -= dg[j].symbols[l][i][l];     // d_j Gamma^l_il
                term += gc.symbols[l][i][j] * contracted[l];
                for (int m = 0; m < 3; ++m) term -= gc.symbols[m][i][l] * gc.symbols[l][j][m];
            }
            // the same expression with i and j swapped, averaged to keep the
            // output symmetric at the FD noise floor
            double term_t = 0.0;
            for (int l = 0; l < 3; ++l) {
                term_t += dg[l].symbols[l][j][i];
                term_t -= dg[i].symbols[l][j][l];
                term_t += gc.symbols[l][j][i] * contracted[l];
                for (int m = 0; m < 3; ++m) term_t -= gc.symbols[m][j][l] * gc.symbols[l][i][m];
            }
            r(i, j) = 0.5 * (term + term_t);
        }
    return r;
}

} // namespace

Christoffels christoffel(const MetricField& field, double x, double y, double t, double step) {
    if (!(step > 0.0)) throw std::domain_error("christoffel: step must be positive");
    return christoffel_impl(field, x, y, t, step);
}

SymMatrix3 ricci(const MetricField& field, double x, double y, double t, const FdSteps& steps) {
    const double h = steps.christoffel;
    const SymMatrix3 coarse = ricci_raw(field, x, y, t, h, steps.outer());
    if (!steps.richardson) return coarse;
    const SymMatrix3 fine = ricci_raw(field, x, y, t, h / 2.0, steps.outer() / 2.0);
    return fine * (4.0 / 3.0) - coarse * (1.0 / 3.0);
}

double ricci_quadratic(const MetricField& field, double x, double y, double t, const Vec3& u,
                       const FdSteps& steps) {
    if (!(u.norm() > 0.0)) throw std::domain_error("ricci_quadratic: zero vector");
    const SymMatrix3 r = ricci(field, x, y, t, steps);
    return r.quad(u, u);
}

double sectional_from_ricci(const SymMatrix3& metric, const SymMatrix3& ricci_m, const Vec3& u,
                            const Vec3& v) {
    auto normalize = [&](const Vec3& a) {
        const double n2 = metric.quad(a, a);
        if (!(n2 > 0.0)) throw std::domain_error("sectional: vector with nonpositive length");
        return a * (1.0 / std::sqrt(n2));
    };
    const Vec3 e1 = normalize(u);
    Vec3 v_perp = v - e1 * metric.quad(e1, v);
    const double v_norm2 = metric.quad(v_perp, v_perp);
    if (v_norm2 <= 1e-24 * metric.quad(v, v))
        throw std::domain_error("sectional: degenerate plane");
    const Vec3 e2 = v_perp * (1.0 / std::sqrt(v_norm2));

    Vec3 best{};
    double best_norm2 = -1.0;
    for (int k = 0; k < 3; ++k) {
        Vec3 cand{k == 0 ? 1.0 : 0.0, k == 1 ? 1.0 : 0.0, k == 2 ? 1.0 : 0.0};
        cand = cand - e1 * metric.quad(e1, cand) - e2 * metric.quad(e2, cand);
        const double n2 = metric.quad(cand, cand);
        if (n2 > best_norm2) {
            best_norm2 = n2;
            best = cand;
        }
    }
    const Vec3 e3 = best * (1.0 / std::sqrt(best_norm2));

    // 2K(u,v) = Ric(u) - Ric(w) + Ric(v) on an orthonormal frame
    return 0.5 * (ricci_m.quad(e1, e1) - ricci_m.quad(e3, e3) + ricci_m.quad(e2, e2));
}

double sectional(const MetricField& field, double x, double y, double t, const Vec3& u,
                 const Vec3& v, const FdSteps& steps) {
    const SymMatrix3 metric = eval_checked(field, x, y, t);
    const SymMatrix3 r = ricci(field, x, y, t, steps);
    return sectional_from_ricci(metric, r, u, v);
}

double traceless_ricci_norm_from(const SymMatrix3& metric, const SymMatrix3& ricci_m) {
    const SymMatrix3 T = ricci_m + metric * 2.0;
    const SymMatrix3 inv = inverse_of(metric);
    // ||T||^2 = tr(M^2) with M = w^{-1} T
    double m[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) acc += inv(i, k) * T(k, j);
            m[i][j] = acc;
        }
    double norm2 = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) norm2 += m[i][j] * m[j][i];
    return std::sqrt(std::max(0.0, norm2));
}

double traceless_ricci_norm(const MetricField& field, double x, double y, double t,
                            const FdSteps& steps) {
    return traceless_ricci_norm_from(eval_checked(field, x, y, t), ricci(field, x, y, t, steps));
}

double volume_element(const MetricField& field, double x, double y, double t) {
    const double det = eval_checked(field, x, y, t).determinant();
    if (!(det > 0.0)) throw SingularMetricError("volume_element: nonpositive determinant");
    return std::sqrt(det);
}

Slab default_slab(double n) { return Slab{-0.05, 0.45, -0.25, 0.25, n, n + 1.0}; }

double hyperbolic_box_area(const Slab& slab, const QuadratureSpec& quad) {
    quad.validate();
    const QuadratureRule qx = gauss_legendre_on(quad.nodes_per_axis, slab.x0, slab.x1);
    const QuadratureRule qy = gauss_legendre_on(quad.nodes_per_axis, slab.y0, slab.y1);
    double area = 0.0;
    for (int ix = 0; ix < quad.nodes_per_axis; ++ix)
        for (int iy = 0; iy < quad.nodes_per_axis; ++iy) {
            const double lam = hyperbolic_density(DiskPoint(qx.nodes[ix], qy.nodes[iy]));
            area += qx.weights[ix] * qy.weights[iy] * lam * lam;
        }
    return area;
}

namespace {

template <class PointValue>
double integrate_slab(const Slab& slab, const QuadratureSpec& quad, bool parallel,
                      PointValue&& value) {
    quad.validate();
    const int n = quad.nodes_per_axis;
    const QuadratureRule qx = gauss_legendre_on(n, slab.x0, slab.x1);
    const QuadratureRule qy = gauss_legendre_on(n, slab.y0, slab.y1);
    const QuadratureRule qt = gauss_legendre_on(n, slab.t0, slab.t1);

    // exceptions must not cross the parallel region; NaN marks a bad node
    const std::int64_t count = static_cast<std::int64_t>(n) * n * n;
    const std::vector<double> samples = map_indexed(count, parallel, [&](std::int64_t idx) {
        const int it = static_cast<int>(idx % n);
        const int iy = static_cast<int>((idx / n) % n);
        const int ix = static_cast<int>(idx / (static_cast<std::int64_t>(n) * n));
        try {
            const double v = value(qx.nodes[ix], qy.nodes[iy], qt.nodes[it]);
            return std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN();
        } catch (const std::exception&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    });

    double acc = 0.0;
    std::int64_t idx = 0;
    for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy)
            for (int it = 0; it < n; ++it, ++idx) {
                const double s = samples[static_cast<std::size_t>(idx)];
                if (std::isnan(s))
                    throw std::runtime_error("slab integrand failed at node " +
                                             std::to_string(idx));
                acc += qx.weights[ix] * qy.weights[iy] * qt.weights[it] * s;
            }
    return acc;
}

} // namespace

SlabIntegrals l2_traceless_ricci(const MetricField& field, const Slab& slab,
                                 const QuadratureSpec& quad, const FdSteps& steps, double chi,
                                 bool parallel) {
    SlabIntegrals out;
    out.raw = integrate_slab(slab, quad, parallel, [&](double x, double y, double t) {
        const SymMatrix3 metric = eval_checked(field, x, y, t);
        const double norm = traceless_ricci_norm_from(metric, ricci(field, x, y, t, steps));
        return norm * norm * std::sqrt(metric.determinant());
    });
    out.hyperbolic_area = hyperbolic_box_area(slab, quad);
    out.per_unit_area = std::sqrt(std::max(0.0, out.raw / out.hyperbolic_area));
    out.gauss_bonnet = std::sqrt(std::max(0.0, out.raw / out.hyperbolic_area * (-2.0 * M_PI * chi)));
    return out;
}

SlabIntegrals slab_volume(const MetricField& field, const Slab& slab, const QuadratureSpec& quad,
                          double chi, bool parallel) {
    SlabIntegrals out;
    out.raw = integrate_slab(slab, quad, parallel, [&](double x, double y, double t) {
        return std::sqrt(eval_checked(field, x, y, t).determinant());
    });
    out.hyperbolic_area = hyperbolic_box_area(slab, quad);
    out.per_unit_area = out.raw / out.hyperbolic_area;
    out.gauss_bonnet = out.per_unit_area * (-2.0 * M_PI * chi);
    return out;
}

CurvatureSample make_curvature_sample(const MetricField& field, double x, double y, double t,
                                      const FdSteps& steps) {
    CurvatureSample s{};
    s.x = x;
    s.y = y;
    s.t = t;
    s.christoffels = christoffel(field, x, y, t, steps.christoffel);
    s.ricci = ricci(field, x, y, t, steps);
    const SymMatrix3 metric = eval_checked(field, x, y, t);
    const Vec3 ex{1, 0, 0}, ey{0, 1, 0}, et{0, 0, 1};
    s.sectional_xy = sectional_from_ricci(metric, s.ricci, ex, ey);
    s.sectional_xt = sectional_from_ricci(metric, s.ricci, ex, et);
    s.sectional_yt = sectional_from_ricci(metric, s.ricci, ey, et);
    s.traceless_norm = traceless_ricci_norm_from(metric, s.ricci);
    s.vol_element = std::sqrt(metric.determinant());
    return s;
}

std::string curvature_csv_header() {
    std::ostringstream os;
    os << "x,y,t";
    const char* coord = "xyt";
    for (int l = 0; l < 3; ++l)
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j)
                os << ",gamma_" << coord[l] << '_' << coord[i] << coord[j];
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) os << ",ricci_" << coord[i] << coord[j];
    os << ",K_xy,K_xt,K_yt,traceless_ricci_norm,vol_element";
    return os.str();
}

std::string curvature_csv_row(const CurvatureSample& s) {
    std::ostringstream os;
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, ",%.17g", v);
        os << buf;
    };
    std::snprintf(buf, sizeof buf, "%.17g", s.x);
    os << buf;
    put(s.y);
    put(s.t);
    for (int l = 0; l < 3; ++l)
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) put(s.christoffels.symbols[l][i][j]);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) put(s.ricci(i, j));
    put(s.sectional_xy);
    put(s.sectional_xt);
    put(s.sectional_yt);
    put(s.traceless_norm);
    put(s.vol_element);
    return os.str();
}

} // namespace decaylab
