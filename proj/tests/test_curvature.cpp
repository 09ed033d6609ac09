#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_util.hpp"

#include "decaylab/curvature.hpp"
#include "decaylab/rng.hpp"

using namespace decaylab;
using testutil::check_close;
using testutil::check_rel;

TEST_CASE("christoffel symbols") {
    SUBCASE("euclidean field: all zero") {
        const Christoffels c = christoffel(euclidean_field(), 0.2, -0.1, 0.5, 1e-3);
        for (int l = 0; l < 3; ++l)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) CHECK(std::abs(c.symbols[l][i][j]) < 1e-12);
    }
    SUBCASE("fermi metric on the axis: hand-differentiated values") {
        // at z = 0 the density is flat to first order, so only t-derivatives
        // survive: Gamma^x_xt = tanh t, Gamma^t_xx = -4 cosh t sinh t
        for (double t : {0.5, 1.5}) {
            const Christoffels c = christoffel(fermi_field(), 0.0, 0.0, t, 1e-4);
            check_close(c.symbols[0][0][2], std::tanh(t), 1e-6);
            check_close(c.symbols[1][1][2], std::tanh(t), 1e-6);
            check_close(c.symbols[2][0][0], -4.0 * std::cosh(t) * std::sinh(t), 1e-5);
            check_close(c.symbols[2][1][1], -4.0 * std::cosh(t) * std::sinh(t), 1e-5);
            check_close(c.symbols[0][0][0], 0.0, 1e-6);
        }
    }
    SUBCASE("conformal xy block: known conformal formula") {
        // field lambda^2 (dx^2 + dy^2) + dt^2 with u = log lambda:
        // G^x_xx = u_x, G^x_yy = -u_x, G^x_xy = u_y, G^y_yy = u_y, ...
        MetricField conf{[](double x, double y, double) {
                             const double lam = 2.0 / (1.0 - x * x - y * y);
                             return SymMatrix3::diagonal(lam * lam, lam * lam, 1.0);
                         },
                         "xyt"};
        const double x = 0.3, y = 0.1;
        const double denom = 1.0 - x * x - y * y;
        const double ux = 2.0 * x / denom, uy = 2.0 * y / denom;
        const Christoffels c = christoffel(conf, x, y, 0.7, 1e-5);
        check_close(c.symbols[0][0][0], ux, 1e-7);
        check_close(c.symbols[0][1][1], -ux, 1e-7);
        check_close(c.symbols[0][0][1], uy, 1e-7);
        check_close(c.symbols[1][1][1], uy, 1e-7);
        check_close(c.symbols[1][0][0], -uy, 1e-7);
        check_close(c.symbols[1][0][1], ux, 1e-7);
    }
    SUBCASE("symmetric in the lower indices") {
        const Christoffels c = christoffel(fermi_field(), 0.25, -0.15, 1.2, 1e-3);
        for (int l = 0; l < 3; ++l)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    CHECK(c.symbols[l][i][j] == c.symbols[l][j][i]);
    }
    SUBCASE("singular metric is refused") {
        MetricField bad{[](double, double, double) {
                            return SymMatrix3::diagonal(1.0, -1.0, 1.0);
                        },
                        "xyt"};
        CHECK_THROWS_AS(christoffel(bad, 0, 0, 0, 1e-3), SingularMetricError);
    }
}

TEST_CASE("ricci tensor") {
    SUBCASE("fermi metric: Ric = -2 g") {
        SplitMix64 rng(3);
        for (int i = 0; i < 15; ++i) {
            double x = rng.uniform(-0.6, 0.6), y = rng.uniform(-0.6, 0.6);
            if (x * x + y * y > 0.5) {
                --i;
                continue;
            }
            const double t = rng.uniform(0.0, 4.0);
            const SymMatrix3 g = fermi_metric(FermiPoint(x, y, t));
            const SymMatrix3 r = ricci(fermi_field(), x, y, t);
            CHECK((r + g * 2.0).max_abs() <= 1e-6 * g.max_abs());
        }
    }
    SUBCASE("pullback h is hyperbolic where immersed") {
        const MetricField h = pullback_h_field(UnivalentMap::koebe());
        for (double t : {2.0, 4.0, 6.0}) {
            const SymMatrix3 hm = h.eval(0.2, 0.1, t);
            const SymMatrix3 r = ricci(h, 0.2, 0.1, t);
            CHECK((r + hm * 2.0).max_abs() <= 2e-4 * hm.max_abs());
        }
    }
    SUBCASE("round sphere patch: Ric = +2 w") {
        const MetricField s = sphere_patch_field();
        for (auto [x, y, t] : {std::tuple{0.0, 0.0, 0.0}, {0.3, -0.2, 0.4}}) {
            const SymMatrix3 w = s.eval(x, y, t);
            const SymMatrix3 r = ricci(s, x, y, t);
            CHECK((r - w * 2.0).max_abs() <= 1e-6 * w.max_abs());
        }
    }
    SUBCASE("symmetry holds at the noise floor") {
        const SymMatrix3 r = ricci(eta_field(GluedMetricSpec(UnivalentMap::koebe(), 3.0)), 0.2,
                                   0.1, 3.5);
        CHECK(std::abs(r(0, 1) - r(1, 0)) == 0.0); // symmetrized by construction
    }
    SUBCASE("convergence order without Richardson is near 2") {
        FdSteps coarse{4e-3, 3.0, false};
        FdSteps fine{2e-3, 3.0, false};
        const double x = 0.4, y = 0.0, t = 1.0;
        const SymMatrix3 g = fermi_metric(FermiPoint(x, y, t));
        const double e1 = (ricci(fermi_field(), x, y, t, coarse) + g * 2.0).max_abs();
        const double e2 = (ricci(fermi_field(), x, y, t, fine) + g * 2.0).max_abs();
        const double factor = e1 / e2;
        CAPTURE(factor);
        CHECK(factor >= 3.5);
        CHECK(factor <= 4.5);
    }
}

TEST_CASE("ricci quadratic form") {
    const Vec3 u{0.3, -0.2, 0.9};
    const double x = 0.2, y = 0.1, t = 1.0;
    const SymMatrix3 g = fermi_metric(FermiPoint(x, y, t));
    const double raw = ricci_quadratic(fermi_field(), x, y, t, u);
    check_rel(raw, -2.0 * g.quad(u, u), 1e-5);
    SUBCASE("unit vectors evaluate to -2") {
        const Vec3 unit = u * (1.0 / std::sqrt(g.quad(u, u)));
        check_close(ricci_quadratic(fermi_field(), x, y, t, unit), -2.0, 1e-5);
    }
    SUBCASE("eta at the slab midpoint is -2 up to the decay scale") {
        const double n = 5.0;
        const MetricField field = eta_field(GluedMetricSpec(UnivalentMap::koebe(), n));
        const SymMatrix3 m = field.eval(0.2, 0.0, n + 0.5);
        const Vec3 unit = u * (1.0 / std::sqrt(m.quad(u, u)));
        check_close(ricci_quadratic(field, 0.2, 0.0, n + 0.5, unit), -2.0, 1e-3);
    }
    CHECK_THROWS_AS(ricci_quadratic(fermi_field(), x, y, t, Vec3{0, 0, 0}), std::domain_error);
}

TEST_CASE("sectional curvature") {
    SUBCASE("fermi coordinate planes give -1") {
        const Vec3 ex{1, 0, 0}, ey{0, 1, 0}, et{0, 0, 1};
        for (auto [u, v] : {std::pair{ex, ey}, {ex, et}, {ey, et}}) {
            const double k = sectional(fermi_field(), 0.3, -0.1, 1.7, u, v);
            check_close(k, -1.0, 1e-6);
        }
    }
    SUBCASE("identity arithmetic on a constant-Ricci input") {
        const SymMatrix3 metric = SymMatrix3::identity();
        const SymMatrix3 ric = metric * -2.0;
        check_close(sectional_from_ricci(metric, ric, Vec3{1, 0, 0}, Vec3{0, 1, 0}), -1.0, 1e-15);
    }
    SUBCASE("sphere patch gives +1: the engine sees signs") {
        const double k =
            sectional(sphere_patch_field(), 0.2, 0.1, -0.1, Vec3{1, 0.2, 0}, Vec3{0, 1, 0.3});
        check_close(k, 1.0, 1e-6);
    }
    SUBCASE("random planes on eta stay near -1") {
        const GluedMetricSpec spec(UnivalentMap::koebe(), 4.0);
        const MetricField field = eta_field(spec);
        SplitMix64 rng(9);
        for (int i = 0; i < 10; ++i) {
            const Vec3 u{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            const Vec3 v{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
            if (Vec3::cross(u, v).norm() < 0.1) continue;
            const double k = sectional(field, 0.2, 0.0, 4.5, u, v);
            check_close(k, -1.0, 1e-3);
        }
    }
    SUBCASE("degenerate plane is refused") {
        CHECK_THROWS_AS(
            sectional(fermi_field(), 0.1, 0.0, 1.0, Vec3{1, 0, 0}, Vec3{2, 0, 0}),
            std::domain_error);
    }
}

TEST_CASE("chart invariance of sectional curvature") {
    // evaluate eta in the u chart and check the scalar agrees
    const GluedMetricSpec spec(UnivalentMap::koebe(), 3.0);
    const MetricField xyt = eta_field(spec);
    MetricField u_chart{[spec](double u1, double u2, double u3) {
                            const double x = u1 / std::cosh(u3);
                            const double y = u2 / std::cosh(u3);
                            const FermiPoint p(x, y, u3);
                            return chart_convert(glued_metric_eta(spec, p), p,
                                                 ChartDirection::XytToU);
                        },
                        "u"};
    const double x = 0.25, y = 0.1, t = 3.4;
    const double ch = std::cosh(t);
    // coordinate vectors transform by the chart Jacobian
    const double sh = std::sinh(t);
    const Vec3 ex{1, 0, 0}, et{0, 0, 1};
    const Vec3 ex_u{ch, 0, 0};
    const Vec3 et_u{x * sh, y * sh, 1};
    const double k_xyt = sectional(xyt, x, y, t, ex, et);
    const double k_u = sectional(u_chart, x * ch, y * ch, t, ex_u, et_u);
    CHECK(std::abs(k_xyt - k_u) <= 5e-5);
}

TEST_CASE("traceless ricci norm") {
    check_close(traceless_ricci_norm(fermi_field(), 0.3, 0.2, 1.0), 0.0, 1e-6);
    SUBCASE("eta plateaus are hyperbolic") {
        const GluedMetricSpec spec(UnivalentMap::koebe(), 3.0);
        const MetricField field = eta_field(spec);
        check_close(traceless_ricci_norm(field, 0.2, 0.1, 2.5), 0.0, 2e-4);
        check_close(traceless_ricci_norm(field, 0.2, 0.1, 4.5), 0.0, 2e-4);
    }
    SUBCASE("decays like e^{-2n} at the slab midpoint") {
        auto mid = [](double n) {
            const GluedMetricSpec spec(UnivalentMap::koebe(), n);
            return traceless_ricci_norm(eta_field(spec), 0.2, 0.0, n + 0.5);
        };
        const double v4 = mid(4.0), v6 = mid(6.0);
        check_close((std::log(v6) - std::log(v4)) / 2.0, -2.0, 0.1);
    }
}

TEST_CASE("volume element") {
    check_close(volume_element(euclidean_field(), 0, 0, 0), 1.0, 0.0);
    for (double t : {0.0, 1.0, 2.5})
        check_close(volume_element(fermi_field(), 0.0, 0.0, t), 4.0 * std::cosh(t) * std::cosh(t),
                    1e-12);
    SUBCASE("eta under a mobius map matches fermi") {
        const GluedMetricSpec trivial(
            UnivalentMap::mobius(MobiusTransform(Complex(1, 0), Complex(0.2, 0), Complex(0.2, 0),
                                                 Complex(1, 0))),
            4.0);
        check_close(volume_element(eta_field(trivial), 0.3, 0.1, 4.5),
                    volume_element(fermi_field(), 0.3, 0.1, 4.5), 0.0);
    }
}

TEST_CASE("gauss-legendre quadrature") {
    SUBCASE("polynomial exactness") {
        const QuadratureRule q = gauss_legendre_on(6, -1.0, 2.0);
        double acc = 0.0;
        for (std::size_t i = 0; i < q.nodes.size(); ++i) {
            const double x = q.nodes[i];
            acc += q.weights[i] * (x * x * x * x * x * x * x * x * x * x * x); // x^11
        }
        const double exact = (std::pow(2.0, 12.0) - std::pow(-1.0, 12.0)) / 12.0;
        check_rel(acc, exact, 1e-13);
    }
    SUBCASE("cosh^2 against the antiderivative (t + sinh t cosh t)/2") {
        auto anti = [](double t) { return 0.5 * (t + std::sinh(t) * std::cosh(t)); };
        const QuadratureRule q = gauss_legendre_on(8, 0.0, 1.0);
        double acc = 0.0;
        for (std::size_t i = 0; i < q.nodes.size(); ++i)
            acc += q.weights[i] * std::cosh(q.nodes[i]) * std::cosh(q.nodes[i]);
        check_close(acc, anti(1.0) - anti(0.0), 1e-12);
        check_close(acc, (2.0 + std::sinh(2.0)) / 4.0, 1e-12);
    }
}

TEST_CASE("slab integrals") {
    const QuadratureSpec quad;
    SUBCASE("mobius map: traceless L2 vanishes to quadrature noise") {
        const GluedMetricSpec trivial(
            UnivalentMap::mobius(MobiusTransform(Complex(1, 0), Complex(0.2, 0), Complex(0.2, 0),
                                                 Complex(1, 0))),
            3.0);
        const SlabIntegrals l2 =
            l2_traceless_ricci(eta_field(trivial), default_slab(3.0), quad);
        CHECK(l2.per_unit_area < 1e-6);
    }
    SUBCASE("per-area volume for a mobius map is the cosh^2 integral") {
        auto anti = [](double t) { return 0.5 * (t + std::sinh(t) * std::cosh(t)); };
        for (double n : {1.0, 4.0}) {
            const SlabIntegrals v = slab_volume(fermi_field(), default_slab(n), quad);
            check_rel(v.per_unit_area, anti(n + 1.0) - anti(n), 1e-10);
            check_rel(v.gauss_bonnet, 4.0 * M_PI * (anti(n + 1.0) - anti(n)), 1e-10);
        }
    }
    SUBCASE("koebe slab volume stays below the mobius volume") {
        for (double n : {2.0, 5.0}) {
            const double koebe =
                slab_volume(eta_field(GluedMetricSpec(UnivalentMap::koebe(), n)),
                            default_slab(n), quad)
                    .raw;
            const double mobius = slab_volume(fermi_field(), default_slab(n), quad).raw;
            CHECK(koebe <= mobius);
            CHECK(koebe > 0.9 * mobius);
        }
    }
    SUBCASE("node doubling moves the L2 value by less than 1 percent") {
        const GluedMetricSpec spec(UnivalentMap::koebe(), 4.0);
        QuadratureSpec q8, q16;
        q16.nodes_per_axis = 16;
        const double v8 =
            l2_traceless_ricci(eta_field(spec), default_slab(4.0), q8).per_unit_area;
        const double v16 =
            l2_traceless_ricci(eta_field(spec), default_slab(4.0), q16).per_unit_area;
        CHECK(std::abs(v8 - v16) <= 0.01 * v16);
    }
    SUBCASE("slab monotonicity of the L2 norm") {
        const auto value = [&](double n) {
            return l2_traceless_ricci(eta_field(GluedMetricSpec(UnivalentMap::koebe(), n)),
                                      default_slab(n), quad)
                .per_unit_area;
        };
        double prev = value(3.0);
        for (double n : {4.0, 5.0, 6.0}) {
            const double cur = value(n);
            CHECK(cur < prev);
            prev = cur;
        }
    }
    SUBCASE("parallel and serial integration agree bit for bit") {
        const GluedMetricSpec spec(UnivalentMap::koebe(), 3.0);
        const double par =
            l2_traceless_ricci(eta_field(spec), default_slab(3.0), quad, {}, -2.0, true).raw;
        const double ser =
            l2_traceless_ricci(eta_field(spec), default_slab(3.0), quad, {}, -2.0, false).raw;
        CHECK(par == ser);
    }
}

TEST_CASE("curvature sample CSV") {
    const CurvatureSample s = make_curvature_sample(fermi_field(), 0.1, 0.0, 1.0);
    check_close(s.sectional_xy, -1.0, 1e-5);
    check_close(s.traceless_norm, 0.0, 1e-5);
    const std::string header = curvature_csv_header();
    CHECK(header.substr(0, 5) == "x,y,t");
    CHECK(header.find("gamma_x_xt") != std::string::npos);
    CHECK(header.find("ricci_xy") != std::string::npos);
    const std::string row = curvature_csv_row(s);
    CHECK(std::count(row.begin(), row.end(), ',') ==
          std::count(header.begin(), header.end(), ','));
}
