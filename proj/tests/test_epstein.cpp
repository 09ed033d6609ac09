#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_util.hpp"

#include "decaylab/epstein.hpp"
#include "decaylab/rng.hpp"

using namespace decaylab;
using testutil::check_close;
using testutil::check_close_c;
using testutil::check_rel;

TEST_CASE("immersion specializations") {
    SUBCASE("identity map gives iota") {
        const FermiPoint p(0.2, -0.1, 1.3);
        const HalfSpacePoint lhs = epstein_immersion(UnivalentMap::identity(), p);
        const HalfSpacePoint rhs = iota(p);
        CHECK(std::abs(lhs.w - rhs.w) < 1e-14);
        CHECK(std::abs(lhs.x3 - rhs.x3) < 1e-14);
    }
    SUBCASE("mobius map gives the global isometry applied to iota") {
        const MobiusTransform m(Complex(1, 0), Complex(0.3, 0.1), Complex(0.1, -0.05),
                                Complex(1, 0));
        const FermiPoint p(0.15, 0.25, 0.8);
        const HalfSpacePoint lhs = epstein_immersion(UnivalentMap::mobius(m), p);
        const HalfSpacePoint rhs = mobius_act_halfspace(m, iota(p));
        CHECK(std::abs(lhs.w - rhs.w) < 1e-13);
        CHECK(std::abs(lhs.x3 - rhs.x3) < 1e-13);
    }
    SUBCASE("quadratic(1/2) on the axis: osculator w/(1 - w/2) applied to (0, e^-t)") {
        for (double t : {0.5, 1.0, 2.0}) {
            const HalfSpacePoint got =
                epstein_immersion(UnivalentMap::quadratic(Complex(0.5, 0.0)),
                                  FermiPoint(0.0, 0.0, t));
            const double x3 = std::exp(-t);
            const double denom = 1.0 + x3 * x3 / 4.0;
            check_close_c(got.w, Complex(-x3 * x3 / 2.0 / denom, 0.0), 1e-14);
            check_close(got.x3, x3 / denom, 1e-14);
        }
    }
}

TEST_CASE("dphi eigenvalues") {
    SUBCASE("mobius: (1, 1, 1)") {
        const UnivalentMap m = UnivalentMap::mobius(
            MobiusTransform(Complex(1, 0), Complex(0.2, 0), Complex(0.2, 0), Complex(1, 0)));
        const auto e = dphi_eigenvalues(m, FermiPoint(0.3, 0.0, 0.7));
        check_close(e[0], 1.0, 0.0);
        check_close(e[1], 1.0, 0.0);
        check_close(e[2], 1.0, 0.0);
    }
    SUBCASE("koebe at the immersion threshold: (2, 0, 1)") {
        // ||S|| = 3/2 at z = 0 and e^t cosh t = 3/2 at t = log sqrt 2
        const auto e = dphi_eigenvalues(UnivalentMap::koebe(),
                                        FermiPoint(0.0, 0.0, kImmersionThreshold));
        check_close(e[0], 2.0, 1e-14);
        check_close(e[1], 0.0, 1e-14);
        check_close(e[2], 1.0, 0.0);
    }
    SUBCASE("koebe at t = 2") {
        const double q = 1.5 / (std::exp(2.0) * std::cosh(2.0));
        const auto e = dphi_eigenvalues(UnivalentMap::koebe(), FermiPoint(0.0, 0.0, 2.0));
        check_close(e[0], 1.0 + q, 1e-15);
        check_close(e[1], 1.0 - q, 1e-15);
    }
}

TEST_CASE("principal curvature formula") {
    SUBCASE("umbilic: both tanh t for mobius maps") {
        const UnivalentMap m = UnivalentMap::identity();
        for (double t : {0.9, 2.0, 4.0}) {
            const PrincipalCurvatures k = principal_curvatures(m, FermiPoint(0.2, 0.1, t));
            check_close(k.kappa_plus, std::tanh(t), 1e-15);
            check_close(k.kappa_minus, std::tanh(t), 1e-15);
        }
    }
    SUBCASE("koebe at the convexity threshold: kappa_plus = 0 at t = log 2") {
        const PrincipalCurvatures k =
            principal_curvatures(UnivalentMap::koebe(), FermiPoint(0.0, 0.0, kConvexityThreshold));
        check_close(k.kappa_plus, 0.0, 1e-15);
        CHECK(k.kappa_minus > 0.0);
    }
    SUBCASE("norm-one datum gives coth t on the coefficient -1 branch") {
        // on the imaginary axis the Koebe norm is 6(1-y^2)^2/(4(1+y^2)^2);
        // it equals 1 at y^2 = (sqrt6 - 2)/(sqrt6 + 2)
        const double y = std::sqrt((std::sqrt(6.0) - 2.0) / (std::sqrt(6.0) + 2.0));
        const DiskPoint z(0.0, y);
        check_close(scaled_schwarzian_norm(UnivalentMap::koebe(), z), 1.0, 1e-14);
        for (double t : {1.0, 2.5}) {
            const PrincipalCurvatures k =
                principal_curvatures(UnivalentMap::koebe(), FermiPoint(z, t));
            check_close(k.kappa_minus, 1.0 / std::tanh(t), 1e-12);
        }
    }
    SUBCASE("denominator vanishing reports the critical t") {
        // coefficient 1 - 2||S|| = -2 at the Koebe origin; denominator dies
        // at e^{-2t} = 1/2
        CHECK_THROWS_AS(principal_curvatures(UnivalentMap::koebe(),
                                             FermiPoint(0.0, 0.0, kImmersionThreshold)),
                        std::domain_error);
    }
}

TEST_CASE("shape operator oracle") {
    SUBCASE("umbilic surfaces: equidistants have curvature tanh t") {
        const UnivalentMap m = UnivalentMap::mobius(
            MobiusTransform(Complex(1, 0), Complex(0.2, 0.1), Complex(0.05, 0), Complex(1, 0)));
        const ShapeOperatorSample s = principal_curvatures_numeric(m, FermiPoint(0.1, 0.2, 1.0));
        check_close(s.kappa_e1, std::tanh(1.0), 1e-6);
        check_close(s.kappa_e2, std::tanh(1.0), 1e-6);

        const ShapeOperatorSample s2 =
            principal_curvatures_numeric(UnivalentMap::identity(), FermiPoint(0.0, 0.0, 2.0));
        check_close(s2.kappa_e1, std::tanh(2.0), 1e-6);
        check_close(s2.kappa_e2, std::tanh(2.0), 1e-6);
    }
    SUBCASE("koebe: oracle adjudicates the sign pairing of the formula") {
        const FermiPoint p(0.1, 0.0, 3.0);
        const UnivalentMap k = UnivalentMap::koebe();
        const PrincipalCurvatures formula = principal_curvatures(k, p);
        const ShapeOperatorSample oracle = principal_curvatures_numeric(k, p);
        // kappa_plus (coefficient 1 + 2||S||) belongs to the e1 direction
        check_rel(oracle.kappa_e1, formula.kappa_plus, 1e-5);
        check_rel(oracle.kappa_e2, formula.kappa_minus, 1e-5);
        // at real z the Schwarzian is negative real, theta = pi, e1 along x
        CHECK(std::abs(oracle.dir_e1_x) > 0.999);
    }
    SUBCASE("frame angle predicts the measured principal direction across the catalog") {
        SplitMix64 rng(223);
        for (const UnivalentMap& m :
             {UnivalentMap::koebe(), UnivalentMap::quadratic(Complex(0.25, 0.25)),
              UnivalentMap::quadratic(Complex(0.0, 0.5)),
              UnivalentMap::precomposed(DiskAutomorphism(Complex(0.2, -0.1), 0.9),
                                        UnivalentMap::koebe())}) {
            for (int i = 0; i < 6; ++i) {
                const FermiPoint p(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3),
                                   rng.uniform(1.5, 3.5));
                if (dphi_deviation(m, p) < 1e-4) continue; // too umbilic to resolve
                const double alpha = frame_angle(m, p.z);
                const ShapeOperatorSample o = principal_curvatures_numeric(m, p);
                const double align =
                    std::abs(o.dir_e1_x * std::cos(alpha) + o.dir_e1_y * std::sin(alpha));
                CAPTURE(m.describe());
                CHECK(align > 0.999);
            }
        }
    }
    SUBCASE("eigenvalue sets match on a grid") {
        SplitMix64 rng(11);
        const UnivalentMap k = UnivalentMap::koebe();
        for (int i = 0; i < 12; ++i) {
            const double x = rng.uniform(-0.35, 0.35), y = rng.uniform(-0.35, 0.35);
            const double t = rng.uniform(1.5, 5.0);
            const FermiPoint p(x, y, t);
            const PrincipalCurvatures f = principal_curvatures(k, p);
            const ShapeOperatorSample o = principal_curvatures_numeric(k, p);
            const double lo_f = std::min(f.kappa_plus, f.kappa_minus);
            const double hi_f = std::max(f.kappa_plus, f.kappa_minus);
            const double lo_o = std::min(o.kappa_e1, o.kappa_e2);
            const double hi_o = std::max(o.kappa_e1, o.kappa_e2);
            check_rel(lo_o, lo_f, 1e-5);
            check_rel(hi_o, hi_f, 1e-5);
        }
    }
}

TEST_CASE("determinant of D Phi equals 1 - q^2") {
    SplitMix64 rng(31);
    const UnivalentMap k = UnivalentMap::koebe();
    for (int i = 0; i < 10; ++i) {
        const FermiPoint p(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4), rng.uniform(1.0, 4.0));
        const double q = dphi_deviation(k, p);
        const double expected = 1.0 - q * q;
        const double numeric = dphi_determinant_numeric(k, p);
        check_rel(numeric, expected, 1e-5);
    }
    SUBCASE("identity map is volume preserving") {
        check_rel(dphi_determinant_numeric(UnivalentMap::identity(), FermiPoint(0.3, 0.1, 0.5)),
                  1.0, 1e-7);
    }
}

TEST_CASE("monotone pinching beyond log 9") {
    for (double t = std::log(9.0); t <= 10.0; t += 0.25) {
        const double bound = 9.0 * std::exp(-2.0 * t);
        for (double norm_s = 0.0; norm_s <= 1.5 + 1e-12; norm_s += 0.125) {
            const PrincipalCurvatures k = principal_curvatures_from_norm(norm_s, t);
            CHECK(std::abs(k.kappa_plus - 1.0) <= bound);
            CHECK(std::abs(k.kappa_minus - 1.0) <= bound);
        }
    }
}

TEST_CASE("gauss map factorization") {
    SUBCASE("identity and mobius") {
        const FermiPoint p(0.3, -0.2, 1.5);
        check_close_c(gauss_map(UnivalentMap::identity(), p), p.z.value(), 0.0);
        const MobiusTransform m(Complex(1, 0), Complex(0.2, 0), Complex(0.1, 0), Complex(1, 0));
        check_close_c(gauss_map(UnivalentMap::mobius(m), p), m.apply(p.z.value()), 1e-15);
    }
    SUBCASE("quadratic example: phi(0.2) = 0.22") {
        const Complex g =
            gauss_map(UnivalentMap::quadratic(Complex(0.5, 0.0)), FermiPoint(0.2, 0.0, 3.0));
        check_close_c(g, Complex(0.22, 0.0), 1e-15);
    }
    SUBCASE("ray trace agrees with the closed form") {
        SplitMix64 rng(41);
        for (const UnivalentMap& m :
             {UnivalentMap::identity(), UnivalentMap::koebe(),
              UnivalentMap::quadratic(Complex(0.5, 0.0))}) {
            for (int i = 0; i < 8; ++i) {
                const FermiPoint p(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3),
                                   rng.uniform(1.2, 4.0));
                const Complex expected = gauss_map(m, p);
                const Complex traced = gauss_map_ray_trace(m, p);
                CHECK(std::abs(traced - expected) < 1e-5);
            }
        }
    }
    SUBCASE("non-convex points are refused") {
        CHECK_THROWS_AS(gauss_map(UnivalentMap::koebe(), FermiPoint(0.0, 0.0, 0.5)),
                        std::domain_error);
    }
}

TEST_CASE("epstein samples and CSV") {
    const EpsteinSample s = make_epstein_sample(UnivalentMap::koebe(), FermiPoint(0.0, 0.0, 2.0));
    CHECK(s.immersed);
    CHECK(s.locally_convex);
    check_close(s.norm_s, 1.5, 1e-14);
    CHECK(s.eig_plus > 1.0);
    CHECK(s.eig_minus < 1.0);

    const EpsteinSample shallow =
        make_epstein_sample(UnivalentMap::koebe(), FermiPoint(0.0, 0.0, 0.2));
    CHECK_FALSE(shallow.immersed);
    CHECK_FALSE(shallow.locally_convex);

    CHECK(epstein_csv_header() ==
          "z_re,z_im,t,norm_S,eig_plus,eig_minus,kappa_plus,kappa_minus,immersed,convex");
    const std::string row = epstein_csv_row(s);
    CHECK(row.find("1.5") != std::string::npos);
    CHECK(row.substr(row.size() - 3) == "1,1");
}
