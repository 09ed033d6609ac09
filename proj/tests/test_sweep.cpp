#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "test_util.hpp"

#include "decaylab/config.hpp"
#include "decaylab/sweep.hpp"

using namespace decaylab;
using testutil::check_close;
using testutil::check_rel;

namespace {

SweepConfig small_config() {
    SweepConfig c;
    c.map = UnivalentMap::koebe();
    c.n_values = {3.0, 4.0, 5.0};
    c.grid_nx = c.grid_ny = 4;
    c.grid_nt = 5;
    c.quadrature.nodes_per_axis = 5;
    c.planes_per_point = 1;
    c.seed = 777;
    return c;
}

} // namespace

TEST_CASE("fit_exponent") {
    SUBCASE("synthetic exact recovery") {
        DecaySeries s{"synthetic", {}};
        for (double n : {1.0, 2.0, 3.0, 4.0, 5.0})
            s.points.emplace_back(n, 5.0 * std::exp(-2.0 * n));
        const FitResult f = fit_exponent(s);
        check_close(f.slope, -2.0, 1e-10);
        check_close(f.intercept, std::log(5.0), 1e-10);
        check_close(f.r2, 1.0, 1e-12);
        check_close(f.residual_max, 0.0, 1e-10);
    }
    SUBCASE("two points interpolate exactly") {
        DecaySeries s{"pair", {{1.0, 10.0}, {3.0, 2.5}}};
        const FitResult f = fit_exponent(s);
        check_close(f.r2, 1.0, 1e-12);
        check_close(f.slope, (std::log(2.5) - std::log(10.0)) / 2.0, 1e-12);
    }
    SUBCASE("rejects nonpositive values and short series") {
        DecaySeries bad{"bad", {{1.0, 1.0}, {2.0, 0.0}}};
        CHECK_THROWS_AS(fit_exponent(bad), std::domain_error);
        DecaySeries one{"one", {{1.0, 1.0}}};
        CHECK_THROWS_AS(fit_exponent(one), std::invalid_argument);
    }
}

TEST_CASE("config validation") {
    SUBCASE("n_values must be increasing and >= 1") {
        SweepConfig c = small_config();
        c.n_values = {3.0, 3.0};
        CHECK_THROWS_AS(c.validate(), ConfigError);
        c.n_values = {0.5, 2.0};
        CHECK_THROWS_AS(c.validate(), ConfigError);
        c.n_values = {};
        CHECK_THROWS_AS(c.validate(), ConfigError);
    }
    SUBCASE("resolutions at least 3") {
        SweepConfig c = small_config();
        c.grid_nx = 2;
        CHECK_THROWS_AS(c.validate(), ConfigError);
    }
    SUBCASE("json round trip of the map catalog") {
        for (const UnivalentMap& m :
             {UnivalentMap::koebe(), UnivalentMap::quadratic(Complex(0.5, 0.0)),
              UnivalentMap::identity(),
              UnivalentMap::precomposed(DiskAutomorphism(Complex(0.2, 0.1), 0.7),
                                        UnivalentMap::koebe())}) {
            const UnivalentMap back = map_from_json(map_to_json(m));
            CHECK(back.kind() == m.kind());
            const DiskPoint z(0.21, -0.13);
            CHECK(std::abs(back.value(z) - m.value(z)) < 1e-15);
        }
    }
    SUBCASE("sweep config from json") {
        const auto j = parse_json_text(R"({
            "map": {"kind": "quadratic", "a": [0.5, 0.0]},
            "n_values": [3, 4],
            "z_box": {"center": [0.2, 0.0], "side": 0.4},
            "grid": {"nx": 4, "ny": 4, "nt": 5},
            "quadrature": {"nodes_per_axis": 6, "kind": "gauss-legendre"},
            "seed": 42
        })");
        const SweepConfig c = sweep_config_from_json(j);
        CHECK(c.map.kind() == UnivalentMap::Kind::Quadratic);
        CHECK(c.seed == 42);
        CHECK(c.quadrature.nodes_per_axis == 6);
        check_close(c.box_side, 0.4, 0.0);
        CHECK(c.csv_path.empty());
    }
    SUBCASE("output paths ride along in the config") {
        const SweepConfig c = sweep_config_from_json(parse_json_text(
            R"({"output": {"csv": "a.csv", "svg": "b.svg"}})"));
        CHECK(c.csv_path == "a.csv");
        CHECK(c.json_path.empty());
        CHECK(c.svg_path == "b.svg");
    }
    SUBCASE("glued metric spec from json") {
        const GluedMetricSpec spec = glued_spec_from_json(
            parse_json_text(R"({"map":{"kind":"koebe"},"n":4.0,"bump":"quintic"})"));
        check_close(spec.n, 4.0, 0.0);
        CHECK(spec.map.kind() == UnivalentMap::Kind::Koebe);
        CHECK_THROWS_AS(glued_spec_from_json(parse_json_text(
                            R"({"map":{"kind":"koebe"},"n":4.0,"bump":"boxcar"})")),
                        ConfigError);
        CHECK_THROWS_AS(
            glued_spec_from_json(parse_json_text(R"({"map":{"kind":"koebe"},"n":0.25})")),
            ConfigError);
    }
    SUBCASE("bad json is a config error") {
        CHECK_THROWS_AS(parse_json_text("{nope"), ConfigError);
        CHECK_THROWS_AS(map_from_json(parse_json_text(R"({"kind":"heptagonal"})")), ConfigError);
        CHECK_THROWS_AS(quadrature_from_json(parse_json_text(R"({"kind":"monte-carlo"})")),
                        ConfigError);
    }
}

TEST_CASE("mobius sweep: every series sits at the noise floor") {
    SweepConfig c = small_config();
    c.map = UnivalentMap::mobius(
        MobiusTransform(Complex(1, 0), Complex(0.2, 0), Complex(0.2, 0), Complex(1, 0)));
    c.n_values = {3.0, 4.0};
    const SweepResult r = run_decay_sweep(c);
    for (const SlabStats& row : r.rows) {
        CHECK(row.sectional_defect_max < 1e-6);
        CHECK(row.traceless_ricci_max < 1e-6);
        CHECK(row.l2_traceless_per_area < 1e-6);
        CHECK(row.distortion_minus_1 == 0.0);
        CHECK(row.jacobian_minus_1_max == 0.0);
        CHECK(row.metric_diff_u_max == 0.0);
    }
}

TEST_CASE("koebe sweep decays monotonically with the expected rates") {
    SweepConfig c = small_config();
    c.n_values = {3.0, 4.0, 5.0, 6.0};
    const SweepResult r = run_decay_sweep(c);
    for (const DecaySeries& s : r.series()) {
        CAPTURE(s.metric_name);
        for (std::size_t i = 1; i < s.points.size(); ++i)
            CHECK(s.points[i].second < s.points[i - 1].second);
    }
    const auto series = r.series();
    auto slope_of = [&](const std::string& name) {
        for (const DecaySeries& s : series)
            if (s.metric_name == name) return fit_exponent(s).slope;
        FAIL("missing series");
        return 0.0;
    };
    check_close(slope_of("sectional_defect_max"), -2.0, 0.15);
    check_close(slope_of("traceless_ricci_max"), -2.0, 0.15);
    check_close(slope_of("l2_traceless_ricci_per_area"), -1.0, 0.15);
    check_close(slope_of("bilipschitz_distortion_minus_1"), -2.0, 0.2);
    check_close(slope_of("jacobian_minus_1_max"), -4.0, 0.3);
    check_close(slope_of("metric_diff_u_max"), -2.0, 0.2);
}

TEST_CASE("rows that overflow are skipped with a recorded reason") {
    SweepConfig c = small_config();
    c.n_values = {3.0, 400.0}; // cosh^2 overflows at the second depth
    const SweepResult r = run_decay_sweep(c);
    CHECK(r.rows.size() == 1);
    REQUIRE(r.skipped.size() == 1);
    CHECK(r.skipped[0].first == 400.0);
    CHECK_FALSE(r.skipped[0].second.empty());
    const std::string csv = sweep_csv(c, r);
    CHECK(csv.find("# skipped n=400") != std::string::npos);
}

TEST_CASE("determinism and parallel equivalence") {
    const SweepConfig c = small_config();
    const SweepResult r1 = run_decay_sweep(c);
    const SweepResult r2 = run_decay_sweep(c);
    const std::string csv1 = sweep_csv(c, r1);
    const std::string csv2 = sweep_csv(c, r2);
    CHECK(csv1 == csv2);

    const SweepResult serial = run_decay_sweep(c, false);
    CHECK(csv1 == sweep_csv(c, serial));

    SUBCASE("different seed moves the random-plane statistics") {
        SweepConfig c2 = c;
        c2.seed = 778;
        const std::string csv3 = sweep_csv(c2, run_decay_sweep(c2));
        CHECK(csv1 != csv3);
    }
}

TEST_CASE("sweep artifacts") {
    const SweepConfig c = small_config();
    const SweepResult r = run_decay_sweep(c);
    SUBCASE("csv shape") {
        const std::string csv = sweep_csv(c, r);
        CHECK(csv.find("n,metric,value\n") != std::string::npos);
        CHECK(csv.find("sectional_defect_max") != std::string::npos);
        CHECK(csv.find("# chart=fermi(x,y,t)") != std::string::npos);
        size_t rows = 0;
        for (char ch : csv)
            if (ch == '\n') ++rows;
        CHECK(rows == 4 + 6 * c.n_values.size()); // 3 comments + header + data
    }
    SUBCASE("json summary carries fits") {
        const std::string js = sweep_summary_json(c, r);
        const auto j = parse_json_text(js);
        CHECK(j.contains("series"));
        CHECK(j["series"].contains("sectional_defect_max"));
        CHECK(j["series"]["sectional_defect_max"].contains("fit"));
        const double slope = j["series"]["sectional_defect_max"]["fit"]["slope"].get<double>();
        CHECK(slope < -1.5);
        CHECK(slope > -2.5);
    }
    SUBCASE("svg plot renders") {
        const std::string svg = sweep_svg(r);
        CHECK(svg.find("<svg") == 0);
        CHECK(svg.find("polyline") != std::string::npos);
        CHECK(svg.find("slope") != std::string::npos);
    }
}
