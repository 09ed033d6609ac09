// decaylab command line: decay sweeps, pointwise probes, bound calculator,
// and the verification suite.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "decaylab/acceptance.hpp"
#include "decaylab/config.hpp"
#include "decaylab/qc_bounds.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using namespace decaylab;

void apply_thread_cap() {
#ifdef _OPENMP
    if (const char* env = std::getenv("DECAYLAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
#endif
}

nlohmann::json json_arg(const std::string& text) {
    if (!text.empty() && text[0] == '@') return parse_json_file(text.substr(1));
    return parse_json_text(text);
}

void write_or_print(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::fputs(content.c_str(), stdout);
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write to " + path);
    out << content;
}

int cmd_decay_sweep(const std::string& config_path, const std::string& csv_flag,
                    const std::string& json_flag, const std::string& svg_flag, bool serial) {
    SweepConfig config;
    if (!config_path.empty()) config = sweep_config_from_json(parse_json_file(config_path));
    // command-line paths win over paths in the config file
    const std::string csv_path = csv_flag.empty() ? config.csv_path : csv_flag;
    const std::string json_path = json_flag.empty() ? config.json_path : json_flag;
    const std::string svg_path = svg_flag.empty() ? config.svg_path : svg_flag;
    const SweepResult result = run_decay_sweep(config, !serial);
    write_or_print(csv_path, sweep_csv(config, result));
    if (!json_path.empty()) write_or_print(json_path, sweep_summary_json(config, result));
    if (!svg_path.empty()) write_or_print(svg_path, sweep_svg(result));
    return 0;
}

int cmd_curvature_probe(const std::string& field_name, const std::string& map_json, double n,
                        double x, double y, double t, double step, bool richardson,
                        const std::string& out_path) {
    const UnivalentMap map =
        map_json.empty() ? UnivalentMap::koebe() : map_from_json(json_arg(map_json));
    MetricField field;
    if (field_name == "fermi") field = fermi_field();
    else if (field_name == "euclidean") field = euclidean_field();
    else if (field_name == "sphere") field = sphere_patch_field();
    else if (field_name == "h") field = pullback_h_field(map);
    else if (field_name == "eta") field = eta_field(GluedMetricSpec(map, n));
    else throw ConfigError("unknown field '" + field_name + "'");

    FdSteps steps;
    steps.christoffel = step;
    steps.richardson = richardson;
    const CurvatureSample sample = make_curvature_sample(field, x, y, t, steps);
    std::string text = "# chart=fermi(x,y,t); ambient=halfspace; field=" + field_name + "\n" +
                       curvature_csv_header() + "\n" + curvature_csv_row(sample) + "\n";
    write_or_print(out_path, text);
    return 0;
}

int cmd_surface_probe(const std::string& map_json, double center_x, double center_y, double side,
                      int nx, int ny, double t0, double t1, int nt,
                      const std::string& out_path) {
    const UnivalentMap map =
        map_json.empty() ? UnivalentMap::koebe() : map_from_json(json_arg(map_json));
    if (nx < 1 || ny < 1 || nt < 1) throw ConfigError("surface-probe: grid must be positive");
    std::string text = "# chart=fermi(x,y,t); ambient=halfspace; map=" + map.describe() + "\n" +
                       epstein_csv_header() + "\n";
    for (int it = 0; it < nt; ++it)
        for (int ix = 0; ix < nx; ++ix)
            for (int iy = 0; iy < ny; ++iy) {
                const double x = center_x - side / 2.0 + (nx > 1 ? side * ix / (nx - 1) : 0.0);
                const double y = center_y - side / 2.0 + (ny > 1 ? side * iy / (ny - 1) : 0.0);
                const double t = t0 + (nt > 1 ? (t1 - t0) * it / (nt - 1) : 0.0);
                text += epstein_csv_row(make_epstein_sample(map, FermiPoint(x, y, t))) + "\n";
            }
    write_or_print(out_path, text);
    return 0;
}

// Fit the constant analogues from a decay-sweep CSV: the sectional series
// scaled by e^{2n} and the L2 series scaled by e^{n}, maxima over the range.
void fit_constants_from_csv(const std::string& path, double c_tian, FittedConstant& a4,
                            FittedConstant& a5, FittedConstant& a6) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open sweep csv: " + path);
    double a_sectional = 0.0, a_l2 = 0.0;
    std::string line;
    bool any = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("n,", 0) == 0) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) continue;
        const double n = std::atof(line.substr(0, c1).c_str());
        const std::string metric = line.substr(c1 + 1, c2 - c1 - 1);
        const double value = std::atof(line.substr(c2 + 1).c_str());
        if (metric == "sectional_defect_max") {
            a_sectional = std::max(a_sectional, value * std::exp(2.0 * n));
            any = true;
        } else if (metric == "l2_traceless_ricci_per_area") {
            a_l2 = std::max(a_l2, value * std::exp(n));
            any = true;
        }
    }
    if (!any) throw ConfigError("no usable series in " + path);
    const double a0 = std::max({a_sectional, a_l2, 1.0});
    a4 = {c_tian * a0, "fitted"};
    a5 = {std::max(a4.value, 9.0 * std::exp(-3.0)), "fitted"};
    a6 = {a5.value, "fitted"};
}

int cmd_bound_calculator(double d, double a4_in, double a5_in, double a6_in,
                         const std::string& fit_from, double c_tian,
                         const std::string& out_path) {
    FittedConstant a4{1.0, "supplied"}, a5{1.0, "supplied"}, a6{1.0, "supplied"};
    if (!fit_from.empty()) fit_constants_from_csv(fit_from, c_tian, a4, a5, a6);
    if (a4_in > 0.0) a4 = {a4_in, "supplied"};
    if (a5_in > 0.0) a5 = {a5_in, "supplied"};
    if (a6_in > 0.0) a6 = {a6_in, "supplied"};
    const BoundReport report = bound_report(d, a4, a5, a6, c_tian);
    write_or_print(out_path, bound_report_json(report) + "\n");
    return 0;
}

int cmd_verify(const std::string& config_path, const std::string& json_path,
               const std::string& out_dir) {
    AcceptanceConfig config;
    if (!config_path.empty())
        config = acceptance_config_from_json(parse_json_file(config_path));
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (!config.out_dir.empty()) std::filesystem::create_directories(config.out_dir);
    const auto results = run_acceptance(config);
    int failures = 0;
    for (const auto& r : results) {
        std::puts(format_criterion_line(r).c_str());
        if (!r.pass) ++failures;
    }
    if (!json_path.empty()) write_or_print(json_path, acceptance_report_json(results) + "\n");
    std::printf("%zu criteria, %d failed\n", results.size(), failures);
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    apply_thread_cap();

    CLI::App app{"decaylab: glued hyperbolic metrics, curvature decay sweeps, bound chains"};
    app.require_subcommand(1);

    // decay-sweep
    std::string sweep_config, sweep_csv_path, sweep_json_path, sweep_svg_path;
    bool sweep_serial = false;
    auto* sweep = app.add_subcommand("decay-sweep", "run the depth sweep and emit CSV/JSON/SVG");
    sweep->add_option("--config", sweep_config, "sweep config JSON file");
    sweep->add_option("--csv", sweep_csv_path, "CSV output path (stdout when omitted)");
    sweep->add_option("--json", sweep_json_path, "summary JSON output path");
    sweep->add_option("--svg", sweep_svg_path, "log-linear plot output path");
    sweep->add_flag("--serial", sweep_serial, "run the serial reference kernel");

    // curvature-probe
    std::string probe_field = "eta", probe_map, probe_out;
    double probe_n = 4.0, probe_x = 0.2, probe_y = 0.0, probe_t = 4.5, probe_step = 1e-3;
    bool probe_richardson = true;
    auto* probe = app.add_subcommand("curvature-probe", "one curvature sample at a point");
    probe->add_option("--field", probe_field, "fermi|euclidean|sphere|h|eta");
    probe->add_option("--map", probe_map, "map spec JSON (inline or @file)");
    probe->add_option("--n", probe_n, "gluing depth for eta");
    probe->add_option("--x", probe_x, "x coordinate");
    probe->add_option("--y", probe_y, "y coordinate");
    probe->add_option("--t", probe_t, "t coordinate");
    probe->add_option("--step", probe_step, "FD base step");
    probe->add_flag("--richardson,!--no-richardson", probe_richardson, "Richardson extrapolation");
    probe->add_option("--out", probe_out, "output path (stdout when omitted)");

    // surface-probe
    std::string surf_map, surf_out;
    double surf_cx = 0.2, surf_cy = 0.0, surf_side = 0.5, surf_t0 = 1.0, surf_t1 = 5.0;
    int surf_nx = 5, surf_ny = 5, surf_nt = 9;
    auto* surf = app.add_subcommand("surface-probe", "EpsteinSample grid over a z box and t range");
    surf->add_option("--map", surf_map, "map spec JSON (inline or @file)");
    surf->add_option("--center-x", surf_cx, "z box center, real part");
    surf->add_option("--center-y", surf_cy, "z box center, imaginary part");
    surf->add_option("--side", surf_side, "z box side");
    surf->add_option("--nx", surf_nx, "grid points in x");
    surf->add_option("--ny", surf_ny, "grid points in y");
    surf->add_option("--t0", surf_t0, "first leaf");
    surf->add_option("--t1", surf_t1, "last leaf");
    surf->add_option("--nt", surf_nt, "number of leaves");
    surf->add_option("--out", surf_out, "output path (stdout when omitted)");

    // bound-calculator
    double bc_d = 12.0, bc_a4 = 0.0, bc_a5 = 0.0, bc_a6 = 0.0, bc_ct = 1.0;
    std::string bc_fit_from, bc_out;
    auto* bc = app.add_subcommand("bound-calculator", "assemble the constant chain for depth d");
    bc->add_option("--d", bc_d, "collar depth (> 9)")->required();
    bc->add_option("--A4", bc_a4, "supplied A4");
    bc->add_option("--A5", bc_a5, "supplied A5");
    bc->add_option("--A6", bc_a6, "supplied A6");
    bc->add_option("--fit-from", bc_fit_from, "fit constants from a decay-sweep CSV");
    bc->add_option("--c-tian", bc_ct, "opaque comparison constant, default 1");
    bc->add_option("--out", bc_out, "output path (stdout when omitted)");

    // verify
    std::string verify_config, verify_json, verify_out_dir;
    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_option("--config", verify_config, "verification config JSON");
    verify->add_option("--json", verify_json, "JSON report output path");
    verify->add_option("--out-dir", verify_out_dir, "directory for sweep artifacts");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sweep->parsed())
            return cmd_decay_sweep(sweep_config, sweep_csv_path, sweep_json_path, sweep_svg_path,
                                   sweep_serial);
        if (probe->parsed())
            return cmd_curvature_probe(probe_field, probe_map, probe_n, probe_x, probe_y, probe_t,
                                       probe_step, probe_richardson, probe_out);
        if (surf->parsed())
            return cmd_surface_probe(surf_map, surf_cx, surf_cy, surf_side, surf_nx, surf_ny,
                                     surf_t0, surf_t1, surf_nt, surf_out);
        if (bc->parsed())
            return cmd_bound_calculator(bc_d, bc_a4, bc_a5, bc_a6, bc_fit_from, bc_ct, bc_out);
        if (verify->parsed()) return cmd_verify(verify_config, verify_json, verify_out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
