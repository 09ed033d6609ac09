#include "decaylab/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "decaylab/parallel.hpp"
#include "decaylab/rng.hpp"
#include "json.hpp"

namespace decaylab {

void SweepConfig::validate() const {
    if (n_values.empty()) throw ConfigError("sweep: n_values must be nonempty");
    double prev = 0.0;
    for (double n : n_values) {
        if (!(n >= 1.0)) throw ConfigError("sweep: every n must be >= 1");
        if (!(n > prev)) throw ConfigError("sweep: n_values must be strictly increasing");
        prev = n;
    }
    if (grid_nx < 3 || grid_ny < 3 || grid_nt < 3)
        throw ConfigError("sweep: grid resolutions must be >= 3");
    if (planes_per_point < 0) throw ConfigError("sweep: planes_per_point must be >= 0");
    quadrature.validate();
    if (!(box_side > 0.0)) throw ConfigError("sweep: box side must be positive");
    const double reach = std::hypot(std::abs(box_center_x) + box_side / 2.0,
                                    std::abs(box_center_y) + box_side / 2.0);
    if (reach >= 0.9) throw ConfigError("sweep: z box too close to the disk boundary");
}

Slab SweepConfig::slab_at(double n) const {
    return Slab{box_center_x - box_side / 2.0, box_center_x + box_side / 2.0,
                box_center_y - box_side / 2.0, box_center_y + box_side / 2.0, n, n + 1.0};
}

FitResult fit_exponent(const DecaySeries& series) {
    const std::size_t m = series.points.size();
    if (m < 2) throw std::invalid_argument("fit_exponent: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [n, v] : series.points) {
        if (!(v > 0.0))
            throw std::domain_error("fit_exponent: nonpositive value in series " +
                                    series.metric_name);
        const double y = std::log(v);
        sx += n;
        sy += y;
        sxx += n * n;
        sxy += n * y;
    }
    const double denom = m * sxx - sx * sx;
    FitResult fit;
    fit.slope = (m * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / m;
    double ss_res = 0.0, ss_tot = 0.0;
    const double mean = sy / m;
    for (const auto& [n, v] : series.points) {
        const double y = std::log(v);
        const double r = y - (fit.intercept + fit.slope * n);
        ss_res += r * r;
        ss_tot += (y - mean) * (y - mean);
        fit.residual_max = std::max(fit.residual_max, std::abs(r));
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

namespace {

struct PointStats {
    double sect_defect = 0.0;
    double traceless = 0.0;
    double dist_m1 = 0.0;
    double jac_m1 = 0.0;
    double udiff = 0.0;
    bool ok = true;
};

Vec3 random_vector(SplitMix64& rng) {
    return {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
}

std::uint64_t point_key(double n, std::int64_t idx) {
    std::uint64_t bits;
    static_assert(sizeof bits == sizeof n);
    std::memcpy(&bits, &n, sizeof bits);
    return (bits * 0x9e3779b97f4a7c15ull) ^ (static_cast<std::uint64_t>(idx) * 0x100000001b3ull);
}

PointStats evaluate_point(const SweepConfig& config, const GluedMetricSpec& spec,
                          const MetricField& field, double x, double y, double t,
                          std::uint64_t key) {
    PointStats out;
    const SymMatrix3 metric = field.eval(x, y, t);
    const SymMatrix3 ric = ricci(field, x, y, t, config.fd);
    out.traceless = traceless_ricci_norm_from(metric, ric);

    const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    double defect = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
            defect = std::max(defect,
                              std::abs(sectional_from_ricci(metric, ric, axes[a], axes[b]) + 1.0));
    SplitMix64 rng(config.seed ^ key);
    for (int k = 0; k < config.planes_per_point; ++k) {
        Vec3 u = random_vector(rng);
        Vec3 v = random_vector(rng);
        for (int attempt = 0; attempt < 8; ++attempt) {
            const Vec3 cr = Vec3::cross(u, v);
            if (cr.norm() > 0.1 * u.norm() * v.norm()) break;
            v = random_vector(rng);
        }
        defect = std::max(defect, std::abs(sectional_from_ricci(metric, ric, u, v) + 1.0));
    }
    out.sect_defect = defect;

    const FermiPoint p(x, y, t);
    const PointDistortion d = point_distortion(spec, p);
    out.dist_m1 = d.distortion_minus_1;
    out.jac_m1 = std::abs(d.jacobian_minus_1);
    out.udiff = metric_difference_ucoords(spec, p);

    // NaN compares false against everything, so it would vanish into the
    // max-reductions; refuse it here instead
    if (!std::isfinite(out.sect_defect) || !std::isfinite(out.traceless) ||
        !std::isfinite(out.dist_m1) || !std::isfinite(out.jac_m1) || !std::isfinite(out.udiff))
        throw std::runtime_error("nonfinite statistic");
    return out;
}

} // namespace

SlabStats evaluate_slab(const SweepConfig& config, double n, bool parallel) {
    config.validate();
    const GluedMetricSpec spec(config.map, n);
    const MetricField field = eta_field(spec);
    const Slab slab = config.slab_at(n);

    const int nx = config.grid_nx, ny = config.grid_ny, nt = config.grid_nt;
    const std::int64_t count = static_cast<std::int64_t>(nx) * ny * nt;

    const auto stats = map_indexed_as<PointStats>(count, parallel, [&](std::int64_t idx) {
        const int it = static_cast<int>(idx % nt);
        const int iy = static_cast<int>((idx / nt) % ny);
        const int ix = static_cast<int>(idx / (static_cast<std::int64_t>(nt) * ny));
        const double x = slab.x0 + (slab.x1 - slab.x0) * ix / (nx - 1);
        const double y = slab.y0 + (slab.y1 - slab.y0) * iy / (ny - 1);
        const double t = slab.t0 + (slab.t1 - slab.t0) * it / (nt - 1);
        try {
            return evaluate_point(config, spec, field, x, y, t, point_key(n, idx));
        } catch (const std::exception&) {
            PointStats bad;
            bad.ok = false;
            return bad;
        }
    });

    SlabStats row;
    row.n = n;
    for (std::int64_t i = 0; i < count; ++i) {
        const PointStats& s = stats[static_cast<std::size_t>(i)];
        if (!s.ok)
            throw std::runtime_error("slab evaluation failed at grid index " + std::to_string(i));
        row.sectional_defect_max = std::max(row.sectional_defect_max, s.sect_defect);
        row.traceless_ricci_max = std::max(row.traceless_ricci_max, s.traceless);
        row.distortion_minus_1 = std::max(row.distortion_minus_1, s.dist_m1);
        row.jacobian_minus_1_max = std::max(row.jacobian_minus_1_max, s.jac_m1);
        row.metric_diff_u_max = std::max(row.metric_diff_u_max, s.udiff);
    }

    row.l2_traceless_per_area =
        l2_traceless_ricci(field, slab, config.quadrature, config.fd, config.chi, parallel)
            .per_unit_area;
    return row;
}

SweepResult run_decay_sweep(const SweepConfig& config, bool parallel) {
    config.validate();
    SweepResult result;
    for (double n : config.n_values) {
        try {
            result.rows.push_back(evaluate_slab(config, n, parallel));
        } catch (const std::exception& e) {
            result.skipped.emplace_back(n, e.what());
        }
    }
    return result;
}

std::vector<DecaySeries> SweepResult::series() const {
    const char* names[6] = {"sectional_defect_max", "traceless_ricci_max",
                            "l2_traceless_ricci_per_area", "bilipschitz_distortion_minus_1",
                            "jacobian_minus_1_max", "metric_diff_u_max"};
    std::vector<DecaySeries> out(6);
    for (int k = 0; k < 6; ++k) out[k].metric_name = names[k];
    for (const SlabStats& r : rows) {
        const double vals[6] = {r.sectional_defect_max, r.traceless_ricci_max,
                                r.l2_traceless_per_area, r.distortion_minus_1,
                                r.jacobian_minus_1_max, r.metric_diff_u_max};
        for (int k = 0; k < 6; ++k) out[k].points.emplace_back(r.n, vals[k]);
    }
    return out;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string sweep_csv(const SweepConfig& config, const SweepResult& result) {
    std::ostringstream os;
    os << "# decaylab decay-sweep\n";
    os << "# map=" << config.map.describe() << " seed=" << config.seed << " grid=" << config.grid_nx
       << "x" << config.grid_ny << "x" << config.grid_nt
       << " quad=" << config.quadrature.nodes_per_axis << " planes=" << config.planes_per_point
       << "\n";
    os << "# chart=fermi(x,y,t); ambient=halfspace\n";
    for (const auto& [n, reason] : result.skipped)
        os << "# skipped n=" << fmt(n) << " reason=" << reason << "\n";
    os << "n,metric,value\n";
    for (const SlabStats& r : result.rows) {
        os << fmt(r.n) << ",sectional_defect_max," << fmt(r.sectional_defect_max) << "\n";
        os << fmt(r.n) << ",traceless_ricci_max," << fmt(r.traceless_ricci_max) << "\n";
        os << fmt(r.n) << ",l2_traceless_ricci_per_area," << fmt(r.l2_traceless_per_area) << "\n";
        os << fmt(r.n) << ",bilipschitz_distortion_minus_1," << fmt(r.distortion_minus_1) << "\n";
        os << fmt(r.n) << ",jacobian_minus_1_max," << fmt(r.jacobian_minus_1_max) << "\n";
        os << fmt(r.n) << ",metric_diff_u_max," << fmt(r.metric_diff_u_max) << "\n";
    }
    return os.str();
}

std::string sweep_summary_json(const SweepConfig& config, const SweepResult& result) {
    nlohmann::json j;
    j["map"] = config.map.describe();
    j["seed"] = config.seed;
    j["n_values"] = config.n_values;
    for (const DecaySeries& s : result.series()) {
        nlohmann::json js;
        nlohmann::json pts = nlohmann::json::array();
        for (const auto& [n, v] : s.points) pts.push_back({{"n", n}, {"value", v}});
        js["points"] = pts;
        if (s.points.size() >= 2) {
            bool positive = true;
            for (const auto& [n, v] : s.points) positive = positive && v > 0.0;
            if (positive) {
                const FitResult f = fit_exponent(s);
                js["fit"] = {{"slope", f.slope},
                             {"intercept", f.intercept},
                             {"r2", f.r2},
                             {"residual_max", f.residual_max}};
            }
        }
        j["series"][s.metric_name] = js;
    }
    return j.dump(2);
}

std::string sweep_svg(const SweepResult& result) {
    const std::vector<DecaySeries> all = result.series();
    std::vector<DecaySeries> series;
    for (const auto& s : all) {
        bool positive = !s.points.empty();
        for (const auto& [n, v] : s.points) positive = positive && v > 0.0;
        if (positive) series.push_back(s);
    }
    const double W = 760, H = 480, ml = 70, mr = 180, mt = 24, mb = 48;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (series.empty()) {
        os << "<text x=\"20\" y=\"40\">no positive series to plot</text>\n</svg>\n";
        return os.str();
    }
    double nmin = 1e300, nmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (const auto& [n, v] : s.points) {
            nmin = std::min(nmin, n);
            nmax = std::max(nmax, n);
            const double y = std::log10(v);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (nmax == nmin) nmax = nmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    auto px = [&](double n) { return ml + (n - nmin) / (nmax - nmin) * (W - ml - mr); };
    auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };
    const char* colors[6] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    os << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\""
       << H - mb << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
       << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << (ml + (W - ml - mr) / 2) << "\" y=\"" << H - 12
       << "\" text-anchor=\"middle\" font-size=\"13\">gluing depth n</text>\n";
    os << "<text x=\"16\" y=\"" << (mt + (H - mt - mb) / 2)
       << "\" font-size=\"13\" transform=\"rotate(-90 16 " << (mt + (H - mt - mb) / 2)
       << ")\" text-anchor=\"middle\">log10(value)</text>\n";
    char buf[160];
    for (int k = 0; k <= 4; ++k) {
        const double y = ymin + (ymax - ymin) * k / 4.0;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%g\" y=\"%g\" text-anchor=\"end\" font-size=\"11\">%.2f</text>\n",
                      ml - 6.0, py(y) + 4.0, y);
        os << buf;
    }
    for (const auto& [n, v] : series.front().points) {
        (void)v;
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\" font-size=\"11\">%g</text>\n",
                      px(n), H - mb + 16.0, n);
        os << buf;
    }

    int idx = 0;
    for (const auto& s : series) {
        const char* color = colors[idx % 6];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [n, v] : s.points) os << px(n) << "," << py(std::log10(v)) << " ";
        os << "\"/>\n";
        for (const auto& [n, v] : s.points) {
            std::snprintf(buf, sizeof buf, "<circle cx=\"%g\" cy=\"%g\" r=\"2.5\" fill=\"%s\"/>\n",
                          px(n), py(std::log10(v)), color);
            os << buf;
        }
        if (s.points.size() >= 2) {
            const FitResult f = fit_exponent(s);
            const double log10e = 0.43429448190325176;
            const double y0 = (f.intercept + f.slope * nmin) * log10e;
            const double y1 = (f.intercept + f.slope * nmax) * log10e;
            std::snprintf(buf, sizeof buf,
                          "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"%s\" "
                          "stroke-dasharray=\"5,4\" stroke-width=\"1\"/>\n",
                          px(nmin), py(y0), px(nmax), py(y1), color);
            os << buf;
            std::snprintf(buf, sizeof buf,
                          "<text x=\"%g\" y=\"%g\" font-size=\"11\" fill=\"%s\">%s (slope "
                          "%.3f)</text>\n",
                          W - mr + 8.0, mt + 16.0 * (idx + 1), color, s.metric_name.c_str(),
                          f.slope);
            os << buf;
        }
        ++idx;
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace decaylab
