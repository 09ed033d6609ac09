#include "decaylab/config.hpp"

#include <fstream>

namespace decaylab {

namespace {

Complex complex_from(const nlohmann::json& j, const std::string& what) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    throw ConfigError("expected number or [re, im] for " + what);
}

} // namespace

UnivalentMap map_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("map spec must be an object with a 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "identity") return UnivalentMap::identity();
    if (kind == "koebe") return UnivalentMap::koebe();
    if (kind == "quadratic") {
        if (!j.contains("a")) throw ConfigError("quadratic map needs 'a'");
        return UnivalentMap::quadratic(complex_from(j.at("a"), "quadratic a"));
    }
    if (kind == "mobius") {
        if (!j.contains("matrix") || !j.at("matrix").is_array() || j.at("matrix").size() != 4)
            throw ConfigError("mobius map needs 'matrix' = [a, b, c, d]");
        const auto& m = j.at("matrix");
        return UnivalentMap::mobius(
            MobiusTransform(complex_from(m[0], "a"), complex_from(m[1], "b"),
                            complex_from(m[2], "c"), complex_from(m[3], "d")));
    }
    if (kind == "precomposed") {
        if (!j.contains("inner") || !j.contains("outer"))
            throw ConfigError("precomposed map needs 'inner' and 'outer'");
        const auto& in = j.at("inner");
        const Complex c = complex_from(in.at("c"), "inner c");
        const double beta = in.value("rotation", 0.0);
        return UnivalentMap::precomposed(DiskAutomorphism(c, beta), map_from_json(j.at("outer")));
    }
    throw ConfigError("unknown map kind '" + kind + "'");
}

nlohmann::json map_to_json(const UnivalentMap& map) {
    nlohmann::json j;
    switch (map.kind()) {
    case UnivalentMap::Kind::Identity:
        j["kind"] = "identity";
        break;
    case UnivalentMap::Kind::Koebe:
        j["kind"] = "koebe";
        break;
    case UnivalentMap::Kind::Quadratic:
        j["kind"] = "quadratic";
        j["a"] = {map.quadratic_coefficient().real(), map.quadratic_coefficient().imag()};
        break;
    case UnivalentMap::Kind::Mobius: {
        const MobiusTransform& m = map.mobius_matrix();
        j["kind"] = "mobius";
        j["matrix"] = {{m.a().real(), m.a().imag()},
                       {m.b().real(), m.b().imag()},
                       {m.c().real(), m.c().imag()},
                       {m.d().real(), m.d().imag()}};
        break;
    }
    case UnivalentMap::Kind::Precomposed:
        j["kind"] = "precomposed";
        j["inner"] = {{"c", {map.inner().c.real(), map.inner().c.imag()}},
                      {"rotation", map.inner().beta}};
        j["outer"] = map_to_json(map.outer());
        break;
    }
    return j;
}

GluedMetricSpec glued_spec_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("map") || !j.contains("n"))
        throw ConfigError("glued metric spec needs 'map' and 'n'");
    const std::string bump_name = j.value("bump", std::string("quintic"));
    if (bump_name != "quintic")
        throw ConfigError("unknown bump profile '" + bump_name + "'");
    try {
        return GluedMetricSpec(map_from_json(j.at("map")), j.at("n").get<double>(),
                               BumpProfile::QuinticSmoothstep);
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
}

QuadratureSpec quadrature_from_json(const nlohmann::json& j) {
    QuadratureSpec q;
    if (j.contains("nodes_per_axis")) q.nodes_per_axis = j.at("nodes_per_axis").get<int>();
    if (j.contains("kind")) q.kind = j.at("kind").get<std::string>();
    q.validate();
    return q;
}

SweepConfig sweep_config_from_json(const nlohmann::json& j) {
    SweepConfig c;
    if (j.contains("map")) c.map = map_from_json(j.at("map"));
    if (j.contains("n_values")) c.n_values = j.at("n_values").get<std::vector<double>>();
    if (j.contains("z_box")) {
        const auto& b = j.at("z_box");
        if (b.contains("center")) {
            const Complex z = complex_from(b.at("center"), "z_box center");
            c.box_center_x = z.real();
            c.box_center_y = z.imag();
        }
        if (b.contains("side")) c.box_side = b.at("side").get<double>();
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        c.grid_nx = g.value("nx", c.grid_nx);
        c.grid_ny = g.value("ny", c.grid_ny);
        c.grid_nt = g.value("nt", c.grid_nt);
    }
    if (j.contains("fd")) {
        const auto& f = j.at("fd");
        c.fd.christoffel = f.value("christoffel_step", c.fd.christoffel);
        c.fd.outer_factor = f.value("outer_step_factor", c.fd.outer_factor);
        c.fd.richardson = f.value("richardson", c.fd.richardson);
    }
    if (j.contains("quadrature")) c.quadrature = quadrature_from_json(j.at("quadrature"));
    if (j.contains("planes_per_point")) c.planes_per_point = j.at("planes_per_point").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("chi")) c.chi = j.at("chi").get<double>();
    if (j.contains("output")) {
        const auto& o = j.at("output");
        c.csv_path = o.value("csv", std::string());
        c.json_path = o.value("json", std::string());
        c.svg_path = o.value("svg", std::string());
    }
    c.validate();
    return c;
}

nlohmann::json parse_json_text(const std::string& text) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("JSON parse error: ") + e.what());
    }
}

nlohmann::json parse_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_json_text(text);
}

} // namespace decaylab
