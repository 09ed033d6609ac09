#pragma once

#include <string>

#include "json.hpp"

#include "decaylab/sweep.hpp"

namespace decaylab {

/// Map catalog addressing, e.g. {"kind":"quadratic","a":[0.5,0.0]}.
/// Complex numbers are [re, im] pairs.
UnivalentMap map_from_json(const nlohmann::json& j);
nlohmann::json map_to_json(const UnivalentMap& map);

/// {"map": ..., "n": 4.0, "bump": "quintic"}
GluedMetricSpec glued_spec_from_json(const nlohmann::json& j);

/// {"nodes_per_axis": 8, "kind": "gauss-legendre"}
QuadratureSpec quadrature_from_json(const nlohmann::json& j);

SweepConfig sweep_config_from_json(const nlohmann::json& j);

nlohmann::json parse_json_file(const std::string& path);
nlohmann::json parse_json_text(const std::string& text);

} // namespace decaylab
