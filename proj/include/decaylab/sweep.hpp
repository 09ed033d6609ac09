#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "decaylab/curvature.hpp"

namespace decaylab {

struct SweepConfig {
    UnivalentMap map = UnivalentMap::koebe();
    std::vector<double> n_values = {3, 4, 5, 6, 7, 8};
    double box_center_x = 0.2;
    double box_center_y = 0.0;
    double box_side = 0.5;
    int grid_nx = 6, grid_ny = 6, grid_nt = 7;
    FdSteps fd{};
    QuadratureSpec quadrature{};
    int planes_per_point = 2;
    std::uint64_t seed = 12345;
    double chi = -2.0;
    // optional artifact paths; empty means stdout / not emitted
    std::string csv_path, json_path, svg_path;

    void validate() const;
    Slab slab_at(double n) const;
};

struct DecaySeries {
    std::string metric_name;
    std::vector<std::pair<double, double>> points; // (n, value), values > 0
};

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double residual_max = 0.0;
};

/// Ordinary least squares on (n, log value). The slope estimates the decay
/// exponent the sweep is probing.
FitResult fit_exponent(const DecaySeries& series);

/// Everything measured on one gluing slab.
struct SlabStats {
    double n = 0.0;
    double sectional_defect_max = 0.0;  // max |K + 1|
    double traceless_ricci_max = 0.0;   // max pointwise ||Ric + 2 eta||
    double l2_traceless_per_area = 0.0; // sqrt(integral / area)
    double distortion_minus_1 = 0.0;    // bilipschitz distortion - 1
    double jacobian_minus_1_max = 0.0;  // max |Jac - 1|
    double metric_diff_u_max = 0.0;     // max |eta_ij - g_ij| in the u chart
};

SlabStats evaluate_slab(const SweepConfig& config, double n, bool parallel = true);

struct SweepResult {
    std::vector<SlabStats> rows;
    // rows that aborted on a propagated numeric error, with the reason
    std::vector<std::pair<double, std::string>> skipped;
    std::vector<DecaySeries> series() const;
};

SweepResult run_decay_sweep(const SweepConfig& config, bool parallel = true);

/// CSV with one row per (n, metric). No timestamps and a fixed float format,
/// so identical configs produce identical bytes.
std::string sweep_csv(const SweepConfig& config, const SweepResult& result);

/// JSON summary with fitted exponents per series.
std::string sweep_summary_json(const SweepConfig& config, const SweepResult& result);

/// Log-linear SVG plot with fitted lines, one polyline per series.
std::string sweep_svg(const SweepResult& result);

} // namespace decaylab
