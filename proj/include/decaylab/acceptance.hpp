#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "decaylab/sweep.hpp"

namespace decaylab {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double measured = 0.0;  // headline measurement
    double tolerance = 0.0; // threshold it is compared against
    std::string detail;
    double seconds = 0.0;
};

/// Thresholds are pinned here to the contract values; the overrides exist
/// so a verification run can tighten or (deliberately) break them from
/// configuration.
struct AcceptanceConfig {
    std::uint64_t seed = 12345;

    double tol_fermi = 1e-5;            // sectional and relative Ricci, Fermi control
    double tol_h_sectional = 2e-4;      // pullback hyperbolicity
    double tol_h_vs_fd = 1e-6;          // closed form vs FD pullback, relative
    double tol_eq5 = 1e-5;              // principal curvatures vs shape operator
    double slope_tol_sectional = 0.15;  // around -2
    double slope_tol_traceless = 0.15;  // around -2
    double slope_tol_l2 = 0.15;         // around -1
    double slope_tol_distortion = 0.2;  // around -2
    double slope_tol_jacobian = 0.3;    // around -4
    double nehari_bound = 1.5 + 1e-9;
    double koebe_attainment = 1.4999;
    double tol_volume_oracle = 1e-8;

    double runtime_fermi_s = 10.0;
    double runtime_h_s = 30.0;
    double runtime_sweep_s = 600.0;

    std::string out_dir; // when set, sweep CSV/JSON/SVG artifacts land here
};

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& config = {});

AcceptanceConfig acceptance_config_from_json(const nlohmann::json& j);

std::string acceptance_report_json(const std::vector<CriterionResult>& results);

/// One line per criterion, e.g. "[PASS] C5 decay_exponents ...".
std::string format_criterion_line(const CriterionResult& r);

} // namespace decaylab
