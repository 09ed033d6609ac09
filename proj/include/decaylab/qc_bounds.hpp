#pragma once

#include <map>
#include <string>
#include <vector>

#include "decaylab/epstein.hpp"

namespace decaylab {

/// Derivative of the normal projection at a normalized surface point,
/// diag((1 + k1)/2, (1 + k2)/2) in principal orthonormal frames.
Mat2 normal_projection_derivative(double k1, double k2);

/// Ratio of singular values, >= 1. Invariant under positive scaling.
double dilatation(const Mat2& m);

/// (1 + eps)^2 together with the check that the intermediate bound
/// (1 + eps/2)/(1 - eps/2) stays below it.
double qc_bound_from_pinch(double eps);

struct PinchBound {
    double bound; // 9 e^{-2t}
    bool valid;   // t >= log 9
};

/// |kappa_pm - 1| <= 9 e^{-2t} once t >= log 9.
PinchBound epstein_pinch(double t);

/// Sum of logs of quasiconformal factors, each >= 1.
double teich_distance_chain(const std::vector<double>& factors);

struct ChainCheck {
    double log_sum;    // log(1+A4 e^-n) + log(1+9 e^-2n) + log(1+A5 e^-n)
    double bound;      // 3 A5 e^-n
    bool dominance;    // A5 >= A4 and 9 e^{-2n} <= A5 e^{-n}
    bool holds;        // log_sum <= bound (guaranteed when dominance holds)
};

ChainCheck chain_bound_check(double a4, double a5, double n);

/// Worst-case propagation through the skinning map (it is 1-lipschitz).
inline double onelipschitz_compose(double dist_in) {
    if (dist_in < 0.0) throw std::domain_error("onelipschitz_compose: distance must be >= 0");
    return dist_in;
}

constexpr int kFloorOffset = 8; // n = floor(d) - 8

struct SkinningBound {
    double n;          // floor(d) - 8
    double raw;        // 7 A6 e^{-n}
    double final;      // 56722 A6 e^{-d}
    bool consistent;   // raw <= final and 7 e^9 <= 56722
};

SkinningBound skinning_diameter_bound(double d, double a6);

/// Dilatation of the normal projection measured by shooting geodesic rays
/// from the Epstein leaf to the ideal boundary and differentiating the
/// endpoints. Returns the singular values of D nu between the leaf's
/// orthonormal frames and the normalized Euclidean structure at the
/// endpoint; independent of the diag((1+k)/2) formula it checks.
std::array<double, 2> dnu_singular_values_ray_trace(const UnivalentMap& map, const FermiPoint& p,
                                                    double step = 1e-5);

struct FittedConstant {
    double value = 1.0;
    std::string source = "supplied"; // "supplied" or "fitted"
};

struct BoundReport {
    double n = 0.0;
    double d = 0.0;
    std::vector<std::pair<std::string, double>> factors; // (label, 1 + x)
    double chain_total = 0.0;
    double paper_bound = 0.0;
    bool chain_consistent = false;
    std::map<std::string, FittedConstant> constants; // A4, A5, A6, C_tian
    int floor_offset = kFloorOffset;
    SkinningBound skinning{};
};

/// Assemble the full constant chain for collar depth d. Constants may be
/// supplied or fitted upstream; the report records which.
BoundReport bound_report(double d, const FittedConstant& a4, const FittedConstant& a5,
                         const FittedConstant& a6, double c_tian = 1.0);

std::string bound_report_json(const BoundReport& r);

} // namespace decaylab
