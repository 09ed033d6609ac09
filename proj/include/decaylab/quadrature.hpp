#pragma once

#include <string>
#include <vector>

#include "decaylab/errors.hpp"

namespace decaylab {

struct QuadratureSpec {
    int nodes_per_axis = 8;
    std::string kind = "gauss-legendre";

    void validate() const {
        if (kind != "gauss-legendre")
            throw ConfigError("QuadratureSpec: unknown kind '" + kind + "'");
        if (nodes_per_axis < 4)
            throw ConfigError("QuadratureSpec: at least 4 nodes per axis required");
    }
};

struct QuadratureRule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

/// Gauss-Legendre nodes and weights by Newton iteration on the Legendre
/// recurrence. Nodes come out symmetric and in ascending order.
QuadratureRule gauss_legendre(int n);

/// Nodes and weights mapped onto [a, b].
QuadratureRule gauss_legendre_on(int n, double a, double b);

} // namespace decaylab
