#pragma once

#include <stdexcept>
#include <string>

namespace decaylab {

// Stencil would leave the domain of the function being differentiated.
struct StencilError : std::domain_error {
    using std::domain_error::domain_error;
};

// The Epstein immersion is degenerate at the requested point, so the
// pullback metric is not positive definite there.
struct NonImmersedError : std::domain_error {
    explicit NonImmersedError(double eigenvalue)
        : std::domain_error("pullback metric not positive definite, offending eigenvalue " +
                            std::to_string(eigenvalue)),
          offending_eigenvalue(eigenvalue) {}
    double offending_eigenvalue;
};

// The rotation angle is undefined where the Schwarzian vanishes.
struct ZeroSchwarzianError : std::domain_error {
    using std::domain_error::domain_error;
};

struct SingularMetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace decaylab
