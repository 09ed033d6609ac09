#pragma once

#include <cmath>
#include <complex>

#include "doctest.h"

namespace testutil {

inline void check_close(double actual, double expected, double tol) {
    CAPTURE(actual);
    CAPTURE(expected);
    CHECK(std::abs(actual - expected) <= tol);
}

inline void check_rel(double actual, double expected, double rel) {
    CAPTURE(actual);
    CAPTURE(expected);
    const double scale = std::max(std::abs(expected), 1e-300);
    CHECK(std::abs(actual - expected) <= rel * scale);
}

inline void check_close_c(std::complex<double> actual, std::complex<double> expected, double tol) {
    CAPTURE(actual.real());
    CAPTURE(actual.imag());
    CAPTURE(expected.real());
    CAPTURE(expected.imag());
    CHECK(std::abs(actual - expected) <= tol);
}

} // namespace testutil
