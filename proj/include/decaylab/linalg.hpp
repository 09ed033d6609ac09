#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "decaylab/errors.hpp"

namespace decaylab {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double& operator[](int i) { return *(&x + i); }
    double operator[](int i) const { return *(&x + i); }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }

    static Vec3 cross(const Vec3& a, const Vec3& b) {
        return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
    }
};

/// Symmetric 3x3 bilinear form holding its six independent entries.
class SymMatrix3 {
public:
    SymMatrix3() : e_{} {}

    static SymMatrix3 diagonal(double a, double b, double c) {
        SymMatrix3 m;
        m.e_ = {a, 0.0, 0.0, b, 0.0, c};
        return m;
    }

    static SymMatrix3 identity() { return diagonal(1.0, 1.0, 1.0); }

    double& operator()(int i, int j) { return e_[index(i, j)]; }
    double operator()(int i, int j) const { return e_[index(i, j)]; }

    SymMatrix3 operator+(const SymMatrix3& o) const {
        SymMatrix3 r;
        for (std::size_t k = 0; k < 6; ++k) r.e_[k] = e_[k] + o.e_[k];
        return r;
    }
    SymMatrix3 operator-(const SymMatrix3& o) const {
        SymMatrix3 r;
        for (std::size_t k = 0; k < 6; ++k) r.e_[k] = e_[k] - o.e_[k];
        return r;
    }
    SymMatrix3 operator*(double s) const {
        SymMatrix3 r;
        for (std::size_t k = 0; k < 6; ++k) r.e_[k] = e_[k] * s;
        return r;
    }

    double trace() const { return e_[0] + e_[3] + e_[5]; }

    double determinant() const {
        const double a = e_[0], b = e_[1], c = e_[2], d = e_[3], f = e_[4], g = e_[5];
        return a * (d * g - f * f) - b * (b * g - f * c) + c * (b * f - d * c);
    }

    Vec3 apply(const Vec3& v) const {
        return {(*this)(0, 0) * v.x + (*this)(0, 1) * v.y + (*this)(0, 2) * v.z,
                (*this)(1, 0) * v.x + (*this)(1, 1) * v.y + (*this)(1, 2) * v.z,
                (*this)(2, 0) * v.x + (*this)(2, 1) * v.y + (*this)(2, 2) * v.z};
    }

    double quad(const Vec3& u, const Vec3& v) const { return u.dot(apply(v)); }

    double max_abs() const {
        double m = 0.0;
        for (double v : e_) m = std::max(m, std::abs(v));
        return m;
    }

    /// Lower Cholesky factor. Fails iff the form is not positive definite.
    bool cholesky(std::array<double, 6>& lower) const {
        // lower stores L row-wise: l00, l10, l11, l20, l21, l22
        const double a00 = (*this)(0, 0);
        if (a00 <= 0.0) return false;
        const double l00 = std::sqrt(a00);
        const double l10 = (*this)(1, 0) / l00;
        const double l20 = (*this)(2, 0) / l00;
        const double d1 = (*this)(1, 1) - l10 * l10;
        if (d1 <= 0.0) return false;
        const double l11 = std::sqrt(d1);
        const double l21 = ((*this)(2, 1) - l20 * l10) / l11;
        const double d2 = (*this)(2, 2) - l20 * l20 - l21 * l21;
        if (d2 <= 0.0) return false;
        lower = {l00, l10, l11, l20, l21, std::sqrt(d2)};
        return true;
    }

    bool is_spd() const {
        std::array<double, 6> l;
        return cholesky(l);
    }

    /// Solve (*this) x = b for SPD forms.
    Vec3 solve_spd(const Vec3& b) const {
        std::array<double, 6> l;
        if (!cholesky(l)) throw SingularMetricError("matrix not positive definite in solve");
        // forward
        const double y0 = b.x / l[0];
        const double y1 = (b.y - l[1] * y0) / l[2];
        const double y2 = (b.z - l[3] * y0 - l[4] * y1) / l[5];
        // backward
        Vec3 x;
        x.z = y2 / l[5];
        x.y = (y1 - l[4] * x.z) / l[2];
        x.x = (y0 - l[1] * x.y - l[3] * x.z) / l[0];
        return x;
    }

    /// Inverse of an SPD form via Cholesky.
    SymMatrix3 inverse_spd() const {
        SymMatrix3 inv;
        Vec3 cols[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        for (int j = 0; j < 3; ++j) {
            const Vec3 x = solve_spd(cols[j]);
            for (int i = j; i < 3; ++i) inv(i, j) = x[i];
        }
        return inv;
    }

    /// Eigenvalues by cyclic Jacobi sweeps, ascending. Deterministic.
    std::array<double, 3> eigenvalues() const {
        double a[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) a[i][j] = (*this)(i, j);
        for (int sweep = 0; sweep < 32; ++sweep) {
            double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
            double scale = std::abs(a[0][0]) + std::abs(a[1][1]) + std::abs(a[2][2]);
            if (off <= 1e-16 * (scale + 1e-300)) break;
            for (int p = 0; p < 2; ++p) {
                for (int q = p + 1; q < 3; ++q) {
                    if (a[p][q] == 0.0) continue;
                    const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                     (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    const double c = 1.0 / std::sqrt(t * t + 1.0);
                    const double s = t * c;
                    for (int k = 0; k < 3; ++k) {
                        const double akp = a[k][p], akq = a[k][q];
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for (int k = 0; k < 3; ++k) {
                        const double apk = a[p][k], aqk = a[q][k];
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                }
            }
        }
        std::array<double, 3> ev = {a[0][0], a[1][1], a[2][2]};
        if (ev[0] > ev[1]) std::swap(ev[0], ev[1]);
        if (ev[1] > ev[2]) std::swap(ev[1], ev[2]);
        if (ev[0] > ev[1]) std::swap(ev[0], ev[1]);
        return ev;
    }

private:
    // entry order: xx, xy, xz, yy, yz, zz
    static int index(int i, int j) {
        static constexpr int map[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
        return map[i][j];
    }

    std::array<double, 6> e_;
};

struct Mat2 {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0; // row major [[a,b],[c,d]]

    static Mat2 diag(double p, double q) { return {p, 0.0, 0.0, q}; }

    double det() const { return a * d - b * c; }

    /// Singular values, largest first.
    std::array<double, 2> singular_values() const {
        // eigenvalues of M^T M by the stable quadratic route
        const double s11 = a * a + c * c;
        const double s12 = a * b + c * d;
        const double s22 = b * b + d * d;
        const double tr = s11 + s22;
        const double disc = std::sqrt(std::max(0.0, (s11 - s22) * (s11 - s22) + 4.0 * s12 * s12));
        const double l1 = 0.5 * (tr + disc);
        const double l2 = std::max(0.0, 0.5 * (tr - disc));
        return {std::sqrt(l1), std::sqrt(l2)};
    }
};

} // namespace decaylab
