#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "decaylab/errors.hpp"

namespace decaylab {

using Complex = std::complex<double>;

/// A point of the open unit disk. Construction enforces |z| < 1 - 1e-12.
class DiskPoint {
public:
    static constexpr double kBoundaryMargin = 1e-12;

    explicit DiskPoint(Complex z) : z_(z) {
        if (std::abs(z) >= 1.0 - kBoundaryMargin)
            throw std::domain_error("DiskPoint: |z| must be < 1 - 1e-12");
    }
    DiskPoint(double x, double y) : DiskPoint(Complex(x, y)) {}

    Complex value() const { return z_; }
    double abs() const { return std::abs(z_); }

private:
    Complex z_;
};

/// Poincare density of the unit disk, lambda(z) = 2 / (1 - |z|^2).
inline double hyperbolic_density(const DiskPoint& z) {
    return 2.0 / (1.0 - std::norm(z.value()));
}

/// Value and first three derivatives of a holomorphic map at a point.
struct Jet3 {
    Complex f0, f1, f2, f3;
};

/// Normalized element of PSL(2,C): ad - bc = 1 and the sign ambiguity fixed
/// by making the first entry of (a,b,c,d) of significant size have
/// nonnegative real part (nonnegative imaginary part on the tie).
class MobiusTransform {
public:
    MobiusTransform() : a_(1), b_(0), c_(0), d_(1) {}
    MobiusTransform(Complex a, Complex b, Complex c, Complex d);

    static MobiusTransform identity() { return MobiusTransform(); }

    Complex a() const { return a_; }
    Complex b() const { return b_; }
    Complex c() const { return c_; }
    Complex d() const { return d_; }

    MobiusTransform compose(const MobiusTransform& rhs) const; // this after rhs
    MobiusTransform inverse() const;

    /// Action on a finite point of C. Throws on the pole.
    Complex apply(Complex w) const;

    /// Image of infinity (a/c), or infinity itself when c = 0.
    bool fixes_infinity() const { return std::abs(c_) < 1e-15; }

    Jet3 jet(Complex z) const;

    double distance_to(const MobiusTransform& o) const;

private:
    Complex a_, b_, c_, d_;
};

/// Rigid automorphism of the disk, w -> e^{i beta} (w + c) / (1 + conj(c) w).
struct DiskAutomorphism {
    Complex c;   // |c| < 1
    double beta; // rotation angle

    DiskAutomorphism(Complex c_, double beta_);
    MobiusTransform as_mobius() const;
    Complex apply(Complex w) const;
};

/// Closed-form catalog of univalent maps of the disk. Jets are exact.
///
/// Every member has a known univalence proof, which is what makes the
/// Kraus-Nehari checks and the curvature formulas downstream trustworthy.
class UnivalentMap {
public:
    enum class Kind { Identity, Mobius, Koebe, Quadratic, Precomposed };

    static UnivalentMap identity();
    static UnivalentMap koebe();
    static UnivalentMap quadratic(Complex a); // z + a z^2 with |a| <= 1/2
    static UnivalentMap mobius(const MobiusTransform& m);
    static UnivalentMap precomposed(const DiskAutomorphism& inner, const UnivalentMap& outer);

    Kind kind() const { return kind_; }
    Complex quadratic_coefficient() const { return a_; }
    const MobiusTransform& mobius_matrix() const { return mobius_; }
    const DiskAutomorphism& inner() const { return inner_; }
    const UnivalentMap& outer() const { return *outer_; }

    /// True when the Schwarzian derivative vanishes identically.
    bool is_mobius_type() const;

    /// Value only, for finite-difference oracles that must not touch the
    /// derivative bookkeeping.
    Complex value(const DiskPoint& z) const;

    /// Exact value and first three derivatives.
    Jet3 jet(const DiskPoint& z) const;

    std::string describe() const;

private:
    UnivalentMap() : inner_(Complex(0, 0), 0.0) {}

    Kind kind_ = Kind::Identity;
    Complex a_{};
    MobiusTransform mobius_{};
    DiskAutomorphism inner_;
    std::shared_ptr<const UnivalentMap> outer_;
};

/// Schwarzian derivative S(phi) = f3/f1 - (3/2)(f2/f1)^2 from the exact jet.
/// Exactly zero for the Mobius-type members of the catalog.
Complex schwarzian(const UnivalentMap& map, const DiskPoint& z);

/// Schwarzian from central finite differences of map values alone.
/// Independent of the jet code paths; accuracy O(step^2), or O(step^4) with
/// the optional Richardson level.
Complex schwarzian_fd(const UnivalentMap& map, const DiskPoint& z, double step,
                      bool richardson = false);

/// Oracle at the default step policy.
Complex schwarzian_fd(const UnivalentMap& map, const DiskPoint& z);

/// Default oracle step: 1e-3 shrunk near the boundary so the stencil stays
/// well inside the disk.
double default_schwarzian_step(const DiskPoint& z);

/// Hyperbolically scaled norm |lambda^{-2} S(phi)(z)|.
double scaled_schwarzian_norm(const UnivalentMap& map, const DiskPoint& z);

struct NehariReport {
    double max_norm = 0.0;
    DiskPoint witness;
    bool pass = false;
};

/// Sweep of the Kraus-Nehari bound ||S|| <= 3/2 over a sample set.
NehariReport nehari_check(const UnivalentMap& map, std::span<const DiskPoint> samples);

/// The Mobius transformation sharing the 2-jet of the map at z.
MobiusTransform osculating_mobius(const UnivalentMap& map, const DiskPoint& z);
MobiusTransform osculating_mobius(const Jet3& jet, Complex z);

/// The hyperbolic disk automorphism with axis through 0 and z carrying
/// 0 to z; its derivative at 0 is the positive real 1 - |z|^2.
MobiusTransform disk_mobius_to(const DiskPoint& z);

} // namespace decaylab
