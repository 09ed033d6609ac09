#include "decaylab/maps.hpp"

#include <cmath>
#include <sstream>

namespace decaylab {

namespace {

constexpr double kTinyEntry = 1e-12;

// Fix the PSL(2,C) sign so equality tests are deterministic: the first
// entry of (a,b,c,d) with significant modulus gets nonnegative real part.
void fix_sign(Complex& a, Complex& b, Complex& c, Complex& d) {
    const Complex* entries[4] = {&a, &b, &c, &d};
    for (const Complex* e : entries) {
        if (std::abs(*e) <= kTinyEntry) continue;
        bool flip = e->real() < 0.0;
        if (std::abs(e->real()) <= kTinyEntry * std::abs(*e)) flip = e->imag() < 0.0;
        if (flip) {
            a = -a;
            b = -b;
            c = -c;
            d = -d;
        }
        return;
    }
}

} // namespace

MobiusTransform::MobiusTransform(Complex a, Complex b, Complex c, Complex d)
    : a_(a), b_(b), c_(c), d_(d) {
    const Complex det = a_ * d_ - b_ * c_;
    if (std::abs(det) < 1e-30)
        throw std::domain_error("MobiusTransform: matrix is singular");
    const Complex r = std::sqrt(det);
    a_ /= r;
    b_ /= r;
    c_ /= r;
    d_ /= r;
    fix_sign(a_, b_, c_, d_);
}

MobiusTransform MobiusTransform::compose(const MobiusTransform& rhs) const {
    return MobiusTransform(a_ * rhs.a_ + b_ * rhs.c_, a_ * rhs.b_ + b_ * rhs.d_,
                           c_ * rhs.a_ + d_ * rhs.c_, c_ * rhs.b_ + d_ * rhs.d_);
}

MobiusTransform MobiusTransform::inverse() const {
    return MobiusTransform(d_, -b_, -c_, a_);
}

Complex MobiusTransform::apply(Complex w) const {
    const Complex den = c_ * w + d_;
    if (std::abs(den) < 1e-150)
        throw std::domain_error("MobiusTransform::apply: point maps to infinity");
    return (a_ * w + b_) / den;
}

Jet3 MobiusTransform::jet(Complex z) const {
    const Complex den = c_ * z + d_;
    if (std::abs(den) < 1e-150)
        throw std::domain_error("MobiusTransform::jet: pole at evaluation point");
    const Complex den2 = den * den;
    // determinant is 1 after normalization
    return Jet3{(a_ * z + b_) / den, 1.0 / den2, -2.0 * c_ / (den2 * den),
                6.0 * c_ * c_ / (den2 * den2)};
}

double MobiusTransform::distance_to(const MobiusTransform& o) const {
    return std::max(std::max(std::abs(a_ - o.a_), std::abs(b_ - o.b_)),
                    std::max(std::abs(c_ - o.c_), std::abs(d_ - o.d_)));
}

DiskAutomorphism::DiskAutomorphism(Complex c_, double beta_) : c(c_), beta(beta_) {
    if (std::abs(c) >= 1.0)
        throw std::domain_error("DiskAutomorphism: |c| must be < 1");
}

MobiusTransform DiskAutomorphism::as_mobius() const {
    const Complex rot = std::polar(1.0, beta);
    return MobiusTransform(rot, rot * c, std::conj(c), Complex(1.0, 0.0));
}

Complex DiskAutomorphism::apply(Complex w) const {
    return std::polar(1.0, beta) * (w + c) / (1.0 + std::conj(c) * w);
}

UnivalentMap UnivalentMap::identity() {
    UnivalentMap m;
    m.kind_ = Kind::Identity;
    return m;
}

UnivalentMap UnivalentMap::koebe() {
    UnivalentMap m;
    m.kind_ = Kind::Koebe;
    return m;
}

UnivalentMap UnivalentMap::quadratic(Complex a) {
    if (std::abs(a) > 0.5 + 1e-15)
        throw std::domain_error("UnivalentMap::quadratic: |a| <= 1/2 required for univalence");
    UnivalentMap m;
    m.kind_ = Kind::Quadratic;
    m.a_ = a;
    return m;
}

UnivalentMap UnivalentMap::mobius(const MobiusTransform& mt) {
    UnivalentMap m;
    m.kind_ = Kind::Mobius;
    m.mobius_ = mt;
    return m;
}

UnivalentMap UnivalentMap::precomposed(const DiskAutomorphism& inner, const UnivalentMap& outer) {
    UnivalentMap m;
    m.kind_ = Kind::Precomposed;
    m.inner_ = inner;
    m.outer_ = std::make_shared<UnivalentMap>(outer);
    return m;
}

bool UnivalentMap::is_mobius_type() const {
    switch (kind_) {
    case Kind::Identity:
    case Kind::Mobius:
        return true;
    case Kind::Quadratic:
        return std::abs(a_) == 0.0;
    case Kind::Koebe:
        return false;
    case Kind::Precomposed:
        return outer_->is_mobius_type();
    }
    return false;
}

Complex UnivalentMap::value(const DiskPoint& z) const {
    const Complex w = z.value();
    switch (kind_) {
    case Kind::Identity:
        return w;
    case Kind::Koebe: {
        const Complex om = 1.0 - w;
        return w / (om * om);
    }
    case Kind::Quadratic:
        return w + a_ * w * w;
    case Kind::Mobius:
        return mobius_.apply(w);
    case Kind::Precomposed:
        return outer_->value(DiskPoint(inner_.apply(w)));
    }
    return w;
}

Jet3 UnivalentMap::jet(const DiskPoint& z) const {
    const Complex w = z.value();
    switch (kind_) {
    case Kind::Identity:
        return Jet3{w, 1.0, 0.0, 0.0};
    case Kind::Koebe: {
        // k(z) = z/(1-z)^2, k' = (1+z)/(1-z)^3, k'' = (4+2z)/(1-z)^4,
        // k''' = (18+6z)/(1-z)^5
        const Complex om = 1.0 - w;
        const Complex om2 = om * om, om3 = om2 * om;
        return Jet3{w / om2, (1.0 + w) / om3, (4.0 + 2.0 * w) / (om3 * om),
                    (18.0 + 6.0 * w) / (om3 * om2)};
    }
    case Kind::Quadratic:
        return Jet3{w + a_ * w * w, 1.0 + 2.0 * a_ * w, 2.0 * a_, 0.0};
    case Kind::Mobius:
        return mobius_.jet(w);
    case Kind::Precomposed: {
        const Jet3 g = inner_.as_mobius().jet(w);
        const Jet3 f = outer_->jet(DiskPoint(g.f0));
        // Faa di Bruno through third order
        return Jet3{f.f0, f.f1 * g.f1, f.f2 * g.f1 * g.f1 + f.f1 * g.f2,
                    f.f3 * g.f1 * g.f1 * g.f1 + 3.0 * f.f2 * g.f1 * g.f2 + f.f1 * g.f3};
    }
    }
    return Jet3{};
}

std::string UnivalentMap::describe() const {
    std::ostringstream os;
    switch (kind_) {
    case Kind::Identity:
        os << "identity";
        break;
    case Kind::Koebe:
        os << "koebe";
        break;
    case Kind::Quadratic:
        os << "quadratic(a=" << a_.real() << (a_.imag() < 0 ? "-" : "+")
           << std::abs(a_.imag()) << "i)";
        break;
    case Kind::Mobius:
        os << "mobius";
        break;
    case Kind::Precomposed:
        os << "precomposed(" << outer_->describe() << ")";
        break;
    }
    return os.str();
}

Complex schwarzian(const UnivalentMap& map, const DiskPoint& z) {
    if (map.is_mobius_type()) return Complex(0.0, 0.0);
    const Jet3 j = map.jet(z);
    const Complex r = j.f2 / j.f1;
    return j.f3 / j.f1 - 1.5 * r * r;
}

double default_schwarzian_step(const DiskPoint& z) {
    // catalog derivatives grow like powers of 1/(1 - |z|), so the step must
    // shrink much faster than the bare in-domain margin
    return std::min(1e-3, (1.0 - z.abs()) / 64.0);
}

Complex schwarzian_fd(const UnivalentMap& map, const DiskPoint& z, double step, bool richardson) {
    if (!(step > 0.0) || step > 1e-2)
        throw std::domain_error("schwarzian_fd: step must be in (0, 1e-2]");
    if (1.0 - z.abs() <= 4.0 * step)
        throw StencilError("schwarzian_fd: stencil leaves the disk");

    const Complex w = z.value();
    auto from_values = [&](double h) {
        const Complex vp2 = map.value(DiskPoint(w + 2.0 * h));
        const Complex vp1 = map.value(DiskPoint(w + h));
        const Complex v0 = map.value(DiskPoint(w));
        const Complex vm1 = map.value(DiskPoint(w - h));
        const Complex vm2 = map.value(DiskPoint(w - 2.0 * h));
        const Complex f1 = (vp1 - vm1) / (2.0 * h);
        const Complex f2 = (vp1 - 2.0 * v0 + vm1) / (h * h);
        const Complex f3 = (vp2 - 2.0 * vp1 + 2.0 * vm1 - vm2) / (2.0 * h * h * h);
        const Complex r = f2 / f1;
        return f3 / f1 - 1.5 * r * r;
    };

    const Complex s_h = from_values(step);
    if (!richardson) return s_h;
    const Complex s_h2 = from_values(step / 2.0);
    return (4.0 * s_h2 - s_h) / 3.0;
}

Complex schwarzian_fd(const UnivalentMap& map, const DiskPoint& z) {
    return schwarzian_fd(map, z, default_schwarzian_step(z));
}

double scaled_schwarzian_norm(const UnivalentMap& map, const DiskPoint& z) {
    const double lam = hyperbolic_density(z);
    return std::abs(schwarzian(map, z)) / (lam * lam);
}

NehariReport nehari_check(const UnivalentMap& map, std::span<const DiskPoint> samples) {
    if (samples.empty())
        throw std::invalid_argument("nehari_check: empty sample list");
    NehariReport report{0.0, samples[0], false};
    for (const DiskPoint& p : samples) {
        const double n = scaled_schwarzian_norm(map, p);
        if (n > report.max_norm) {
            report.max_norm = n;
            report.witness = p;
        }
    }
    report.pass = report.max_norm <= 1.5 + 1e-9;
    return report;
}

MobiusTransform osculating_mobius(const Jet3& jet, Complex z) {
    if (std::abs(jet.f1) < 1e-14 * (1.0 + std::abs(jet.f0)))
        throw std::domain_error("osculating_mobius: degenerate jet, phi'(z) = 0");
    // M(w) = f0 + f1 (w - z) / (1 - c (w - z)) with c = f2 / (2 f1) matches
    // the 2-jet; as a matrix the determinant comes out to f1.
    const Complex c = jet.f2 / (2.0 * jet.f1);
    const Complex top = jet.f1 - c * jet.f0;
    return MobiusTransform(top, jet.f0 - top * z, -c, 1.0 + c * z);
}

MobiusTransform osculating_mobius(const UnivalentMap& map, const DiskPoint& z) {
    if (map.kind() == UnivalentMap::Kind::Mobius) return map.mobius_matrix();
    return osculating_mobius(map.jet(z), z.value());
}

MobiusTransform disk_mobius_to(const DiskPoint& z) {
    const Complex w = z.value();
    return MobiusTransform(1.0, w, std::conj(w), 1.0);
}

} // namespace decaylab
