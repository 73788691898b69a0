#pragma once

// Orientation-preserving isometries of H^3 as unit-determinant 2x2 complex
// matrices (PSL(2,C) representatives) acting on the Riemann sphere.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "kleinian/error.hpp"

namespace kleinian {

using Complex = std::complex<double>;

struct Tolerances {
    double det = 1e-12;
    double trace = 1e-9;
    double point = 1e-9; // chordal distance on the sphere
};

inline constexpr Tolerances default_tolerances{};

/// Raw 2x2 complex matrix [[a, b], [c, d]], no invariants.
struct Mat2 {
    Complex a{1}, b{0}, c{0}, d{1};

    constexpr Complex det() const { return a * d - b * c; }
    constexpr Complex trace() const { return a + d; }

    double max_abs() const {
        return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    }

    friend constexpr Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }

    friend constexpr Mat2 operator-(const Mat2& x) { return {-x.a, -x.b, -x.c, -x.d}; }
};

namespace detail {

inline bool positive_first(Complex v, double tol) {
    if (v.real() > tol) return true;
    return std::abs(v.real()) <= tol && v.imag() > 0;
}

// Canonical PSL sign: Re(t) > 0, else Im(t) > 0 on the imaginary axis, else
// the first non-negligible entry among (a, b, c) decides.
inline bool needs_negation(const Mat2& m, double tol) {
    const Complex t = m.trace();
    if (t.real() > tol) return false;
    if (std::abs(t.real()) <= tol && std::abs(t) > tol) return !(t.imag() > tol);
    if (std::abs(t) <= tol) {
        for (Complex e : {m.a, m.b, m.c}) {
            if (std::abs(e) > tol) return !positive_first(e, tol);
        }
        return false;
    }
    return true;
}

inline double max_entry_distance(const Mat2& x, const Mat2& y) {
    return std::max({std::abs(x.a - y.a), std::abs(x.b - y.b),
                     std::abs(x.c - y.c), std::abs(x.d - y.d)});
}

// Principal square root with Re >= 0 and Im >= 0 on the negative real axis.
inline Complex principal_sqrt(Complex z) {
    if (z.imag() == 0.0 && z.real() < 0.0) return {0.0, std::sqrt(-z.real())};
    return std::sqrt(z);
}

} // namespace detail

/// A normalized PSL(2,C) representative: det = 1 and canonical sign.
/// Only constructible through normalize(), so the invariant always holds.
class MoebiusIsometry {
public:
    MoebiusIsometry() = default;

    static MoebiusIsometry normalize(const Mat2& m, double tol_det = default_tolerances.det) {
        const Complex det = m.det();
        if (std::abs(det) <= tol_det) {
            throw Error(ErrorCode::NearSingular, "determinant modulus " + std::to_string(std::abs(det)));
        }
        Mat2 n = m;
        if (det != Complex{1.0}) {
            const Complex s = detail::principal_sqrt(det);
            n = {m.a / s, m.b / s, m.c / s, m.d / s};
        }
        if (detail::needs_negation(n, tol_det)) n = -n;
        return MoebiusIsometry(n);
    }

    static MoebiusIsometry identity() { return {}; }

    const Mat2& matrix() const { return m_; }
    Complex a() const { return m_.a; }
    Complex b() const { return m_.b; }
    Complex c() const { return m_.c; }
    Complex d() const { return m_.d; }
    Complex trace() const { return m_.trace(); }

    MoebiusIsometry inverse() const {
        Mat2 inv{m_.d, -m_.b, -m_.c, m_.a};
        if (detail::needs_negation(inv, default_tolerances.det)) inv = -inv;
        return MoebiusIsometry(inv);
    }

    /// The product of two det-1 matrices already has det 1; only the sign is
    /// fixed. Rescaling by a computed determinant would inject its cancellation
    /// error (relative to the squared entry size) into long words.
    friend MoebiusIsometry operator*(const MoebiusIsometry& x, const MoebiusIsometry& y) {
        Mat2 p = x.m_ * y.m_;
        if (detail::needs_negation(p, default_tolerances.det)) p = -p;
        return MoebiusIsometry(p);
    }

    MoebiusIsometry conjugated_by(const MoebiusIsometry& g) const {
        return g * *this * g.inverse();
    }

    friend std::ostream& operator<<(std::ostream& os, const MoebiusIsometry& m) {
        return os << "[[" << m.m_.a << ", " << m.m_.b << "], [" << m.m_.c << ", " << m.m_.d << "]]";
    }

private:
    explicit MoebiusIsometry(const Mat2& m) : m_(m) {}
    Mat2 m_{};
};

/// Distance in PSL: minimum over the sign ambiguity of the max-entry distance.
inline double psl_distance(const MoebiusIsometry& x, const MoebiusIsometry& y) {
    return std::min(detail::max_entry_distance(x.matrix(), y.matrix()),
                    detail::max_entry_distance(x.matrix(), -y.matrix()));
}

inline bool is_identity(const MoebiusIsometry& m, double tol = default_tolerances.trace) {
    return psl_distance(m, MoebiusIsometry::identity()) <= tol;
}

// ---------------------------------------------------------------------------
// Boundary sphere

/// A point of the Riemann sphere in homogeneous coordinates (z : w); the
/// larger-modulus coordinate is scaled to 1. Infinity is (1 : 0).
class BoundaryPoint {
public:
    BoundaryPoint() : z_(0), w_(1) {}

    BoundaryPoint(Complex z, Complex w, double tol = default_tolerances.det) {
        const double az = std::abs(z), aw = std::abs(w);
        if (az <= tol && aw <= tol) {
            throw Error(ErrorCode::DegeneratePoints, "homogeneous coordinates both vanish");
        }
        if (az >= aw) {
            z_ = 1.0;
            w_ = w / z;
        } else {
            z_ = z / w;
            w_ = 1.0;
        }
    }

    static BoundaryPoint finite(Complex z) { return {z, Complex{1.0}}; }
    static BoundaryPoint infinity() { return {Complex{1.0}, Complex{0.0}}; }

    Complex z() const { return z_; }
    Complex w() const { return w_; }

    bool is_infinity(double tol = default_tolerances.point) const { return std::abs(w_) <= tol; }

    /// Affine coordinate z / w; infinite when w vanishes.
    Complex value() const {
        if (w_ == Complex{0.0}) return {std::numeric_limits<double>::infinity(), 0.0};
        return z_ / w_;
    }

    friend std::ostream& operator<<(std::ostream& os, const BoundaryPoint& p) {
        if (p.w_ == Complex{0.0}) return os << "inf";
        return os << p.value();
    }

private:
    Complex z_, w_;
};

/// det[p, q] = p.z * q.w - p.w * q.z; vanishes iff p == q.
inline Complex bracket(const BoundaryPoint& p, const BoundaryPoint& q) {
    return p.z() * q.w() - p.w() * q.z();
}

/// Chordal distance on the unit sphere (diameter 2).
inline double chordal_distance(const BoundaryPoint& p, const BoundaryPoint& q) {
    const double np = std::sqrt(std::norm(p.z()) + std::norm(p.w()));
    const double nq = std::sqrt(std::norm(q.z()) + std::norm(q.w()));
    return 2.0 * std::abs(bracket(p, q)) / (np * nq);
}

inline bool same_point(const BoundaryPoint& p, const BoundaryPoint& q,
                       double tol = default_tolerances.point) {
    return chordal_distance(p, q) < tol;
}

inline BoundaryPoint apply_boundary(const MoebiusIsometry& m, const BoundaryPoint& p) {
    return {m.a() * p.z() + m.b() * p.w(), m.c() * p.z() + m.d() * p.w()};
}

// ---------------------------------------------------------------------------
// Classification

enum class IsometryKind { Identity, Elliptic, Parabolic, Hyperbolic, Screw };

constexpr std::string_view to_string(IsometryKind k) {
    switch (k) {
    case IsometryKind::Identity: return "identity";
    case IsometryKind::Elliptic: return "elliptic";
    case IsometryKind::Parabolic: return "parabolic";
    case IsometryKind::Hyperbolic: return "hyperbolic";
    case IsometryKind::Screw: return "screw";
    }
    return "unknown";
}

/// Translation length and rotation angle; trace = +-2 cosh((length + i angle) / 2).
struct ComplexLength {
    double length = 0.0; ///< >= 0
    double angle = 0.0;  ///< in (-pi, pi]

    Complex value() const { return {length, angle}; }
};

/// Elliptic carries angle in (0, pi]; Hyperbolic carries length; Screw both.
struct IsometryClass {
    IsometryKind kind = IsometryKind::Identity;
    double length = 0.0;
    double angle = 0.0;

    bool is_loxodromic() const {
        return kind == IsometryKind::Hyperbolic || kind == IsometryKind::Screw;
    }
    bool has_axis() const { return is_loxodromic() || kind == IsometryKind::Elliptic; }
};

/// Reduce to (-pi, pi], ties to +pi.
inline double reduce_angle(double x) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::remainder(x, two_pi);
    if (r <= -std::numbers::pi) r += two_pi;
    return r;
}

inline bool is_non_screw(const MoebiusIsometry& m, double tol_trace = default_tolerances.trace) {
    return std::abs(m.trace().imag()) <= tol_trace;
}

namespace detail {

inline bool near_parabolic_trace(Complex t, double tol) {
    return std::min(std::abs(t - 2.0), std::abs(t + 2.0)) <= tol;
}

} // namespace detail

inline ComplexLength complex_length(const MoebiusIsometry& m,
                                    double tol_trace = default_tolerances.trace) {
    const Complex t = m.trace();
    if (is_identity(m, tol_trace) || detail::near_parabolic_trace(t, tol_trace)) {
        throw Error(ErrorCode::UndefinedLength, "parabolic or identity element has no complex length");
    }
    const bool real_trace = std::abs(t.imag()) <= tol_trace;
    if (real_trace && std::abs(t.real()) < 2.0) {
        const double half = std::min(1.0, std::abs(t.real()) / 2.0);
        return {0.0, 2.0 * std::acos(half)};
    }
    const Complex w = std::acosh(t / 2.0);
    const double length = 2.0 * std::abs(w.real());
    double angle = reduce_angle(2.0 * (w.real() < 0 ? -w.imag() : w.imag()));
    if (real_trace) angle = 0.0;
    return {length, angle};
}

/// Classify by the trace. Throws AmbiguousClass when the trace is real and
/// its modulus lies within tol of 2 but outside the parabolic disk, where
/// both the parabolic tag and the hyperbolic/elliptic tag qualify.
inline IsometryClass classify(const MoebiusIsometry& m, double tol_trace = default_tolerances.trace) {
    if (is_identity(m, tol_trace)) return {IsometryKind::Identity};
    const Complex t = m.trace();
    if (detail::near_parabolic_trace(t, tol_trace)) return {IsometryKind::Parabolic};
    if (std::abs(t.imag()) > tol_trace) {
        const ComplexLength cl = complex_length(m, tol_trace);
        return {IsometryKind::Screw, cl.length, cl.angle};
    }
    if (std::abs(std::abs(t.real()) - 2.0) <= tol_trace) {
        throw Error(ErrorCode::AmbiguousClass, "real trace within tolerance of +-2");
    }
    const ComplexLength cl = complex_length(m, tol_trace);
    if (std::abs(t.real()) > 2.0) return {IsometryKind::Hyperbolic, cl.length, 0.0};
    return {IsometryKind::Elliptic, 0.0, cl.angle};
}

/// Fixed points on the sphere: one for parabolics, two otherwise. For
/// loxodromics the attracting point comes first.
inline std::vector<BoundaryPoint> fixed_points(const MoebiusIsometry& m,
                                               double tol_trace = default_tolerances.trace) {
    if (is_identity(m, tol_trace)) {
        throw Error(ErrorCode::IdentityInput, "identity fixes every point");
    }
    const Complex a = m.a(), b = m.b(), c = m.c(), d = m.d();
    const Complex t = m.trace();

    auto eigenvector = [&](Complex mu) {
        const Complex u1 = b, u2 = mu - a;
        const Complex v1 = mu - d, v2 = c;
        if (std::norm(u1) + std::norm(u2) >= std::norm(v1) + std::norm(v2)) {
            return BoundaryPoint(u1, u2, 0.0);
        }
        return BoundaryPoint(v1, v2, 0.0);
    };

    if (detail::near_parabolic_trace(t, tol_trace)) return {eigenvector(t / 2.0)};

    const Complex disc = std::sqrt(t * t - 4.0);
    Complex mu1 = (t + disc) / 2.0;
    if (std::abs(t - disc) > std::abs(t + disc)) mu1 = (t - disc) / 2.0;
    const Complex mu2 = 1.0 / mu1; // product of eigenvalues is det = 1
    return {eigenvector(mu1), eigenvector(mu2)};
}

} // namespace kleinian
