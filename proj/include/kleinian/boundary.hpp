#pragma once

// Geodesics and planes of H^3 through their traces on the boundary sphere.
// A plane is a generalized circle given by a Hermitian form
//     A |z|^2 + B conj(z) + conj(B) z + C = 0,
// normalized to |B|^2 - A C = 1. The overall sign is the orientation: the
// side where the form is negative is the left side of the circle.

#include <array>
#include <cmath>
#include <optional>
#include <utility>

#include "kleinian/isometry.hpp"

namespace kleinian {

/// Below this distance two geodesics are treated as meeting.
inline constexpr double kIntersectionThreshold = 1e-7;

/// A geodesic of H^3, stored as its two endpoints. Equality is unordered.
class GeodesicLine {
public:
    GeodesicLine(BoundaryPoint p, BoundaryPoint q, double tol = default_tolerances.point)
        : p_(p), q_(q) {
        if (same_point(p, q, tol)) {
            throw Error(ErrorCode::DegeneratePoints, "geodesic endpoints coincide");
        }
    }

    static GeodesicLine through(Complex p, Complex q) {
        return {BoundaryPoint::finite(p), BoundaryPoint::finite(q)};
    }
    static GeodesicLine vertical(Complex p) {
        return {BoundaryPoint::finite(p), BoundaryPoint::infinity()};
    }

    const BoundaryPoint& p() const { return p_; }
    const BoundaryPoint& q() const { return q_; }

    bool has_endpoint(const BoundaryPoint& x, double tol = default_tolerances.point) const {
        return same_point(p_, x, tol) || same_point(q_, x, tol);
    }

private:
    BoundaryPoint p_, q_;
};

inline bool same_line(const GeodesicLine& l1, const GeodesicLine& l2,
                      double tol = default_tolerances.point) {
    return (same_point(l1.p(), l2.p(), tol) && same_point(l1.q(), l2.q(), tol)) ||
           (same_point(l1.p(), l2.q(), tol) && same_point(l1.q(), l2.p(), tol));
}

inline bool share_endpoint(const GeodesicLine& l1, const GeodesicLine& l2,
                           double tol = default_tolerances.point) {
    return l1.has_endpoint(l2.p(), tol) || l1.has_endpoint(l2.q(), tol);
}

inline GeodesicLine transform_line(const MoebiusIsometry& m, const GeodesicLine& l) {
    return {apply_boundary(m, l.p()), apply_boundary(m, l.q()), 0.0};
}

/// Axis of an elliptic or loxodromic element (its two fixed points).
inline GeodesicLine axis_of(const MoebiusIsometry& m, double tol_trace = default_tolerances.trace) {
    const auto fp = fixed_points(m, tol_trace);
    if (fp.size() != 2) {
        throw Error(ErrorCode::PreconditionViolation, "parabolic element has no axis");
    }
    return {fp[0], fp[1], 0.0};
}

namespace detail {

/// The trace-zero element fixing both endpoints of l (180 degree rotation).
inline MoebiusIsometry halfturn_matrix(const GeodesicLine& l) {
    const BoundaryPoint& p = l.p();
    const BoundaryPoint& q = l.q();
    const Complex s = p.z() * q.w() + q.z() * p.w();
    const Mat2 m{s, -2.0 * p.z() * q.z(), 2.0 * p.w() * q.w(), -s};
    // det = -(p.z q.w - q.z p.w)^2, so i * bracket is an exact square root.
    const Complex root = Complex{0.0, 1.0} * bracket(p, q);
    Mat2 n{m.a / root, m.b / root, m.c / root, m.d / root};
    n.d = -n.a;
    return MoebiusIsometry::normalize(n);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Circles

class BoundaryCircle {
public:
    /// Scales (A, B, C) by a positive factor so that |B|^2 - A C = 1.
    BoundaryCircle(double A, Complex B, double C) {
        const double s = std::norm(B) - A * C;
        if (!(s > 0.0)) {
            throw Error(ErrorCode::DegeneratePoints, "Hermitian form is not a real circle");
        }
        const double k = 1.0 / std::sqrt(s);
        A_ = A * k;
        B_ = B * k;
        C_ = C * k;
    }

    /// For coefficients already satisfying |B|^2 - A C = 1, e.g. the image of
    /// a normalized form under a det-1 congruence. Skips the rescaling.
    static BoundaryCircle from_normalized(double A, Complex B, double C) { return {A, B, C, Raw{}}; }

    static BoundaryCircle real_line() { return {0.0, Complex{0.0, -1.0}, 0.0}; }
    static BoundaryCircle unit_circle() { return {1.0, Complex{0.0}, -1.0}; }

    double A() const { return A_; }
    Complex B() const { return B_; }
    double C() const { return C_; }

    bool is_line(double tol = default_tolerances.point) const { return std::abs(A_) <= tol; }
    /// Euclidean center and radius; meaningful only when !is_line().
    Complex center() const { return -B_ / A_; }
    double radius() const { return 1.0 / std::abs(A_); }

    BoundaryCircle flipped() const { return {-A_, -B_, -C_, Raw{}}; }

    /// The form evaluated at p, divided by |z|^2 + |w|^2 so it is scale-free.
    double evaluate(const BoundaryPoint& p) const {
        const Complex z = p.z(), w = p.w();
        const double v = A_ * std::norm(z) + 2.0 * (B_ * std::conj(z) * w).real() + C_ * std::norm(w);
        return v / (std::norm(z) + std::norm(w));
    }

private:
    struct Raw {};
    BoundaryCircle(double A, Complex B, double C, Raw) : A_(A), B_(B), C_(C) {}

    double A_ = 0.0;
    Complex B_{0.0, -1.0};
    double C_ = 0.0;
};

inline double circle_distance(const BoundaryCircle& x, const BoundaryCircle& y) {
    return std::max({std::abs(x.A() - y.A()), std::abs(x.B() - y.B()), std::abs(x.C() - y.C())});
}

/// Same oriented circle.
inline bool same_circle(const BoundaryCircle& x, const BoundaryCircle& y, double tol) {
    return circle_distance(x, y) <= tol;
}

/// Same circle as a point set, either orientation.
inline bool same_unoriented_circle(const BoundaryCircle& x, const BoundaryCircle& y, double tol) {
    return std::min(circle_distance(x, y), circle_distance(x, y.flipped())) <= tol;
}

inline bool on_circle(const BoundaryPoint& p, const BoundaryCircle& c,
                      double tol = default_tolerances.point) {
    return std::abs(c.evaluate(p)) <= tol;
}

namespace detail {

struct Hermitian {
    Complex h00, h01, h10, h11;
};

// N^* H N
inline Hermitian congruence(const Hermitian& h, const Mat2& n) {
    const Complex x00 = h.h00 * n.a + h.h01 * n.c;
    const Complex x01 = h.h00 * n.b + h.h01 * n.d;
    const Complex x10 = h.h10 * n.a + h.h11 * n.c;
    const Complex x11 = h.h10 * n.b + h.h11 * n.d;
    return {std::conj(n.a) * x00 + std::conj(n.c) * x10, std::conj(n.a) * x01 + std::conj(n.c) * x11,
            std::conj(n.b) * x00 + std::conj(n.d) * x10, std::conj(n.b) * x01 + std::conj(n.d) * x11};
}

inline BoundaryCircle from_hermitian(const Hermitian& h) {
    return {h.h00.real(), (h.h01 + std::conj(h.h10)) / 2.0, h.h11.real()};
}

} // namespace detail

/// Circle through three distinct points, oriented so that traversing
/// p1 -> p2 -> p3 keeps the negative side on the left.
inline BoundaryCircle circle_through(const BoundaryPoint& p1, const BoundaryPoint& p2,
                                     const BoundaryPoint& p3, double tol = default_tolerances.point) {
    if (same_point(p1, p2, tol) || same_point(p2, p3, tol) || same_point(p1, p3, tol)) {
        throw Error(ErrorCode::DegeneratePoints, "circle needs three distinct points");
    }
    // T sends p1, p2, p3 to 0, 1, inf; the circle is the pullback of the real
    // line, whose upper half plane is on the left of 0 -> 1 -> inf.
    const Complex k1 = bracket(p2, p3);
    const Complex k3 = bracket(p2, p1);
    const Mat2 t{k1 * p1.w(), -k1 * p1.z(), k3 * p3.w(), -k3 * p3.z()};
    const detail::Hermitian real_line{Complex{0.0}, Complex{0.0, -1.0}, Complex{0.0, 1.0}, Complex{0.0}};
    return detail::from_hermitian(detail::congruence(real_line, t));
}

/// Image of c under m: the Hermitian form pulled back through m^{-1}.
inline BoundaryCircle transform_circle(const MoebiusIsometry& m, const BoundaryCircle& c) {
    const detail::Hermitian h{Complex{c.A()}, c.B(), std::conj(c.B()), Complex{c.C()}};
    const detail::Hermitian t = detail::congruence(h, m.inverse().matrix());
    // det-1 congruence keeps |B|^2 - A C = 1; recomputing it would cancel badly.
    return BoundaryCircle::from_normalized(t.h00.real(), (t.h01 + std::conj(t.h10)) / 2.0, t.h11.real());
}

/// Whether m maps c onto itself, preserving its orientation.
inline bool preserves_circle(const MoebiusIsometry& m, const BoundaryCircle& c, double tol) {
    return same_circle(transform_circle(m, c), c, tol * std::max(1.0, m.matrix().max_abs()));
}

/// The plane containing both geodesics, when there is one.
inline std::optional<BoundaryCircle> coplanar_plane(const GeodesicLine& l1, const GeodesicLine& l2,
                                                    double tol = default_tolerances.point) {
    if (same_line(l1, l2, tol)) throw Error(ErrorCode::IdenticalLines, "coplanar_plane");
    if (l1.has_endpoint(l2.p(), tol)) return circle_through(l1.p(), l1.q(), l2.q(), tol);
    if (l1.has_endpoint(l2.q(), tol)) return circle_through(l1.p(), l1.q(), l2.p(), tol);
    const BoundaryCircle c = circle_through(l1.p(), l1.q(), l2.p(), tol);
    if (on_circle(l2.q(), c, tol)) return c;
    return std::nullopt;
}

/// The geodesic orthogonal to both inputs. For intersecting inputs this is
/// the line through the meeting point orthogonal to both. It is the axis of
/// the product of the half-turns about l1 and l2.
inline GeodesicLine common_perpendicular(const GeodesicLine& l1, const GeodesicLine& l2,
                                         double tol = default_tolerances.point) {
    if (same_line(l1, l2, tol)) throw Error(ErrorCode::IdenticalLines, "common_perpendicular");
    if (share_endpoint(l1, l2, tol)) {
        throw Error(ErrorCode::SharedEndpoint, "geodesics are asymptotic; no common perpendicular");
    }
    return axis_of(detail::halfturn_matrix(l1) * detail::halfturn_matrix(l2));
}

/// distance: hyperbolic distance between the geodesics (0 when they meet or
/// share an endpoint). angle: acute angle in [0, pi/2]; the intersection
/// angle for meeting lines, the twist of the complex distance otherwise.
struct GeodesicSeparation {
    double distance = 0.0;
    double angle = 0.0;

    bool intersects() const { return distance < kIntersectionThreshold && angle > kIntersectionThreshold; }
};

/// Complex distance d between l1 = (a1, b1) and l2 = (a2, b2) satisfies
/// tanh^2(d/2) = [a1, a2; b1, b2] cross ratio (a1-a2)(b1-b2)/((a1-b2)(b1-a2)).
inline GeodesicSeparation geodesic_separation(const GeodesicLine& l1, const GeodesicLine& l2,
                                              double tol = default_tolerances.point) {
    if (same_line(l1, l2, tol)) throw Error(ErrorCode::IdenticalLines, "geodesic_separation");
    const Complex num = bracket(l1.p(), l2.p()) * bracket(l1.q(), l2.q());
    const Complex den = bracket(l1.p(), l2.q()) * bracket(l1.q(), l2.p());
    // Swapping the endpoints of one line inverts the ratio; keep |x| <= 1.
    const Complex x = std::abs(num) <= std::abs(den) ? num / den : den / num;
    const Complex s = std::sqrt(x);
    const double distance = std::abs(std::log(std::abs(1.0 + s)) - std::log(std::abs(1.0 - s)));
    double angle = std::abs(std::arg((1.0 + s) / (1.0 - s)));
    angle = std::fmod(angle, std::numbers::pi);
    if (angle > std::numbers::pi / 2) angle = std::numbers::pi - angle;
    return {distance, angle};
}

} // namespace kleinian
