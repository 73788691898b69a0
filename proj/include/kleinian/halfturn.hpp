#pragma once

// Half-turn factorizations. Every non-identity isometry is a product of two
// half-turns r_{l1} r_{l2}; two isometries without a common fixed point admit
// factorizations sharing the middle axis, alpha = r_a r_s and beta = r_s r_b,
// so alpha beta = r_a r_b. When alpha, beta and alpha beta all have real
// trace the three axes either lie in one plane or are all orthogonal to
// one plane, and that plane is preserved by <alpha, beta>.

#include <array>
#include <complex>
#include <optional>
#include <utility>
#include <variant>

#include "kleinian/boundary.hpp"

namespace kleinian {

struct HalfTurn {
    GeodesicLine axis;
    MoebiusIsometry matrix;
};

inline HalfTurn halfturn_about(const GeodesicLine& l) {
    return {l, detail::halfturn_matrix(l)};
}

/// Free data for decompose(): a boundary point (parabolic case), a geodesic
/// orthogonal to the axis (elliptic and loxodromic case), or nothing, in
/// which case default_free_choice() is used.
using FreeChoice = std::variant<std::monostate, BoundaryPoint, GeodesicLine>;

namespace detail {

// alpha * r is a half-turn iff its trace vanishes.
inline bool halfturn_compatible(const MoebiusIsometry& alpha, const MoebiusIsometry& r, double tol) {
    const double scale = 1.0 + alpha.matrix().max_abs() * r.matrix().max_abs();
    return std::abs((alpha * r).trace()) <= tol * scale;
}

inline constexpr double kFactorTolerance = 1e-9;

} // namespace detail

/// Parabolic fixing p: second endpoint 0, or 1 when p = 0. Otherwise the
/// image of (-1, 1) under the matrix with columns (p, q), where (p, q) is
/// the axis; that line crosses the axis orthogonally.
inline FreeChoice default_free_choice(const MoebiusIsometry& alpha) {
    const IsometryClass cls = classify(alpha);
    if (cls.kind == IsometryKind::Identity) throw Error(ErrorCode::IdentityInput, "decompose");
    if (cls.kind == IsometryKind::Parabolic) {
        const BoundaryPoint p = fixed_points(alpha)[0];
        const BoundaryPoint zero = BoundaryPoint::finite(0.0);
        return same_point(p, zero) ? BoundaryPoint::finite(1.0) : zero;
    }
    const GeodesicLine axis = axis_of(alpha);
    const auto g = MoebiusIsometry::normalize(
        Mat2{axis.p().z(), axis.q().z(), axis.p().w(), axis.q().w()});
    return transform_line(g, GeodesicLine::through(-1.0, 1.0));
}

/// Returns (l1, l2) with r_{l1} r_{l2} = alpha and l2 fixed by the free choice.
inline std::pair<GeodesicLine, GeodesicLine> decompose(const MoebiusIsometry& alpha,
                                                       FreeChoice choice = {}) {
    const IsometryClass cls = classify(alpha);
    if (cls.kind == IsometryKind::Identity) throw Error(ErrorCode::IdentityInput, "decompose");
    if (std::holds_alternative<std::monostate>(choice)) choice = default_free_choice(alpha);

    std::optional<GeodesicLine> l2;
    if (cls.kind == IsometryKind::Parabolic) {
        const auto* x = std::get_if<BoundaryPoint>(&choice);
        if (x == nullptr) {
            throw Error(ErrorCode::InvalidChoice, "parabolic decomposition takes a boundary point");
        }
        const BoundaryPoint p = fixed_points(alpha)[0];
        if (same_point(p, *x)) {
            throw Error(ErrorCode::InvalidChoice, "free endpoint equals the parabolic fixed point");
        }
        l2.emplace(p, *x);
    } else {
        const auto* l = std::get_if<GeodesicLine>(&choice);
        if (l == nullptr) {
            throw Error(ErrorCode::InvalidChoice, "axial decomposition takes a geodesic");
        }
        l2 = *l;
    }

    const MoebiusIsometry r2 = detail::halfturn_matrix(*l2);
    if (!detail::halfturn_compatible(alpha, r2, detail::kFactorTolerance)) {
        throw Error(ErrorCode::InvalidChoice, "free choice does not meet the axis orthogonally");
    }
    return {axis_of(alpha * r2), *l2};
}

/// alpha = r_a r_s, beta = r_s r_b.
struct SharedFactorization {
    GeodesicLine l_a, l_s, l_b;
};

namespace detail {

inline void require_no_shared_fixed_point(const MoebiusIsometry& alpha, const IsometryClass& ca,
                                          const MoebiusIsometry& beta, const IsometryClass& cb) {
    for (const auto& x : fixed_points(alpha)) {
        for (const auto& y : fixed_points(beta)) {
            if (same_point(x, y)) {
                throw Error(ErrorCode::SharedFixedPoint, "the two isometries share a boundary fixed point");
            }
        }
    }
    if (ca.kind == IsometryKind::Elliptic && cb.kind == IsometryKind::Elliptic &&
        geodesic_separation(axis_of(alpha), axis_of(beta)).distance < kIntersectionThreshold) {
        throw Error(ErrorCode::SharedFixedPoint, "elliptic axes meet inside H^3");
    }
}

} // namespace detail

inline SharedFactorization shared_factorization(const MoebiusIsometry& alpha, const MoebiusIsometry& beta) {
    const IsometryClass ca = classify(alpha);
    const IsometryClass cb = classify(beta);
    if (ca.kind == IsometryKind::Identity || cb.kind == IsometryKind::Identity) {
        throw Error(ErrorCode::IdentityInput, "shared_factorization");
    }
    detail::require_no_shared_fixed_point(alpha, ca, beta, cb);

    const bool pa = ca.kind == IsometryKind::Parabolic;
    const bool pb = cb.kind == IsometryKind::Parabolic;
    std::optional<GeodesicLine> shared;
    if (pa && pb) {
        shared.emplace(fixed_points(alpha)[0], fixed_points(beta)[0]);
    } else if (pa) {
        // The line from alpha's fixed point orthogonal to beta's axis ends at
        // the reflection of that point through the axis.
        const BoundaryPoint p = fixed_points(alpha)[0];
        shared.emplace(p, apply_boundary(detail::halfturn_matrix(axis_of(beta)), p));
    } else if (pb) {
        const BoundaryPoint q = fixed_points(beta)[0];
        shared.emplace(q, apply_boundary(detail::halfturn_matrix(axis_of(alpha)), q));
    } else {
        shared = common_perpendicular(axis_of(alpha), axis_of(beta));
    }

    const MoebiusIsometry rs = detail::halfturn_matrix(*shared);
    const GeodesicLine la = axis_of(alpha * rs);
    const GeodesicLine lb = axis_of(rs * beta);

    const double tol_a = detail::kFactorTolerance * std::max(1.0, alpha.matrix().max_abs());
    const double tol_b = detail::kFactorTolerance * std::max(1.0, beta.matrix().max_abs());
    if (psl_distance(detail::halfturn_matrix(la) * rs, alpha) > tol_a ||
        psl_distance(rs * detail::halfturn_matrix(lb), beta) > tol_b) {
        throw Error(ErrorCode::NoValidSharedAxis, "factorization identities failed numerically");
    }
    return {la, *shared, lb};
}

enum class PlaneConstruction {
    ContainsAxes,     ///< the three half-turn axes lie in the plane
    OrthogonalToAxes, ///< the three half-turn axes are orthogonal to the plane
};

struct InvariantPlane {
    BoundaryCircle circle;
    SharedFactorization factors;
    PlaneConstruction construction;
    int parabolic_or_elliptic = 0; ///< how many of alpha, beta, alpha beta
};

inline constexpr double kPlaneTolerance = 1e-7;

namespace detail {

// Extended precision for the kernel solve: words of the group amplify any
// error in the plane by up to the square of their norm.
using Real = long double;
using Vec4 = std::array<Real, 4>;

// Hermitian form (A, B, C) as (A, Re B, Im B, C), pushed forward by m:
// the form of m^{-1}^* H m^{-1}.
inline Vec4 push_form(const MoebiusIsometry& m, const Vec4& x) {
    using C = std::complex<Real>;
    const Mat2& g = m.matrix();
    // m^{-1} = [[d, -b], [-c, a]]
    const C n00(g.d), n01(-g.b), n10(-g.c), n11(g.a);
    const C h00(x[0]), h01(x[1], x[2]), h10(x[1], -x[2]), h11(x[3]);
    const C y00 = h00 * n00 + h01 * n10, y01 = h00 * n01 + h01 * n11;
    const C y10 = h10 * n00 + h11 * n10, y11 = h10 * n01 + h11 * n11;
    const C t00 = std::conj(n00) * y00 + std::conj(n10) * y10;
    const C t01 = std::conj(n00) * y01 + std::conj(n10) * y11;
    const C t10 = std::conj(n01) * y00 + std::conj(n11) * y10;
    const C t11 = std::conj(n01) * y01 + std::conj(n11) * y11;
    const C b = (t01 + std::conj(t10)) / Real(2);
    return {t00.real(), b.real(), b.imag(), t11.real()};
}

// Solves n y = x by Gaussian elimination with partial pivoting.
inline std::optional<Vec4> solve4(std::array<Vec4, 4> n, Vec4 x) {
    for (std::size_t col = 0; col < 4; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < 4; ++r)
            if (std::abs(n[r][col]) > std::abs(n[piv][col])) piv = r;
        if (n[piv][col] == Real(0)) return std::nullopt;
        std::swap(n[piv], n[col]);
        std::swap(x[piv], x[col]);
        for (std::size_t r = col + 1; r < 4; ++r) {
            const Real f = n[r][col] / n[col][col];
            for (std::size_t k = col; k < 4; ++k) n[r][k] -= f * n[col][k];
            x[r] -= f * x[col];
        }
    }
    Vec4 y{};
    for (std::size_t i = 4; i-- > 0;) {
        Real v = x[i];
        for (std::size_t k = i + 1; k < 4; ++k) v -= n[i][k] * y[k];
        y[i] = v / n[i][i];
    }
    for (Real v : y)
        if (!std::isfinite(v)) return std::nullopt;
    return y;
}

inline double plane_residual(const MoebiusIsometry& alpha, const MoebiusIsometry& beta, const BoundaryCircle& c) {
    return std::max(circle_distance(transform_circle(alpha, c), c), circle_distance(transform_circle(beta, c), c));
}

// The invariant form spans the kernel of x -> (alpha.x - x, beta.x - x).
// Inverse iteration on the normal equations from the constructed circle
// removes the error accumulated by the geometric construction.
inline BoundaryCircle polish_plane(const MoebiusIsometry& alpha, const MoebiusIsometry& beta,
                                   const BoundaryCircle& c) {
    std::array<std::array<Real, 8>, 4> cols{};
    for (std::size_t k = 0; k < 4; ++k) {
        Vec4 e{};
        e[k] = 1;
        const Vec4 pa = push_form(alpha, e), pb = push_form(beta, e);
        for (std::size_t i = 0; i < 4; ++i) {
            cols[k][i] = pa[i] - e[i];
            cols[k][4 + i] = pb[i] - e[i];
        }
    }
    std::array<Vec4, 4> n{};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t r = 0; r < 8; ++r) n[i][j] += cols[i][r] * cols[j][r];

    BoundaryCircle best = c;
    double best_residual = plane_residual(alpha, beta, c);
    Vec4 x{c.A(), c.B().real(), c.B().imag(), c.C()};
    for (int iter = 0; iter < 3; ++iter) {
        const auto y = solve4(n, x);
        if (!y) break;
        const Real dot = (*y)[0] * x[0] + (*y)[1] * x[1] + (*y)[2] * x[2] + (*y)[3] * x[3];
        const Real disc = (*y)[1] * (*y)[1] + (*y)[2] * (*y)[2] - (*y)[0] * (*y)[3];
        if (!(disc > 0)) break;
        const Real k = (dot < 0 ? -1 : 1) / std::sqrt(disc);
        x = {(*y)[0] * k, (*y)[1] * k, (*y)[2] * k, (*y)[3] * k};
        const BoundaryCircle candidate = BoundaryCircle::from_normalized(
            static_cast<double>(x[0]), {static_cast<double>(x[1]), static_cast<double>(x[2])},
            static_cast<double>(x[3]));
        const double r = plane_residual(alpha, beta, candidate);
        if (!(r <= best_residual)) break;
        best = candidate;
        best_residual = r;
    }
    return best;
}

} // namespace detail

/// Common invariant oriented plane of two isometries that share no fixed
/// point and have alpha, beta, alpha beta all non-screw.
inline InvariantPlane invariant_plane(const MoebiusIsometry& alpha, const MoebiusIsometry& beta,
                                      double tol_trace = default_tolerances.trace) {
    const MoebiusIsometry product = alpha * beta;
    if (!is_non_screw(alpha, tol_trace) || !is_non_screw(beta, tol_trace) ||
        !is_non_screw(product, tol_trace)) {
        throw Error(ErrorCode::ScrewInput, "alpha, beta and alpha beta must all have real trace");
    }
    const SharedFactorization f = shared_factorization(alpha, beta);

    int count = 0;
    for (const auto* m : {&alpha, &beta, &product}) {
        const auto kind = classify(*m, tol_trace).kind;
        if (kind == IsometryKind::Parabolic || kind == IsometryKind::Elliptic) ++count;
    }

    auto verified = [&](const BoundaryCircle& c) {
        return preserves_circle(alpha, c, kPlaneTolerance) && preserves_circle(beta, c, kPlaneTolerance);
    };
    auto polished = [&](const BoundaryCircle& c) { return detail::polish_plane(alpha, beta, c); };

    constexpr double coplanar_tol = 1e-8;
    if (auto plane = coplanar_plane(f.l_a, f.l_s, coplanar_tol);
        plane && on_circle(f.l_b.p(), *plane, coplanar_tol) && on_circle(f.l_b.q(), *plane, coplanar_tol)) {
        if (verified(*plane)) return {polished(*plane), f, PlaneConstruction::ContainsAxes, count};
    }

    // Axes pairwise coplanar but not all in one plane: the plane through the
    // common perpendicular of l_a and l_s, orthogonal to their plane, is
    // orthogonal to all three axes. It passes through the endpoints of that
    // perpendicular and of the line through the foot on l_a orthogonal to both.
    if (!share_endpoint(f.l_a, f.l_s) &&
        geodesic_separation(f.l_a, f.l_s).distance >= kIntersectionThreshold) {
        const GeodesicLine perp = common_perpendicular(f.l_a, f.l_s);
        const GeodesicLine normal =
            axis_of(detail::halfturn_matrix(f.l_a) * detail::halfturn_matrix(perp));
        const BoundaryCircle pi = circle_through(perp.p(), perp.q(), normal.p());
        if (verified(pi)) return {polished(pi), f, PlaneConstruction::OrthogonalToAxes, count};
    }
    throw Error(ErrorCode::PlaneVerificationFailed, "no invariant plane passed verification");
}

} // namespace kleinian
