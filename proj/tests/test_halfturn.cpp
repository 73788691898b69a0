#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace kleinian;
using testing_support::N;

namespace {

BoundaryPoint F(Complex z) { return BoundaryPoint::finite(z); }

double dist(const MoebiusIsometry& x, const MoebiusIsometry& y) { return psl_distance(x, y); }

MoebiusIsometry r(const GeodesicLine& l) { return halfturn_about(l).matrix; }

/// Sends 0 and infinity to the endpoints of l.
MoebiusIsometry frame(const GeodesicLine& l) {
    return MoebiusIsometry::normalize(Mat2{l.q().z(), l.p().z(), l.q().w(), l.p().w()});
}

/// A random line crossing the axis of alpha orthogonally, or a random point
/// other than the fixed point when alpha is parabolic.
FreeChoice random_choice(const MoebiusIsometry& alpha, testing_support::Random& rnd) {
    if (classify(alpha).kind == IsometryKind::Parabolic) {
        const auto fp = fixed_points(alpha)[0];
        for (;;) {
            const auto x = F(rnd.complex());
            if (chordal_distance(x, fp) > 0.05) return x;
        }
    }
    const Complex e = std::polar(std::exp(rnd.uniform(-1.5, 1.5)), rnd.uniform(-3.0, 3.0));
    return transform_line(frame(axis_of(alpha)), GeodesicLine::through(-e, e));
}

/// The Cayley-type map z -> (z - i)/(z + i).
MoebiusIsometry cayley() { return N(1, Complex(0, -1), 1, Complex(0, 1)); }

std::vector<GroupWord> words_up_to_six(const MoebiusIsometry& a, const MoebiusIsometry& b) {
    return enumerate_ball(GroupPresentation({{"a", a}, {"b", b}}), 6);
}

} // namespace

TEST(HalfTurnAbout, Examples) {
    const auto h0 = r(GeodesicLine::vertical(0));
    EXPECT_LT(dist(h0, N(Complex(0, 1), 0, 0, Complex(0, -1))), 1e-12);
    EXPECT_TRUE(same_point(apply_boundary(h0, F(2)), F(-2)));

    const auto h1 = r(GeodesicLine::through(-1, 1));
    EXPECT_LT(dist(h1, N(0, Complex(0, 1), Complex(0, 1), 0)), 1e-12);

    const auto h3 = r(GeodesicLine::vertical(3));
    EXPECT_TRUE(same_point(apply_boundary(h3, F(Complex(1, 2))), F(Complex(5, -2))));
}

TEST(HalfTurnAbout, TraceZeroAndInvolution) {
    testing_support::Random rnd(31);
    for (int i = 0; i < 500; ++i) {
        const Complex p = rnd.complex(), q = rnd.complex();
        if (std::abs(p - q) < 0.05) continue;
        const auto h = r(GeodesicLine::through(p, q));
        EXPECT_EQ(h.trace(), Complex(0));
        EXPECT_TRUE(is_identity(h * h, 1e-10));
        EXPECT_TRUE(same_point(apply_boundary(h, F(p)), F(p)));
        EXPECT_TRUE(same_point(apply_boundary(h, F(q)), F(q)));
    }
}

TEST(Decompose, Examples) {
    auto [a1, a2] = decompose(N(1, 2, 0, 1), F(0));
    EXPECT_TRUE(same_line(a1, GeodesicLine::vertical(1)));
    EXPECT_TRUE(same_line(a2, GeodesicLine::vertical(0)));

    auto [b1, b2] = decompose(N(2, 0, 0, 0.5), GeodesicLine::through(-1, 1));
    EXPECT_TRUE(same_line(b1, GeodesicLine::through(-2, 2)));
    EXPECT_TRUE(same_line(b2, GeodesicLine::through(-1, 1)));

    auto [c1, c2] = decompose(N(0, -1, 1, 0), GeodesicLine::through(-1, 1));
    EXPECT_TRUE(same_line(c1, GeodesicLine::vertical(0)));
    EXPECT_TRUE(same_line(c2, GeodesicLine::through(-1, 1)));
}

TEST(Decompose, Errors) {
    try {
        decompose(MoebiusIsometry::identity());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::IdentityInput);
    }
    // (0, 2) is not orthogonal to the axis (0, inf) of z -> 4z.
    try {
        decompose(N(2, 0, 0, 0.5), GeodesicLine::through(0.5, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidChoice);
    }
    // Parabolic case needs a point, and not the fixed point.
    try {
        decompose(N(1, 1, 0, 1), BoundaryPoint::infinity());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidChoice);
    }
    try {
        decompose(N(1, 1, 0, 1), GeodesicLine::through(-1, 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidChoice);
    }
}

TEST(Decompose, EllipticAxesMeetTheAxisAtOnePoint) {
    // Rotation by 1 radian about (0, inf).
    const auto alpha = testing_support::diagonal({0.0, 1.0});
    const auto [l1, l2] = decompose(alpha, GeodesicLine::through(-2, 2));
    const auto axis = GeodesicLine::vertical(0);
    for (const auto& l : {l1, l2}) {
        const auto s = geodesic_separation(l, axis);
        EXPECT_LT(s.distance, 1e-9);
        EXPECT_NEAR(s.angle, std::numbers::pi / 2, 1e-9);
    }
    // Both semicircles are centred at 0 with radius 2, so they meet the axis at height 2.
    ASSERT_FALSE(l1.p().is_infinity());
    EXPECT_NEAR(std::abs(l1.p().value()), 2.0, 1e-9);
    EXPECT_NEAR(std::abs(l1.q().value()), 2.0, 1e-9);
}

TEST(Decompose, RoundTrip) {
    testing_support::Random rnd(32);
    for (int i = 0; i < 1000; ++i) {
        const auto alpha = rnd.mixed(i);
        const auto [l1, l2] = decompose(alpha, random_choice(alpha, rnd));
        EXPECT_LT(dist(r(l1) * r(l2), alpha), 1e-9) << "case " << i;
        const auto [d1, d2] = decompose(alpha);
        EXPECT_LT(dist(r(d1) * r(d2), alpha), 1e-9) << "default choice, case " << i;
    }
}

TEST(Decompose, NonScrewIffFactorAxesCoplanar) {
    testing_support::Random rnd(33);
    for (int i = 0; i < 400; ++i) {
        const auto alpha = rnd.mixed(i % 2); // screw or hyperbolic
        const auto cls = classify(alpha);
        if (cls.kind == IsometryKind::Screw && std::abs(cls.angle) < 0.05) continue;
        const auto [l1, l2] = decompose(alpha, random_choice(alpha, rnd));
        EXPECT_EQ(coplanar_plane(l1, l2, 1e-7).has_value(), is_non_screw(alpha)) << "case " << i;
    }
}

TEST(SharedFactorization, Examples) {
    const auto f = shared_factorization(N(1, 2, 0, 1), N(1, 0, 2, 1));
    EXPECT_TRUE(same_line(f.l_s, GeodesicLine::vertical(0)));

    const auto beta = testing_support::diagonal({1.0, 0.0}).conjugated_by(
        MoebiusIsometry::normalize(Mat2{-3, 3, 1, 1}));
    ASSERT_TRUE(same_line(axis_of(beta), GeodesicLine::through(-3, 3)));
    const auto g = shared_factorization(N(2, 0, 0, 0.5), beta);
    EXPECT_TRUE(same_line(g.l_s, GeodesicLine::through(Complex(0, -3), Complex(0, 3))));

    try {
        shared_factorization(N(1, 1, 0, 1), N(1, 2, 0, 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SharedFixedPoint);
    }
}

TEST(SharedFactorization, Identities) {
    testing_support::Random rnd(34);
    for (int i = 0; i < 500; ++i) {
        const auto alpha = rnd.mixed(i), beta = rnd.mixed(i / 5 + 1);
        SharedFactorization f{GeodesicLine::vertical(0), GeodesicLine::vertical(0), GeodesicLine::vertical(0)};
        try {
            f = shared_factorization(alpha, beta);
        } catch (const Error& e) {
            ASSERT_EQ(e.code(), ErrorCode::SharedFixedPoint);
            continue;
        }
        EXPECT_LT(dist(r(f.l_a) * r(f.l_s), alpha), 1e-9);
        EXPECT_LT(dist(r(f.l_s) * r(f.l_b), beta), 1e-9);
        EXPECT_LT(dist(r(f.l_a) * r(f.l_b), alpha * beta), 1e-9);
    }
}

TEST(InvariantPlane, Examples) {
    const auto a = N(1, 2, 0, 1), b = N(1, 0, 2, 1);
    const auto p = invariant_plane(a, b);
    EXPECT_TRUE(same_unoriented_circle(p.circle, BoundaryCircle::real_line(), 1e-9));

    const auto g = cayley();
    const auto q = invariant_plane(a.conjugated_by(g), b.conjugated_by(g));
    EXPECT_TRUE(same_unoriented_circle(q.circle, BoundaryCircle::unit_circle(), 1e-9));
    EXPECT_TRUE(same_unoriented_circle(q.circle, transform_circle(g, BoundaryCircle::real_line()), 1e-9));

    try {
        invariant_plane(N(1, 1, 0, 1), N(1, 0, -testing_support::kOmega, 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ScrewInput);
    }
    try {
        invariant_plane(N(1, 1, 0, 1), N(1, 2, 0, 1));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SharedFixedPoint);
    }
}

TEST(InvariantPlane, EllipticPairPlaneMissesFixedPoints) {
    // z -> 1/z and z -> 4/z reverse the orientation of the real line. The
    // half-turn factors have axes (i, -i), (0, inf), (2i, -2i), so the
    // preserved oriented plane is the imaginary axis, away from the fixed points.
    const auto a = N(0, 1, 1, 0), b = N(0, 2, 0.5, 0);
    const auto p = invariant_plane(a, b);
    EXPECT_EQ(p.construction, PlaneConstruction::ContainsAxes);
    EXPECT_TRUE(same_unoriented_circle(p.circle, BoundaryCircle(0, 1, 0), 1e-9));
    EXPECT_TRUE(preserves_circle(a, p.circle, 1e-9));
    EXPECT_TRUE(preserves_circle(b, p.circle, 1e-9));
    for (const auto& x : fixed_points(a)) EXPECT_FALSE(on_circle(x, p.circle, 1e-3));
}

namespace {

struct PairCase {
    MoebiusIsometry a, b;
};

/// Real pairs (all classes) and the mixed parabolic/elliptic/loxodromic
/// configurations, each moved by a random isometry.
std::vector<PairCase> non_screw_pairs(testing_support::Random& rnd, int count) {
    std::vector<PairCase> out;
    const std::vector<PairCase> fixed = {
        {N(1, 2, 0, 1), N(1, 0, 2, 1)},                // parabolic, parabolic; product parabolic
        {N(1, 1, 0, 1), N(0, -1, 1, 0)},               // parabolic, elliptic
        {N(2, 0, 0, 0.5), N(0, -1, 1, 0)},             // hyperbolic, elliptic
        {N(0, -1, 1, 0), N(0, -2, 0.5, 0)},            // elliptic, elliptic, disjoint axes
        {N(1, 3, 0, 1), N(2, 1, 1, 1)},                // parabolic, hyperbolic
        {N(3, 1, 2, 1), N(1, -1, -1, 2)},              // hyperbolic, hyperbolic
        {N(1, 0.5, -1, 0.5), N(std::cos(0.4), std::sin(0.4), -std::sin(0.4), std::cos(0.4))},
    };
    for (const auto& c : fixed) {
        for (int k = 0; k < 5; ++k) {
            const auto g = rnd.isometry();
            out.push_back({c.a.conjugated_by(g), c.b.conjugated_by(g)});
        }
    }
    while (static_cast<int>(out.size()) < count) {
        const auto a = rnd.real_isometry(), b = rnd.real_isometry();
        if (classify(a).kind == IsometryKind::Identity || classify(b).kind == IsometryKind::Identity) continue;
        const auto g = rnd.isometry();
        out.push_back({a.conjugated_by(g), b.conjugated_by(g)});
    }
    return out;
}

} // namespace

TEST(InvariantPlane, GroupPreservesPlaneUpToWordLengthSix) {
    testing_support::Random rnd(35);
    int done = 0;
    for (const auto& [a, b] : non_screw_pairs(rnd, 60)) {
        InvariantPlane plane{BoundaryCircle::real_line(), {GeodesicLine::vertical(0), GeodesicLine::vertical(0),
                                                            GeodesicLine::vertical(0)},
                             PlaneConstruction::ContainsAxes};
        try {
            plane = invariant_plane(a, b, 1e-7);
        } catch (const Error& e) {
            // Random real pairs occasionally share a fixed point.
            ASSERT_EQ(e.code(), ErrorCode::SharedFixedPoint);
            continue;
        }
        for (const auto& w : words_up_to_six(a, b)) {
            ASSERT_TRUE(preserves_circle(w.matrix, plane.circle, 1e-7));
            ASSERT_TRUE(is_non_screw(w.matrix, 1e-7 * std::max(1.0, w.matrix.matrix().max_abs())));
        }
        ++done;
    }
    EXPECT_GE(done, 50);
}

TEST(InvariantPlane, AgreesWithFixedPointCircle) {
    // Without elliptics, the fixed points of alpha, beta and alpha beta lie on
    // the invariant circle, so a circle fitted through them must agree.
    testing_support::Random rnd(36);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto a = rnd.real_isometry(), b = rnd.real_isometry();
        std::vector<BoundaryPoint> pts;
        bool skip = false;
        for (const auto& m : {a, b, a * b}) {
            const auto k = classify(m).kind;
            if (k == IsometryKind::Elliptic || k == IsometryKind::Identity) skip = true;
            if (skip) break;
            for (const auto& x : fixed_points(m)) {
                bool fresh = true;
                for (const auto& y : pts) fresh = fresh && chordal_distance(x, y) > 1e-3;
                if (fresh) pts.push_back(x);
            }
        }
        if (skip || pts.size() < 3) continue;
        const auto g = rnd.isometry();
        for (auto& x : pts) x = apply_boundary(g, x);
        try {
            const auto plane = invariant_plane(a.conjugated_by(g), b.conjugated_by(g));
            const auto fitted = circle_through(pts[0], pts[1], pts[2]);
            EXPECT_TRUE(same_unoriented_circle(plane.circle, fitted, 1e-7));
            for (const auto& x : pts) EXPECT_TRUE(on_circle(x, plane.circle, 1e-7));
            ++checked;
        } catch (const Error& e) {
            ASSERT_EQ(e.code(), ErrorCode::SharedFixedPoint);
        }
    }
    EXPECT_GE(checked, 50);
}
