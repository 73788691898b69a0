#pragma once

// Word balls in a finitely generated matrix group, the approximate length
// spectrum they see, and the group-level tests built on them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "kleinian/halfturn.hpp"

namespace kleinian {

struct Generator {
    std::string label;
    MoebiusIsometry matrix;
};

class GroupPresentation {
public:
    GroupPresentation(std::vector<Generator> generators, std::string comment = {})
        : generators_(std::move(generators)), comment_(std::move(comment)) {
        if (generators_.empty()) {
            throw Error(ErrorCode::PreconditionViolation, "presentation needs at least one generator");
        }
        std::set<std::string> seen;
        for (const auto& g : generators_) {
            if (!seen.insert(g.label).second) throw Error(ErrorCode::DuplicateLabel, g.label);
        }
    }

    const std::vector<Generator>& generators() const { return generators_; }
    std::size_t rank() const { return generators_.size(); }
    const std::string& comment() const { return comment_; }

    /// Alphabet order g1, g1^-1, g2, g2^-1, ...
    std::size_t alphabet_size() const { return 2 * generators_.size(); }

    MoebiusIsometry letter_matrix(std::size_t letter) const {
        const auto& m = generators_[letter / 2].matrix;
        return letter % 2 == 0 ? m : m.inverse();
    }

    std::string letter_label(std::size_t letter) const {
        const auto& l = generators_[letter / 2].label;
        return letter % 2 == 0 ? l : l + "'";
    }

    GroupPresentation conjugated_by(const MoebiusIsometry& h) const {
        std::vector<Generator> gens;
        for (const auto& g : generators_) gens.push_back({g.label, g.matrix.conjugated_by(h)});
        return {std::move(gens), comment_};
    }

private:
    std::vector<Generator> generators_;
    std::string comment_;
};

/// Freely reduced word; letters index the alphabet (2 i for g_i, 2 i + 1 for its inverse).
struct GroupWord {
    std::vector<std::uint8_t> letters;
    MoebiusIsometry matrix;

    std::size_t length() const { return letters.size(); }

    friend bool operator<(const GroupWord& x, const GroupWord& y) {
        if (x.letters.size() != y.letters.size()) return x.letters.size() < y.letters.size();
        return x.letters < y.letters;
    }
};

inline std::string format_word(const GroupWord& w, const GroupPresentation& g) {
    if (w.letters.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < w.letters.size(); ++i) {
        if (i) s += ' ';
        s += g.letter_label(w.letters[i]);
    }
    return s;
}

/// Builds the word from letters and recomputes its matrix from scratch.
inline GroupWord make_word(const GroupPresentation& g, std::vector<std::uint8_t> letters) {
    MoebiusIsometry m;
    for (auto l : letters) m = m * g.letter_matrix(l);
    return {std::move(letters), m};
}

struct EnumerationLimits {
    std::size_t element_cap = 10'000'000;
    double match_tolerance = 1e-9; ///< relative PSL max-entry distance
};

namespace detail {

// Sign-invariant, inverse-distinguishing bucket key on log scale.
inline std::int64_t bucket_key(const MoebiusIsometry& m) {
    const Mat2& x = m.matrix();
    const double f = std::norm(x.a) + 2.0 * std::norm(x.b) + 3.0 * std::norm(x.c) + 5.0 * std::norm(x.d);
    return static_cast<std::int64_t>(std::floor(std::log(f) * 1e6));
}

class MatrixIndex {
public:
    explicit MatrixIndex(double tol) : tol_(tol) {}

    /// Index of an already stored matrix equal in PSL, if any.
    std::optional<std::size_t> find(const MoebiusIsometry& m, const std::vector<GroupWord>& store) const {
        const std::int64_t key = bucket_key(m);
        const double tol = tol_ * std::max(1.0, m.matrix().max_abs());
        for (std::int64_t k = key - 1; k <= key + 1; ++k) {
            auto it = buckets_.find(k);
            if (it == buckets_.end()) continue;
            for (std::size_t idx : it->second) {
                if (psl_distance(store[idx].matrix, m) <= tol) return idx;
            }
        }
        return std::nullopt;
    }

    void insert(const MoebiusIsometry& m, std::size_t idx) { buckets_[bucket_key(m)].push_back(idx); }

private:
    double tol_;
    std::unordered_map<std::int64_t, std::vector<std::size_t>> buckets_;
};

} // namespace detail

/// All freely reduced words of length 1..max_word_len in shortlex order,
/// one per group element: words whose matrices coincide are merged into the
/// shortlex-least one, and words equal to the identity are dropped. Only
/// surviving words are extended, so the result is prefix-closed.
inline std::vector<GroupWord> enumerate_ball(const GroupPresentation& g, int max_word_len,
                                             const EnumerationLimits& limits = {}) {
    if (max_word_len < 1) throw Error(ErrorCode::PreconditionViolation, "max_word_len must be >= 1");
    const std::size_t n = g.alphabet_size();
    std::vector<MoebiusIsometry> letters(n);
    for (std::size_t l = 0; l < n; ++l) letters[l] = g.letter_matrix(l);

    std::vector<GroupWord> ball;
    detail::MatrixIndex index(limits.match_tolerance);

    auto consider = [&](GroupWord&& w) {
        const double tol = limits.match_tolerance * std::max(1.0, w.matrix.matrix().max_abs());
        if (psl_distance(w.matrix, MoebiusIsometry::identity()) <= tol) return;
        if (index.find(w.matrix, ball)) return;
        if (ball.size() >= limits.element_cap) {
            throw Error(ErrorCode::BudgetExceeded,
                        "word ball exceeds " + std::to_string(limits.element_cap) + " elements");
        }
        index.insert(w.matrix, ball.size());
        ball.push_back(std::move(w));
    };

    for (std::size_t l = 0; l < n; ++l) consider({{static_cast<std::uint8_t>(l)}, letters[l]});

    std::size_t level_begin = 0;
    for (int len = 2; len <= max_word_len; ++len) {
        const std::size_t level_end = ball.size();
        for (std::size_t i = level_begin; i < level_end; ++i) {
            const std::uint8_t last = ball[i].letters.back();
            for (std::size_t l = 0; l < n; ++l) {
                if ((l ^ 1u) == last) continue; // would cancel
                GroupWord w;
                w.letters = ball[i].letters;
                w.letters.push_back(static_cast<std::uint8_t>(l));
                w.matrix = ball[i].matrix * letters[l];
                consider(std::move(w));
            }
        }
        level_begin = level_end;
    }
    return ball;
}

// ---------------------------------------------------------------------------
// Length spectrum

struct SpectrumEntry {
    GroupWord word;
    IsometryClass cls;
    std::optional<ComplexLength> length; ///< absent for parabolics
    std::optional<GeodesicLine> axis;    ///< absent for parabolics
};

/// A lower approximation of the length spectrum: only what the ball sees.
struct Spectrum {
    std::vector<SpectrumEntry> entries;
    int max_word_len = 0;
    std::size_t ball_size = 0;
    bool complete = false; ///< never certified; kept explicit for reports
};

inline SpectrumEntry make_entry(const GroupWord& w, double tol_trace = default_tolerances.trace) {
    SpectrumEntry e{w, classify(w.matrix, tol_trace), std::nullopt, std::nullopt};
    if (e.cls.has_axis()) {
        e.length = ComplexLength{e.cls.length, e.cls.angle};
        e.axis = axis_of(w.matrix, tol_trace);
    }
    return e;
}

namespace detail {

inline double angle_gap(double x, double y) {
    return std::abs(reduce_angle(x - y));
}

inline bool axis_in_orbit(const GeodesicLine& from, const GeodesicLine& to,
                          const std::vector<GroupWord>& ball) {
    if (same_line(from, to)) return true;
    for (const auto& h : ball) {
        if (same_line(transform_line(h.matrix, from), to)) return true;
    }
    return false;
}

} // namespace detail

inline constexpr double kSpectrumMatchTolerance = 1e-7;

/// Elliptic and loxodromic elements of the ball sorted by (length, angle),
/// cut at length_cutoff, with conjugate entries (equal complex length, axes
/// related by a ball element) collapsed to the shortlex-least representative.
inline Spectrum spectrum(const GroupPresentation& g, int max_word_len, double length_cutoff,
                         const EnumerationLimits& limits = {},
                         double tol_trace = default_tolerances.trace) {
    const auto ball = enumerate_ball(g, max_word_len, limits);
    std::vector<SpectrumEntry> all;
    for (const auto& w : ball) {
        SpectrumEntry e = make_entry(w, tol_trace);
        if (!e.length || e.length->length > length_cutoff) continue;
        all.push_back(std::move(e));
    }
    // Quantized keys so rounding noise cannot reorder equal lengths.
    auto key = [](double v) { return std::llround(v * 1e8); };
    std::stable_sort(all.begin(), all.end(), [&](const SpectrumEntry& x, const SpectrumEntry& y) {
        const auto lx = key(x.length->length), ly = key(y.length->length);
        if (lx != ly) return lx < ly;
        const auto ax = key(x.length->angle), ay = key(y.length->angle);
        if (ax != ay) return ax < ay;
        return x.word < y.word;
    });

    Spectrum out{{}, max_word_len, ball.size(), false};
    for (auto& e : all) {
        bool duplicate = false;
        for (auto it = out.entries.rbegin(); it != out.entries.rend(); ++it) {
            if (e.length->length - it->length->length > kSpectrumMatchTolerance) break;
            if (detail::angle_gap(e.length->angle, it->length->angle) > kSpectrumMatchTolerance) continue;
            if (detail::axis_in_orbit(*it->axis, *e.axis, ball)) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) out.entries.push_back(std::move(e));
    }
    return out;
}

/// Screw element of least translation length in the ball; among lengths
/// equal to within 1e-9 the shortlex-least word wins.
inline std::optional<SpectrumEntry> shortest_screw(const GroupPresentation& g, int max_word_len,
                                                   const EnumerationLimits& limits = {},
                                                   double tol_trace = default_tolerances.trace) {
    std::optional<SpectrumEntry> best;
    for (const auto& w : enumerate_ball(g, max_word_len, limits)) {
        if (is_non_screw(w.matrix, tol_trace)) continue;
        const ComplexLength cl = complex_length(w.matrix, tol_trace);
        if (!best || cl.length < best->length->length - 1e-9) best = make_entry(w, tol_trace);
    }
    return best;
}

// ---------------------------------------------------------------------------
// Group-level tests

enum class FuchsianKind { AllNonScrewWithPlane, ScrewFound, Elementary };

struct FuchsianVerdict {
    FuchsianKind kind = FuchsianKind::Elementary;
    std::optional<GroupWord> witness;          ///< ScrewFound
    std::optional<BoundaryCircle> plane;       ///< AllNonScrewWithPlane
    std::optional<GroupWord> first, second;    ///< the pair the plane came from
};

/// Every element of the ball has real trace => look for the invariant plane
/// of two hyperbolic elements with disjoint fixed points and check that the
/// whole ball preserves it.
inline FuchsianVerdict fuchsian_test(const GroupPresentation& g, int max_word_len,
                                     const EnumerationLimits& limits = {},
                                     double tol_trace = default_tolerances.trace) {
    const auto ball = enumerate_ball(g, max_word_len, limits);
    for (const auto& w : ball) {
        if (!is_non_screw(w.matrix, tol_trace)) return {FuchsianKind::ScrewFound, w, {}, {}, {}};
    }

    std::vector<const GroupWord*> hyperbolic;
    for (const auto& w : ball) {
        const Complex t = w.matrix.trace();
        if (std::abs(t.real()) > 2.0 + tol_trace) hyperbolic.push_back(&w);
    }
    for (std::size_t i = 0; i < hyperbolic.size(); ++i) {
        const auto fi = fixed_points(hyperbolic[i]->matrix, tol_trace);
        for (std::size_t j = i + 1; j < hyperbolic.size(); ++j) {
            const auto fj = fixed_points(hyperbolic[j]->matrix, tol_trace);
            bool disjoint = true;
            for (const auto& x : fi)
                for (const auto& y : fj) disjoint = disjoint && !same_point(x, y);
            if (!disjoint) continue;

            const InvariantPlane plane = invariant_plane(hyperbolic[i]->matrix, hyperbolic[j]->matrix, tol_trace);
            for (const auto& w : ball) {
                if (!preserves_circle(w.matrix, plane.circle, kPlaneTolerance)) {
                    throw Error(ErrorCode::PlaneVerificationFailed,
                                "element " + format_word(w, g) + " moves the invariant circle");
                }
            }
            return {FuchsianKind::AllNonScrewWithPlane, {}, plane.circle, *hyperbolic[i], *hyperbolic[j]};
        }
    }
    return {FuchsianKind::Elementary, {}, {}, {}, {}};
}

enum class ElementaryKind { LimitPoints0Or1, LimitPoints2, NonElementary };

struct ElementaryVerdict {
    ElementaryKind kind = ElementaryKind::NonElementary;
    std::optional<GeodesicLine> axis; ///< LimitPoints2
};

inline ElementaryVerdict elementary_test(const GroupPresentation& g, int max_word_len,
                                         const EnumerationLimits& limits = {},
                                         double tol_trace = default_tolerances.trace) {
    const auto ball = enumerate_ball(g, max_word_len, limits);
    std::vector<IsometryClass> classes;
    classes.reserve(ball.size());
    for (const auto& w : ball) classes.push_back(classify(w.matrix, tol_trace));

    auto fixes = [](const MoebiusIsometry& m, const BoundaryPoint& p) {
        return same_point(apply_boundary(m, p), p);
    };

    for (std::size_t i = 0; i < ball.size(); ++i) {
        if (!classes[i].is_loxodromic()) continue;
        const GeodesicLine axis = axis_of(ball[i].matrix, tol_trace);
        for (const auto& gen : g.generators()) {
            if (!same_line(transform_line(gen.matrix, axis), axis)) return {ElementaryKind::NonElementary, {}};
        }
        return {ElementaryKind::LimitPoints2, axis};
    }

    for (std::size_t i = 0; i < ball.size(); ++i) {
        if (classes[i].kind != IsometryKind::Parabolic) continue;
        const BoundaryPoint p = fixed_points(ball[i].matrix, tol_trace)[0];
        for (const auto& gen : g.generators()) {
            if (!fixes(gen.matrix, p)) return {ElementaryKind::NonElementary, {}};
        }
        return {ElementaryKind::LimitPoints0Or1, {}};
    }

    // Only elliptics (and possibly the identity): finite-type if all the
    // generator axes pass through one point or share a boundary point.
    std::vector<GeodesicLine> axes;
    for (const auto& gen : g.generators()) {
        if (classify(gen.matrix, tol_trace).kind == IsometryKind::Elliptic) axes.push_back(axis_of(gen.matrix, tol_trace));
    }
    for (std::size_t i = 0; i < axes.size(); ++i) {
        for (std::size_t j = i + 1; j < axes.size(); ++j) {
            if (same_line(axes[i], axes[j]) || share_endpoint(axes[i], axes[j])) continue;
            if (geodesic_separation(axes[i], axes[j]).distance >= kIntersectionThreshold) {
                return {ElementaryKind::NonElementary, {}};
            }
        }
    }
    return {ElementaryKind::LimitPoints0Or1, {}};
}

struct ThricePuncturedVerdict {
    bool matches = false;
    std::string reason;
    std::optional<BoundaryCircle> plane;
    std::vector<GroupWord> parabolic_triple; ///< u, v, u v
};

/// Heuristic evidence for the thrice-punctured sphere group: the group is
/// Fuchsian on the ball and some generating pair u in {g1, g1'}, v in
/// {g2, g2'} has u, v and u v all parabolic. Not a conjugacy certificate.
inline ThricePuncturedVerdict thrice_punctured_test(const GroupPresentation& g, int max_word_len = 6,
                                                    const EnumerationLimits& limits = {},
                                                    double tol_trace = default_tolerances.trace) {
    if (g.rank() != 2) return {false, "heuristic needs rank-2 presentation", {}, {}};
    const FuchsianVerdict fv = fuchsian_test(g, max_word_len, limits, tol_trace);
    if (fv.kind == FuchsianKind::ScrewFound) return {false, "screw elements exist", {}, {}};
    if (fv.kind == FuchsianKind::Elementary) return {false, "no invariant plane found (elementary on the ball)", {}, {}};

    auto parabolic = [&](const MoebiusIsometry& m) {
        return !is_identity(m, tol_trace) && detail::near_parabolic_trace(m.trace(), tol_trace);
    };
    for (std::uint8_t u : {std::uint8_t{0}, std::uint8_t{1}}) {
        for (std::uint8_t v : {std::uint8_t{2}, std::uint8_t{3}}) {
            const GroupWord wu = make_word(g, {u});
            const GroupWord wv = make_word(g, {v});
            const GroupWord wuv = make_word(g, {u, v});
            if (parabolic(wu.matrix) && parabolic(wv.matrix) && parabolic(wuv.matrix)) {
                return {true, "", fv.plane, {wu, wv, wuv}};
            }
        }
    }
    return {false, "no generating pair with u, v, uv all parabolic", fv.plane, {}};
}

} // namespace kleinian
