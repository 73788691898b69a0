#pragma once

// Three-way classification of H^3 / G for a matrix presentation G: a simple
// closed geodesic exists, or G looks like the thrice-punctured sphere group,
// or G is elementary with at most one limit point. Inconclusive is the
// honest answer when the word budget is not enough.

#include <string>
#include <variant>

#include "kleinian/certification.hpp"

namespace kleinian {

struct RunConfig {
    int max_word_len = 6;
    double length_cutoff = 12.0;
    double margulis_epsilon = kDefaultMargulisEpsilon;
    Tolerances tolerances{};
    std::size_t element_cap = 10'000'000;

    EnumerationLimits limits() const { return {element_cap, 1e-9}; }

    void validate() const {
        if (max_word_len < 1 || max_word_len > 12) {
            throw Error(ErrorCode::PreconditionViolation, "max_word_len must lie in [1, 12]");
        }
        if (!(length_cutoff > 0) || !(margulis_epsilon > 0) || element_cap == 0 ||
            !(tolerances.det > 0) || !(tolerances.trace > 0) || !(tolerances.point > 0)) {
            throw Error(ErrorCode::PreconditionViolation, "configuration values must be positive");
        }
    }
};

struct SimpleGeodesicFound {
    SpectrumEntry entry;
    SimplicityReport report;
    std::string route; ///< "elementary_axis", "fuchsian", or "shortest_screw"
};

struct ThricePuncturedSphereEvidence {
    BoundaryCircle plane;
    std::vector<GroupWord> parabolic_triple;
};

struct ElementaryGroup {
    ElementaryKind kind = ElementaryKind::LimitPoints0Or1;
    std::optional<GeodesicLine> axis;
};

struct Inconclusive {
    std::string budget_report;
};

using ManifoldVerdict = std::variant<SimpleGeodesicFound, ThricePuncturedSphereEvidence, ElementaryGroup, Inconclusive>;

namespace detail {

inline ManifoldVerdict classify_manifold_unchecked(const GroupPresentation& g, const RunConfig& cfg) {
    const auto limits = cfg.limits();
    const double tol = cfg.tolerances.trace;
    const int len = cfg.max_word_len;

    const ElementaryVerdict ev = elementary_test(g, len, limits, tol);
    if (ev.kind == ElementaryKind::LimitPoints0Or1) return ElementaryGroup{ev.kind, std::nullopt};
    if (ev.kind == ElementaryKind::LimitPoints2) {
        // The single axis projects to a simple closed geodesic; report its
        // primitive (shortest) translation.
        std::optional<SpectrumEntry> best;
        for (const auto& w : enumerate_ball(g, len, limits)) {
            const IsometryClass cls = classify(w.matrix, tol);
            if (!cls.is_loxodromic() || !same_line(axis_of(w.matrix, tol), *ev.axis)) continue;
            if (!best || cls.length < best->length->length - 1e-9) best = make_entry(w, tol);
        }
        SimplicityReport report = simplicity_check(best->word, g, len, limits, tol);
        return SimpleGeodesicFound{*best, report, "elementary_axis"};
    }

    const FuchsianVerdict fv = fuchsian_test(g, len, limits, tol);
    if (fv.kind == FuchsianKind::AllNonScrewWithPlane) {
        const ThricePuncturedVerdict tp = thrice_punctured_test(g, len, limits, tol);
        if (tp.matches) return ThricePuncturedSphereEvidence{*tp.plane, tp.parabolic_triple};
        // A totally geodesic surface: its shortest simple closed geodesic.
        const Spectrum sp = spectrum(g, len, cfg.length_cutoff, limits, tol);
        for (const auto& e : sp.entries) {
            if (e.cls.kind != IsometryKind::Hyperbolic) continue;
            SimplicityReport report = simplicity_check(e.word, g, len, limits, tol);
            if (report.verdict == SimplicityVerdict::SimpleUpToBound) {
                return SimpleGeodesicFound{e, report, "fuchsian"};
            }
        }
        return Inconclusive{"Fuchsian on the ball but no hyperbolic element up to length " +
                            std::to_string(cfg.length_cutoff) + " certified simple at word length " +
                            std::to_string(len)};
    }
    if (fv.kind == FuchsianKind::Elementary) {
        return Inconclusive{"non-elementary on the ball but fewer than two hyperbolic elements with "
                            "disjoint fixed points at word length " + std::to_string(len)};
    }

    const auto screw = shortest_screw(g, len, limits, tol);
    SimplicityReport report = simplicity_check(screw->word, g, len, limits, tol);
    if (report.verdict == SimplicityVerdict::SimpleUpToBound) {
        return SimpleGeodesicFound{*screw, report, "shortest_screw"};
    }
    return Inconclusive{"shortest screw motion in the ball of word length " + std::to_string(len) +
                        " is not simple; the infimum may be realized by a longer word"};
}

} // namespace detail

/// Exactly one verdict; enumeration failures become Inconclusive with the reason.
inline ManifoldVerdict classify_manifold(const GroupPresentation& g, const RunConfig& cfg = {}) {
    cfg.validate();
    try {
        return detail::classify_manifold_unchecked(g, cfg);
    } catch (const Error& e) {
        return Inconclusive{e.what()};
    }
}

} // namespace kleinian
