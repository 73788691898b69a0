#pragma once

// Bounded certificates that a closed geodesic is simple, and the cusp
// geometry used to rule out short parabolic loops.

#include <cmath>
#include <optional>
#include <vector>

#include "kleinian/enumeration.hpp"

namespace kleinian {

/// Default stand-in for the 3-dimensional Margulis constant, which has no
/// closed-form value; callers may override it.
inline constexpr double kDefaultMargulisEpsilon = 0.1;

/// Shortest essential curve on a maximal cusp horosurface has length at
/// least this; it is why cusp_depth() only accepts delta < 1.
inline constexpr double kHorosurfaceShortestCurve = 1.0;

enum class SimplicityVerdict { SimpleUpToBound, SelfIntersecting };

struct SimplicityReport {
    SimplicityVerdict verdict = SimplicityVerdict::SimpleUpToBound;
    std::optional<GroupWord> witness;
    /// Half the least positive distance from the axis to a translate. Absent
    /// when every translate in the ball coincides with the axis.
    std::optional<double> tube_radius_lower;
    int tested_word_len = 0;
    std::size_t translates_checked = 0; ///< translates distinct from the axis
};

/// The closed geodesic of a loxodromic g is embedded iff no translate w.axis
/// distinct from the axis crosses it. Scans every word of the ball; the
/// answer says nothing about longer words.
inline SimplicityReport simplicity_check(const MoebiusIsometry& g, const GroupPresentation& group,
                                         int max_word_len, const EnumerationLimits& limits = {},
                                         double tol_trace = default_tolerances.trace) {
    if (!classify(g, tol_trace).is_loxodromic()) {
        throw Error(ErrorCode::NotLoxodromic, "simplicity_check needs a loxodromic element");
    }
    const GeodesicLine axis = axis_of(g, tol_trace);
    SimplicityReport report;
    report.tested_word_len = max_word_len;

    std::optional<double> min_distance;
    for (const auto& w : enumerate_ball(group, max_word_len, limits)) {
        const GeodesicLine image = transform_line(w.matrix, axis);
        if (same_line(image, axis)) continue; // w stabilizes the axis
        ++report.translates_checked;
        const GeodesicSeparation sep = geodesic_separation(axis, image);
        if (sep.intersects()) {
            report.verdict = SimplicityVerdict::SelfIntersecting;
            report.witness = w;
            report.tube_radius_lower.reset();
            return report;
        }
        if (sep.distance >= kIntersectionThreshold && (!min_distance || sep.distance < *min_distance)) {
            min_distance = sep.distance;
        }
    }
    if (min_distance) report.tube_radius_lower = *min_distance / 2.0;
    return report;
}

inline SimplicityReport simplicity_check(const GroupWord& g, const GroupPresentation& group,
                                         int max_word_len, const EnumerationLimits& limits = {},
                                         double tol_trace = default_tolerances.trace) {
    return simplicity_check(g.matrix, group, max_word_len, limits, tol_trace);
}

/// Loxodromic entries shorter than epsilon; those closed geodesics are
/// embedded for epsilon below the Margulis constant.
inline std::vector<SpectrumEntry> margulis_filter(const std::vector<SpectrumEntry>& entries, double epsilon) {
    if (!(epsilon > 0.0)) throw Error(ErrorCode::PreconditionViolation, "epsilon must be positive");
    std::vector<SpectrumEntry> out;
    for (const auto& e : entries) {
        if (e.cls.is_loxodromic() && e.length && e.length->length < epsilon) out.push_back(e);
    }
    return out;
}

struct CuspParameters {
    double delta = 0.0; ///< curve length, in (0, 1)
    double depth = 0.0; ///< distance below the maximal horosurface
};

/// A homotopically nontrivial cusp curve of length delta < 1 lies at least
/// ln(csch(delta/2)/2) below the maximal horosurface.
inline double cusp_depth(double delta) {
    if (!(delta > 0.0 && delta < kHorosurfaceShortestCurve)) {
        throw Error(ErrorCode::OutOfRange, "delta must lie in (0, 1)");
    }
    return -std::log(2.0 * std::sinh(delta / 2.0));
}

/// Inverse of cusp_depth: the longest such curve at depth d.
inline double max_parabolic_length_at_depth(double depth) {
    if (!(depth >= 0.0)) throw Error(ErrorCode::OutOfRange, "depth must be >= 0");
    return 2.0 * std::asinh(std::exp(-depth) / 2.0);
}

inline CuspParameters cusp_parameters(double delta) { return {delta, cusp_depth(delta)}; }

} // namespace kleinian
