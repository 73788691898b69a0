#pragma once

// Group files and report documents.
//
// Group file:
//   {
//     "comment": "optional free text",
//     "generators": [
//       {"label": "a", "matrix": [[[1, 0], [2, 0]], [[0, 0], [1, 0]]]}
//     ]
//   }
// Each matrix is row-major with complex entries as [re, im].
//
// Reports use the same [re, im] encoding, the string "inf" for the point at
// infinity, and words as space-separated labels with ' marking inverses.

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kleinian/pipeline.hpp"

namespace kleinian {

using Json = nlohmann::ordered_json;

struct LoadedGroup {
    GroupPresentation group;
    std::vector<std::string> warnings;
};

namespace detail {

inline Complex parse_complex(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw Error(ErrorCode::ParseError, "complex numbers are [re, im] pairs");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Mat2 parse_matrix(const Json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 || !j[1].is_array() ||
        j[1].size() != 2) {
        throw Error(ErrorCode::ParseError, "matrix must be [[a, b], [c, d]]");
    }
    return {parse_complex(j[0][0]), parse_complex(j[0][1]), parse_complex(j[1][0]), parse_complex(j[1][1])};
}

inline void validate_label(const std::string& label) {
    if (label.empty()) throw Error(ErrorCode::ParseError, "empty generator label");
    for (char ch : label) {
        if (std::isspace(static_cast<unsigned char>(ch)) || ch == '\'' || ch == '^') {
            throw Error(ErrorCode::ParseError, "label '" + label + "' contains a reserved character");
        }
    }
}

} // namespace detail

inline LoadedGroup parse_group(const std::string& text, const Tolerances& tol = default_tolerances) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    if (!doc.is_object() || !doc.contains("generators") || !doc["generators"].is_array()) {
        throw Error(ErrorCode::ParseError, "document needs a \"generators\" array");
    }
    std::string comment;
    if (doc.contains("comment")) {
        if (!doc["comment"].is_string()) throw Error(ErrorCode::ParseError, "comment must be a string");
        comment = doc["comment"].get<std::string>();
    }

    std::vector<Generator> gens;
    std::vector<std::string> warnings;
    for (const auto& g : doc["generators"]) {
        if (!g.is_object() || !g.contains("label") || !g["label"].is_string() || !g.contains("matrix")) {
            throw Error(ErrorCode::ParseError, "generator entries need \"label\" and \"matrix\"");
        }
        const std::string label = g["label"].get<std::string>();
        detail::validate_label(label);
        const Mat2 raw = detail::parse_matrix(g["matrix"]);
        const Complex det = raw.det();
        if (std::abs(det) <= tol.det) throw Error(ErrorCode::SingularGenerator, label);
        if (std::abs(det - 1.0) > tol.det) {
            std::ostringstream os;
            os << "generator " << label << ": determinant " << det.real() << (det.imag() < 0 ? "-" : "+")
               << std::abs(det.imag()) << "i rescaled to 1";
            warnings.push_back(os.str());
        }
        const MoebiusIsometry m = MoebiusIsometry::normalize(raw, tol.det);
        if (is_identity(m, tol.trace)) throw Error(ErrorCode::IdentityGenerator, label);
        gens.push_back({label, m});
    }
    return {GroupPresentation(std::move(gens), comment), std::move(warnings)};
}

inline LoadedGroup load_group_file(const std::string& path, const Tolerances& tol = default_tolerances) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_group(buf.str(), tol);
}

/// Parses "a b' a", "a^-1 b", or run-together single-character labels "ab'a".
inline GroupWord parse_word(const std::string& text, const GroupPresentation& g) {
    auto letter_of = [&](const std::string& label) -> std::optional<std::uint8_t> {
        for (std::size_t i = 0; i < g.rank(); ++i) {
            if (g.generators()[i].label == label) return static_cast<std::uint8_t>(2 * i);
        }
        return std::nullopt;
    };
    auto split_inverse = [](std::string tok) -> std::pair<std::string, bool> {
        if (tok.size() > 3 && tok.ends_with("^-1")) return {tok.substr(0, tok.size() - 3), true};
        if (tok.size() > 1 && tok.back() == '\'') return {tok.substr(0, tok.size() - 1), true};
        return {tok, false};
    };

    std::vector<std::uint8_t> letters;
    auto push = [&](std::uint8_t l) {
        if (!letters.empty() && (letters.back() ^ 1u) == l) {
            letters.pop_back();
        } else {
            letters.push_back(l);
        }
    };

    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        auto [label, inverse] = split_inverse(tok);
        if (auto l = letter_of(label)) {
            push(static_cast<std::uint8_t>(*l + (inverse ? 1 : 0)));
            continue;
        }
        for (std::size_t i = 0; i < tok.size(); ++i) {
            const auto l = letter_of(std::string(1, tok[i]));
            if (!l) throw Error(ErrorCode::ParseError, "unknown generator in word: " + tok);
            const bool inv = i + 1 < tok.size() && tok[i + 1] == '\'';
            if (inv) ++i;
            push(static_cast<std::uint8_t>(*l + (inv ? 1 : 0)));
        }
    }
    if (letters.empty()) throw Error(ErrorCode::ParseError, "word reduces to the identity");
    return make_word(g, std::move(letters));
}

// ---------------------------------------------------------------------------
// Report documents

inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const BoundaryPoint& p) {
    if (p.is_infinity(1e-15)) return "inf";
    return to_json(p.value());
}

inline Json to_json(const GeodesicLine& l) { return Json::array({to_json(l.p()), to_json(l.q())}); }

inline Json to_json(const MoebiusIsometry& m) {
    return Json::array({Json::array({to_json(m.a()), to_json(m.b())}), Json::array({to_json(m.c()), to_json(m.d())})});
}

inline Json to_json(const BoundaryCircle& c) {
    Json j;
    j["A"] = c.A();
    j["B"] = to_json(c.B());
    j["C"] = c.C();
    if (c.is_line()) {
        j["kind"] = "line";
    } else {
        j["kind"] = "circle";
        j["center"] = to_json(c.center());
        j["radius"] = c.radius();
    }
    return j;
}

inline Json to_json(const IsometryClass& cls) {
    Json j;
    j["class"] = std::string(to_string(cls.kind));
    if (cls.is_loxodromic()) j["length"] = cls.length;
    if (cls.kind == IsometryKind::Screw || cls.kind == IsometryKind::Elliptic) j["angle"] = cls.angle;
    return j;
}

inline Json to_json(const SpectrumEntry& e, const GroupPresentation& g) {
    Json j;
    j["word"] = format_word(e.word, g);
    j["class"] = std::string(to_string(e.cls.kind));
    j["trace"] = to_json(e.word.matrix.trace());
    if (e.length) {
        j["length"] = e.length->length;
        j["angle"] = e.length->angle;
    }
    if (e.axis) j["axis"] = to_json(*e.axis);
    return j;
}

inline Json to_json(const SimplicityReport& r, const GroupPresentation& g) {
    Json j;
    j["verdict"] = r.verdict == SimplicityVerdict::SimpleUpToBound ? "simple_up_to_bound" : "self_intersecting";
    j["witness"] = r.witness ? Json(format_word(*r.witness, g)) : Json(nullptr);
    j["tube_radius_lower"] = r.tube_radius_lower ? Json(*r.tube_radius_lower) : Json(nullptr);
    j["tested_word_len"] = r.tested_word_len;
    j["translates_checked"] = r.translates_checked;
    return j;
}

inline Json to_json(const CuspParameters& c) {
    Json j;
    j["delta"] = c.delta;
    j["depth"] = c.depth;
    return j;
}

inline Json to_json(const ManifoldVerdict& v, const GroupPresentation& g) {
    Json j;
    if (const auto* s = std::get_if<SimpleGeodesicFound>(&v)) {
        j["case"] = "simple_geodesic";
        j["route"] = s->route;
        j["word"] = format_word(s->entry.word, g);
        j["class"] = std::string(to_string(s->entry.cls.kind));
        j["length"] = s->entry.length->length;
        j["angle"] = s->entry.length->angle;
        j["axis"] = to_json(*s->entry.axis);
        j["simplicity"] = to_json(s->report, g);
        j["tube_radius_lower"] = s->report.tube_radius_lower ? Json(*s->report.tube_radius_lower) : Json(nullptr);
        j["tested_word_len"] = s->report.tested_word_len;
    } else if (const auto* t = std::get_if<ThricePuncturedSphereEvidence>(&v)) {
        j["case"] = "thrice_punctured_sphere";
        j["plane"] = to_json(t->plane);
        Json triple = Json::array();
        for (const auto& w : t->parabolic_triple) {
            Json e;
            e["word"] = format_word(w, g);
            e["trace"] = to_json(w.matrix.trace());
            triple.push_back(e);
        }
        j["parabolic_triple"] = triple;
        j["heuristic"] = true;
    } else if (const auto* e = std::get_if<ElementaryGroup>(&v)) {
        j["case"] = "elementary";
        j["limit_points"] = e->kind == ElementaryKind::LimitPoints2 ? "2" : "0_or_1";
        if (e->axis) j["axis"] = to_json(*e->axis);
    } else {
        j["case"] = "inconclusive";
        j["reason"] = std::get<Inconclusive>(v).budget_report;
    }
    return j;
}

inline bool is_conclusive(const ManifoldVerdict& v) { return !std::holds_alternative<Inconclusive>(v); }

inline int exit_code(const ManifoldVerdict& v) { return is_conclusive(v) ? 0 : 3; }

namespace detail {

inline std::string scalar_text(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
        std::ostringstream os;
        os.precision(12);
        const double im = j[1].get<double>();
        os << j[0].get<double>() << (im < 0 || std::signbit(im) ? " - " : " + ") << std::abs(im) << "i";
        return os.str();
    }
    if (j.is_number_float()) {
        std::ostringstream os;
        os.precision(12);
        os << j.get<double>();
        return os.str();
    }
    return j.dump();
}

inline bool is_scalar(const Json& j) {
    return !j.is_object() && !(j.is_array() && !(j.size() == 2 && j[0].is_number() && j[1].is_number()));
}

inline void render_text(const Json& j, std::ostream& os, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    if (j.is_object()) {
        for (const auto& [key, value] : j.items()) {
            if (is_scalar(value)) {
                os << pad << key << ": " << scalar_text(value) << '\n';
            } else {
                os << pad << key << ":\n";
                render_text(value, os, indent + 1);
            }
        }
    } else if (j.is_array()) {
        for (const auto& value : j) {
            if (is_scalar(value)) {
                os << pad << "- " << scalar_text(value) << '\n';
            } else {
                os << pad << "-\n";
                render_text(value, os, indent + 1);
            }
        }
    } else {
        os << pad << scalar_text(j) << '\n';
    }
}

} // namespace detail

enum class ReportFormat { Json, Text };

inline std::string emit_report(const Json& doc, ReportFormat format) {
    if (format == ReportFormat::Json) return doc.dump(2) + "\n";
    std::ostringstream os;
    detail::render_text(doc, os, 0);
    return os.str();
}

} // namespace kleinian
