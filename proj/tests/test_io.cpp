#include <gtest/gtest.h>

#include "kleinian/io.hpp"
#include "test_support.hpp"

using namespace kleinian;
using testing_support::N;

namespace {

std::string data(const std::string& name) { return std::string(KLEINIAN_DATA_DIR) + "/" + name; }

ErrorCode parse_error_code(const std::string& text) {
    try {
        parse_group(text);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error for " << text;
    return ErrorCode::ParseError;
}

} // namespace

TEST(LoadGroup, FixtureFiles) {
    const auto tp = load_group_file(data("thrice_punctured.json"));
    ASSERT_EQ(tp.group.rank(), 2u);
    EXPECT_TRUE(tp.warnings.empty());
    EXPECT_EQ(tp.group.generators()[0].label, "a");
    EXPECT_LT(psl_distance(tp.group.generators()[0].matrix, N(1, 2, 0, 1)), 1e-15);
    EXPECT_LT(psl_distance(tp.group.generators()[1].matrix, N(1, 0, 2, 1)), 1e-15);

    const auto f8 = load_group_file(data("figure_eight.json"));
    EXPECT_LT(psl_distance(f8.group.generators()[1].matrix, N(1, 0, -testing_support::kOmega, 1)), 1e-15);
    EXPECT_FALSE(f8.group.comment().empty());
}

TEST(LoadGroup, DeterminantRescaledWithWarning) {
    const auto g = parse_group(R"({"generators": [{"label": "a", "matrix": [[[2, 0], [4, 0]], [[0, 0], [2, 0]]]}]})");
    ASSERT_EQ(g.warnings.size(), 1u);
    EXPECT_LT(psl_distance(g.group.generators()[0].matrix, N(1, 2, 0, 1)), 1e-15);
}

TEST(LoadGroup, Errors) {
    EXPECT_EQ(parse_error_code(R"({"generators": [{"label": "a", "matrix": [[[2, 0], [0, 0]], [[0, 0], [2, 0]]]}]})"),
              ErrorCode::IdentityGenerator);
    EXPECT_EQ(parse_error_code(R"({"generators": [{"label": "a", "matrix": [[[1, 0], [2, 0)"), ErrorCode::ParseError);
    EXPECT_EQ(parse_error_code(R"({"generators": [{"label": "a", "matrix": [[[1, 0], [2, 0]], [[2, 0], [4, 0]]]}]})"),
              ErrorCode::SingularGenerator);
    EXPECT_EQ(parse_error_code(R"({"generators": [{"label": "a", "matrix": [[[1, 0], [1, 0]], [[0, 0], [1, 0]]]},
                                                  {"label": "a", "matrix": [[[1, 0], [0, 0]], [[1, 0], [1, 0]]]}]})"),
              ErrorCode::DuplicateLabel);
    EXPECT_EQ(parse_error_code(R"({"generators": [{"label": "a'", "matrix": [[[1, 0], [1, 0]], [[0, 0], [1, 0]]]}]})"),
              ErrorCode::ParseError);
    EXPECT_EQ(parse_error_code(R"({"generators": [{"label": "a", "matrix": [[1, 1], [0, 1]]}]})"), ErrorCode::ParseError);
    EXPECT_EQ(parse_error_code(R"({"gens": []})"), ErrorCode::ParseError);
    EXPECT_EQ(parse_error_code(R"({"generators": []})"), ErrorCode::PreconditionViolation);
    try {
        load_group_file(data("does_not_exist.json"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
    }
}

TEST(ParseWord, Forms) {
    const auto g = testing_support::figure_eight();
    EXPECT_EQ(format_word(parse_word("a b'", g), g), "a b'");
    EXPECT_EQ(format_word(parse_word("a^-1 b", g), g), "a' b");
    EXPECT_EQ(format_word(parse_word("ab'a", g), g), "a b' a");
    EXPECT_EQ(format_word(parse_word("a b b' a", g), g), "a a");
    const auto w = parse_word("a b", g);
    EXPECT_LT(psl_distance(w.matrix, g.generators()[0].matrix * g.generators()[1].matrix), 1e-15);
    for (const char* bad : {"a a'", "c", ""}) {
        try {
            parse_word(bad, g);
            FAIL() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::ParseError);
        }
    }
}

TEST(ClassifyManifold, FixtureVerdicts) {
    const auto tp = classify_manifold(testing_support::thrice_punctured());
    ASSERT_TRUE(std::holds_alternative<ThricePuncturedSphereEvidence>(tp));
    const auto& ev = std::get<ThricePuncturedSphereEvidence>(tp);
    EXPECT_TRUE(same_unoriented_circle(ev.plane, BoundaryCircle::real_line(), 1e-9));

    const auto f8 = classify_manifold(testing_support::figure_eight());
    ASSERT_TRUE(std::holds_alternative<SimpleGeodesicFound>(f8));
    const auto& sg = std::get<SimpleGeodesicFound>(f8);
    EXPECT_EQ(sg.route, "shortest_screw");
    EXPECT_EQ(sg.entry.cls.kind, IsometryKind::Screw);
    EXPECT_EQ(sg.report.verdict, SimplicityVerdict::SimpleUpToBound);

    const auto sp = classify_manifold(testing_support::single_parabolic());
    ASSERT_TRUE(std::holds_alternative<ElementaryGroup>(sp));
    EXPECT_EQ(std::get<ElementaryGroup>(sp).kind, ElementaryKind::LimitPoints0Or1);

    const auto cy = classify_manifold(testing_support::cyclic_hyperbolic());
    ASSERT_TRUE(std::holds_alternative<SimpleGeodesicFound>(cy));
    EXPECT_EQ(std::get<SimpleGeodesicFound>(cy).route, "elementary_axis");
    EXPECT_NEAR(std::get<SimpleGeodesicFound>(cy).entry.length->length, 2.0 * std::log(2.0), 1e-12);
}

TEST(ClassifyManifold, SmallBudgetIsInconclusive) {
    RunConfig cfg;
    cfg.max_word_len = 1;
    const auto v = classify_manifold(testing_support::figure_eight(), cfg);
    ASSERT_TRUE(std::holds_alternative<Inconclusive>(v));
    EXPECT_FALSE(std::get<Inconclusive>(v).budget_report.empty());
    EXPECT_EQ(exit_code(v), 3);

    cfg.max_word_len = 6;
    cfg.element_cap = 100;
    const auto b = classify_manifold(testing_support::figure_eight(), cfg);
    ASSERT_TRUE(std::holds_alternative<Inconclusive>(b));
}

TEST(ClassifyManifold, InvalidConfig) {
    RunConfig cfg;
    cfg.max_word_len = 13;
    try {
        classify_manifold(testing_support::figure_eight(), cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::PreconditionViolation);
    }
}

TEST(Report, VerdictDocuments) {
    const auto f8 = testing_support::figure_eight();
    const auto j = to_json(classify_manifold(f8), f8);
    EXPECT_EQ(j["case"], "simple_geodesic");
    for (const char* key : {"word", "length", "angle", "tube_radius_lower", "tested_word_len"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_EQ(j["word"], "a b");

    const auto sp = testing_support::single_parabolic();
    const auto e = to_json(classify_manifold(sp), sp);
    EXPECT_EQ(e.dump(), R"({"case":"elementary","limit_points":"0_or_1"})");

    const auto tp = testing_support::thrice_punctured();
    const auto t = to_json(classify_manifold(tp), tp);
    EXPECT_EQ(t["case"], "thrice_punctured_sphere");
    ASSERT_EQ(t["parabolic_triple"].size(), 3u);
    EXPECT_EQ(t["parabolic_triple"][1]["word"], "b'");
}

TEST(Report, CuspDocument) {
    const auto j = to_json(cusp_parameters(0.01));
    EXPECT_EQ(j["delta"], 0.01);
    EXPECT_NEAR(j["depth"].get<double>(), 4.60516, 1e-5);
    EXPECT_EQ(j.begin().key(), "delta");
}

TEST(Report, EncodingConventions) {
    EXPECT_EQ(to_json(BoundaryPoint::infinity()), "inf");
    EXPECT_EQ(to_json(Complex(1.5, -2)).dump(), "[1.5,-2.0]");
    const auto text = emit_report(to_json(cusp_parameters(0.5)), ReportFormat::Text);
    EXPECT_NE(text.find("delta: 0.5"), std::string::npos);
    EXPECT_EQ(emit_report(Json::object({{"x", 1}}), ReportFormat::Json), "{\n  \"x\": 1\n}\n");
}

TEST(Report, Deterministic) {
    const auto g = load_group_file(data("figure_eight.json")).group;
    const auto a = emit_report(to_json(classify_manifold(g), g), ReportFormat::Json);
    const auto b = emit_report(to_json(classify_manifold(g), g), ReportFormat::Json);
    EXPECT_EQ(a, b);
}

TEST(ClassifyManifold, DistinctKindsForFixtures) {
    const auto a = classify_manifold(testing_support::thrice_punctured()).index();
    const auto b = classify_manifold(testing_support::figure_eight()).index();
    const auto c = classify_manifold(testing_support::single_parabolic()).index();
    EXPECT_NE(a, b);
    EXPECT_NE(b, c);
    EXPECT_NE(a, c);
}
