// Command-line front end: one subcommand per library operation.
//
// Exit codes: 0 conclusive result, 2 input error, 3 inconclusive verdict.

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kleinian/io.hpp"

using namespace kleinian;

namespace {

constexpr int kExitInputError = 2;

struct Options {
    std::string group_file;
    std::string word;
    std::string matrix;
    std::string alpha;
    std::string beta;
    std::string free_point;
    std::string free_axis;
    int max_word_len = 6;
    double cutoff = 12.0;
    double margulis = kDefaultMargulisEpsilon;
    double tol = default_tolerances.trace;
    std::string format = "json";
    double delta = -1.0;
    double depth = -1.0;
};

BoundaryPoint parse_point(const std::string& text) {
    if (text == "inf" || text == "infinity") return BoundaryPoint::infinity();
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            parts.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "bad point '" + text + "'");
        }
    }
    if (parts.size() == 1) return BoundaryPoint::finite(parts[0]);
    if (parts.size() == 2) return BoundaryPoint::finite({parts[0], parts[1]});
    throw Error(ErrorCode::ParseError, "points are 'inf', 're' or 're,im'");
}

GeodesicLine parse_line(const std::string& text) {
    const auto sep = text.find(';');
    if (sep == std::string::npos) throw Error(ErrorCode::ParseError, "axes are 'P;Q'");
    return {parse_point(text.substr(0, sep)), parse_point(text.substr(sep + 1))};
}

Mat2 parse_matrix_flag(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            v.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, "bad matrix '" + text + "'");
        }
    }
    if (v.size() != 8) throw Error(ErrorCode::ParseError, "--matrix takes 8 numbers: re,im of a, b, c, d");
    return {{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, {v[6], v[7]}};
}

class Runner {
public:
    explicit Runner(const Options& o) : o_(o) {}

    ReportFormat format() const { return o_.format == "text" ? ReportFormat::Text : ReportFormat::Json; }
    Tolerances tolerances() const { return {default_tolerances.det, o_.tol, default_tolerances.point}; }

    RunConfig config() const {
        RunConfig cfg;
        cfg.max_word_len = o_.max_word_len;
        cfg.length_cutoff = o_.cutoff;
        cfg.margulis_epsilon = o_.margulis;
        cfg.tolerances = tolerances();
        cfg.validate();
        return cfg;
    }

    const GroupPresentation& group() {
        if (!group_) {
            if (o_.group_file.empty()) throw Error(ErrorCode::ParseError, "a group file is required");
            LoadedGroup loaded = load_group_file(o_.group_file, tolerances());
            for (const auto& w : loaded.warnings) std::cerr << "warning: " << w << '\n';
            group_.emplace(std::move(loaded.group));
        }
        return *group_;
    }

    /// The element named by --matrix, or by --word in the group file.
    std::pair<MoebiusIsometry, std::string> element(const std::string& word) {
        if (!o_.matrix.empty()) return {MoebiusIsometry::normalize(parse_matrix_flag(o_.matrix)), "matrix"};
        if (word.empty()) throw Error(ErrorCode::ParseError, "give --word (with a group file) or --matrix");
        const GroupWord w = parse_word(word, group());
        return {w.matrix, format_word(w, group())};
    }

    std::pair<GroupWord, GroupWord> pair_from_group() {
        const auto& g = group();
        auto pick = [&](const std::string& text, std::uint8_t fallback) {
            if (!text.empty()) return parse_word(text, g);
            if (fallback / 2 >= g.rank()) throw Error(ErrorCode::ParseError, "need two generators or --alpha/--beta");
            return make_word(g, {fallback});
        };
        return {pick(o_.alpha, 0), pick(o_.beta, 2)};
    }

    int emit(const Json& doc, int code = 0) {
        std::cout << emit_report(doc, format());
        return code;
    }

    int classify_element() {
        const auto [m, name] = element(o_.word);
        Json j;
        j["element"] = name;
        j["matrix"] = to_json(m);
        j["trace"] = to_json(m.trace());
        const IsometryClass cls = classify(m, o_.tol);
        j.update(to_json(cls));
        j["non_screw"] = is_non_screw(m, o_.tol);
        if (cls.kind != IsometryKind::Identity) {
            Json fp = Json::array();
            for (const auto& p : fixed_points(m, o_.tol)) fp.push_back(to_json(p));
            j["fixed_points"] = fp;
        }
        return emit(j);
    }

    int decompose_cmd() {
        const auto [m, name] = element(o_.word);
        FreeChoice choice;
        if (!o_.free_point.empty()) choice = parse_point(o_.free_point);
        if (!o_.free_axis.empty()) choice = parse_line(o_.free_axis);
        const auto [l1, l2] = decompose(m, choice);
        Json j;
        j["element"] = name;
        j["class"] = std::string(to_string(classify(m, o_.tol).kind));
        j["first_axis"] = to_json(l1);
        j["second_axis"] = to_json(l2);
        j["first_halfturn"] = to_json(halfturn_about(l1).matrix);
        j["second_halfturn"] = to_json(halfturn_about(l2).matrix);
        j["residual"] = psl_distance(halfturn_about(l1).matrix * halfturn_about(l2).matrix, m);
        return emit(j);
    }

    int shared_decomposition() {
        const auto [a, b] = pair_from_group();
        const SharedFactorization f = shared_factorization(a.matrix, b.matrix);
        Json j;
        j["alpha"] = format_word(a, group());
        j["beta"] = format_word(b, group());
        j["l_a"] = to_json(f.l_a);
        j["l_s"] = to_json(f.l_s);
        j["l_b"] = to_json(f.l_b);
        const auto ra = halfturn_about(f.l_a).matrix, rs = halfturn_about(f.l_s).matrix,
                   rb = halfturn_about(f.l_b).matrix;
        j["alpha_residual"] = psl_distance(ra * rs, a.matrix);
        j["beta_residual"] = psl_distance(rs * rb, b.matrix);
        j["product_residual"] = psl_distance(ra * rb, a.matrix * b.matrix);
        return emit(j);
    }

    int invariant_plane_cmd() {
        const auto [a, b] = pair_from_group();
        const InvariantPlane p = invariant_plane(a.matrix, b.matrix, o_.tol);
        Json j;
        j["alpha"] = format_word(a, group());
        j["beta"] = format_word(b, group());
        j["plane"] = to_json(p.circle);
        j["construction"] = p.construction == PlaneConstruction::ContainsAxes ? "contains_axes" : "orthogonal_to_axes";
        j["parabolic_or_elliptic"] = p.parabolic_or_elliptic;
        j["l_a"] = to_json(p.factors.l_a);
        j["l_s"] = to_json(p.factors.l_s);
        j["l_b"] = to_json(p.factors.l_b);
        return emit(j);
    }

    int ball() {
        const RunConfig cfg = config();
        const auto words = enumerate_ball(group(), cfg.max_word_len, cfg.limits());
        Json j;
        j["max_word_len"] = cfg.max_word_len;
        j["size"] = words.size();
        Json list = Json::array();
        for (const auto& w : words) list.push_back(format_word(w, group()));
        j["words"] = list;
        return emit(j);
    }

    int spectrum_cmd() {
        const RunConfig cfg = config();
        const Spectrum sp = spectrum(group(), cfg.max_word_len, cfg.length_cutoff, cfg.limits(), o_.tol);
        Json j;
        j["max_word_len"] = sp.max_word_len;
        j["ball_size"] = sp.ball_size;
        j["cutoff"] = cfg.length_cutoff;
        j["lower_approximation"] = !sp.complete;
        Json list = Json::array();
        for (const auto& e : sp.entries) list.push_back(to_json(e, group()));
        j["entries"] = list;
        Json shorts = Json::array();
        for (const auto& e : margulis_filter(sp.entries, cfg.margulis_epsilon)) shorts.push_back(format_word(e.word, group()));
        j["margulis_epsilon"] = cfg.margulis_epsilon;
        j["below_margulis"] = shorts;
        return emit(j);
    }

    int shortest_screw_cmd() {
        const RunConfig cfg = config();
        const auto s = shortest_screw(group(), cfg.max_word_len, cfg.limits(), o_.tol);
        Json j;
        j["max_word_len"] = cfg.max_word_len;
        j["screw"] = s ? to_json(*s, group()) : Json(nullptr);
        return emit(j);
    }

    int check_simple() {
        const RunConfig cfg = config();
        const auto [m, name] = element(o_.word);
        const SimplicityReport r = simplicity_check(m, group(), cfg.max_word_len, cfg.limits(), o_.tol);
        Json j;
        j["element"] = name;
        j["complex_length"] = to_json(complex_length(m, o_.tol).value());
        j.update(to_json(r, group()));
        return emit(j);
    }

    int cusp_depth_cmd() {
        if (o_.delta >= 0.0 && o_.depth >= 0.0) throw Error(ErrorCode::ParseError, "give --delta or --depth, not both");
        if (o_.depth >= 0.0) {
            Json j;
            j["depth"] = o_.depth;
            j["delta"] = max_parabolic_length_at_depth(o_.depth);
            return emit(j);
        }
        return emit(to_json(cusp_parameters(o_.delta)));
    }

    int classify_manifold_cmd() {
        const RunConfig cfg = config();
        const ManifoldVerdict v = classify_manifold(group(), cfg);
        return emit(to_json(v, group()), exit_code(v));
    }

private:
    const Options& o_;
    std::optional<GroupPresentation> group_;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kleinian group toolkit: isometry classification, half-turn factorizations, "
                 "word-ball spectra and simple closed geodesic certificates"};
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--max-word-len", o.max_word_len, "Word-length bound for ball enumeration")->check(CLI::Range(1, 12));
    app.add_option("--cutoff", o.cutoff, "Drop spectrum entries longer than this");
    app.add_option("--margulis", o.margulis, "Margulis constant stand-in");
    app.add_option("--tol", o.tol, "Trace tolerance");
    app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "text"}));

    auto group_arg = [&](CLI::App* sub, bool required) {
        auto* opt = sub->add_option("group", o.group_file, "Group file (JSON)");
        if (required) opt->required()->check(CLI::ExistingFile);
    };
    auto element_args = [&](CLI::App* sub) {
        group_arg(sub, false);
        sub->add_option("--word", o.word, "Word in the generators, e.g. \"a b'\"");
        sub->add_option("--matrix", o.matrix, "Matrix as re,im of a,b,c,d");
    };

    auto* classify_el = app.add_subcommand("classify-element", "Classify one isometry by its trace");
    element_args(classify_el);
    auto* decomp = app.add_subcommand("decompose", "Factor an isometry into two half-turns");
    element_args(decomp);
    decomp->add_option("--free-point", o.free_point, "Free endpoint (parabolic): inf, re, or re,im");
    decomp->add_option("--free-axis", o.free_axis, "Free axis orthogonal to the axis: P;Q");
    auto* shared = app.add_subcommand("shared-decomposition", "Half-turn factorizations with a shared middle axis");
    group_arg(shared, true);
    shared->add_option("--alpha", o.alpha, "First element (default: first generator)");
    shared->add_option("--beta", o.beta, "Second element (default: second generator)");
    auto* plane = app.add_subcommand("invariant-plane", "Common invariant plane of a non-screw pair");
    group_arg(plane, true);
    plane->add_option("--alpha", o.alpha, "First element (default: first generator)");
    plane->add_option("--beta", o.beta, "Second element (default: second generator)");
    auto* ball = app.add_subcommand("ball", "Enumerate the word ball");
    group_arg(ball, true);
    auto* spec = app.add_subcommand("spectrum", "Approximate complex length spectrum");
    group_arg(spec, true);
    auto* screw = app.add_subcommand("shortest-screw", "Shortest screw motion in the ball");
    group_arg(screw, true);
    auto* simple = app.add_subcommand("check-simple", "Bounded simplicity certificate for a closed geodesic");
    group_arg(simple, true);
    simple->add_option("--word", o.word, "Loxodromic word")->required();
    auto* cusp = app.add_subcommand("cusp-depth", "Depth bound for short cusp curves");
    cusp->add_option("--delta", o.delta, "Curve length in (0, 1)");
    cusp->add_option("--depth", o.depth, "Depth >= 0; prints the longest curve length there");
    auto* manifold = app.add_subcommand("classify-manifold", "Three-way verdict for H^3 / G");
    group_arg(manifold, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    Runner run(o);
    try {
        if (*classify_el) return run.classify_element();
        if (*decomp) return run.decompose_cmd();
        if (*shared) return run.shared_decomposition();
        if (*plane) return run.invariant_plane_cmd();
        if (*ball) return run.ball();
        if (*spec) return run.spectrum_cmd();
        if (*screw) return run.shortest_screw_cmd();
        if (*simple) return run.check_simple();
        if (*cusp) return run.cusp_depth_cmd();
        if (*manifold) return run.classify_manifold_cmd();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    }
    return kExitInputError;
}
