// Command-line front end: classifies digraphs by stable maximum nullity and
// exposes the underlying machinery (Kelly-width, minor search, exact matrix
// checks, bipartite correspondence, survey runs).
//
// Exit codes: 0 success, 1 negative verdict, 2 input/usage error,
// 3 capacity error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nustab/bipartite.hpp"
#include "nustab/classify.hpp"
#include "nustab/digraph_io.hpp"
#include "nustab/kellywidth.hpp"
#include "nustab/minors.hpp"
#include "nustab/nu_search.hpp"
#include "nustab/qpattern.hpp"
#include "nustab/rational_matrix.hpp"
#include "nustab/reduce.hpp"
#include "nustab/support_property.hpp"
#include "nustab/survey.hpp"

namespace {

using nlohmann::json;
using namespace nustab;

constexpr int kExitNegative = 1;
constexpr int kExitInput = 2;
constexpr int kExitCapacity = 3;

int env_int(const char* name, int fallback) {
    const char* raw = std::getenv(name);
    if (!raw) return fallback;
    try {
        return std::stoi(raw);
    } catch (const std::exception&) {
        throw input_error(std::string(name) + " must be an integer");
    }
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Digraph load_digraph(const std::string& path) {
    const std::string text = slurp(path);
    // Accept either the text format or the JSON form.
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == '{') return digraph_from_json(json::parse(text));
        break;
    }
    return digraph_from_text(text);
}

RationalMatrix load_matrix(const std::string& path) {
    const std::string text = slurp(path);
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == '{') return matrix_from_json(json::parse(text));
        break;
    }
    std::istringstream is(text);
    return read_matrix_text(is);
}

void emit(const json& j, bool as_json, const std::string& text_form) {
    if (as_json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text_form;
}

json sp_witness_to_json(const SPWitness& w) {
    json x = json::array(), y = json::array();
    for (const auto& q : w.x) x.push_back(to_string(q));
    for (const auto& q : w.y) y.push_back(to_string(q));
    return {{"x", x}, {"y", y}};
}

json trace_to_json(const std::vector<ReductionTraceEntry>& trace) {
    json t = json::array();
    for (const auto& e : trace)
        t.push_back({{"reduction", reduction_kind_name(e.kind)},
                     {"transposed", e.transposed},
                     {"u", e.u + 1},
                     {"v", e.v + 1},
                     {"n", e.level_n}});
    return t;
}

KellyDecomposition decomposition_from_json(const json& j) {
    KellyDecomposition kd;
    const int nodes = j.at("nodes").get<int>();
    std::vector<Arc> arcs;
    for (const auto& a : j.at("dag-arcs"))
        arcs.emplace_back(a[0].get<int>() - 1, a[1].get<int>() - 1);
    kd.tree = Digraph(nodes, std::move(arcs));
    const auto sets = [&](const char* key) {
        std::vector<std::vector<VertexId>> out;
        for (const auto& row : j.at(key)) {
            std::vector<VertexId> set;
            for (const auto& v : row) set.push_back(v.get<int>() - 1);
            out.push_back(std::move(set));
        }
        return out;
    };
    kd.w_sets = sets("W");
    kd.x_sets = sets("X");
    for (const auto& row : j.at("child-order")) {
        std::vector<int> order;
        for (const auto& c : row) order.push_back(c.get<int>() - 1);
        kd.child_order.push_back(std::move(order));
    }
    for (const auto& r : j.at("root-order")) kd.root_order.push_back(r.get<int>() - 1);
    return kd;
}

int run(int argc, char** argv) {
    CLI::App app{"stable maximum nullity classification of digraphs"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json,--format-json", as_json, "emit JSON instead of text");

    const int default_minor_cap = env_int("NUSTAB_MINOR_CAP", kDefaultMinorCap);
    const int default_kelly_cap = env_int("NUSTAB_KELLY_CAP", kKellyExactCap);

    // classify
    std::string classify_input;
    ClassifyOptions copt;
    copt.minor_cap = default_minor_cap;
    copt.kelly_cap = default_kelly_cap;
    auto* cmd_classify = app.add_subcommand("classify", "classify a digraph by nullity");
    cmd_classify->add_option("--input", classify_input, "digraph file")->required();
    cmd_classify->add_flag("--with-matrix", copt.with_matrix_certificate,
                           "attach a randomized ASAP matrix certificate");
    cmd_classify->add_option("--seed", copt.seed, "seed for randomized certificates");
    cmd_classify->add_option("--trials", copt.matrix_trials, "certificate search trials");
    cmd_classify->add_option("--minor-cap", copt.minor_cap, "minor search cap");
    cmd_classify->add_option("--kelly-cap", copt.kelly_cap, "Kelly-width DP cap");
    cmd_classify->add_flag("--timings", copt.with_timings, "include timings in JSON");

    // kelly-width
    std::string kelly_input, kelly_validate;
    bool kelly_greedy = false, kelly_exact = false, kelly_check_root = false;
    int kelly_cap = default_kelly_cap;
    auto* cmd_kelly = app.add_subcommand("kelly-width", "Kelly-width of a digraph");
    cmd_kelly->add_option("--input", kelly_input, "digraph file")->required();
    cmd_kelly->add_flag("--exact", kelly_exact, "subset dynamic program (default)");
    cmd_kelly->add_flag("--greedy", kelly_greedy, "greedy width-1 recognizer only");
    cmd_kelly->add_option("--cap", kelly_cap, "DP size cap");
    cmd_kelly->add_option("--validate", kelly_validate,
                          "validate a Kelly-decomposition JSON file instead");
    cmd_kelly->add_flag("--check-root-condition", kelly_check_root,
                        "enforce the printed root enumeration condition");

    // minor
    std::string minor_input, minor_pattern;
    int minor_cap = default_minor_cap;
    auto* cmd_minor = app.add_subcommand("minor", "search for a forbidden pattern minor");
    cmd_minor->add_option("--pattern", minor_pattern, "k2|k3|n4|m5|n4r|m5r")->required();
    cmd_minor->add_option("--input", minor_input, "digraph file")->required();
    cmd_minor->add_option("--cap", minor_cap, "host size cap");

    // matrix
    std::string matrix_mode, matrix_file, matrix_digraph;
    auto* cmd_matrix = app.add_subcommand("matrix", "exact matrix checks");
    cmd_matrix->add_option("mode", matrix_mode, "asap|sp|nullity")->required();
    cmd_matrix->add_option("--matrix", matrix_file, "matrix file")->required();
    cmd_matrix->add_option("--digraph", matrix_digraph, "digraph file (required for sp)");

    // reduce
    std::string reduce_digraph, reduce_matrix;
    int reduce_cap = default_minor_cap;
    auto* cmd_reduce = app.add_subcommand("reduce", "run the dichotomy reduction engine");
    cmd_reduce->add_option("--digraph", reduce_digraph, "digraph file")->required();
    cmd_reduce->add_option("--matrix", reduce_matrix, "matrix file")->required();
    cmd_reduce->add_option("--minor-cap", reduce_cap, "minor scan cap for the precondition");

    // search-nu
    std::string nu_input;
    int nu_target = 1, nu_trials = 1000;
    std::uint32_t nu_seed = 1;
    auto* cmd_nu = app.add_subcommand("search-nu", "randomized nullity certificate search");
    cmd_nu->add_option("--input", nu_input, "digraph file")->required();
    cmd_nu->add_option("--target", nu_target, "nullity lower bound target")->required();
    cmd_nu->add_option("--trials", nu_trials, "number of trials");
    cmd_nu->add_option("--seed", nu_seed, "random seed");

    // bipartite
    std::string bip_mode, bip_input;
    auto* cmd_bip = app.add_subcommand("bipartite", "digraph <-> bipartite correspondence");
    cmd_bip->add_option("mode", bip_mode, "to|from")->required();
    cmd_bip->add_option("--input", bip_input, "input file")->required();

    // survey
    SurveyOptions sopt;
    std::string survey_output;
    auto* cmd_survey = app.add_subcommand("survey", "equivalence survey over small digraphs");
    cmd_survey->add_option("--n", sopt.n, "vertex count (1..5)")->required();
    cmd_survey->add_option("--samples", sopt.samples, "sample size (0 = exhaustive, n <= 4)");
    cmd_survey->add_option("--seed", sopt.seed, "random seed");
    cmd_survey->add_option("--nu-trials", sopt.nu_trials, "certificate trials per clean class");
    cmd_survey->add_option("--engine-samples", sopt.engine_samples,
                           "random matrices per clean class");
    cmd_survey->add_option("--output", survey_output, "write the JSON summary to a file");

    for (CLI::App* sub : {cmd_classify, cmd_kelly, cmd_minor, cmd_matrix, cmd_reduce, cmd_nu,
                          cmd_bip, cmd_survey})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    if (cmd_classify->parsed()) {
        const Digraph d = load_digraph(classify_input);
        const ClassificationReport report = classify(d, copt);
        std::ostringstream text;
        text << "verdict: " << verdict_name(report.verdict) << " (method: " << report.method
             << ")\n";
        if (report.pattern) text << "forbidden pattern: " << pattern_name(*report.pattern) << "\n";
        if (copt.with_timings) text << "total ms: " << report.total_ms << "\n";
        emit(classification_to_json(d, report), as_json, text.str());
        return 0;
    }

    if (cmd_kelly->parsed()) {
        const Digraph d = load_digraph(kelly_input);
        if (!kelly_validate.empty()) {
            const KellyDecomposition kd = decomposition_from_json(json::parse(slurp(kelly_validate)));
            const DecompositionVerdict v = validate_kelly_decomposition(d, kd, kelly_check_root);
            json violations = json::array();
            for (const auto& s : v.violations) violations.push_back(s);
            emit({{"schema", 1}, {"valid", v.valid}, {"width", v.width}, {"violations", violations}},
                 as_json,
                 std::string("valid: ") + (v.valid ? "true" : "false") +
                     ", width: " + std::to_string(v.width) + "\n");
            return v.valid ? 0 : kExitNegative;
        }
        if (kelly_greedy && !kelly_exact) {
            const auto ord = recognize_width1(d);
            if (!ord) {
                emit({{"schema", 1}, {"method", "greedy"}, {"width1_ordering", nullptr}}, as_json,
                     "greedy: no width-1 ordering found (inconclusive)\n");
                return kExitNegative;
            }
            emit({{"schema", 1}, {"method", "greedy"}, {"width1_ordering", ordering_to_json(*ord)}},
                 as_json, "greedy: width-1 ordering found; kelly-width <= 2\n");
            return 0;
        }
        const WidthReport report = kelly_width_exact(d, kelly_cap);
        emit({{"schema", 1},
              {"method", report.method},
              {"kelly_width", report.width},
              {"ordering", ordering_to_json(report.ordering)}},
             as_json, "kelly-width: " + std::to_string(report.width) + "\n");
        return 0;
    }

    if (cmd_minor->parsed()) {
        const Digraph d = load_digraph(minor_input);
        Digraph pattern;
        if (minor_pattern == "k2")
            pattern = pattern_k2();
        else if (minor_pattern == "k3")
            pattern = pattern_k3();
        else if (minor_pattern == "n4")
            pattern = pattern_n4();
        else if (minor_pattern == "m5")
            pattern = pattern_m5();
        else if (minor_pattern == "n4r")
            pattern = pattern_n4_reversed();
        else if (minor_pattern == "m5r")
            pattern = pattern_m5_reversed();
        else
            throw input_error("unknown pattern: " + minor_pattern);
        const auto witness = has_directed_minor(d, pattern, minor_cap);
        if (!witness) {
            emit({{"schema", 1}, {"pattern", minor_pattern}, {"found", false}}, as_json,
                 "minor " + minor_pattern + ": not contained\n");
            return kExitNegative;
        }
        json j = minor_witness_to_json(*witness);
        j["schema"] = 1;
        j["pattern"] = minor_pattern;
        j["found"] = true;
        emit(j, as_json,
             "minor " + minor_pattern + ": witness with " +
                 std::to_string(witness->steps.size()) + " steps\n");
        return 0;
    }

    if (cmd_matrix->parsed()) {
        const RationalMatrix b = load_matrix(matrix_file);
        if (matrix_mode == "nullity") {
            const int nul = nullity(b);
            emit({{"schema", 1}, {"nullity", nul}}, as_json,
                 "nullity: " + std::to_string(nul) + "\n");
            return 0;
        }
        if (matrix_mode == "asap") {
            const AsapReport report = asap_check_report(b);
            emit({{"schema", 1},
                  {"asap", report.holds},
                  {"violation_dimension", report.violation_dimension()}},
                 as_json,
                 std::string("asap: ") + (report.holds ? "true" : "false") + "\n");
            return report.holds ? 0 : kExitNegative;
        }
        if (matrix_mode == "sp") {
            if (matrix_digraph.empty()) throw input_error("sp check needs --digraph");
            const Digraph d = load_digraph(matrix_digraph);
            const SPReport report = sp_check_report(b, d);
            json j{{"schema", 1}, {"sp", report.holds}};
            if (report.witness) j["witness"] = sp_witness_to_json(*report.witness);
            emit(j, as_json, std::string("sp: ") + (report.holds ? "true" : "false") + "\n");
            return report.holds ? 0 : kExitNegative;
        }
        throw input_error("unknown matrix mode: " + matrix_mode);
    }

    if (cmd_reduce->parsed()) {
        const Digraph d = load_digraph(reduce_digraph);
        const RationalMatrix a = load_matrix(reduce_matrix);
        const CheckMatrixResult r = check_matrix(d, a, reduce_cap);
        json j{{"schema", 1},
               {"verdict", r.kind == MatrixVerdictKind::NullityAtMostOne ? "NullityAtMostOne"
                                                                         : "SPViolation"},
               {"nullity", r.nullity_value},
               {"terminal", r.terminal},
               {"trace", trace_to_json(r.trace)}};
        if (r.witness) j["witness"] = sp_witness_to_json(*r.witness);
        std::ostringstream text;
        text << "verdict: "
             << (r.kind == MatrixVerdictKind::NullityAtMostOne ? "NullityAtMostOne"
                                                               : "SPViolation")
             << " after " << r.trace.size() << " reductions\n";
        emit(j, as_json, text.str());
        return 0;
    }

    if (cmd_nu->parsed()) {
        const Digraph d = load_digraph(nu_input);
        const auto cert = nu_lower_bound_search(d, nu_target, nu_trials, nu_seed);
        if (!cert) {
            emit({{"schema", 1}, {"found", false}, {"target", nu_target}}, as_json,
                 "no certificate found (proves nothing)\n");
            return kExitNegative;
        }
        emit({{"schema", 1},
              {"found", true},
              {"target", nu_target},
              {"nullity", cert->nullity_value},
              {"matrix", matrix_to_json(cert->matrix)}},
             as_json, "certificate found: nullity " + std::to_string(cert->nullity_value) + "\n");
        return 0;
    }

    if (cmd_bip->parsed()) {
        if (bip_mode == "to") {
            const Digraph d = load_digraph(bip_input);
            const auto [g, m] = to_bipartite(d);
            std::ostringstream os;
            write_bigraph_text(os, g, m);
            std::cout << os.str();
            return 0;
        }
        if (bip_mode == "from") {
            std::istringstream is(slurp(bip_input));
            const auto [g, m] = read_bigraph_text(is);
            if (!m) throw input_error("'from' needs a matching section in the input");
            const Digraph d = from_bipartite(g, *m);
            write_digraph_text(std::cout, d);
            return 0;
        }
        throw input_error("unknown bipartite mode: " + bip_mode);
    }

    if (cmd_survey->parsed()) {
        const SurveyResult r = survey(sopt);
        const json j = survey_to_json(r);
        if (!survey_output.empty()) {
            std::ofstream out(survey_output);
            if (!out) throw input_error("cannot write " + survey_output);
            out << j.dump(2) << "\n";
        }
        std::ostringstream text;
        text << "survey n=" << r.n << ": " << r.classes << " classes, "
             << r.violations.size() << " violations, " << r.engine_gaps.size()
             << " engine gaps\n";
        emit(j, as_json, text.str());
        return r.ok() ? 0 : kExitNegative;
    }

    throw input_error("no subcommand");
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const capacity_error& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const internal_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitCapacity + 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}
