#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nustab/classify.hpp"
#include "nustab/digraph.hpp"
#include "nustab/digraph_io.hpp"
#include "nustab/isomorphism.hpp"
#include "nustab/kellywidth.hpp"
#include "nustab/minors.hpp"
#include "nustab/nu_search.hpp"
#include "nustab/reduce.hpp"
#include "nustab/support_property.hpp"

namespace nustab {

struct SurveyOptions {
    int n = 3;
    int samples = 0; // 0 = exhaustive (n <= 4 only)
    std::uint32_t seed = 1;
    int nu_trials = 30;       // target-2 certificate attempts per clean class
    int engine_samples = 2;   // random Q0 matrices fed to the engine per class
    bool cross_check_regimes = true; // compare both minor-search regimes (n <= 4)
};

struct SurveyViolation {
    std::string kind;
    std::string digraph_text;
    std::string detail;
};

/// An instance on which the reduction engine exhausted every case while the
/// exact check confirms the Support Property holds despite nullity >= 2.
struct SurveyEngineGap {
    std::string digraph_text;
    std::string matrix_text;
};

struct SurveyResult {
    int n = 0;
    bool exhaustive = true;
    long long instances = 0; // labeled digraphs covered
    int classes = 0;         // distinct canonical classes examined
    int clean_classes = 0;
    int engine_checks = 0;
    std::vector<SurveyViolation> violations;
    std::vector<SurveyEngineGap> engine_gaps;
    bool ok() const { return violations.empty(); }
};

namespace detail {

inline Digraph digraph_from_arc_bits(int n, std::uint64_t bits) {
    std::vector<Arc> arcs;
    int k = 0;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId w = 0; w < n; ++w) {
            if (u == w) continue;
            if (bits & (std::uint64_t{1} << k)) arcs.emplace_back(u, w);
            ++k;
        }
    return Digraph(n, std::move(arcs));
}

} // namespace detail

/// The headline regression run: over every digraph on n vertices (or a
/// seeded sample for n = 5), checks that forbidden-minor-freeness coincides
/// with Kelly-width <= 2 of the digraph and its reverse, that the randomized
/// nullity-2 certificate search never succeeds on a minor-free digraph, and
/// that the reduction engine's dichotomy verdicts verify on random Q0
/// matrices. Work is done once per canonical isomorphism class.
inline SurveyResult survey(const SurveyOptions& opt) {
    if (opt.n < 1 || opt.n > 5) throw input_error("survey supports 1 <= n <= 5");
    const int pairs = opt.n * (opt.n - 1);
    const bool exhaustive = opt.samples == 0;
    if (exhaustive && opt.n > 4)
        throw capacity_error("exhaustive survey limited to n <= 4; pass a sample size");

    SurveyResult result;
    result.n = opt.n;
    result.exhaustive = exhaustive;

    std::mt19937 rng(opt.seed);
    std::map<CanonicalCode, Digraph> classes;
    if (exhaustive) {
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << pairs); ++bits) {
            const Digraph d = detail::digraph_from_arc_bits(opt.n, bits);
            classes.emplace(canonical_code(d), d);
            ++result.instances;
        }
    } else {
        std::uniform_int_distribution<std::uint64_t> dist(0, (std::uint64_t{1} << pairs) - 1);
        for (int i = 0; i < opt.samples; ++i) {
            const Digraph d = detail::digraph_from_arc_bits(opt.n, dist(rng));
            classes.emplace(canonical_code(d), d);
            ++result.instances;
        }
    }
    result.classes = static_cast<int>(classes.size());

    for (const auto& [code, d] : classes) {
        const bool clean = forbidden_scan(d).clean();
        const bool kelly_low =
            kelly_width_exact(d).width <= 2 && kelly_width_exact(reverse(d)).width <= 2;
        if (clean != kelly_low)
            result.violations.push_back(
                {"minor-kelly", to_text(d),
                 std::string("forbidden-minor-free=") + (clean ? "true" : "false") +
                     " but kelly<=2 both ways=" + (kelly_low ? "true" : "false")});
        if (opt.cross_check_regimes && opt.n <= 4) {
            const auto restricted = forbidden_scan(d, kDefaultMinorCap,
                                                   MinorSearchMode::SubdigraphFirst);
            if (restricted.clean() != clean)
                result.violations.push_back(
                    {"regime", to_text(d),
                     "interleaved and subdigraph-first searches disagree"});
        }
        if (!clean) continue;
        ++result.clean_classes;

        // No nullity-2 certificate may exist on a minor-free digraph.
        if (auto cert = nu_lower_bound_search(d, 2, opt.nu_trials, opt.seed))
            result.violations.push_back(
                {"nu-certificate", to_text(d),
                 "found an ASAP matrix with nullity " + std::to_string(cert->nullity_value)});

        // The dichotomy engine on random Q0 matrices.
        for (int s = 0; s < opt.engine_samples; ++s) {
            const RationalMatrix a = sample_Q0(d, rng);
            ++result.engine_checks;
            try {
                const CheckMatrixResult r = check_matrix(d, a);
                if (r.kind == MatrixVerdictKind::NullityAtMostOne) {
                    if (nullity(a) > 1)
                        result.violations.push_back({"engine", to_text(d),
                                                     "NullityAtMostOne with nullity > 1"});
                } else if (!validate_sp_witness(d, a, *r.witness)) {
                    result.violations.push_back(
                        {"engine", to_text(d), "SP witness failed re-validation"});
                }
            } catch (const internal_error&) {
                // Either a genuine fixed point of the reduction (nullity >= 2
                // with the support property intact) or an engine bug; the
                // exact check separates the two.
                if (nullity(a) >= 2 && sp_check(a, d)) {
                    std::ostringstream ms;
                    write_matrix_text(ms, a);
                    result.engine_gaps.push_back({to_text(d), ms.str()});
                } else {
                    result.violations.push_back(
                        {"engine", to_text(d), "engine raised without a confirmed gap"});
                }
            }
        }
    }
    return result;
}

inline nlohmann::json survey_to_json(const SurveyResult& r) {
    nlohmann::json violations = nlohmann::json::array();
    for (const auto& v : r.violations)
        violations.push_back({{"kind", v.kind}, {"digraph", v.digraph_text}, {"detail", v.detail}});
    nlohmann::json gaps = nlohmann::json::array();
    for (const auto& g : r.engine_gaps)
        gaps.push_back({{"digraph", g.digraph_text}, {"matrix", g.matrix_text}});
    return {{"schema", 1},
            {"n", r.n},
            {"exhaustive", r.exhaustive},
            {"instances", r.instances},
            {"classes", r.classes},
            {"clean_classes", r.clean_classes},
            {"engine_checks", r.engine_checks},
            {"violations", violations},
            {"engine_gaps", gaps},
            {"ok", r.ok()}};
}

} // namespace nustab
