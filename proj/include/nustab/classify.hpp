#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nustab/digraph.hpp"
#include "nustab/digraph_io.hpp"
#include "nustab/errors.hpp"
#include "nustab/kellywidth.hpp"
#include "nustab/minors.hpp"
#include "nustab/nu_search.hpp"
#include "nustab/rational_matrix.hpp"

namespace nustab {

enum class NuVerdict { NuZero, NuOne, NuAtLeastTwo };

inline std::string verdict_name(NuVerdict v) {
    switch (v) {
    case NuVerdict::NuZero: return "NuZero";
    case NuVerdict::NuOne: return "NuOne";
    case NuVerdict::NuAtLeastTwo: return "NuAtLeastTwo";
    }
    throw internal_error("unknown verdict");
}

struct ClassifyOptions {
    int minor_cap = kDefaultMinorCap;
    int kelly_cap = kKellyExactCap;
    bool with_matrix_certificate = false;
    int matrix_trials = 2000;
    std::uint32_t seed = 1;
    bool with_timings = false;
};

/// Classification of a digraph by its stable maximum nullity, together with
/// machine-checkable certificates. Every certificate re-validates before the
/// report is returned.
struct ClassificationReport {
    NuVerdict verdict = NuVerdict::NuZero;
    // NuZero: an order with every arc forward.
    std::optional<std::vector<VertexId>> topological;
    // NuOne: width-<=1 elimination orderings for D and reverse(D).
    std::optional<EliminationOrdering> ordering;
    std::optional<EliminationOrdering> ordering_reversed;
    // NuAtLeastTwo: a forbidden pattern and its witness (when within cap).
    std::optional<ForbiddenPattern> pattern;
    std::optional<MinorWitness> witness;
    bool witness_omitted_over_cap = false;
    // Optional randomized matrix certificate (nullity lower bound).
    std::optional<NuCertificate> matrix_certificate;
    std::string method;
    double total_ms = 0;
    bool timings_in_json = false;
};

/// Decides NuZero / NuOne / NuAtLeastTwo. Acyclic digraphs are NuZero; the
/// Kelly-width of D and reverse(D) (both <= 2 or not) separates the rest.
/// Within the minor cap, the forbidden-pattern scan cross-checks the
/// Kelly-width decision; any disagreement is a fatal internal error.
inline ClassificationReport classify(const Digraph& d, const ClassifyOptions& opt = {}) {
    const auto start = std::chrono::steady_clock::now();
    ClassificationReport report;
    report.timings_in_json = opt.with_timings;

    if (auto topo = topological_order(d)) {
        report.verdict = NuVerdict::NuZero;
        report.topological = std::move(topo);
        report.method = "acyclic";
    } else {
        if (d.n() > opt.kelly_cap)
            throw capacity_error("digraph exceeds the Kelly-width cap");
        const WidthReport kw = kelly_width_exact(d, opt.kelly_cap);
        const WidthReport kw_rev = kelly_width_exact(reverse(d), opt.kelly_cap);
        const bool kelly_low = kw.width <= 2 && kw_rev.width <= 2;
        if (d.n() <= opt.minor_cap) {
            const bool clean = forbidden_scan(d, opt.minor_cap).clean();
            if (clean != kelly_low)
                throw internal_error("Kelly-width and forbidden-minor scans disagree");
        }
        if (kelly_low) {
            report.verdict = NuVerdict::NuOne;
            report.ordering = kw.ordering;
            report.ordering_reversed = kw_rev.ordering;
            report.method = "kelly-width";
            if (ordering_width(d, *report.ordering) > 1 ||
                ordering_width(reverse(d), *report.ordering_reversed) > 1)
                throw internal_error("width certificate failed validation");
        } else {
            report.verdict = NuVerdict::NuAtLeastTwo;
            report.method = "kelly-width";
            if (d.n() <= opt.minor_cap) {
                const auto scan = forbidden_scan(d, opt.minor_cap);
                if (scan.clean()) throw internal_error("missing forbidden minor witness");
                const auto& [pat, wit] = *scan.witnesses.begin();
                report.pattern = pat;
                report.witness = wit;
                report.method = "kelly-width+minor";
                if (!validate_minor_witness(d, pattern_digraph(pat), wit))
                    throw internal_error("minor witness failed validation");
            } else {
                report.witness_omitted_over_cap = true;
            }
        }
    }

    if (opt.with_matrix_certificate && report.verdict != NuVerdict::NuZero) {
        const int target = report.verdict == NuVerdict::NuOne ? 1 : 2;
        auto cert = nu_lower_bound_search(d, target, opt.matrix_trials, opt.seed);
        if (cert && !validate_nu_certificate(d, *cert, target))
            throw internal_error("matrix certificate failed validation");
        report.matrix_certificate = std::move(cert);
    }

    report.total_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return report;
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

inline std::string minor_step_op_name(MinorStepKind k) {
    switch (k) {
    case MinorStepKind::DeleteVertex: return "delete_vertex";
    case MinorStepKind::DeleteArc: return "delete_arc";
    case MinorStepKind::ButterflyContract: return "butterfly_contract";
    case MinorStepKind::BidirectedContract: return "bidirected_contract";
    }
    throw internal_error("unknown step kind");
}

inline nlohmann::json minor_witness_to_json(const MinorWitness& w) {
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& s : w.steps) {
        nlohmann::json step{{"op", minor_step_op_name(s.kind)}, {"u", s.u + 1}};
        if (s.kind != MinorStepKind::DeleteVertex) step["w"] = s.w + 1;
        steps.push_back(step);
    }
    nlohmann::json iso = nlohmann::json::array();
    for (VertexId v : w.iso_pattern_to_final) iso.push_back(v + 1);
    return {{"steps", steps}, {"isomorphism", iso}};
}

inline nlohmann::json ordering_to_json(const EliminationOrdering& ord) {
    nlohmann::json j = nlohmann::json::array();
    for (VertexId v : ord) j.push_back(v + 1);
    return j;
}

inline nlohmann::json classification_to_json(const Digraph& d, const ClassificationReport& r) {
    nlohmann::json j{{"schema", 1},
                     {"input", digraph_to_json(d)},
                     {"verdict", verdict_name(r.verdict)},
                     {"method", r.method}};
    nlohmann::json certs = nlohmann::json::object();
    if (r.topological) certs["topological_order"] = ordering_to_json(*r.topological);
    if (r.ordering) certs["elimination_ordering"] = ordering_to_json(*r.ordering);
    if (r.ordering_reversed)
        certs["elimination_ordering_reversed"] = ordering_to_json(*r.ordering_reversed);
    if (r.pattern) certs["forbidden_pattern"] = pattern_name(*r.pattern);
    if (r.witness) certs["minor_witness"] = minor_witness_to_json(*r.witness);
    if (r.witness_omitted_over_cap) certs["minor_witness_omitted"] = "host above minor search cap";
    if (r.matrix_certificate) {
        certs["asap_matrix"] = matrix_to_json(r.matrix_certificate->matrix);
        certs["asap_matrix_nullity"] = r.matrix_certificate->nullity_value;
    }
    j["certificates"] = certs;
    if (r.timings_in_json) j["total_ms"] = r.total_ms;
    return j;
}

} // namespace nustab
