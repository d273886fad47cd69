#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "nustab/digraph.hpp"
#include "nustab/errors.hpp"
#include "nustab/isomorphism.hpp"
#include "nustab/patterns.hpp"

namespace nustab {

/// An arc is butterfly contractible when it is the unique outgoing arc of
/// its tail or the unique incoming arc of its head.
inline bool is_butterfly_contractible(const Digraph& d, VertexId u, VertexId w) {
    if (!d.has_arc(u, w)) throw input_error("arc does not exist");
    return d.out_degree(u) == 1 || d.in_degree(w) == 1;
}

namespace detail {

/// Identifies u and w into one vertex at slot min(u,w); self-arcs dropped,
/// parallel arcs merged. Vertices above max(u,w) shift down by one.
inline RelabeledDigraph identify_vertices(const Digraph& d, VertexId u, VertexId w) {
    const VertexId lo = std::min(u, w), hi = std::max(u, w);
    std::vector<int> map(d.n());
    for (VertexId x = 0; x < d.n(); ++x) map[x] = x == hi ? lo : x < hi ? x : x - 1;
    std::vector<Arc> arcs;
    for (const auto& [a, b] : d.arcs()) {
        const VertexId na = map[a], nb = map[b];
        if (na != nb) arcs.emplace_back(na, nb);
    }
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
    return {Digraph(d.n() - 1, std::move(arcs)), std::move(map)};
}

} // namespace detail

/// Contracts the butterfly-contractible arc (u, w).
inline RelabeledDigraph butterfly_contract(const Digraph& d, VertexId u, VertexId w) {
    if (!d.has_arc(u, w)) throw contract_error("arc to contract does not exist");
    if (!is_butterfly_contractible(d, u, w))
        throw contract_error("arc is not butterfly contractible");
    return detail::identify_vertices(d, u, w);
}

/// Contracts the bi-directed edge {u, w}: both arcs deleted, vertices
/// identified.
inline RelabeledDigraph contract_bidirected(const Digraph& d, VertexId u, VertexId w) {
    if (!d.has_arc(u, w) || !d.has_arc(w, u))
        throw contract_error("bi-directed contraction needs both arcs");
    return detail::identify_vertices(d, u, w);
}

/// The star contraction D*uv: delete every arc into v except (u, v), then
/// contract (u, v). Requires u to have outdegree exactly 1 via (u, v).
inline RelabeledDigraph star_contract(const Digraph& d, VertexId u, VertexId v) {
    if (!d.has_arc(u, v)) throw contract_error("arc (u,v) does not exist");
    if (d.out_degree(u) != 1) throw contract_error("star contraction needs outdegree 1 at u");
    Digraph trimmed = d;
    for (VertexId z : d.in_neighbors(v))
        if (z != u) trimmed = delete_arc(trimmed, z, v);
    return butterfly_contract(trimmed, u, v);
}

// ---------------------------------------------------------------------------
// Directed-minor witnesses and search
// ---------------------------------------------------------------------------

enum class MinorStepKind { DeleteVertex, DeleteArc, ButterflyContract, BidirectedContract };

/// One edit, expressed in the labels of the digraph it is applied to.
struct MinorStep {
    MinorStepKind kind;
    VertexId u = -1;
    VertexId w = -1; // unused for DeleteVertex
};

inline RelabeledDigraph apply_minor_step(const Digraph& d, const MinorStep& s) {
    switch (s.kind) {
    case MinorStepKind::DeleteVertex: return delete_vertex(d, s.u);
    case MinorStepKind::DeleteArc: {
        std::vector<int> identity(d.n());
        for (VertexId v = 0; v < d.n(); ++v) identity[v] = v;
        return {delete_arc(d, s.u, s.w), std::move(identity)};
    }
    case MinorStepKind::ButterflyContract: return butterfly_contract(d, s.u, s.w);
    case MinorStepKind::BidirectedContract: return contract_bidirected(d, s.u, s.w);
    }
    throw internal_error("unknown minor step kind");
}

/// Replayable derivation of a pattern from a host digraph. Steps are applied
/// in order, each in the labels current at that moment;
/// `iso_pattern_to_final` then maps pattern vertices onto the result.
struct MinorWitness {
    std::vector<MinorStep> steps;
    std::vector<VertexId> iso_pattern_to_final;
};

inline Digraph replay_minor_witness(const Digraph& host, const MinorWitness& w) {
    Digraph g = host;
    for (const auto& s : w.steps) g = apply_minor_step(g, s).graph;
    return g;
}

inline bool validate_minor_witness(const Digraph& host, const Digraph& pattern,
                                   const MinorWitness& w) {
    try {
        const Digraph final_graph = replay_minor_witness(host, w);
        return is_isomorphism_map(pattern, final_graph, w.iso_pattern_to_final);
    } catch (const std::exception&) {
        return false;
    }
}

/// Interleaved allows deletions and contractions in any order; SubdigraphFirst
/// restricts to deletions followed by contractions only.
enum class MinorSearchMode { Interleaved, SubdigraphFirst };

constexpr int kDefaultMinorCap = 8;

namespace detail {

struct MinorSearchNode {
    Digraph graph;
    int parent = -1;
    MinorStep step{};
    bool contracting = false; // restricted mode: contraction phase entered
};

/// Bijective arc-preserving embedding pattern -> g (g may have extra arcs).
inline std::optional<std::vector<VertexId>> find_spanning_embedding(const Digraph& pattern,
                                                                    const Digraph& g) {
    if (pattern.n() != g.n() || pattern.arc_count() > g.arc_count()) return std::nullopt;
    std::vector<VertexId> map(pattern.n(), -1);
    std::vector<char> used(g.n(), 0);
    if (extend_embedding(pattern, g, map, used, 0)) return map;
    return std::nullopt;
}

inline std::vector<MinorStep> steps_to(const std::vector<MinorSearchNode>& nodes, int index) {
    std::vector<MinorStep> steps;
    for (int at = index; at > 0; at = nodes[at].parent) steps.push_back(nodes[at].step);
    std::reverse(steps.begin(), steps.end());
    return steps;
}

/// Completes a witness from a state whose vertex count already matches the
/// pattern: deletes the surplus arcs of the embedding, in arc order.
inline MinorWitness finish_witness(const std::vector<MinorSearchNode>& nodes, int index,
                                   const Digraph& pattern, const std::vector<VertexId>& embed) {
    MinorWitness w;
    w.steps = steps_to(nodes, index);
    const Digraph& g = nodes[index].graph;
    std::vector<char> keep(g.n() * g.n(), 0);
    for (const auto& [u, v] : pattern.arcs()) keep[embed[u] * g.n() + embed[v]] = 1;
    for (const auto& [u, v] : g.arcs())
        if (!keep[u * g.n() + v]) w.steps.push_back({MinorStepKind::DeleteArc, u, v});
    w.iso_pattern_to_final = embed;
    return w;
}

struct CodePhase {
    CanonicalCode code;
    bool contracting;
    friend bool operator==(const CodePhase& a, const CodePhase& b) {
        return a.code == b.code && a.contracting == b.contracting;
    }
};

struct CodePhaseHash {
    std::size_t operator()(const CodePhase& cp) const {
        return CanonicalCodeHash()(cp.code) * 2 + (cp.contracting ? 1 : 0);
    }
};

} // namespace detail

/// Exhaustive breadth-first search over deletion/contraction sequences,
/// deduplicated on canonical forms, looking for every pattern in `targets`.
/// Returns one witness per found pattern (first hit in canonical branch
/// order); patterns absent from the result are certified absent, by
/// exhaustion. `early_exit` stops at the first pattern found.
inline std::map<std::size_t, MinorWitness> search_directed_minors(
    const Digraph& host, const std::vector<Digraph>& targets, int cap = kDefaultMinorCap,
    MinorSearchMode mode = MinorSearchMode::Interleaved, bool early_exit = false) {
    if (host.n() > cap)
        throw capacity_error("minor search host above cap (" + std::to_string(cap) + ")");
    std::map<std::size_t, MinorWitness> found;
    std::vector<char> open(targets.size(), 1);
    int min_n = host.n() + 1;
    const auto refresh_bounds = [&] {
        min_n = host.n() + 1;
        for (std::size_t t = 0; t < targets.size(); ++t)
            if (open[t]) min_n = std::min(min_n, targets[t].n());
    };
    refresh_bounds();

    std::vector<detail::MinorSearchNode> nodes;
    nodes.push_back({host, -1, {}, false});
    std::unordered_set<detail::CodePhase, detail::CodePhaseHash> seen;
    seen.insert({canonical_code(host), false});
    std::deque<int> queue{0};

    const auto feasible = [&](int n, int m) {
        for (std::size_t t = 0; t < targets.size(); ++t)
            if (open[t] && n >= targets[t].n() && m >= targets[t].arc_count()) return true;
        return false;
    };

    while (!queue.empty()) {
        const int index = queue.front();
        queue.pop_front();
        const Digraph g = nodes[index].graph;
        const bool contracting = nodes[index].contracting;

        // Match targets of the current size.
        for (std::size_t t = 0; t < targets.size(); ++t) {
            if (!open[t] || targets[t].n() != g.n()) continue;
            if (mode == MinorSearchMode::SubdigraphFirst && contracting) {
                // No deletions may follow: exact isomorphism only.
                if (auto iso = find_isomorphism(targets[t], g)) {
                    MinorWitness w;
                    w.steps = detail::steps_to(nodes, index);
                    w.iso_pattern_to_final = *iso;
                    found.emplace(t, std::move(w));
                    open[t] = 0;
                    refresh_bounds();
                }
            } else if (auto embed = detail::find_spanning_embedding(targets[t], g)) {
                found.emplace(t, detail::finish_witness(nodes, index, targets[t], *embed));
                open[t] = 0;
                refresh_bounds();
            }
            if (early_exit && !found.empty()) return found;
        }
        if (std::none_of(open.begin(), open.end(), [](char c) { return c != 0; })) break;
        if (g.n() <= min_n) continue; // only deeper losses of vertices from here

        const auto push_child = [&](RelabeledDigraph&& child, const MinorStep& step,
                                    bool child_contracting) {
            if (!feasible(child.graph.n(), child.graph.arc_count())) return;
            detail::CodePhase key{canonical_code(child.graph),
                                  mode == MinorSearchMode::SubdigraphFirst && child_contracting};
            if (!seen.insert(key).second) return;
            nodes.push_back({std::move(child.graph), index, step, child_contracting});
            queue.push_back(static_cast<int>(nodes.size()) - 1);
        };

        const bool may_delete = mode == MinorSearchMode::Interleaved || !contracting;
        if (may_delete) {
            for (VertexId v = 0; v < g.n(); ++v)
                push_child(delete_vertex(g, v), {MinorStepKind::DeleteVertex, v, -1}, contracting);
            for (const auto& [u, w] : g.arcs()) {
                std::vector<int> identity(g.n());
                for (VertexId v = 0; v < g.n(); ++v) identity[v] = v;
                push_child({delete_arc(g, u, w), std::move(identity)},
                           {MinorStepKind::DeleteArc, u, w}, contracting);
            }
        }
        for (const auto& [u, w] : g.arcs())
            if (is_butterfly_contractible(g, u, w))
                push_child(butterfly_contract(g, u, w), {MinorStepKind::ButterflyContract, u, w},
                           true);
        for (const auto& [u, w] : g.arcs())
            if (u < w && g.has_arc(w, u))
                push_child(contract_bidirected(g, u, w),
                           {MinorStepKind::BidirectedContract, u, w}, true);
    }
    return found;
}

/// Witness that P is a directed minor of D, or nullopt after exhaustive
/// search.
inline std::optional<MinorWitness> has_directed_minor(const Digraph& d, const Digraph& p,
                                                      int cap = kDefaultMinorCap,
                                                      MinorSearchMode mode =
                                                          MinorSearchMode::Interleaved) {
    auto found = search_directed_minors(d, {p}, cap, mode);
    if (auto it = found.find(0); it != found.end()) return std::move(it->second);
    return std::nullopt;
}

/// Scan result over the five forbidden patterns.
struct ForbiddenScanReport {
    std::map<ForbiddenPattern, MinorWitness> witnesses;
    bool clean() const { return witnesses.empty(); }
    std::optional<ForbiddenPattern> first_found() const {
        if (witnesses.empty()) return std::nullopt;
        return witnesses.begin()->first;
    }
};

inline ForbiddenScanReport forbidden_scan(const Digraph& d, int cap = kDefaultMinorCap,
                                          MinorSearchMode mode = MinorSearchMode::Interleaved,
                                          bool early_exit = false) {
    std::vector<Digraph> targets;
    for (ForbiddenPattern p : all_forbidden_patterns()) targets.push_back(pattern_digraph(p));
    auto found = search_directed_minors(d, targets, cap, mode, early_exit);
    ForbiddenScanReport report;
    for (auto& [t, w] : found)
        report.witnesses.emplace(all_forbidden_patterns()[t], std::move(w));
    return report;
}

/// True iff none of the five forbidden patterns is a directed minor of d.
inline bool is_forbidden_minor_free(const Digraph& d, int cap = kDefaultMinorCap) {
    return forbidden_scan(d, cap, MinorSearchMode::Interleaved, true).clean();
}

// ---------------------------------------------------------------------------
// Low-degree pair extraction
// ---------------------------------------------------------------------------

/// Outcome of the low-degree pair normalization: the digraph the pair lives
/// on (the input after the recorded butterfly contractions), and the pair
/// itself when one exists. `v` has outdegree <= 1, `w` has indegree <= 1,
/// v != w, and v is not adjacent to w in `reduced`.
struct LowDegreePairResult {
    Digraph reduced;
    std::vector<MinorStep> contractions;
    std::optional<std::pair<VertexId, VertexId>> pair;
};

inline LowDegreePairResult find_low_degree_pair(const Digraph& d) {
    LowDegreePairResult result{d, {}, std::nullopt};
    while (true) {
        const Digraph& g = result.reduced;
        std::vector<VertexId> outs, ins;
        for (VertexId v = 0; v < g.n(); ++v) {
            if (g.out_degree(v) <= 1) outs.push_back(v);
            if (g.in_degree(v) <= 1) ins.push_back(v);
        }
        if (outs.empty() || ins.empty()) return result;
        for (VertexId v : outs)
            for (VertexId w : ins)
                if (v != w && !g.adjacent(v, w)) {
                    result.pair = {v, w};
                    return result;
                }
        // Every candidate pair is blocked. Normalize by a butterfly
        // contraction and retry on the smaller digraph.
        std::optional<MinorStep> step;
        for (VertexId v : outs) {
            for (VertexId w : ins) {
                if (v == w) continue;
                if (g.has_arc(v, w)) { // unique outgoing arc of v
                    step = MinorStep{MinorStepKind::ButterflyContract, v, w};
                    break;
                }
                if (g.has_arc(w, v) && is_butterfly_contractible(g, w, v)) {
                    step = MinorStep{MinorStepKind::ButterflyContract, w, v};
                    break;
                }
            }
            if (step) break;
        }
        if (!step) {
            // Only same-vertex candidates remain: contract an arc incident
            // to such a vertex, if any exists.
            for (VertexId x : outs) {
                if (g.out_degree(x) == 1) {
                    step = MinorStep{MinorStepKind::ButterflyContract, x, g.out_neighbors(x)[0]};
                    break;
                }
                if (g.in_degree(x) == 1) {
                    step = MinorStep{MinorStepKind::ButterflyContract, g.in_neighbors(x)[0], x};
                    break;
                }
            }
        }
        if (!step) return result;
        result.contractions.push_back(*step);
        result.reduced = apply_minor_step(g, *step).graph;
    }
}

} // namespace nustab
