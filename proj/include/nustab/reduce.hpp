#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nustab/digraph.hpp"
#include "nustab/errors.hpp"
#include "nustab/minors.hpp"
#include "nustab/qpattern.hpp"
#include "nustab/rational_matrix.hpp"
#include "nustab/support_property.hpp"

namespace nustab {

enum class ReductionKind { Contract, Delete, Semicontract };

inline std::string reduction_kind_name(ReductionKind k) {
    switch (k) {
    case ReductionKind::Contract: return "contract";
    case ReductionKind::Delete: return "delete";
    case ReductionKind::Semicontract: return "semicontract";
    }
    throw internal_error("unknown reduction kind");
}

/// A digraph-and-matrix pair produced by one reduction, with the vertex
/// relabeling of the digraph edit. Matrix indices follow the new labels.
struct ReducedInstance {
    Digraph graph;
    RationalMatrix matrix;
    std::vector<int> relabel; // old -> new (merged endpoints share a target)
};

namespace detail {

/// Position of old label x inside the increasing enumeration of V \ {u}.
inline int packed_index(int x, int u) { return x < u ? x : x - 1; }

} // namespace detail

/// Contract reduction at u (outdegree 1, arc (u,v), a_uu != 0, a_uv != 0):
/// the digraph contracts the arc, the matrix becomes the Schur complement
/// A/A[u]. Row and column of the merged vertex are those of v. Nullity is
/// preserved.
inline ReducedInstance reduce_contract(const Digraph& d, const RationalMatrix& a, VertexId u) {
    if (!in_Q0(d, a)) throw reduce_error("matrix is not in Q0 of the digraph");
    if (d.out_degree(u) != 1) throw reduce_error("contract reduction needs outdegree 1");
    const VertexId v = d.out_neighbors(u)[0];
    if (a(u, u) == 0 || a(u, v) == 0)
        throw reduce_error("contract reduction needs a_uu != 0 and a_uv != 0");
    auto [graph, relabel] = butterfly_contract(d, u, v);
    const RationalMatrix schur = schur_complement(a, {u}); // indexed by V \ {u}, increasing
    RationalMatrix m(graph.n(), graph.n());
    // new label -> old label; the merged vertex reads row/column v.
    std::vector<int> old_of_new(graph.n(), -1);
    for (VertexId x = 0; x < d.n(); ++x)
        if (x != u && x != v) old_of_new[relabel[x]] = x;
    old_of_new[relabel[v]] = v;
    for (int i = 0; i < graph.n(); ++i)
        for (int j = 0; j < graph.n(); ++j)
            m(i, j) = schur(detail::packed_index(old_of_new[i], u),
                            detail::packed_index(old_of_new[j], u));
    return {std::move(graph), std::move(m), std::move(relabel)};
}

/// Delete reduction at u (outdegree <= 1, a_uu != 0, and the out-arc entry,
/// if any, zero): drop the vertex and its row and column. Here A(u,u) equals
/// the Schur complement A/A[u], so nullity is preserved.
inline ReducedInstance reduce_delete(const Digraph& d, const RationalMatrix& a, VertexId u) {
    if (!in_Q0(d, a)) throw reduce_error("matrix is not in Q0 of the digraph");
    if (d.out_degree(u) > 1) throw reduce_error("delete reduction needs outdegree <= 1");
    if (a(u, u) == 0) throw reduce_error("delete reduction needs a_uu != 0");
    if (d.out_degree(u) == 1 && a(u, d.out_neighbors(u)[0]) != 0)
        throw reduce_error("delete reduction needs a zero out-arc entry");
    auto [graph, relabel] = delete_vertex(d, u);
    std::vector<int> rest;
    for (VertexId x = 0; x < d.n(); ++x)
        if (x != u) rest.push_back(x);
    return {std::move(graph), submatrix(a, rest, rest), std::move(relabel)};
}

/// Semicontract reduction at u (outdegree 1, arc (u,v), a_uu = 0,
/// a_uv != 0): the digraph becomes D*uv, the matrix loses row u and column
/// v. The merged vertex reads row v and column u. A(u,v) equals the Schur
/// complement on the (u,v) pivot, so nullity is preserved.
inline ReducedInstance reduce_semicontract(const Digraph& d, const RationalMatrix& a, VertexId u) {
    if (!in_Q0(d, a)) throw reduce_error("matrix is not in Q0 of the digraph");
    if (d.out_degree(u) != 1) throw reduce_error("semicontract reduction needs outdegree 1");
    const VertexId v = d.out_neighbors(u)[0];
    if (a(u, u) != 0 || a(u, v) == 0)
        throw reduce_error("semicontract reduction needs a_uu = 0 and a_uv != 0");
    auto [graph, relabel] = star_contract(d, u, v);
    RationalMatrix m(graph.n(), graph.n());
    std::vector<int> row_old(graph.n(), -1), col_old(graph.n(), -1);
    for (VertexId x = 0; x < d.n(); ++x) {
        if (x != u && x != v) row_old[relabel[x]] = col_old[relabel[x]] = x;
    }
    row_old[relabel[v]] = v; // merged row is row v
    col_old[relabel[u]] = u; // merged column is column u
    for (int i = 0; i < graph.n(); ++i)
        for (int j = 0; j < graph.n(); ++j) m(i, j) = a(row_old[i], col_old[j]);
    return {std::move(graph), std::move(m), std::move(relabel)};
}

// ---------------------------------------------------------------------------
// Witness lifting
// ---------------------------------------------------------------------------

/// Lifts an SP witness of the reduced instance back to the original (d, a),
/// by the closed-form extension of each reduction. The result is
/// self-validated; a failure is reported as nullopt (possible only for the
/// delete case, when the lifted left vector picks up vertex u while the
/// reduced right vector uses u's out-neighbor).
inline std::optional<SPWitness> lift_sp_witness(ReductionKind kind, const Digraph& d,
                                                const RationalMatrix& a, VertexId u,
                                                const std::vector<int>& relabel,
                                                const SPWitness& reduced_witness) {
    const int n = d.n();
    const VertexId v = d.out_degree(u) == 1 ? d.out_neighbors(u)[0] : -1;
    SPWitness w;
    w.x.assign(n, 0);
    w.y.assign(n, 0);

    // Pull the reduced vectors back to old labels. For Contract the merged
    // vertex carries v on both sides; for Semicontract it carries v on the
    // row side and u on the column side; Delete is a plain embedding.
    std::vector<Rational> x_old(n, 0), y_old(n, 0);
    for (VertexId x = 0; x < n; ++x) {
        if (relabel[x] < 0) continue;
        x_old[x] = reduced_witness.x[relabel[x]];
        y_old[x] = reduced_witness.y[relabel[x]];
    }
    switch (kind) {
    case ReductionKind::Contract:
        x_old[u] = 0;
        y_old[u] = 0;
        break;
    case ReductionKind::Delete:
        break;
    case ReductionKind::Semicontract:
        x_old[u] = 0; // row u was dropped; merged row belongs to v
        y_old[v] = 0; // column v was dropped; merged column belongs to u
        y_old[u] = reduced_witness.y[relabel[u]];
        break;
    }

    w.x = x_old;
    w.y = y_old;
    switch (kind) {
    case ReductionKind::Contract: {
        Rational dot = 0;
        for (VertexId i = 0; i < n; ++i)
            if (i != u) dot += x_old[i] * a(i, u);
        w.x[u] = -dot / a(u, u);
        w.y[u] = -(a(u, v) / a(u, u)) * y_old[v];
        break;
    }
    case ReductionKind::Delete: {
        Rational dot = 0;
        for (VertexId i = 0; i < n; ++i)
            if (i != u) dot += x_old[i] * a(i, u);
        w.x[u] = -dot / a(u, u);
        w.y[u] = 0;
        break;
    }
    case ReductionKind::Semicontract: {
        Rational dot = 0;
        for (VertexId i = 0; i < n; ++i)
            if (i != u) dot += x_old[i] * a(i, v);
        w.x[u] = -dot / a(u, v);
        w.y[v] = 0;
        break;
    }
    }
    if (!validate_sp_witness(d, a, w)) return std::nullopt;
    return w;
}

// ---------------------------------------------------------------------------
// The recursive engine
// ---------------------------------------------------------------------------

enum class MatrixVerdictKind { NullityAtMostOne, SPViolation };

struct ReductionTraceEntry {
    ReductionKind kind;
    bool transposed = false; // applied to (reverse(D), A^T)
    VertexId u = -1;         // labels of the instance at that level
    VertexId v = -1;
    int level_n = 0;
};

struct CheckMatrixResult {
    MatrixVerdictKind kind;
    int nullity_value = 0;
    std::optional<SPWitness> witness; // valid for the original instance
    std::vector<ReductionTraceEntry> trace;
    std::string terminal; // "nullity" | "zero-pair" | "direct"
};

namespace detail {

inline bool row_is_zero(const RationalMatrix& a, int i) {
    for (int j = 0; j < a.cols(); ++j)
        if (a(i, j) != 0) return false;
    return true;
}

inline bool col_is_zero(const RationalMatrix& a, int j) {
    for (int i = 0; i < a.rows(); ++i)
        if (a(i, j) != 0) return false;
    return true;
}

/// Reduction kind applicable at u on the out-degree side, if any.
inline std::optional<ReductionKind> applicable_reduction(const Digraph& d,
                                                         const RationalMatrix& a, VertexId u) {
    if (d.out_degree(u) > 1) return std::nullopt;
    const bool diag = a(u, u) != 0;
    const bool out = d.out_degree(u) == 1 && a(u, d.out_neighbors(u)[0]) != 0;
    if (diag && out) return ReductionKind::Contract;
    if (diag) return ReductionKind::Delete;
    if (out) return ReductionKind::Semicontract;
    return std::nullopt;
}

inline ReducedInstance apply_reduction(ReductionKind kind, const Digraph& d,
                                       const RationalMatrix& a, VertexId u) {
    switch (kind) {
    case ReductionKind::Contract: return reduce_contract(d, a, u);
    case ReductionKind::Delete: return reduce_delete(d, a, u);
    case ReductionKind::Semicontract: return reduce_semicontract(d, a, u);
    }
    throw internal_error("unknown reduction kind");
}

inline SPWitness transpose_witness(const SPWitness& w) { return {w.y, w.x}; }

/// One induction step of the dichotomy engine. Returns a verdict for
/// (d, a); any SPViolation witness is valid for (d, a) itself.
inline CheckMatrixResult engine(const Digraph& d, const RationalMatrix& a) {
    const int nul = nullity(a);
    if (nul <= 1) return {MatrixVerdictKind::NullityAtMostOne, nul, std::nullopt, {}, "nullity"};

    // Terminal case: a zero row u and a zero column v with no arc u -> v
    // give the unit-vector witness directly.
    {
        std::vector<VertexId> zero_rows, zero_cols;
        for (VertexId i = 0; i < d.n(); ++i) {
            if (row_is_zero(a, i)) zero_rows.push_back(i);
            if (col_is_zero(a, i)) zero_cols.push_back(i);
        }
        for (VertexId u : zero_rows)
            for (VertexId v : zero_cols) {
                if (u == v || d.has_arc(u, v)) continue;
                SPWitness w;
                w.x.assign(d.n(), 0);
                w.y.assign(d.n(), 0);
                w.x[u] = 1;
                w.y[v] = 1;
                if (!validate_sp_witness(d, a, w))
                    throw internal_error("zero-pair witness failed validation");
                return {MatrixVerdictKind::SPViolation, nul, std::move(w), {}, "zero-pair"};
            }
    }

    const auto recurse_through = [&](ReductionKind kind, const Digraph& hd,
                                     const RationalMatrix& ha, VertexId u,
                                     bool transposed) -> CheckMatrixResult {
        ReducedInstance reduced = apply_reduction(kind, hd, ha, u);
        if (nullity(reduced.matrix) != nul)
            throw internal_error("reduction failed to preserve nullity");
        CheckMatrixResult sub = engine(reduced.graph, reduced.matrix);
        if (sub.kind != MatrixVerdictKind::SPViolation)
            throw internal_error("nullity-preserving reduction lost the nullity certificate");
        std::optional<SPWitness> lifted =
            lift_sp_witness(kind, hd, ha, u, reduced.relabel, *sub.witness);
        if (!lifted) {
            // The closed-form lift can fail only in the delete case. The
            // reduced violation still forces one at this level; recover it
            // exactly.
            const SPReport repair = sp_check_report(ha, hd);
            if (repair.holds)
                throw internal_error("reduced instance violates SP but this level does not");
            lifted = repair.witness;
        }
        CheckMatrixResult result;
        result.kind = MatrixVerdictKind::SPViolation;
        result.nullity_value = nul;
        result.witness = transposed ? transpose_witness(*lifted) : *lifted;
        const VertexId v = hd.out_degree(u) == 1 ? hd.out_neighbors(u)[0] : -1;
        result.trace.push_back({kind, transposed, u, v, hd.n()});
        result.trace.insert(result.trace.end(), sub.trace.begin(), sub.trace.end());
        result.terminal = sub.terminal;
        return result;
    };

    // Out-degree side first.
    for (VertexId u = 0; u < d.n(); ++u)
        if (auto kind = applicable_reduction(d, a, u))
            return recurse_through(*kind, d, a, u, false);

    // Dually on (reverse(D), A^T): an in-degree-1 vertex of D becomes an
    // out-degree-1 vertex there.
    const Digraph rd = reverse(d);
    const RationalMatrix ra = transpose(a);
    for (VertexId v = 0; v < d.n(); ++v)
        if (auto kind = applicable_reduction(rd, ra, v))
            return recurse_through(*kind, rd, ra, v, true);

    // No case of the induction applies. Settle the instance exactly.
    const SPReport direct = sp_check_report(a, d);
    if (!direct.holds) {
        CheckMatrixResult result;
        result.kind = MatrixVerdictKind::SPViolation;
        result.nullity_value = nul;
        result.witness = direct.witness;
        result.terminal = "direct";
        return result;
    }
    throw internal_error(
        "reduction engine exhausted: nullity >= 2 with the support property intact");
}

} // namespace detail

/// The dichotomy engine: for a forbidden-minor-free digraph and A in Q0(D),
/// decides between nullity <= 1 and a verified Support Property violation by
/// the recursive Schur-complement reduction. The returned witness, if any,
/// re-validates against the original (D, A).
inline CheckMatrixResult check_matrix(const Digraph& d, const RationalMatrix& a,
                                      int minor_cap = kDefaultMinorCap) {
    if (!in_Q0(d, a)) throw input_error("matrix is not in Q0 of the digraph");
    const auto scan = forbidden_scan(d, minor_cap, MinorSearchMode::Interleaved, true);
    if (!scan.clean())
        throw input_error("digraph has forbidden minor " +
                          pattern_name(*scan.first_found()) +
                          "; the dichotomy does not apply");
    CheckMatrixResult result = detail::engine(d, a);
    if (result.kind == MatrixVerdictKind::SPViolation &&
        !validate_sp_witness(d, a, *result.witness))
        throw internal_error("final SP witness failed validation");
    return result;
}

} // namespace nustab
