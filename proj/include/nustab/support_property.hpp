#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nustab/digraph.hpp"
#include "nustab/errors.hpp"
#include "nustab/rational_matrix.hpp"

namespace nustab {

constexpr int kSupportCheckCap = 14;

/// Counterexample to the Support Property: a nonzero left-null vector and a
/// nonzero right-null vector whose supports are disjoint and do not touch
/// (no arc from supp(x) to supp(y)).
struct SPWitness {
    std::vector<Rational> x; // left null: x^T B = 0
    std::vector<Rational> y; // right null: B y = 0

    std::vector<VertexId> support_x() const {
        std::vector<VertexId> s;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] != 0) s.push_back(static_cast<VertexId>(i));
        return s;
    }
    std::vector<VertexId> support_y() const {
        std::vector<VertexId> s;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (y[i] != 0) s.push_back(static_cast<VertexId>(i));
        return s;
    }
};

/// Full witness validation against the original instance.
inline bool validate_sp_witness(const Digraph& d, const RationalMatrix& b, const SPWitness& w) {
    if (static_cast<int>(w.x.size()) != b.rows() || static_cast<int>(w.y.size()) != b.rows())
        return false;
    if (is_zero_vector(w.x) || is_zero_vector(w.y)) return false;
    if (!is_zero_vector(apply_left(w.x, b))) return false;
    if (!is_zero_vector(apply(b, w.y))) return false;
    const auto sx = w.support_x(), sy = w.support_y();
    std::vector<char> in_sx(d.n(), 0);
    for (VertexId v : sx) in_sx[v] = 1;
    for (VertexId v : sy)
        if (in_sx[v]) return false;
    return !touches(d, sx, sy);
}

struct SPReport {
    bool holds = true;
    std::optional<SPWitness> witness;
};

/// Exact Support Property decision. A violation exists iff for some vertex
/// set S there is a nonzero right-null vector supported inside S and a
/// nonzero left-null vector supported inside the maximal set R that S does
/// not touch from (R = everything outside S and its in-neighborhood). All
/// 2^n candidate sets S are enumerated; capacity capped.
inline SPReport sp_check_report(const RationalMatrix& b, const Digraph& d) {
    if (!b.is_square() || b.rows() != d.n())
        throw input_error("SP check needs matching matrix and digraph");
    const int n = d.n();
    if (n > kSupportCheckCap) throw capacity_error("SP check limited to 14 vertices");
    if (nullity(b) == 0 || nullity(transpose(b)) == 0) return {true, std::nullopt};

    std::vector<std::uint32_t> in_mask(n, 0);
    for (const auto& [u, w] : d.arcs()) in_mask[w] |= std::uint32_t{1} << u;

    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;

    for (std::uint32_t s = 1; s < (std::uint32_t{1} << n); ++s) {
        // R = V \ (S u N^-(S)): no overlap and no arc from R into S.
        std::uint32_t blocked = s;
        for (int v = 0; v < n; ++v)
            if (s & (std::uint32_t{1} << v)) blocked |= in_mask[v];
        const std::uint32_t r = ~blocked & ((std::uint32_t{1} << n) - 1);
        if (r == 0) continue;
        std::vector<int> s_idx, r_idx;
        for (int v = 0; v < n; ++v) {
            if (s & (std::uint32_t{1} << v)) s_idx.push_back(v);
            if (r & (std::uint32_t{1} << v)) r_idx.push_back(v);
        }
        // Right-null vector supported in S: null space of the column block.
        const auto y_basis = right_nullspace(submatrix(b, all, s_idx));
        if (y_basis.empty()) continue;
        // Left-null vector supported in R: left null of the row block.
        const auto x_basis = left_nullspace(submatrix(b, r_idx, all));
        if (x_basis.empty()) continue;

        SPWitness w;
        w.x.assign(n, 0);
        w.y.assign(n, 0);
        for (std::size_t i = 0; i < r_idx.size(); ++i) w.x[r_idx[i]] = x_basis[0][i];
        for (std::size_t i = 0; i < s_idx.size(); ++i) w.y[s_idx[i]] = y_basis[0][i];
        if (!validate_sp_witness(d, b, w))
            throw internal_error("SP witness failed self-validation");
        return {false, std::move(w)};
    }
    return {true, std::nullopt};
}

inline bool sp_check(const RationalMatrix& b, const Digraph& d) {
    return sp_check_report(b, d).holds;
}

} // namespace nustab
