#pragma once

#include <random>
#include <vector>

#include "nustab/digraph.hpp"
#include "nustab/errors.hpp"
#include "nustab/rational_matrix.hpp"

namespace nustab {

enum class EntryConstraint { ForcedNonzero, ForcedZero, Free };

/// Per-entry constraints of the matrix class Q(D): nonzero diagonal, nonzero
/// at arc positions, zero elsewhere off the diagonal.
inline std::vector<std::vector<EntryConstraint>> pattern_Q(const Digraph& d) {
    std::vector<std::vector<EntryConstraint>> p(
        d.n(), std::vector<EntryConstraint>(d.n(), EntryConstraint::ForcedZero));
    for (VertexId v = 0; v < d.n(); ++v) p[v][v] = EntryConstraint::ForcedNonzero;
    for (const auto& [u, w] : d.arcs()) p[u][w] = EntryConstraint::ForcedNonzero;
    return p;
}

/// Q0(D) relaxes Q(D): diagonal and arc positions are unconstrained.
inline std::vector<std::vector<EntryConstraint>> pattern_Q0(const Digraph& d) {
    std::vector<std::vector<EntryConstraint>> p(
        d.n(), std::vector<EntryConstraint>(d.n(), EntryConstraint::ForcedZero));
    for (VertexId v = 0; v < d.n(); ++v) p[v][v] = EntryConstraint::Free;
    for (const auto& [u, w] : d.arcs()) p[u][w] = EntryConstraint::Free;
    return p;
}

namespace detail {

inline bool matches_pattern(const Digraph& d, const RationalMatrix& b,
                            const std::vector<std::vector<EntryConstraint>>& p) {
    if (!b.is_square()) throw input_error("pattern membership needs a square matrix");
    if (b.rows() != d.n()) throw input_error("matrix dimension does not match digraph");
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) {
            if (p[i][j] == EntryConstraint::ForcedZero && b(i, j) != 0) return false;
            if (p[i][j] == EntryConstraint::ForcedNonzero && b(i, j) == 0) return false;
        }
    return true;
}

} // namespace detail

inline bool in_Q(const Digraph& d, const RationalMatrix& b) {
    return detail::matches_pattern(d, b, pattern_Q(d));
}

inline bool in_Q0(const Digraph& d, const RationalMatrix& b) {
    return detail::matches_pattern(d, b, pattern_Q0(d));
}

// ---------------------------------------------------------------------------
// Random samplers (shared by property tests and the certificate search)
// ---------------------------------------------------------------------------

/// Nonzero entries are uniform on {+-1, +-2, +-3}; free entries are zero
/// with probability 1/2. Small magnitudes keep exact arithmetic fast while
/// generic-rank events stay overwhelmingly likely.
inline Rational sample_nonzero(std::mt19937& rng) {
    std::uniform_int_distribution<int> mag(1, 3);
    std::uniform_int_distribution<int> sign(0, 1);
    return Rational((sign(rng) ? 1 : -1) * mag(rng));
}

inline Rational sample_free(std::mt19937& rng) {
    std::uniform_int_distribution<int> coin(0, 1);
    return coin(rng) ? Rational(0) : sample_nonzero(rng);
}

inline RationalMatrix sample_Q(const Digraph& d, std::mt19937& rng) {
    RationalMatrix b(d.n(), d.n());
    const auto p = pattern_Q(d);
    for (int i = 0; i < d.n(); ++i)
        for (int j = 0; j < d.n(); ++j)
            if (p[i][j] == EntryConstraint::ForcedNonzero) b(i, j) = sample_nonzero(rng);
    return b;
}

inline RationalMatrix sample_Q0(const Digraph& d, std::mt19937& rng) {
    RationalMatrix b(d.n(), d.n());
    const auto p = pattern_Q0(d);
    for (int i = 0; i < d.n(); ++i)
        for (int j = 0; j < d.n(); ++j)
            if (p[i][j] == EntryConstraint::Free) b(i, j) = sample_free(rng);
    return b;
}

} // namespace nustab
