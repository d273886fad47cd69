#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "nustab/asap.hpp"
#include "nustab/digraph.hpp"
#include "nustab/qpattern.hpp"
#include "nustab/rational_matrix.hpp"

namespace nustab {

namespace detail {

/// Random vectors y_1..y_t with entries in {-3..3}, linearly independent.
inline std::optional<std::vector<std::vector<Rational>>> sample_independent_vectors(
    int n, int t, std::mt19937& rng) {
    std::uniform_int_distribution<int> entry(-3, 3);
    for (int attempt = 0; attempt < 32; ++attempt) {
        RationalMatrix stacked(t, n);
        for (int i = 0; i < t; ++i)
            for (int j = 0; j < n; ++j) stacked(i, j) = entry(rng);
        if (rank(stacked) != t) continue;
        std::vector<std::vector<Rational>> ys(t, std::vector<Rational>(n));
        for (int i = 0; i < t; ++i)
            for (int j = 0; j < n; ++j) ys[i][j] = stacked(i, j);
        return ys;
    }
    return std::nullopt;
}

/// Solves one row of the pattern: entries supported on `support`, orthogonal
/// to every seeded vector. Samples a random integer combination of the
/// solution basis; when `forbid_zero_entries`, every support entry must end
/// up nonzero (retried a few times).
inline std::optional<std::vector<Rational>> sample_row(
    const std::vector<int>& support, const std::vector<std::vector<Rational>>& ys,
    bool forbid_zero_entries, std::mt19937& rng) {
    const int t = static_cast<int>(ys.size());
    const int k = static_cast<int>(support.size());
    RationalMatrix system(t, k);
    for (int i = 0; i < t; ++i)
        for (int j = 0; j < k; ++j) system(i, j) = ys[i][support[j]];
    const auto basis = right_nullspace(system);
    if (basis.empty()) return std::nullopt;
    std::uniform_int_distribution<int> coeff(-2, 2);
    for (int attempt = 0; attempt < 24; ++attempt) {
        std::vector<Rational> row(k, 0);
        bool all_zero = true;
        for (const auto& vec : basis) {
            const int c = coeff(rng);
            if (c == 0) continue;
            all_zero = false;
            for (int j = 0; j < k; ++j) row[j] += c * vec[j];
        }
        if (forbid_zero_entries) {
            bool ok = !all_zero;
            for (int j = 0; j < k && ok; ++j)
                if (row[j] == 0) ok = false;
            if (!ok) continue;
        }
        return row;
    }
    if (!forbid_zero_entries) return std::vector<Rational>(k, 0);
    return std::nullopt;
}

inline std::vector<int> row_support(const Digraph& d, VertexId u) {
    std::vector<int> support{u};
    for (VertexId w : d.out_neighbors(u)) support.push_back(w);
    return support;
}

} // namespace detail

/// Random matrix in Q0(D) whose right null space contains `target` seeded
/// independent vectors, hence nullity >= target. Zero rows are permitted.
inline std::optional<RationalMatrix> sample_Q0_with_nullity(const Digraph& d, int target,
                                                            std::mt19937& rng) {
    if (target > d.n()) return std::nullopt;
    const auto ys = detail::sample_independent_vectors(d.n(), target, rng);
    if (!ys) return std::nullopt;
    RationalMatrix a(d.n(), d.n());
    for (VertexId u = 0; u < d.n(); ++u) {
        const auto support = detail::row_support(d, u);
        const auto row = detail::sample_row(support, *ys, false, rng);
        if (!row) return std::nullopt;
        for (std::size_t j = 0; j < support.size(); ++j) a(u, support[j]) = (*row)[j];
    }
    return a;
}

/// A matrix certificate for a nullity lower bound: in Q(D), ASAP, nullity at
/// least the requested target.
struct NuCertificate {
    RationalMatrix matrix;
    int nullity_value = 0;
};

inline bool validate_nu_certificate(const Digraph& d, const NuCertificate& cert, int target) {
    return in_Q(d, cert.matrix) && asap_check(cert.matrix) &&
           nullity(cert.matrix) >= target && nullity(cert.matrix) == cert.nullity_value;
}

/// Randomized search for A in Q(D) with the ASAP and nullity >= target.
/// Seeds candidate null vectors with small integer entries, solves the
/// per-row pattern constraints, rejects rows that violate the forced-nonzero
/// positions, then filters by the exact ASAP check. A returned matrix is a
/// verified certificate; absence of a result proves nothing.
inline std::optional<NuCertificate> nu_lower_bound_search(const Digraph& d, int target,
                                                          int trials, std::uint32_t seed) {
    if (target <= 0) throw input_error("target must be positive");
    if (target > d.n()) return std::nullopt;
    std::mt19937 rng(seed);
    for (int trial = 0; trial < trials; ++trial) {
        const auto ys = detail::sample_independent_vectors(d.n(), target, rng);
        if (!ys) continue;
        RationalMatrix a(d.n(), d.n());
        bool ok = true;
        for (VertexId u = 0; u < d.n() && ok; ++u) {
            const auto support = detail::row_support(d, u);
            const auto row = detail::sample_row(support, *ys, true, rng);
            if (!row) {
                ok = false;
                break;
            }
            for (std::size_t j = 0; j < support.size(); ++j) a(u, support[j]) = (*row)[j];
        }
        if (!ok || !in_Q(d, a)) continue;
        if (!asap_check(a)) continue;
        const int nul = nullity(a);
        if (nul < target) continue;
        return NuCertificate{std::move(a), nul};
    }
    return std::nullopt;
}

} // namespace nustab
