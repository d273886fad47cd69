#pragma once

#include <utility>
#include <vector>

#include "nustab/rational_matrix.hpp"

namespace nustab {

/// Result of the Asymmetric Strong Arnold Property check. When the property
/// fails, `violation_basis` spans the nonzero solution space.
struct AsapReport {
    bool holds = false;
    std::vector<RationalMatrix> violation_basis;
    int violation_dimension() const { return static_cast<int>(violation_basis.size()); }
};

/// B has the ASAP when X o B = 0, X^T B = 0 and B X^T = 0 force X = 0.
/// The Hadamard condition confines X to the zero positions of B; the two
/// product conditions are linear, so the check is one exact null-space
/// computation. Depends only on B, not on any digraph.
inline AsapReport asap_check_report(const RationalMatrix& b) {
    if (!b.is_square()) throw input_error("ASAP check needs a square matrix");
    const int n = b.rows();
    std::vector<std::pair<int, int>> vars; // positions where X may be nonzero
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (b(i, j) == 0) vars.emplace_back(i, j);

    // Constraints: (X^T B)_{jk} = sum_i X_{ij} B_{ik} = 0 and
    //              (B X^T)_{ik} = sum_j B_{ij} X_{kj} = 0.
    const int nv = static_cast<int>(vars.size());
    RationalMatrix system(2 * n * n, nv);
    for (int v = 0; v < nv; ++v) {
        const auto [xi, xj] = vars[v];
        for (int k = 0; k < n; ++k) {
            if (b(xi, k) != 0) system(xj * n + k, v) += b(xi, k);
            if (b(k, xj) != 0) system(n * n + k * n + xi, v) += b(k, xj);
        }
    }
    AsapReport report;
    const auto basis = right_nullspace(system);
    report.holds = basis.empty();
    for (const auto& vec : basis) {
        RationalMatrix x(n, n);
        for (int v = 0; v < nv; ++v) x(vars[v].first, vars[v].second) = vec[v];
        report.violation_basis.push_back(std::move(x));
    }
    return report;
}

inline bool asap_check(const RationalMatrix& b) { return asap_check_report(b).holds; }

} // namespace nustab
