#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "nustab/digraph.hpp"
#include "nustab/errors.hpp"

namespace nustab {

/// Directed elimination of v: v is removed and a shortcut arc (u, w) is
/// added for every in-neighbor u and out-neighbor w of v with u != w.
inline RelabeledDigraph eliminate(const Digraph& d, VertexId v) {
    d.check_vertex(v);
    std::vector<char> present(d.n() * d.n(), 0);
    for (const auto& [a, b] : d.arcs()) present[a * d.n() + b] = 1;
    for (VertexId u : d.in_neighbors(v))
        for (VertexId w : d.out_neighbors(v))
            if (u != w) present[u * d.n() + w] = 1;
    std::vector<int> map(d.n());
    for (VertexId x = 0; x < d.n(); ++x) map[x] = x < v ? x : x == v ? -1 : x - 1;
    std::vector<Arc> arcs;
    for (VertexId a = 0; a < d.n(); ++a)
        for (VertexId b = 0; b < d.n(); ++b)
            if (present[a * d.n() + b] && a != v && b != v) arcs.emplace_back(map[a], map[b]);
    return {Digraph(d.n() - 1, std::move(arcs)), std::move(map)};
}

/// A directed elimination ordering: a permutation of V(D).
using EliminationOrdering = std::vector<VertexId>;

inline void check_permutation(const Digraph& d, const EliminationOrdering& ord) {
    if (static_cast<int>(ord.size()) != d.n()) throw input_error("ordering has wrong length");
    std::vector<char> hit(d.n(), 0);
    for (VertexId v : ord) {
        if (v < 0 || v >= d.n() || hit[v]) throw input_error("ordering is not a permutation");
        hit[v] = 1;
    }
}

/// Width of an ordering: the maximum outdegree of the eliminated vertex at
/// its elimination time.
inline int ordering_width(const Digraph& d, const EliminationOrdering& ord) {
    check_permutation(d, ord);
    Digraph g = d;
    std::vector<int> label(d.n());
    std::iota(label.begin(), label.end(), 0);
    int width = 0;
    for (VertexId v : ord) {
        const VertexId cur = label[v];
        width = std::max(width, g.out_degree(cur));
        auto [next, map] = eliminate(g, cur);
        g = std::move(next);
        for (VertexId x = 0; x < d.n(); ++x)
            if (label[x] >= 0) label[x] = map[label[x]];
    }
    return width;
}

/// Kelly-width computation result. `method` is "exact" (subset DP) or
/// "greedy"; the witness ordering re-validates to width `width` - 1.
struct WidthReport {
    int width = 0;
    EliminationOrdering ordering;
    std::string method;
};

constexpr int kKellyExactCap = 20;

namespace detail {

/// Out-neighborhood of v after eliminating the set S, as a bitmask:
/// vertices outside S u {v} reachable from v through S-internal paths.
inline std::uint32_t eliminated_out_mask(const std::vector<std::uint32_t>& out, VertexId v,
                                         std::uint32_t s) {
    std::uint32_t reached = out[v];
    std::uint32_t frontier = reached & s;
    while (frontier != 0) {
        std::uint32_t next = 0;
        for (std::uint32_t f = frontier; f != 0; f &= f - 1) {
            const int u = std::countr_zero(f);
            next |= out[u];
        }
        frontier = (next & ~reached) & s;
        reached |= next;
    }
    return reached & ~s & ~(std::uint32_t{1} << v);
}

inline std::vector<std::uint32_t> out_masks(const Digraph& d) {
    std::vector<std::uint32_t> out(d.n(), 0);
    for (const auto& [u, w] : d.arcs()) out[u] |= std::uint32_t{1} << w;
    return out;
}

} // namespace detail

/// Exact Kelly-width: 1 + the minimum directed elimination ordering width,
/// by dynamic programming over subsets of eliminated vertices. The residual
/// digraph after eliminating a set is order-independent, which the oracle
/// tests cross-check against full permutation enumeration.
inline WidthReport kelly_width_exact(const Digraph& d, int cap = kKellyExactCap) {
    if (cap > kKellyExactCap) cap = kKellyExactCap;
    if (d.n() > cap)
        throw capacity_error("kelly-width DP limited to " + std::to_string(cap) + " vertices");
    const int n = d.n();
    if (n == 0) return {1, {}, "exact"};
    const auto out = detail::out_masks(d);
    const std::uint32_t full = n == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1;
    std::vector<std::uint8_t> dp(std::size_t{1} << n, 0xff);
    std::vector<std::int8_t> choice(std::size_t{1} << n, -1);
    dp[0] = 0;
    for (std::uint32_t s = 0; s <= full; ++s) {
        if (dp[s] == 0xff) continue;
        if (s == full) break;
        for (int v = 0; v < n; ++v) {
            if (s & (std::uint32_t{1} << v)) continue;
            const int deg = std::popcount(detail::eliminated_out_mask(out, v, s));
            const std::uint8_t cost = std::max<std::uint8_t>(dp[s], static_cast<std::uint8_t>(deg));
            const std::uint32_t t = s | (std::uint32_t{1} << v);
            if (cost < dp[t]) {
                dp[t] = cost;
                choice[t] = static_cast<std::int8_t>(v);
            }
        }
    }
    WidthReport report;
    report.method = "exact";
    report.width = dp[full] + 1;
    std::uint32_t s = full;
    while (s != 0) {
        const VertexId v = choice[s];
        report.ordering.push_back(v);
        s &= ~(std::uint32_t{1} << v);
    }
    std::reverse(report.ordering.begin(), report.ordering.end());
    return report;
}

/// Greedy width-1 recognizer: repeatedly eliminate any vertex with current
/// outdegree <= 1, lowest index first. Sound (a returned ordering always has
/// width <= 1) but not trusted for completeness; callers fall back to the
/// exact DP.
inline std::optional<EliminationOrdering> recognize_width1(const Digraph& d) {
    Digraph g = d;
    std::vector<int> label(d.n());
    std::iota(label.begin(), label.end(), 0);
    std::vector<VertexId> current(d.n());
    std::iota(current.begin(), current.end(), 0);
    EliminationOrdering ord;
    while (g.n() > 0) {
        int pick = -1;
        for (VertexId orig = 0; orig < d.n(); ++orig) {
            if (label[orig] < 0) continue;
            if (g.out_degree(label[orig]) <= 1) {
                pick = orig;
                break;
            }
        }
        if (pick < 0) return std::nullopt;
        ord.push_back(pick);
        auto [next, map] = eliminate(g, label[pick]);
        g = std::move(next);
        for (VertexId x = 0; x < d.n(); ++x)
            if (label[x] >= 0) label[x] = map[label[x]];
    }
    return ord;
}

// ---------------------------------------------------------------------------
// k-DAGs
// ---------------------------------------------------------------------------

/// Builds a k-DAG from the complete digraph on k vertices by the recursive
/// rule: each script entry adds one vertex v with the given out-neighborhood
/// X (|X| <= k), plus a back-arc u -> v for every existing u with arcs to all
/// of X \ {u} (vacuously all u when X is empty).
inline Digraph build_kdag(int k, const std::vector<std::vector<VertexId>>& script) {
    if (k < 0) throw input_error("k must be nonnegative");
    Digraph g = complete_digraph(k);
    for (const auto& x_set : script) {
        if (static_cast<int>(x_set.size()) > k)
            throw input_error("out-neighborhood larger than k");
        const int v = g.n();
        std::vector<Arc> arcs = g.arcs();
        std::vector<char> in_x(g.n(), 0);
        for (VertexId x : x_set) {
            if (x < 0 || x >= g.n()) throw input_error("script vertex out of range");
            if (in_x[x]) throw input_error("duplicate vertex in out-neighborhood");
            in_x[x] = 1;
            arcs.emplace_back(v, x);
        }
        for (VertexId u = 0; u < g.n(); ++u) {
            bool dominates = true;
            for (VertexId x : x_set)
                if (x != u && !g.has_arc(u, x)) {
                    dominates = false;
                    break;
                }
            if (dominates) arcs.emplace_back(u, v);
        }
        g = Digraph(v + 1, std::move(arcs));
    }
    return g;
}

/// Partial k-DAG test through the elimination-ordering equivalence.
inline bool is_partial_kdag(const Digraph& d, int k, int cap = kKellyExactCap) {
    return kelly_width_exact(d, cap).width <= k + 1;
}

// ---------------------------------------------------------------------------
// Kelly-decompositions (validation only)
// ---------------------------------------------------------------------------

/// X guards W: the sets are disjoint and every arc leaving W lands in W u X.
inline bool guards(const Digraph& d, const std::vector<VertexId>& x_set,
                   const std::vector<VertexId>& w_set) {
    std::vector<char> in_x(d.n(), 0), in_w(d.n(), 0);
    for (VertexId v : x_set) {
        d.check_vertex(v);
        in_x[v] = 1;
    }
    for (VertexId v : w_set) {
        d.check_vertex(v);
        in_w[v] = 1;
    }
    for (VertexId v = 0; v < d.n(); ++v)
        if (in_x[v] && in_w[v]) return false;
    for (const auto& [u, w] : d.arcs())
        if (in_w[u] && !in_w[w] && !in_x[w]) return false;
    return true;
}

/// A Kelly-decomposition candidate: a DAG T with one W-set and one X-set per
/// node, plus explicit child and root enumerations.
struct KellyDecomposition {
    Digraph tree; // must be acyclic
    std::vector<std::vector<VertexId>> w_sets;
    std::vector<std::vector<VertexId>> x_sets;
    std::vector<std::vector<int>> child_order; // per node, its children in order
    std::vector<int> root_order;
};

struct DecompositionVerdict {
    bool valid = true;
    int width = 0;
    std::vector<std::string> violations;
};

/// Validates the decomposition against D. The printed root-enumeration
/// condition (each root's W covered by the W-sets below earlier roots) is
/// only enforced when `check_root_condition` is set; it rejects most
/// natural decompositions, including single-node ones.
inline DecompositionVerdict validate_kelly_decomposition(const Digraph& d,
                                                         const KellyDecomposition& kd,
                                                         bool check_root_condition = false) {
    DecompositionVerdict verdict;
    const int t = kd.tree.n();
    const auto fail = [&](const std::string& why) {
        verdict.valid = false;
        verdict.violations.push_back(why);
    };
    if (static_cast<int>(kd.w_sets.size()) != t || static_cast<int>(kd.x_sets.size()) != t ||
        static_cast<int>(kd.child_order.size()) != t)
        throw input_error("decomposition families must be indexed by tree nodes");
    if (!is_acyclic(kd.tree)) fail("tree: not a DAG");

    // W partitions V(D).
    std::vector<int> owner(d.n(), -1);
    bool partition_ok = true;
    for (int i = 0; i < t; ++i)
        for (VertexId v : kd.w_sets[i]) {
            if (v < 0 || v >= d.n()) throw input_error("W vertex out of range");
            if (owner[v] >= 0) partition_ok = false;
            owner[v] = i;
        }
    for (VertexId v = 0; v < d.n(); ++v)
        if (owner[v] < 0) partition_ok = false;
    if (!partition_ok) fail("partition");

    // Reachability closure of T, for the W-below-a-node unions.
    std::vector<std::vector<char>> reach(t, std::vector<char>(t, 0));
    for (int i = 0; i < t; ++i) {
        std::vector<int> stack{i};
        reach[i][i] = 1;
        while (!stack.empty()) {
            const int a = stack.back();
            stack.pop_back();
            for (VertexId b : kd.tree.out_neighbors(a))
                if (!reach[i][b]) {
                    reach[i][b] = 1;
                    stack.push_back(b);
                }
        }
    }
    const auto w_below = [&](int i) {
        std::vector<VertexId> acc;
        for (int j = 0; j < t; ++j)
            if (reach[i][j]) acc.insert(acc.end(), kd.w_sets[j].begin(), kd.w_sets[j].end());
        return acc;
    };

    for (int i = 0; i < t; ++i)
        if (!guards(d, kd.x_sets[i], w_below(i)))
            fail("guard: node " + std::to_string(i));

    // Child enumeration: X of each child is covered by W_i u X_i and the
    // W-sets below earlier siblings.
    for (int i = 0; i < t; ++i) {
        std::vector<char> is_child(t, 0);
        for (VertexId c : kd.tree.out_neighbors(i)) is_child[c] = 1;
        std::vector<char> listed(t, 0);
        for (int c : kd.child_order[i]) {
            if (c < 0 || c >= t || !is_child[c] || listed[c])
                throw input_error("child enumeration of node " + std::to_string(i) +
                                  " is not a permutation of its children");
            listed[c] = 1;
        }
        for (VertexId c : kd.tree.out_neighbors(i))
            if (!listed[c])
                throw input_error("child enumeration of node " + std::to_string(i) +
                                  " is not a permutation of its children");
        std::vector<char> allowed(d.n(), 0);
        for (VertexId v : kd.w_sets[i]) allowed[v] = 1;
        for (VertexId v : kd.x_sets[i]) allowed[v] = 1;
        for (int c : kd.child_order[i]) {
            for (VertexId v : kd.x_sets[c])
                if (!allowed[v]) {
                    fail("child-cover: node " + std::to_string(c));
                    break;
                }
            for (VertexId v : w_below(c)) allowed[v] = 1;
        }
    }

    // Root enumeration covers exactly the roots.
    {
        std::vector<char> is_root(t, 1), listed(t, 0);
        for (const auto& [a, b] : kd.tree.arcs()) is_root[b] = 0;
        for (int r : kd.root_order) {
            if (r < 0 || r >= t || !is_root[r] || listed[r])
                throw input_error("root enumeration is not a permutation of the roots");
            listed[r] = 1;
        }
        for (int i = 0; i < t; ++i)
            if (is_root[i] && !listed[i])
                throw input_error("root enumeration is not a permutation of the roots");
        if (check_root_condition) {
            std::vector<char> covered(d.n(), 0);
            for (int r : kd.root_order) {
                for (VertexId v : kd.w_sets[r])
                    if (!covered[v]) {
                        fail("root-cover: node " + std::to_string(r));
                        break;
                    }
                for (VertexId v : w_below(r)) covered[v] = 1;
            }
        }
    }

    int width = 0;
    for (int i = 0; i < t; ++i) {
        std::vector<char> members(d.n(), 0);
        for (VertexId v : kd.w_sets[i]) members[v] = 1;
        for (VertexId v : kd.x_sets[i]) members[v] = 1;
        width = std::max(width, static_cast<int>(std::count(members.begin(), members.end(), 1)));
    }
    verdict.width = width;
    return verdict;
}

} // namespace nustab
