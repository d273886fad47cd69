#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "nustab/digraph.hpp"
#include "nustab/errors.hpp"

namespace nustab {

/// Canonical form of a digraph on at most 8 vertices: the adjacency matrix
/// of the canonically relabeled graph, packed row-major into 64 bits.
/// Isomorphic digraphs produce equal codes, non-isomorphic ones distinct
/// codes.
struct CanonicalCode {
    std::uint8_t n = 0;
    std::uint64_t bits = 0;

    friend bool operator==(const CanonicalCode& a, const CanonicalCode& b) {
        return a.n == b.n && a.bits == b.bits;
    }
    friend bool operator<(const CanonicalCode& a, const CanonicalCode& b) {
        return std::tie(a.n, a.bits) < std::tie(b.n, b.bits);
    }
};

struct CanonicalCodeHash {
    std::size_t operator()(const CanonicalCode& c) const {
        return std::hash<std::uint64_t>()(c.bits * 1099511628211ULL + c.n);
    }
};

namespace detail {

constexpr int kIsoCap = 8;

/// Directed color refinement. Starts from (outdeg, indeg) and repeatedly
/// splits color classes by the multisets of out- and in-neighbor colors.
/// The returned colors are label-independent, so any isomorphism maps
/// color classes onto color classes.
inline std::vector<int> refined_colors(const Digraph& d) {
    const int n = d.n();
    std::vector<int> color(n);
    {
        std::map<std::pair<int, int>, int> ids;
        for (VertexId v = 0; v < n; ++v)
            ids.emplace(std::pair{d.out_degree(v), d.in_degree(v)}, 0);
        int next = 0;
        for (auto& [key, id] : ids) id = next++;
        for (VertexId v = 0; v < n; ++v)
            color[v] = ids[{d.out_degree(v), d.in_degree(v)}];
    }
    for (int round = 0; round < n; ++round) {
        using Sig = std::tuple<int, std::vector<int>, std::vector<int>>;
        std::map<Sig, int> ids;
        std::vector<Sig> sig(n);
        for (VertexId v = 0; v < n; ++v) {
            std::vector<int> outc, inc;
            for (VertexId w : d.out_neighbors(v)) outc.push_back(color[w]);
            for (VertexId w : d.in_neighbors(v)) inc.push_back(color[w]);
            std::sort(outc.begin(), outc.end());
            std::sort(inc.begin(), inc.end());
            sig[v] = {color[v], std::move(outc), std::move(inc)};
            ids.emplace(sig[v], 0);
        }
        int next = 0;
        for (auto& [key, id] : ids) id = next++;
        std::vector<int> fresh(n);
        for (VertexId v = 0; v < n; ++v) fresh[v] = ids[sig[v]];
        if (fresh == color) break;
        color = std::move(fresh);
    }
    return color;
}

inline std::uint64_t pack_adjacency(const Digraph& d, const std::vector<VertexId>& perm) {
    // perm[i] = old vertex placed at position i.
    const int n = d.n();
    int pos[kIsoCap];
    for (int i = 0; i < n; ++i) pos[perm[i]] = i;
    std::uint64_t bits = 0;
    for (const auto& [u, w] : d.arcs()) bits |= std::uint64_t{1} << (pos[u] * n + pos[w]);
    return bits;
}

} // namespace detail

/// Minimum adjacency encoding over all vertex orders that respect the
/// refined color classes (classes themselves in canonical color order).
inline CanonicalCode canonical_code(const Digraph& d) {
    const int n = d.n();
    if (n > detail::kIsoCap) throw capacity_error("canonical form limited to 8 vertices");
    if (n == 0) return {0, 0};
    const std::vector<int> color = detail::refined_colors(d);
    const int classes = *std::max_element(color.begin(), color.end()) + 1;
    std::vector<std::vector<VertexId>> cells(classes);
    for (VertexId v = 0; v < n; ++v) cells[color[v]].push_back(v);

    std::uint64_t best = ~std::uint64_t{0};
    std::vector<VertexId> perm;
    perm.reserve(n);
    // Odometer over the within-cell permutations.
    for (auto& cell : cells) std::sort(cell.begin(), cell.end());
    while (true) {
        perm.clear();
        for (const auto& cell : cells) perm.insert(perm.end(), cell.begin(), cell.end());
        best = std::min(best, detail::pack_adjacency(d, perm));
        int k = classes - 1;
        while (k >= 0 && !std::next_permutation(cells[k].begin(), cells[k].end())) --k;
        if (k < 0) break;
    }
    return {static_cast<std::uint8_t>(n), best};
}

namespace detail {

inline bool extend_isomorphism(const Digraph& a, const Digraph& b, const std::vector<int>& ca,
                               const std::vector<int>& cb, std::vector<VertexId>& map,
                               std::vector<char>& used, VertexId next) {
    if (next == a.n()) return true;
    for (VertexId cand = 0; cand < b.n(); ++cand) {
        if (used[cand] || ca[next] != cb[cand]) continue;
        bool ok = true;
        for (VertexId prev = 0; prev < next && ok; ++prev) {
            if (a.has_arc(next, prev) != b.has_arc(cand, map[prev])) ok = false;
            if (a.has_arc(prev, next) != b.has_arc(map[prev], cand)) ok = false;
        }
        if (!ok) continue;
        map[next] = cand;
        used[cand] = 1;
        if (extend_isomorphism(a, b, ca, cb, map, used, next + 1)) return true;
        used[cand] = 0;
    }
    return false;
}

} // namespace detail

/// Explicit isomorphism a -> b, if one exists. Backtracking with color
/// pruning; intended for graphs within the canonical-form cap.
inline std::optional<std::vector<VertexId>> find_isomorphism(const Digraph& a, const Digraph& b) {
    if (a.n() != b.n() || a.arc_count() != b.arc_count()) return std::nullopt;
    if (a.n() > detail::kIsoCap) throw capacity_error("isomorphism search limited to 8 vertices");
    const auto ca = detail::refined_colors(a);
    const auto cb = detail::refined_colors(b);
    {
        auto sa = ca, sb = cb;
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
        if (sa != sb) return std::nullopt;
    }
    std::vector<VertexId> map(a.n(), -1);
    std::vector<char> used(b.n(), 0);
    if (detail::extend_isomorphism(a, b, ca, cb, map, used, 0)) return map;
    return std::nullopt;
}

inline bool is_isomorphic(const Digraph& a, const Digraph& b) {
    return find_isomorphism(a, b).has_value();
}

/// Verifies that `map` is a bijection a -> b preserving arcs both ways.
inline bool is_isomorphism_map(const Digraph& a, const Digraph& b,
                               const std::vector<VertexId>& map) {
    if (a.n() != b.n() || static_cast<int>(map.size()) != a.n()) return false;
    if (a.arc_count() != b.arc_count()) return false;
    std::vector<char> used(b.n(), 0);
    for (VertexId v : map) {
        if (v < 0 || v >= b.n() || used[v]) return false;
        used[v] = 1;
    }
    for (const auto& [u, w] : a.arcs())
        if (!b.has_arc(map[u], map[w])) return false;
    return true;
}

} // namespace nustab
