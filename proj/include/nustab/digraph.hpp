#pragma once

#include <algorithm>
#include <cassert>
#include <optional>
#include <utility>
#include <vector>

#include "nustab/errors.hpp"

namespace nustab {

/// Dense 0-based vertex index, valid in [0, n) of its owning digraph.
using VertexId = int;

/// Ordered pair of vertices; (tail, head).
using Arc = std::pair<VertexId, VertexId>;

/// Simple directed graph: no self-arcs, at most one arc per ordered pair.
/// Arc storage is canonical (sorted), so structural equality compares equal
/// for equal digraphs. Immutable after construction; all edits are free
/// functions returning new values.
class Digraph {
public:
    Digraph() = default;

    explicit Digraph(int n, std::vector<Arc> arcs = {}) : n_(n), arcs_(std::move(arcs)) {
        if (n < 0) throw input_error("negative vertex count");
        std::sort(arcs_.begin(), arcs_.end());
        for (std::size_t i = 0; i < arcs_.size(); ++i) {
            const auto [u, w] = arcs_[i];
            if (u < 0 || u >= n_ || w < 0 || w >= n_)
                throw input_error("arc endpoint out of range");
            if (u == w) throw input_error("self-arc not allowed");
            if (i > 0 && arcs_[i] == arcs_[i - 1]) throw input_error("duplicate arc");
        }
        out_.assign(n_, {});
        in_.assign(n_, {});
        for (const auto& [u, w] : arcs_) {
            out_[u].push_back(w);
            in_[w].push_back(u);
        }
    }

    int n() const { return n_; }
    int arc_count() const { return static_cast<int>(arcs_.size()); }
    const std::vector<Arc>& arcs() const { return arcs_; }

    bool has_arc(VertexId u, VertexId w) const {
        check_vertex(u);
        check_vertex(w);
        return std::binary_search(arcs_.begin(), arcs_.end(), Arc{u, w});
    }

    const std::vector<VertexId>& out_neighbors(VertexId v) const {
        check_vertex(v);
        return out_[v];
    }
    const std::vector<VertexId>& in_neighbors(VertexId v) const {
        check_vertex(v);
        return in_[v];
    }

    int out_degree(VertexId v) const { return static_cast<int>(out_neighbors(v).size()); }
    int in_degree(VertexId v) const { return static_cast<int>(in_neighbors(v).size()); }

    /// Arc in either direction.
    bool adjacent(VertexId u, VertexId w) const { return has_arc(u, w) || has_arc(w, u); }

    friend bool operator==(const Digraph& a, const Digraph& b) {
        return a.n_ == b.n_ && a.arcs_ == b.arcs_;
    }
    friend bool operator!=(const Digraph& a, const Digraph& b) { return !(a == b); }

    void check_vertex(VertexId v) const {
        if (v < 0 || v >= n_) throw input_error("vertex out of range");
    }

private:
    int n_ = 0;
    std::vector<Arc> arcs_;
    std::vector<std::vector<VertexId>> out_, in_;
};

/// (outdegree, indegree) of v.
inline std::pair<int, int> degrees(const Digraph& d, VertexId v) {
    return {d.out_degree(v), d.in_degree(v)};
}

/// Complete digraph: both arcs between every pair of distinct vertices.
inline Digraph complete_digraph(int n) {
    std::vector<Arc> arcs;
    for (VertexId i = 0; i < n; ++i)
        for (VertexId j = 0; j < n; ++j)
            if (i != j) arcs.emplace_back(i, j);
    return Digraph(n, std::move(arcs));
}

/// Digraph with every arc reversed. Involution.
inline Digraph reverse(const Digraph& d) {
    std::vector<Arc> arcs;
    arcs.reserve(d.arcs().size());
    for (const auto& [u, w] : d.arcs()) arcs.emplace_back(w, u);
    return Digraph(d.n(), std::move(arcs));
}

/// True iff no directed cycle; on success also yields an order in which
/// every arc goes forward (Kahn's algorithm, smallest vertex first).
inline std::optional<std::vector<VertexId>> topological_order(const Digraph& d) {
    std::vector<int> indeg(d.n());
    for (VertexId v = 0; v < d.n(); ++v) indeg[v] = d.in_degree(v);
    std::vector<VertexId> ready, order;
    for (VertexId v = d.n() - 1; v >= 0; --v)
        if (indeg[v] == 0) ready.push_back(v);
    while (!ready.empty()) {
        // Pop the smallest ready vertex to keep the order canonical.
        std::sort(ready.rbegin(), ready.rend());
        const VertexId v = ready.back();
        ready.pop_back();
        order.push_back(v);
        for (VertexId w : d.out_neighbors(v))
            if (--indeg[w] == 0) ready.push_back(w);
    }
    if (static_cast<int>(order.size()) != d.n()) return std::nullopt;
    return order;
}

inline bool is_acyclic(const Digraph& d) { return topological_order(d).has_value(); }

/// Ordered touch test: R and S intersect, or some arc runs from R to S.
inline bool touches(const Digraph& d, const std::vector<VertexId>& r,
                    const std::vector<VertexId>& s) {
    std::vector<char> in_r(d.n(), 0), in_s(d.n(), 0);
    for (VertexId v : r) {
        d.check_vertex(v);
        in_r[v] = 1;
    }
    for (VertexId v : s) {
        d.check_vertex(v);
        in_s[v] = 1;
    }
    for (VertexId v = 0; v < d.n(); ++v)
        if (in_r[v] && in_s[v]) return true;
    for (const auto& [u, w] : d.arcs())
        if (in_r[u] && in_s[w]) return true;
    return false;
}

/// A digraph edit together with the dense re-indexing it induced.
/// old_to_new[v] is the new index of old vertex v, or -1 if v was removed
/// (for contractions, both merged endpoints map to the merged vertex).
struct RelabeledDigraph {
    Digraph graph;
    std::vector<int> old_to_new;
};

/// Deletes v; remaining vertices are packed densely preserving order.
inline RelabeledDigraph delete_vertex(const Digraph& d, VertexId v) {
    d.check_vertex(v);
    std::vector<int> map(d.n());
    for (VertexId x = 0; x < d.n(); ++x) map[x] = x < v ? x : x == v ? -1 : x - 1;
    std::vector<Arc> arcs;
    for (const auto& [u, w] : d.arcs())
        if (u != v && w != v) arcs.emplace_back(map[u], map[w]);
    return {Digraph(d.n() - 1, std::move(arcs)), std::move(map)};
}

/// Deletes an existing arc; vertex set unchanged.
inline Digraph delete_arc(const Digraph& d, VertexId u, VertexId w) {
    if (!d.has_arc(u, w)) throw input_error("arc to delete does not exist");
    std::vector<Arc> arcs;
    arcs.reserve(d.arcs().size() - 1);
    for (const auto& a : d.arcs())
        if (a != Arc{u, w}) arcs.push_back(a);
    return Digraph(d.n(), std::move(arcs));
}

/// Checks that `injection` embeds h into d: injective on vertices and every
/// arc of h maps onto an arc of d.
inline bool is_subdigraph_under(const Digraph& h, const Digraph& d,
                                const std::vector<VertexId>& injection) {
    if (static_cast<int>(injection.size()) != h.n()) return false;
    std::vector<char> used(d.n(), 0);
    for (VertexId v : injection) {
        if (v < 0 || v >= d.n() || used[v]) return false;
        used[v] = 1;
    }
    for (const auto& [u, w] : h.arcs())
        if (!d.has_arc(injection[u], injection[w])) return false;
    return true;
}

namespace detail {

inline bool extend_embedding(const Digraph& h, const Digraph& d, std::vector<VertexId>& map,
                             std::vector<char>& used, VertexId next) {
    if (next == h.n()) return true;
    for (VertexId cand = 0; cand < d.n(); ++cand) {
        if (used[cand]) continue;
        if (d.out_degree(cand) < h.out_degree(next) || d.in_degree(cand) < h.in_degree(next))
            continue;
        bool ok = true;
        for (VertexId prev = 0; prev < next && ok; ++prev) {
            if (h.has_arc(next, prev) && !d.has_arc(cand, map[prev])) ok = false;
            if (h.has_arc(prev, next) && !d.has_arc(map[prev], cand)) ok = false;
        }
        if (!ok) continue;
        map[next] = cand;
        used[cand] = 1;
        if (extend_embedding(h, d, map, used, next + 1)) return true;
        used[cand] = 0;
    }
    return false;
}

} // namespace detail

/// Finds an arc-preserving injection of h into d by backtracking search.
/// Intended for small instances; refuses hosts above the cap.
inline std::optional<std::vector<VertexId>> find_subdigraph_embedding(const Digraph& h,
                                                                      const Digraph& d,
                                                                      int cap = 8) {
    if (d.n() > cap) throw capacity_error("subdigraph search host above cap");
    if (h.n() > d.n() || h.arc_count() > d.arc_count()) return std::nullopt;
    std::vector<VertexId> map(h.n(), -1);
    std::vector<char> used(d.n(), 0);
    if (detail::extend_embedding(h, d, map, used, 0)) return map;
    return std::nullopt;
}

/// Containment test; uses the supplied injection when given, otherwise
/// searches (hosts up to `cap` vertices).
inline bool is_subdigraph(const Digraph& h, const Digraph& d,
                          const std::optional<std::vector<VertexId>>& injection = std::nullopt,
                          int cap = 8) {
    if (injection) return is_subdigraph_under(h, d, *injection);
    return find_subdigraph_embedding(h, d, cap).has_value();
}

} // namespace nustab
