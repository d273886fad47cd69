#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>
#include <vector>

#include "nustab/digraph.hpp"
#include "nustab/errors.hpp"

namespace nustab {

/// Unordered left-right edge with multiplicity.
struct MultiEdge {
    int left;
    int right;
    int multiplicity = 1;

    friend bool operator==(const MultiEdge& a, const MultiEdge& b) {
        return a.left == b.left && a.right == b.right && a.multiplicity == b.multiplicity;
    }
};

/// Two-sided multigraph. Every edge joins a left vertex to a right vertex,
/// so loops cannot arise; parallel edges are represented by multiplicity
/// counters. Edge storage is canonical (sorted by endpoints).
class BipartiteMultigraph {
public:
    BipartiteMultigraph() = default;

    BipartiteMultigraph(int n_left, int n_right, std::vector<MultiEdge> edges = {})
        : n_left_(n_left), n_right_(n_right) {
        if (n_left < 0 || n_right < 0) throw input_error("negative side size");
        std::map<std::pair<int, int>, int> merged;
        for (const auto& e : edges) {
            if (e.left < 0 || e.left >= n_left_ || e.right < 0 || e.right >= n_right_)
                throw input_error("edge endpoint out of range");
            if (e.multiplicity < 1) throw input_error("multiplicity must be positive");
            merged[{e.left, e.right}] += e.multiplicity;
        }
        for (const auto& [key, mult] : merged) edges_.push_back({key.first, key.second, mult});
    }

    int n_left() const { return n_left_; }
    int n_right() const { return n_right_; }
    const std::vector<MultiEdge>& edges() const { return edges_; }

    int multiplicity(int l, int r) const {
        for (const auto& e : edges_)
            if (e.left == l && e.right == r) return e.multiplicity;
        return 0;
    }
    bool has_edge(int l, int r) const { return multiplicity(l, r) > 0; }

    /// Degree counting multiplicities.
    int degree_left(int l) const {
        int deg = 0;
        for (const auto& e : edges_)
            if (e.left == l) deg += e.multiplicity;
        return deg;
    }
    int degree_right(int r) const {
        int deg = 0;
        for (const auto& e : edges_)
            if (e.right == r) deg += e.multiplicity;
        return deg;
    }

    std::vector<int> neighbors_of_left(int l) const {
        std::vector<int> ns;
        for (const auto& e : edges_)
            if (e.left == l) ns.push_back(e.right);
        return ns;
    }
    std::vector<int> neighbors_of_right(int r) const {
        std::vector<int> ns;
        for (const auto& e : edges_)
            if (e.right == r) ns.push_back(e.left);
        return ns;
    }

    friend bool operator==(const BipartiteMultigraph& a, const BipartiteMultigraph& b) {
        return a.n_left_ == b.n_left_ && a.n_right_ == b.n_right_ && a.edges_ == b.edges_;
    }

private:
    int n_left_ = 0;
    int n_right_ = 0;
    std::vector<MultiEdge> edges_;
};

/// A perfect matching, stored as left->right pairs sorted by left vertex.
using PerfectMatching = std::vector<std::pair<int, int>>;

inline bool is_perfect_matching(const BipartiteMultigraph& g, const PerfectMatching& m) {
    if (g.n_left() != g.n_right()) return false;
    if (static_cast<int>(m.size()) != g.n_left()) return false;
    std::vector<char> left_hit(g.n_left(), 0), right_hit(g.n_right(), 0);
    for (const auto& [l, r] : m) {
        if (l < 0 || l >= g.n_left() || r < 0 || r >= g.n_right()) return false;
        if (left_hit[l] || right_hit[r] || !g.has_edge(l, r)) return false;
        left_hit[l] = right_hit[r] = 1;
    }
    return true;
}

/// Maximum-cardinality matching by augmenting paths; returns a perfect
/// matching when one exists.
inline std::optional<PerfectMatching> find_perfect_matching(const BipartiteMultigraph& g) {
    if (g.n_left() != g.n_right()) return std::nullopt;
    const int n = g.n_left();
    std::vector<std::vector<int>> adj(n);
    for (const auto& e : g.edges()) adj[e.left].push_back(e.right);
    std::vector<int> match_right(g.n_right(), -1);
    std::vector<char> visited;
    const auto augment = [&](auto&& self, int l) -> bool {
        for (int r : adj[l]) {
            if (visited[r]) continue;
            visited[r] = 1;
            if (match_right[r] < 0 || self(self, match_right[r])) {
                match_right[r] = l;
                return true;
            }
        }
        return false;
    };
    int matched = 0;
    for (int l = 0; l < n; ++l) {
        visited.assign(g.n_right(), 0);
        if (augment(augment, l)) ++matched;
    }
    if (matched != n) return std::nullopt;
    PerfectMatching m(n);
    for (int r = 0; r < g.n_right(); ++r) m[match_right[r]] = {match_right[r], r};
    return m;
}

/// A subgraph (given by its vertex set) is central when deleting its
/// vertices leaves a graph with a perfect matching; the empty graph counts.
inline bool is_central(const BipartiteMultigraph& g, const std::vector<int>& left_removed,
                       const std::vector<int>& right_removed) {
    std::vector<char> drop_l(g.n_left(), 0), drop_r(g.n_right(), 0);
    for (int l : left_removed) {
        if (l < 0 || l >= g.n_left()) throw input_error("left vertex out of range");
        drop_l[l] = 1;
    }
    for (int r : right_removed) {
        if (r < 0 || r >= g.n_right()) throw input_error("right vertex out of range");
        drop_r[r] = 1;
    }
    std::vector<int> lmap(g.n_left(), -1), rmap(g.n_right(), -1);
    int nl = 0, nr = 0;
    for (int l = 0; l < g.n_left(); ++l)
        if (!drop_l[l]) lmap[l] = nl++;
    for (int r = 0; r < g.n_right(); ++r)
        if (!drop_r[r]) rmap[r] = nr++;
    std::vector<MultiEdge> edges;
    for (const auto& e : g.edges())
        if (lmap[e.left] >= 0 && rmap[e.right] >= 0)
            edges.push_back({lmap[e.left], rmap[e.right], e.multiplicity});
    return find_perfect_matching(BipartiteMultigraph(nl, nr, std::move(edges))).has_value();
}

// ---------------------------------------------------------------------------
// The digraph <-> bipartite correspondence
// ---------------------------------------------------------------------------

/// D maps to the bipartite graph with left vertices v- and right vertices
/// v+, the matching edges v-v+ for every vertex, and one edge v-w+ per arc
/// (v, w). Left and right indices both reuse the digraph's vertex numbers.
inline std::pair<BipartiteMultigraph, PerfectMatching> to_bipartite(const Digraph& d) {
    std::vector<MultiEdge> edges;
    PerfectMatching m;
    for (VertexId v = 0; v < d.n(); ++v) {
        edges.push_back({v, v, 1});
        m.emplace_back(v, v);
    }
    for (const auto& [v, w] : d.arcs()) edges.push_back({v, w, 1});
    return {BipartiteMultigraph(d.n(), d.n(), std::move(edges)), std::move(m)};
}

/// Inverse construction D(G, M): vertex i is the matching edge (l_i, r_i);
/// an arc i -> j for every non-matching edge l_i r_j. A non-matching
/// parallel copy of a matching edge is rejected: it would encode a diagonal
/// position that is both forced and free.
inline Digraph from_bipartite(const BipartiteMultigraph& g, const PerfectMatching& m) {
    if (!is_perfect_matching(g, m)) throw input_error("not a perfect matching of the graph");
    const int n = g.n_left();
    std::vector<int> left_to_vertex(n, -1), right_to_vertex(n, -1);
    for (int i = 0; i < n; ++i) {
        left_to_vertex[m[i].first] = i;
        right_to_vertex[m[i].second] = i;
    }
    std::vector<Arc> arcs;
    for (const auto& e : g.edges()) {
        const int i = left_to_vertex[e.left], j = right_to_vertex[e.right];
        if (i == j) {
            if (e.multiplicity > 1)
                throw input_error("parallel copy of a matching edge has no digraph reading");
            continue;
        }
        arcs.emplace_back(i, j);
    }
    return Digraph(n, std::move(arcs));
}

// ---------------------------------------------------------------------------
// Contractions
// ---------------------------------------------------------------------------

/// Result of a bipartite contraction, with the dense re-indexing of each
/// side (old index -> new index; merged vertices share a target).
struct RelabeledBipartite {
    BipartiteMultigraph graph;
    std::vector<int> left_map;
    std::vector<int> right_map;
};

namespace detail {

inline std::vector<int> merge_map(int n, int keep, int gone) {
    const int lo = std::min(keep, gone), hi = std::max(keep, gone);
    std::vector<int> map(n);
    for (int x = 0; x < n; ++x) map[x] = x == hi ? lo : x < hi ? x : x - 1;
    return map;
}

inline std::vector<int> drop_map(int n, int gone) {
    std::vector<int> map(n);
    for (int x = 0; x < n; ++x) map[x] = x == gone ? -1 : x < gone ? x : x - 1;
    return map;
}

} // namespace detail

/// Bicontraction of a degree-2 vertex: the vertex is deleted and its two
/// (distinct, same-side) neighbors are identified; multiplicities add up.
/// `left_side` says which side v lives on.
inline RelabeledBipartite bicontract(const BipartiteMultigraph& g, bool left_side, int v) {
    const int side_n = left_side ? g.n_left() : g.n_right();
    if (v < 0 || v >= side_n) throw input_error("vertex out of range");
    const int deg = left_side ? g.degree_left(v) : g.degree_right(v);
    if (deg != 2) throw contract_error("bicontraction needs degree exactly 2");
    std::vector<int> nbrs = left_side ? g.neighbors_of_left(v) : g.neighbors_of_right(v);
    if (nbrs.size() != 2 || nbrs[0] == nbrs[1])
        throw contract_error("bicontraction needs two distinct neighbors");
    std::sort(nbrs.begin(), nbrs.end());
    const int keep = nbrs[0], gone = nbrs[1];

    std::vector<int> lmap, rmap;
    if (left_side) {
        lmap = detail::drop_map(g.n_left(), v);
        rmap = detail::merge_map(g.n_right(), keep, gone);
    } else {
        lmap = detail::merge_map(g.n_left(), keep, gone);
        rmap = detail::drop_map(g.n_right(), v);
    }
    std::vector<MultiEdge> edges;
    for (const auto& e : g.edges()) {
        const int l = lmap[e.left], r = rmap[e.right];
        if (l < 0 || r < 0) continue;
        edges.push_back({l, r, e.multiplicity});
    }
    return {BipartiteMultigraph(g.n_left() - 1, g.n_right() - 1, std::move(edges)),
            std::move(lmap), std::move(rmap)};
}

/// A 4-cycle l1 - r1 - l2 - r2 - l1 given by its alternating vertices.
struct FourCycle {
    int l1, r1, l2, r2;
};

/// Contraction of a central 4-cycle: all edges between (l1, r1) and between
/// (l2, r2) are removed, then l1 is identified with l2 and r1 with r2. The
/// merged pair keeps at least two parallel edges, from the two surviving
/// cycle edges.
inline RelabeledBipartite c4_contract(const BipartiteMultigraph& g, const FourCycle& c) {
    if (c.l1 < 0 || c.l1 >= g.n_left() || c.l2 < 0 || c.l2 >= g.n_left() || c.r1 < 0 ||
        c.r1 >= g.n_right() || c.r2 < 0 || c.r2 >= g.n_right())
        throw input_error("cycle vertex out of range");
    if (c.l1 == c.l2 || c.r1 == c.r2) throw contract_error("cycle vertices must be distinct");
    if (!g.has_edge(c.l1, c.r1) || !g.has_edge(c.l2, c.r1) || !g.has_edge(c.l2, c.r2) ||
        !g.has_edge(c.l1, c.r2))
        throw contract_error("vertices do not form a 4-cycle");
    if (!is_central(g, {c.l1, c.l2}, {c.r1, c.r2}))
        throw contract_error("4-cycle is not central");

    const auto lmap = detail::merge_map(g.n_left(), c.l1, c.l2);
    const auto rmap = detail::merge_map(g.n_right(), c.r1, c.r2);
    std::vector<MultiEdge> edges;
    for (const auto& e : g.edges()) {
        const bool removed = (e.left == c.l1 && e.right == c.r1) ||
                             (e.left == c.l2 && e.right == c.r2);
        if (removed) continue;
        edges.push_back({lmap[e.left], rmap[e.right], e.multiplicity});
    }
    return {BipartiteMultigraph(g.n_left() - 1, g.n_right() - 1, std::move(edges)),
            std::move(lmap), std::move(rmap)};
}

// ---------------------------------------------------------------------------
// Text I/O
// ---------------------------------------------------------------------------

// Format:
//   bigraph <nL> <nR>
//   i j mult     (one line per distinct edge, 1-based)
//   matching     (optional section)
//   i j          (one line per matching edge, 1-based)

inline std::pair<BipartiteMultigraph, std::optional<PerfectMatching>> read_bigraph_text(
    std::istream& is) {
    std::string line;
    int nl = -1, nr = -1;
    std::vector<MultiEdge> edges;
    std::optional<PerfectMatching> matching;
    bool in_matching = false;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (nl < 0) {
            if (first != "bigraph" || !(ls >> nl >> nr) || nl < 0 || nr < 0)
                throw input_error("expected header 'bigraph <nL> <nR>'");
            continue;
        }
        if (first == "matching") {
            in_matching = true;
            matching = PerfectMatching{};
            continue;
        }
        int i, j, mult = 1;
        try {
            i = std::stoi(first);
        } catch (const std::exception&) {
            throw input_error("bad edge line: " + line);
        }
        if (!(ls >> j)) throw input_error("edge line needs two vertices");
        if (i < 1 || i > nl || j < 1 || j > nr) throw input_error("edge vertex out of range");
        if (in_matching) {
            matching->emplace_back(i - 1, j - 1);
        } else {
            if (!(ls >> mult)) mult = 1;
            edges.push_back({i - 1, j - 1, mult});
        }
    }
    if (nl < 0) throw input_error("missing 'bigraph <nL> <nR>' header");
    if (matching) std::sort(matching->begin(), matching->end());
    return {BipartiteMultigraph(nl, nr, std::move(edges)), std::move(matching)};
}

inline void write_bigraph_text(std::ostream& os, const BipartiteMultigraph& g,
                               const std::optional<PerfectMatching>& m = std::nullopt) {
    os << "bigraph " << g.n_left() << " " << g.n_right() << "\n";
    for (const auto& e : g.edges())
        os << e.left + 1 << " " << e.right + 1 << " " << e.multiplicity << "\n";
    if (m) {
        os << "matching\n";
        for (const auto& [l, r] : *m) os << l + 1 << " " << r + 1 << "\n";
    }
}

} // namespace nustab
