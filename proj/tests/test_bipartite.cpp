#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <sstream>

#include "nustab/bipartite.hpp"
#include "nustab/isomorphism.hpp"
#include "nustab/minors.hpp"
#include "nustab/patterns.hpp"
#include "test_support.hpp"

using namespace nustab;
using namespace nustab::testing;

namespace {

BipartiteMultigraph random_bigraph(int nl, int nr, std::mt19937& rng, double p = 0.4) {
    std::bernoulli_distribution coin(p);
    std::bernoulli_distribution doubled(0.15);
    std::vector<MultiEdge> edges;
    for (int l = 0; l < nl; ++l)
        for (int r = 0; r < nr; ++r)
            if (coin(rng)) edges.push_back({l, r, doubled(rng) ? 2 : 1});
    return BipartiteMultigraph(nl, nr, std::move(edges));
}

BipartiteMultigraph remove_one_edge(const BipartiteMultigraph& g, int l, int r) {
    std::vector<MultiEdge> edges;
    for (const auto& e : g.edges()) {
        if (e.left == l && e.right == r) {
            if (e.multiplicity > 1) edges.push_back({l, r, e.multiplicity - 1});
        } else {
            edges.push_back(e);
        }
    }
    return BipartiteMultigraph(g.n_left(), g.n_right(), std::move(edges));
}

/// Trims every matching pair to multiplicity 1. A surplus copy of a
/// matching edge is the image of an arc that became a self-arc under the
/// digraph-side contraction, which drops it.
BipartiteMultigraph trim_matching_copies(const BipartiteMultigraph& g,
                                         const PerfectMatching& m) {
    std::vector<MultiEdge> edges;
    for (const auto& e : g.edges()) {
        const bool matched = std::find(m.begin(), m.end(),
                                       std::pair{e.left, e.right}) != m.end();
        edges.push_back({e.left, e.right, matched ? 1 : e.multiplicity});
    }
    return BipartiteMultigraph(g.n_left(), g.n_right(), std::move(edges));
}

/// Digraph-side butterfly contraction mirrored through the correspondence.
Digraph butterfly_via_bipartite(const Digraph& d, VertexId u, VertexId w) {
    const auto [g, m] = to_bipartite(d);
    RelabeledBipartite rb = d.out_degree(u) == 1 ? bicontract(g, true, u)
                                                 : bicontract(g, false, w);
    const VertexId dropped = d.out_degree(u) == 1 ? u : w;
    PerfectMatching matching;
    for (VertexId x = 0; x < d.n(); ++x) {
        if (x == dropped) continue;
        matching.emplace_back(rb.left_map[x], rb.right_map[x]);
    }
    std::sort(matching.begin(), matching.end());
    return from_bipartite(trim_matching_copies(rb.graph, matching), matching);
}

/// Digraph-side bidirected contraction mirrored through the correspondence:
/// a C4-contraction followed by deleting one of the doubled edges.
Digraph bidirected_via_bipartite(const Digraph& d, VertexId u, VertexId w) {
    const auto [g, m] = to_bipartite(d);
    RelabeledBipartite rb = c4_contract(g, {u, w, w, u});
    const BipartiteMultigraph trimmed =
        remove_one_edge(rb.graph, rb.left_map[u], rb.right_map[u]);
    PerfectMatching matching;
    for (VertexId x = 0; x < d.n(); ++x) {
        if (x == w) continue;
        matching.emplace_back(rb.left_map[x], rb.right_map[x]);
    }
    std::sort(matching.begin(), matching.end());
    return from_bipartite(trimmed, matching);
}

} // namespace

TEST_CASE("to_bipartite") {
    const auto [g, m] = to_bipartite(pattern_k2());
    CHECK(g.n_left() == 2);
    CHECK(g.n_right() == 2);
    CHECK(g.edges().size() == 4); // complete bipartite
    CHECK(m == PerfectMatching{{0, 0}, {1, 1}});
    CHECK(is_perfect_matching(g, m));

    const auto [g1, m1] = to_bipartite(Digraph(1));
    CHECK(g1.edges().size() == 1);

    const auto [g2, m2] = to_bipartite(path_digraph(2));
    CHECK(g2.n_left() + g2.n_right() == 4);
    CHECK(g2.edges().size() == 3);
}

TEST_CASE("from_bipartite") {
    const BipartiteMultigraph k22(2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    CHECK(from_bipartite(k22, {{0, 0}, {1, 1}}) == pattern_k2());
    CHECK(from_bipartite(k22, {{0, 1}, {1, 0}}) == pattern_k2());

    const BipartiteMultigraph single(1, 1, {{0, 0}});
    CHECK(from_bipartite(single, {{0, 0}}) == Digraph(1));

    CHECK_THROWS_AS(from_bipartite(k22, PerfectMatching{{0, 0}}), input_error);
    // A parallel copy of a matching edge has no digraph reading.
    const BipartiteMultigraph doubled(1, 1, {{0, 0, 2}});
    CHECK_THROWS_AS(from_bipartite(doubled, {{0, 0}}), input_error);
}

TEST_CASE("round-trip through the correspondence") {
    for (const Digraph& d : all_digraphs(3)) {
        const auto [g, m] = to_bipartite(d);
        CHECK(from_bipartite(g, m) == d);
    }
    std::mt19937 rng(73);
    for (int i = 0; i < 100; ++i) {
        const Digraph d = random_digraph(6, rng);
        const auto [g, m] = to_bipartite(d);
        CHECK(from_bipartite(g, m) == d);
    }
}

TEST_CASE("bicontract basics") {
    // Path a - v - b with v on the right: contracting removes the component.
    const BipartiteMultigraph path(2, 1, {{0, 0}, {1, 0}});
    const auto r = bicontract(path, false, 0);
    CHECK(r.graph.n_left() == 1);
    CHECK(r.graph.n_right() == 0);
    CHECK(r.graph.edges().empty());

    // C6, one degree-2 vertex bicontracted, gives C4.
    const BipartiteMultigraph c6(3, 3, {{0, 0}, {1, 0}, {1, 1}, {2, 1}, {2, 2}, {0, 2}});
    const auto c4 = bicontract(c6, true, 0);
    CHECK(c4.graph.n_left() == 2);
    CHECK(c4.graph.n_right() == 2);
    CHECK(c4.graph.edges().size() == 4);
    for (const auto& e : c4.graph.edges()) CHECK(e.multiplicity == 1);

    CHECK_THROWS_AS(bicontract(BipartiteMultigraph(1, 1, {{0, 0, 2}}), true, 0), contract_error);
    CHECK_THROWS_AS(bicontract(c6, true, 5), input_error);
}

TEST_CASE("bicontracting the degree-2 corners of the N4 correspondence gives doubled K22") {
    const auto [g, m] = to_bipartite(pattern_n4());
    // Right vertices a+ and d+ have degree 2.
    REQUIRE(g.degree_right(0) == 2);
    REQUIRE(g.degree_right(3) == 2);
    auto first = bicontract(g, false, 0);
    // Vertex d+ moved under the relabeling of the first contraction.
    const int dplus = first.right_map[3];
    REQUIRE(first.graph.degree_right(dplus) == 2);
    const auto second = bicontract(first.graph, false, dplus);
    const auto& res = second.graph;
    CHECK(res.n_left() == 2);
    CHECK(res.n_right() == 2);
    REQUIRE(res.edges().size() == 4);
    for (const auto& e : res.edges()) CHECK(e.multiplicity == 2);
}

TEST_CASE("c4 contraction") {
    const BipartiteMultigraph k22(2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    const auto r = c4_contract(k22, {0, 0, 1, 1});
    CHECK(r.graph.n_left() == 1);
    CHECK(r.graph.n_right() == 1);
    REQUIRE(r.graph.edges().size() == 1);
    CHECK(r.graph.edges()[0].multiplicity == 2);

    // C4 plus a separate perfectly matched pair: the pair is untouched.
    const BipartiteMultigraph padded(3, 3, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 2}});
    const auto rp = c4_contract(padded, {0, 0, 1, 1});
    CHECK(rp.graph.n_left() == 2);
    CHECK(rp.graph.multiplicity(rp.left_map[2], rp.right_map[2]) == 1);

    // Removing this 4-cycle strands a vertex, so the cycle is not central.
    const BipartiteMultigraph stranded(3, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 0}});
    CHECK_THROWS_AS(c4_contract(stranded, {0, 0, 1, 1}), contract_error);
    CHECK_THROWS_AS(c4_contract(k22, {0, 0, 0, 1}), contract_error);
}

TEST_CASE("perfect matching search") {
    const BipartiteMultigraph k22(2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    const auto m = find_perfect_matching(k22);
    REQUIRE(m.has_value());
    CHECK(m->size() == 2);
    CHECK(is_perfect_matching(k22, *m));

    const BipartiteMultigraph star(1, 3, {{0, 0}, {0, 1}, {0, 2}});
    CHECK_FALSE(find_perfect_matching(star).has_value());

    std::mt19937 rng(79);
    for (int i = 0; i < 50; ++i) {
        const auto [g, m2] = to_bipartite(random_digraph(5, rng));
        CHECK(find_perfect_matching(g).has_value());
    }
}

TEST_CASE("centrality") {
    const BipartiteMultigraph two_edges(2, 2, {{0, 0}, {1, 1}});
    CHECK(is_central(two_edges, {0}, {0}));

    const BipartiteMultigraph path(2, 1, {{0, 0}, {1, 0}});
    CHECK_FALSE(is_central(path, {}, {0}));

    // In the N4 correspondence, removing {b-, b+, c-, c+} leaves {a, d}
    // matched by their own matching edges.
    const auto [g, m] = to_bipartite(pattern_n4());
    CHECK(is_central(g, {1, 2}, {1, 2}));
}

TEST_CASE("contractions preserve perfect matching existence") {
    std::mt19937 rng(83);
    int bicontract_cases = 0, c4_cases = 0;
    for (int i = 0; i < 400; ++i) {
        const BipartiteMultigraph g = random_bigraph(3, 3, rng, 0.5);
        const bool has = find_perfect_matching(g).has_value();
        for (int side = 0; side < 2; ++side) {
            const bool left = side == 0;
            const int n = left ? g.n_left() : g.n_right();
            for (int v = 0; v < n; ++v) {
                const int deg = left ? g.degree_left(v) : g.degree_right(v);
                const auto nbrs = left ? g.neighbors_of_left(v) : g.neighbors_of_right(v);
                if (deg != 2 || nbrs.size() != 2) continue;
                ++bicontract_cases;
                CHECK(find_perfect_matching(bicontract(g, left, v).graph).has_value() == has);
            }
        }
        for (int l1 = 0; l1 < g.n_left(); ++l1)
            for (int l2 = 0; l2 < g.n_left(); ++l2)
                for (int r1 = 0; r1 < g.n_right(); ++r1)
                    for (int r2 = 0; r2 < g.n_right(); ++r2) {
                        if (l1 == l2 || r1 == r2) continue;
                        if (!g.has_edge(l1, r1) || !g.has_edge(l2, r1) || !g.has_edge(l2, r2) ||
                            !g.has_edge(l1, r2))
                            continue;
                        if (!is_central(g, {l1, l2}, {r1, r2})) continue;
                        ++c4_cases;
                        CHECK(find_perfect_matching(c4_contract(g, {l1, r1, l2, r2}).graph)
                                  .has_value() == has);
                    }
    }
    CHECK(bicontract_cases > 20);
    CHECK(c4_cases > 20);
}

TEST_CASE("butterfly contraction commutes with bicontraction, exhaustively at n=3") {
    for (const Digraph& d : all_digraphs(3))
        for (const auto& [u, w] : d.arcs()) {
            if (!is_butterfly_contractible(d, u, w)) continue;
            const Digraph direct = butterfly_contract(d, u, w).graph;
            const Digraph mirrored = butterfly_via_bipartite(d, u, w);
            CHECK(is_isomorphic(direct, mirrored));
        }
}

TEST_CASE("bidirected contraction commutes with c4 contraction plus edge deletion") {
    for (const Digraph& d : all_digraphs(3))
        for (const auto& [u, w] : d.arcs()) {
            if (u >= w || !d.has_arc(w, u)) continue;
            const Digraph direct = contract_bidirected(d, u, w).graph;
            const Digraph mirrored = bidirected_via_bipartite(d, u, w);
            CHECK(is_isomorphic(direct, mirrored));
        }
}

TEST_CASE("bigraph text round-trips") {
    std::mt19937 rng(89);
    const BipartiteMultigraph g = random_bigraph(3, 4, rng);
    std::ostringstream os;
    write_bigraph_text(os, g);
    std::istringstream is(os.str());
    const auto [parsed, m] = read_bigraph_text(is);
    CHECK(parsed == g);
    CHECK_FALSE(m.has_value());

    const auto [bg, bm] = to_bipartite(pattern_n4());
    std::ostringstream os2;
    write_bigraph_text(os2, bg, bm);
    std::istringstream is2(os2.str());
    const auto [parsed2, m2] = read_bigraph_text(is2);
    CHECK(parsed2 == bg);
    REQUIRE(m2.has_value());
    CHECK(*m2 == bm);

    std::istringstream bad("bigraph 1 1\n1 2\n");
    CHECK_THROWS_AS(read_bigraph_text(bad), input_error);
}
