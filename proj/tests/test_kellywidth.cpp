#include <catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

#include "nustab/kellywidth.hpp"
#include "nustab/minors.hpp"
#include "nustab/patterns.hpp"
#include "test_support.hpp"

using namespace nustab;
using namespace nustab::testing;

namespace {

/// Independent oracle: minimum ordering width by full permutation
/// enumeration, replaying eliminations on the digraph itself.
int brute_force_kelly_width(const Digraph& d) {
    std::vector<VertexId> ord(d.n());
    std::iota(ord.begin(), ord.end(), 0);
    int best = d.n();
    do {
        best = std::min(best, ordering_width(d, ord));
    } while (std::next_permutation(ord.begin(), ord.end()));
    return best + 1;
}

} // namespace

TEST_CASE("eliminate adds shortcuts") {
    const auto [g1, m1] = eliminate(path_digraph(3), 1);
    CHECK(g1 == Digraph(2, {{0, 1}})); // shortcut 0 -> 2, relabeled
    const auto [g2, m2] = eliminate(pattern_k2(), 0);
    CHECK(g2 == Digraph(1));
    const auto [g3, m3] = eliminate(pattern_k3(), 0);
    CHECK(g3 == pattern_k2());
}

TEST_CASE("ordering width frozen examples") {
    CHECK(ordering_width(path_digraph(3), {2, 1, 0}) == 0);
    CHECK(ordering_width(pattern_k2(), {0, 1}) == 1);
    CHECK(ordering_width(pattern_k2(), {1, 0}) == 1);
    // Every K3 ordering starts at a vertex of outdegree 2.
    std::vector<VertexId> ord{0, 1, 2};
    do {
        CHECK(ordering_width(pattern_k3(), ord) == 2);
    } while (std::next_permutation(ord.begin(), ord.end()));
    CHECK_THROWS_AS(ordering_width(pattern_k2(), {0, 0}), input_error);
}

TEST_CASE("kelly width of the basic digraphs") {
    CHECK(kelly_width_exact(path_digraph(3)).width == 1);
    CHECK(kelly_width_exact(pattern_k2()).width == 2);
    CHECK(kelly_width_exact(pattern_k3()).width == 3);
    CHECK(kelly_width_exact(complete_digraph(4)).width == 4);
    CHECK_THROWS_AS(kelly_width_exact(Digraph(21)), capacity_error);
}

TEST_CASE("width report witness re-validates") {
    std::mt19937 rng(31);
    for (int i = 0; i < 100; ++i) {
        const Digraph d = random_digraph(6, rng);
        const WidthReport r = kelly_width_exact(d);
        CHECK(ordering_width(d, r.ordering) == r.width - 1);
    }
}

TEST_CASE("subset DP equals permutation enumeration exhaustively at n=3") {
    for (const Digraph& d : all_digraphs(3))
        CHECK(kelly_width_exact(d).width == brute_force_kelly_width(d));
}

TEST_CASE("subset DP equals permutation enumeration on samples at n=5") {
    std::mt19937 rng(37);
    for (int i = 0; i < 60; ++i) {
        const Digraph d = random_digraph(5, rng);
        CHECK(kelly_width_exact(d).width == brute_force_kelly_width(d));
    }
}

TEST_CASE("acyclicity bridge: kelly width 1 iff acyclic, exhaustively at n=3") {
    for (const Digraph& d : all_digraphs(3))
        CHECK((kelly_width_exact(d).width == 1) == is_acyclic(d));
}

TEST_CASE("greedy recognizer is sound; empirically complete for width <= 1") {
    CHECK(recognize_width1(path_digraph(3)).has_value());
    CHECK_FALSE(recognize_width1(pattern_k3()).has_value());
    CHECK(recognize_width1(pattern_k2()).has_value());

    std::mt19937 rng(41);
    int mismatches = 0;
    for (int i = 0; i < 400; ++i) {
        const Digraph d = random_digraph(5, rng, 0.3);
        const auto greedy = recognize_width1(d);
        if (greedy) {
            CHECK(ordering_width(d, *greedy) <= 1);
            CHECK(kelly_width_exact(d).width <= 2);
        } else if (kelly_width_exact(d).width <= 2) {
            ++mismatches; // completeness is a conjecture, not asserted
        }
    }
    INFO("greedy incompleteness events: " << mismatches);
    CHECK(mismatches == 0); // holds on this seeded sample
}

TEST_CASE("elimination on vertex sets is order independent") {
    std::mt19937 rng(43);
    for (int i = 0; i < 100; ++i) {
        const Digraph d = random_digraph(6, rng);
        std::vector<VertexId> subset;
        for (VertexId v = 0; v < d.n(); ++v)
            if (rng() % 2) subset.push_back(v);
        const auto run = [&](std::vector<VertexId> order) {
            Digraph g = d;
            std::vector<int> label(d.n());
            std::iota(label.begin(), label.end(), 0);
            for (VertexId v : order) {
                auto [next, map] = eliminate(g, label[v]);
                g = std::move(next);
                for (VertexId x = 0; x < d.n(); ++x)
                    if (label[x] >= 0) label[x] = map[label[x]];
            }
            return g;
        };
        auto forward = subset;
        auto backward = subset;
        std::reverse(backward.begin(), backward.end());
        auto shuffled = subset;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const Digraph a = run(forward), b = run(backward), c = run(shuffled);
        CHECK(a == b);
        CHECK(a == c);
    }
}

TEST_CASE("k-DAG construction") {
    CHECK(build_kdag(1, {}) == Digraph(1));
    CHECK(build_kdag(2, {}) == pattern_k2());
    CHECK(build_kdag(1, {{0}}) == pattern_k2());
    CHECK_THROWS_AS(build_kdag(1, {{0, 1}}), input_error);

    // Build bigger scripts and confirm the width bound kelly-width <= k+1.
    std::mt19937 rng(47);
    for (int trial = 0; trial < 40; ++trial) {
        const int k = 1 + static_cast<int>(rng() % 2);
        std::vector<std::vector<VertexId>> script;
        int size = k;
        for (int add = 0; add < 4; ++add) {
            std::vector<VertexId> x;
            for (VertexId v = 0; v < size && static_cast<int>(x.size()) < k; ++v)
                if (rng() % 2) x.push_back(v);
            script.push_back(x);
            ++size;
        }
        const Digraph g = build_kdag(k, script);
        CHECK(kelly_width_exact(g).width <= k + 1);
    }
}

TEST_CASE("partial k-DAG test through the width equivalence") {
    CHECK(is_partial_kdag(path_digraph(3), 0));
    CHECK(is_partial_kdag(pattern_k2(), 1));
    CHECK_FALSE(is_partial_kdag(pattern_k2(), 0));
    CHECK_FALSE(is_partial_kdag(pattern_k3(), 1));
}

TEST_CASE("guards") {
    const Digraph d(2, {{0, 1}});
    CHECK(guards(d, {1}, {0}));
    CHECK_FALSE(guards(d, {}, {0}));
    CHECK_FALSE(guards(d, {0}, {0})); // W and X must be disjoint
}

TEST_CASE("kelly decomposition validation") {
    // Single vertex, one node, W = {v}, X = empty.
    {
        KellyDecomposition kd;
        kd.tree = Digraph(1);
        kd.w_sets = {{0}};
        kd.x_sets = {{}};
        kd.child_order = {{}};
        kd.root_order = {0};
        const auto v = validate_kelly_decomposition(Digraph(1), kd);
        CHECK(v.valid);
        CHECK(v.width == 1);
    }
    // K2 in a single bag.
    {
        KellyDecomposition kd;
        kd.tree = Digraph(1);
        kd.w_sets = {{0, 1}};
        kd.x_sets = {{}};
        kd.child_order = {{}};
        kd.root_order = {0};
        const auto v = validate_kelly_decomposition(pattern_k2(), kd);
        CHECK(v.valid);
        CHECK(v.width == 2);
        // The printed root condition rejects even this decomposition.
        CHECK_FALSE(validate_kelly_decomposition(pattern_k2(), kd, true).valid);
    }
    // W fails to partition V.
    {
        KellyDecomposition kd;
        kd.tree = Digraph(1);
        kd.w_sets = {{0}};
        kd.x_sets = {{}};
        kd.child_order = {{}};
        kd.root_order = {0};
        const auto v = validate_kelly_decomposition(pattern_k2(), kd);
        CHECK_FALSE(v.valid);
        REQUIRE_FALSE(v.violations.empty());
        CHECK(v.violations[0] == "partition");
    }
    // Two-node chain for K2: guard and child conditions both engage.
    {
        KellyDecomposition kd;
        kd.tree = Digraph(2, {{0, 1}});
        kd.w_sets = {{0}, {1}};
        kd.x_sets = {{}, {0}};
        kd.child_order = {{1}, {}};
        kd.root_order = {0};
        const auto v = validate_kelly_decomposition(pattern_k2(), kd);
        CHECK(v.valid);
        CHECK(v.width == 2);
    }
}
