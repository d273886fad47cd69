#include <catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "nustab/isomorphism.hpp"
#include "nustab/patterns.hpp"
#include "test_support.hpp"

using namespace nustab;
using namespace nustab::testing;

namespace {

Digraph relabeled(const Digraph& d, const std::vector<VertexId>& perm) {
    std::vector<Arc> arcs;
    for (const auto& [u, w] : d.arcs()) arcs.emplace_back(perm[u], perm[w]);
    return Digraph(d.n(), std::move(arcs));
}

} // namespace

TEST_CASE("canonical code is invariant under relabeling") {
    std::mt19937 rng(3);
    for (int i = 0; i < 300; ++i) {
        const Digraph d = random_digraph(6, rng);
        std::vector<VertexId> perm(6);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        CHECK(canonical_code(d) == canonical_code(relabeled(d, perm)));
    }
}

TEST_CASE("canonical code separates non-isomorphic digraphs exhaustively at n=3") {
    // Codes agree exactly when a brute-force isomorphism exists.
    const auto all = all_digraphs(3);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            const bool same_code = canonical_code(all[i]) == canonical_code(all[j]);
            // Brute force over all 6 permutations.
            bool iso = false;
            std::vector<VertexId> perm{0, 1, 2};
            do {
                if (relabeled(all[i], perm) == all[j]) iso = true;
            } while (!iso && std::next_permutation(perm.begin(), perm.end()));
            CHECK(same_code == iso);
        }
}

TEST_CASE("find_isomorphism returns a checkable map") {
    std::mt19937 rng(5);
    for (int i = 0; i < 200; ++i) {
        const Digraph d = random_digraph(6, rng);
        std::vector<VertexId> perm(6);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        const Digraph e = relabeled(d, perm);
        const auto map = find_isomorphism(d, e);
        REQUIRE(map.has_value());
        CHECK(is_isomorphism_map(d, e, *map));
    }
    CHECK_FALSE(find_isomorphism(pattern_k2(), Digraph(2, {{0, 1}})).has_value());
    CHECK_FALSE(is_isomorphic(pattern_n4(), complete_digraph(4)));
}

TEST_CASE("patterns are pairwise non-isomorphic and distinct from reversals") {
    CHECK(pattern_n4().arc_count() == 8);
    CHECK(pattern_m5().arc_count() == 10);
    CHECK_FALSE(is_isomorphic(pattern_n4(), pattern_n4_reversed()));
    CHECK_FALSE(is_isomorphic(pattern_m5(), pattern_m5_reversed()));
    CHECK(is_isomorphic(pattern_k3(), reverse(pattern_k3())));
}

TEST_CASE("canonical code rejects oversized hosts") {
    CHECK_THROWS_AS(canonical_code(Digraph(9)), capacity_error);
}
