#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "nustab/digraph.hpp"

namespace nustab::testing {

inline Digraph digraph_from_bits(int n, std::uint64_t bits) {
    std::vector<Arc> arcs;
    int k = 0;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId w = 0; w < n; ++w) {
            if (u == w) continue;
            if (bits & (std::uint64_t{1} << k)) arcs.emplace_back(u, w);
            ++k;
        }
    return Digraph(n, std::move(arcs));
}

/// All 2^(n(n-1)) digraphs on n labeled vertices. Meant for n <= 4.
inline std::vector<Digraph> all_digraphs(int n) {
    const int pairs = n * (n - 1);
    std::vector<Digraph> out;
    out.reserve(std::size_t{1} << pairs);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << pairs); ++bits)
        out.push_back(digraph_from_bits(n, bits));
    return out;
}

inline Digraph random_digraph(int n, std::mt19937& rng, double arc_prob = 0.35) {
    std::bernoulli_distribution coin(arc_prob);
    std::vector<Arc> arcs;
    for (VertexId u = 0; u < n; ++u)
        for (VertexId w = 0; w < n; ++w)
            if (u != w && coin(rng)) arcs.emplace_back(u, w);
    return Digraph(n, std::move(arcs));
}

inline Digraph random_acyclic_digraph(int n, std::mt19937& rng, double arc_prob = 0.4) {
    std::bernoulli_distribution coin(arc_prob);
    std::vector<VertexId> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Arc> arcs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (coin(rng)) arcs.emplace_back(order[i], order[j]);
    return Digraph(n, std::move(arcs));
}

inline Digraph path_digraph(int n) {
    std::vector<Arc> arcs;
    for (VertexId v = 0; v + 1 < n; ++v) arcs.emplace_back(v, v + 1);
    return Digraph(n, std::move(arcs));
}

inline Digraph cycle_digraph(int n) {
    std::vector<Arc> arcs;
    for (VertexId v = 0; v < n; ++v) arcs.emplace_back(v, (v + 1) % n);
    return Digraph(n, std::move(arcs));
}

} // namespace nustab::testing
