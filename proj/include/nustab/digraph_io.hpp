#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "nustab/digraph.hpp"
#include "nustab/errors.hpp"

namespace nustab {

// Text format:
//   digraph <n>
//   u w          (one line per arc, 1-based)
// Lines starting with '#' and blank lines are ignored.

inline Digraph read_digraph_text(std::istream& is) {
    std::string line;
    int n = -1;
    std::vector<Arc> arcs;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        if (n < 0) {
            std::string kw;
            if (!(ls >> kw)) continue;
            if (kw != "digraph" || !(ls >> n) || n < 0)
                throw input_error("expected header 'digraph <n>'");
            continue;
        }
        int u, w;
        if (!(ls >> u)) continue;
        if (!(ls >> w)) throw input_error("arc line needs two vertices");
        if (u < 1 || u > n || w < 1 || w > n) throw input_error("arc vertex out of range");
        arcs.emplace_back(u - 1, w - 1);
    }
    if (n < 0) throw input_error("missing 'digraph <n>' header");
    return Digraph(n, std::move(arcs));
}

inline void write_digraph_text(std::ostream& os, const Digraph& d) {
    os << "digraph " << d.n() << "\n";
    for (const auto& [u, w] : d.arcs()) os << u + 1 << " " << w + 1 << "\n";
}

inline nlohmann::json digraph_to_json(const Digraph& d) {
    nlohmann::json arcs = nlohmann::json::array();
    for (const auto& [u, w] : d.arcs()) arcs.push_back({u + 1, w + 1});
    return {{"n", d.n()}, {"arcs", arcs}};
}

inline Digraph digraph_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("arcs"))
        throw input_error("digraph JSON needs fields 'n' and 'arcs'");
    const int n = j.at("n").get<int>();
    std::vector<Arc> arcs;
    for (const auto& a : j.at("arcs")) {
        if (!a.is_array() || a.size() != 2) throw input_error("arc must be a pair");
        const int u = a[0].get<int>(), w = a[1].get<int>();
        if (u < 1 || u > n || w < 1 || w > n) throw input_error("arc vertex out of range");
        arcs.emplace_back(u - 1, w - 1);
    }
    return Digraph(n, std::move(arcs));
}

inline std::string to_text(const Digraph& d) {
    std::ostringstream os;
    write_digraph_text(os, d);
    return os.str();
}

inline Digraph digraph_from_text(const std::string& text) {
    std::istringstream is(text);
    return read_digraph_text(is);
}

} // namespace nustab
