#pragma once

#include <string>
#include <vector>

#include "nustab/digraph.hpp"
#include "nustab/errors.hpp"

namespace nustab {

inline Digraph pattern_k2() { return complete_digraph(2); }
inline Digraph pattern_k3() { return complete_digraph(3); }

/// Vertices a,b,c,d = 0,1,2,3; arcs ab,ba,bc,cb,cd,dc,ac,db.
inline Digraph pattern_n4() {
    return Digraph(4, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {2, 3}, {3, 2}, {0, 2}, {3, 1}});
}

/// Vertices a,b,c,d,e = 0..4; arcs ab,ba,bc,cb,cd,dc,de,ed,ac,ec.
inline Digraph pattern_m5() {
    return Digraph(5, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {2, 3}, {3, 2},
                       {3, 4}, {4, 3}, {0, 2}, {4, 2}});
}

inline Digraph pattern_n4_reversed() { return reverse(pattern_n4()); }
inline Digraph pattern_m5_reversed() { return reverse(pattern_m5()); }

/// The five forbidden patterns of the nullity characterization, in the
/// canonical report order.
enum class ForbiddenPattern { K3, N4, M5, N4Reversed, M5Reversed };

inline const std::vector<ForbiddenPattern>& all_forbidden_patterns() {
    static const std::vector<ForbiddenPattern> all = {
        ForbiddenPattern::K3, ForbiddenPattern::N4, ForbiddenPattern::M5,
        ForbiddenPattern::N4Reversed, ForbiddenPattern::M5Reversed};
    return all;
}

inline Digraph pattern_digraph(ForbiddenPattern p) {
    switch (p) {
    case ForbiddenPattern::K3: return pattern_k3();
    case ForbiddenPattern::N4: return pattern_n4();
    case ForbiddenPattern::M5: return pattern_m5();
    case ForbiddenPattern::N4Reversed: return pattern_n4_reversed();
    case ForbiddenPattern::M5Reversed: return pattern_m5_reversed();
    }
    throw internal_error("unknown pattern");
}

inline std::string pattern_name(ForbiddenPattern p) {
    switch (p) {
    case ForbiddenPattern::K3: return "k3";
    case ForbiddenPattern::N4: return "n4";
    case ForbiddenPattern::M5: return "m5";
    case ForbiddenPattern::N4Reversed: return "n4r";
    case ForbiddenPattern::M5Reversed: return "m5r";
    }
    throw internal_error("unknown pattern");
}

} // namespace nustab
