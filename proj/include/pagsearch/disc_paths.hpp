#pragma once

#include "pagsearch/graph.hpp"

namespace pagsearch {

/// A (pre-)discriminating path <x, body..., v, y>. The body holds the
/// interior colliders in path order, so body.back() == w, the collider
/// adjacent to v seeded from the (w, y) pair.
struct DiscPath {
    int x = -1;
    std::vector<int> body;
    int v = -1;
    int y = -1;
    int w = -1;

    std::vector<int> full_path() const;
    bool operator<(const DiscPath &o) const;
    bool operator==(const DiscPath &o) const;
};

struct DiscMode {
    bool strict = true;  // strict requires w -> y and x,y nonadjacent
};

/// Validates a candidate path assembled by the BFS: distinctness, (strict)
/// x,y nonadjacency, v adjacent to y, w on the interior, and every interior
/// node a definite collider that is a parent of y (strict) or adjacent to y
/// without y -> it (relaxed). Throws logic_error if the interior collider
/// structure does not put an arrowhead at w from v; that indicates a bug in
/// the enumeration, not bad user input.
bool exists_discriminating_path(const MixedGraph &g, int x, int w, int v, int y,
                                std::span<const int> body, DiscMode mode);

/// All (pre-)discriminating paths seeded at the adjacent pair (w, y):
/// candidates v with circle at v and arrowhead at y on the v-y edge, grown
/// upstream by BFS over nodes with arrows into the current tip. max_len
/// bounds the body size (-1 = unbounded).
std::vector<DiscPath> list_discriminating_paths(const MixedGraph &g, int w, int y, int max_len,
                                                DiscMode mode);

std::vector<DiscPath> list_discriminating_paths_all_pairs(const MixedGraph &g, int max_len,
                                                          DiscMode mode);

/// Relaxed-mode enumeration of the paths that could become discriminating
/// for the adjacent pair {x, y} if the x-y edge were removed; both endpoint
/// roles are tried. The v nodes of the result form the candidate set used to
/// forbid traversal during recursive blocking.
std::vector<DiscPath> list_pre_discriminating_paths(const MixedGraph &g, int x, int y,
                                                    int max_len);

}  // namespace pagsearch
