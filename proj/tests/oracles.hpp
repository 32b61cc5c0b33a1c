#pragma once

// Definition-level brute-force oracles for the property tests. These walk
// explicitly enumerated simple paths and must stay independent of the
// reachability-based implementations they check.

#include <optional>
#include <set>
#include <span>
#include <vector>

#include "pagsearch/graph.hpp"
#include "pagsearch/rng.hpp"

namespace pagsearch::oracles {

bool path_blocked(const MixedGraph &g, const std::vector<int> &path, std::span<const int> cond);

/// m-connection by exhaustive path enumeration: some unblocked path exists.
bool brute_m_connected(const MixedGraph &g, int x, int y, std::span<const int> cond);
bool brute_m_separated(const MixedGraph &g, int x, int y, std::span<const int> cond);

/// d-separation for DAGs via the moralized ancestral graph; a route fully
/// independent of both path enumeration and reachability.
bool moral_d_separated(const MixedGraph &dag, int x, int y, std::span<const int> cond);

/// Literal Possible-D-SEP: nodes v != a, b on a simple path from a whose
/// every interior triple has a collider middle, or a non-definite-noncollider
/// middle in a triangle.
std::vector<int> brute_possible_dsep(const MixedGraph &g, int a, int b);

bool brute_has_inducing_path(const MixedGraph &g, int x, int y, std::span<const int> selection);

/// Inducing path relative to the latent set: measured interiors must be
/// colliders; every interior collider must be an ancestor of an endpoint.
bool brute_inducing_rel_latents(const MixedGraph &dag, int x, int y);

/// All full paths <x, ..., v, y> that qualify as (pre-)discriminating for the
/// seed pair (w, y) under the given mode.
std::vector<std::vector<int>> brute_disc_paths(const MixedGraph &g, int w, int y, bool strict);

/// All circle-only simple paths from x to y (excluding the direct edge).
std::vector<std::vector<int>> brute_circle_paths(const MixedGraph &g, int x, int y);

bool is_uncovered(const MixedGraph &g, const std::vector<int> &path);

/// Exhaustive separator search over subsets of a candidate pool, ascending
/// size; uses brute m-separation.
std::optional<std::vector<int>> brute_find_separator(const MixedGraph &g, int x, int y,
                                                     const std::vector<int> &pool, int max_size);

// --- random graph generators -------------------------------------------

MixedGraph random_dag(Rng &rng, int nodes, int edges, int latents = 0);

/// Latent projection of a random DAG: a random MAG.
MixedGraph random_mag(Rng &rng, int measured, int latents, int edges);

/// Random graph with arbitrary circle/tail/arrow marks (no semantics).
MixedGraph random_marked_graph(Rng &rng, int nodes, int edges);

}  // namespace pagsearch::oracles
