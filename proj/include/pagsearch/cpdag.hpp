#pragma once

#include <optional>

#include "pagsearch/graph.hpp"
#include "pagsearch/stats.hpp"

namespace pagsearch {

/// Parents of target given the predecessors before it in perm: greedy forward
/// adds by best gain, then backward removes until stable. Index-order tie
/// breaks keep the result deterministic.
std::vector<int> grow_shrink_parents(std::span<const int> perm, int target, const Score &score);
std::vector<int> grow_shrink_over_prefix(std::span<const int> prefix, int target,
                                         const Score &score);

struct BossParams {
    uint64_t seed = 0;
    int num_starts = 1;
};

struct BossResult {
    MixedGraph dag;
    std::vector<int> order;
    double total_score = 0.0;
    double start_score = 0.0;  // score of the initial permutation (best start)
};

/// Best-order search: each variable is relocated to its best position until
/// no relocation improves the total score of the induced DAG.
BossResult boss_dag(const Score &score, const std::vector<std::string> &names, BossParams params);

/// boss_dag followed by CPDAG conversion.
MixedGraph boss_search(const Score &score, const std::vector<std::string> &names,
                       BossParams params);

/// Compelled edges directed, reversible edges undirected: orient unshielded
/// colliders, then close under Meek propagation.
MixedGraph dag_to_cpdag(const MixedGraph &dag);

/// Consistent extension of a partially directed graph (directed + undirected
/// edges) into a DAG with the same v-structures, or nullopt.
std::optional<MixedGraph> pdag_to_dag(const MixedGraph &pdag);

bool is_valid_cpdag(const MixedGraph &g);

}  // namespace pagsearch
