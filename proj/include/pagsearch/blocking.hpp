#pragma once

#include <optional>
#include <span>

#include "pagsearch/graph.hpp"

namespace pagsearch {

struct BlockRequest {
    int x = -1;
    int y = -1;
    std::vector<int> containing;    // must end up inside the blocking set
    std::vector<int> not_followed;  // never traversed, never conditioned on
    int max_path_length = -1;       // edges per branch; -1 = unbounded
    long *step_counter = nullptr;   // optional: counts exploration calls
};

enum class StepVerdict { Blocked, Unblockable };

/// Either a blocking set (sorted) or nullopt when no graphical sepset exists.
using BlockResult = std::optional<std::vector<int>>;

/// Builds a conditioning set that blocks all blockable m-connecting paths
/// between x and y, ignoring the direct x-y edge on the first hop. Noncollider
/// nodes are inserted on demand while exploring paths; exploration of a
/// neighbor first tries to certify blocking without conditioning on it, then
/// with it. Budget exhaustion counts as unblockable on that branch.
BlockResult block_paths_recursively(const MixedGraph &g, const BlockRequest &req);
BlockResult block_paths_recursively(const MixedGraph &g, const BlockRequest &req,
                                    const AncestorIndex &anc);

/// Single exploration step, exposed for tests: decides whether every a~>y
/// continuation through b can be blocked. `blocking` and `path` are live
/// state; nodes may be added to `blocking` (and are removed again when the
/// branch backtracks), `path` membership of b is restored before return.
StepVerdict find_path_to_target(const MixedGraph &g, const AncestorIndex &anc, int a, int b, int y,
                                std::vector<int> &path, std::vector<int> &blocking,
                                std::span<const int> forbidden, int max_path_length);

}  // namespace pagsearch
