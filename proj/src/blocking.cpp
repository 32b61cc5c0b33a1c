#include "pagsearch/blocking.hpp"

#include <algorithm>
#include <stdexcept>

#include "pagsearch/separation.hpp"

namespace pagsearch {

namespace {

bool contains(std::span<const int> xs, int v) {
    return std::find(xs.begin(), xs.end(), v) != xs.end();
}

struct BlockingSearch {
    const MixedGraph &g;
    const AncestorIndex &anc;
    int y;
    std::span<const int> forbidden;
    int max_len;  // edges per branch, -1 unbounded
    long *steps = nullptr;

    std::vector<int> &path;      // nodes on the current branch, path[0] == x
    std::vector<int> &blocking;  // the live conditioning set B

    // Adjacent nodes of b that a path entering b from a can continue to,
    // minus the current path and the forbidden set.
    std::vector<int> reachable_from(int a, int b) const {
        std::vector<int> out;
        for (int c : g.adjacent(b)) {
            if (c == a) continue;
            if (contains(path, c) || contains(forbidden, c)) continue;
            if (reachable_step(g, a, b, c, blocking, anc)) out.push_back(c);
        }
        return out;
    }

    StepVerdict explore(int a, int b) {
        if (steps) ++*steps;
        if (b == y) return StepVerdict::Unblockable;
        if (contains(path, b)) return StepVerdict::Unblockable;  // cycle guard
        if (max_len != -1 && static_cast<int>(path.size()) > max_len)
            return StepVerdict::Unblockable;  // budget exhausted, conservative
        path.push_back(b);

        if (g.is_latent(b) || contains(blocking, b)) {
            // b cannot (or need not) be conditioned on; continuations must
            // block on their own.
            for (int c : reachable_from(a, b)) {
                if (explore(b, c) == StepVerdict::Unblockable) {
                    path.pop_back();
                    return StepVerdict::Unblockable;
                }
            }
            path.pop_back();
            return StepVerdict::Blocked;
        }

        // First without conditioning on b.
        bool ok = true;
        for (int c : reachable_from(a, b)) {
            if (explore(b, c) == StepVerdict::Unblockable) {
                ok = false;
                break;
            }
        }
        if (ok) {
            path.pop_back();
            return StepVerdict::Blocked;
        }

        // Then with b in the conditioning set. This closes the noncollider
        // continuations but opens collider continuations into b.
        blocking.push_back(b);
        ok = true;
        for (int c : reachable_from(a, b)) {
            if (explore(b, c) == StepVerdict::Unblockable) {
                ok = false;
                break;
            }
        }
        if (ok) {
            path.pop_back();
            return StepVerdict::Blocked;  // b stays in the blocking set
        }
        blocking.pop_back();  // backtrack
        path.pop_back();
        return StepVerdict::Unblockable;
    }
};

// An m-connecting walk from x to y of length >= 2 under the current blocking
// set, ignoring forbidden nodes. Used to re-check a candidate set: additions
// made late in the exploration can activate colliders on branches that were
// scanned earlier, so one pass over the first hops is not conclusive.
bool open_connection_ignoring_direct_edge(const MixedGraph &g, const AncestorIndex &anc, int x,
                                          int y, std::span<const int> blocking,
                                          std::span<const int> forbidden) {
    int n = g.num_nodes();
    std::vector<bool> visited(static_cast<size_t>(n) * n, false);
    auto id = [n](int a, int b) { return static_cast<size_t>(a) * n + b; };
    std::vector<std::pair<int, int>> stack;
    for (int b : g.adjacent(x)) {
        if (b == y || contains(forbidden, b)) continue;
        stack.emplace_back(x, b);
        visited[id(x, b)] = true;
    }
    while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        for (int c : g.adjacent(b)) {
            if (c == a || c == x || contains(forbidden, c)) continue;
            if (!reachable_step(g, a, b, c, blocking, anc)) continue;
            if (c == y) return true;
            if (!visited[id(b, c)]) {
                visited[id(b, c)] = true;
                stack.emplace_back(b, c);
            }
        }
    }
    return false;
}

}  // namespace

StepVerdict find_path_to_target(const MixedGraph &g, const AncestorIndex &anc, int a, int b, int y,
                                std::vector<int> &path, std::vector<int> &blocking,
                                std::span<const int> forbidden, int max_path_length) {
    BlockingSearch search{g, anc, y, forbidden, max_path_length, nullptr, path, blocking};
    return search.explore(a, b);
}

BlockResult block_paths_recursively(const MixedGraph &g, const BlockRequest &req) {
    AncestorIndex anc(g);
    return block_paths_recursively(g, req, anc);
}

BlockResult block_paths_recursively(const MixedGraph &g, const BlockRequest &req,
                                    const AncestorIndex &anc) {
    int x = req.x, y = req.y;
    if (x == y) throw std::invalid_argument("block_paths_recursively: endpoints must differ");
    for (int v : req.containing)
        if (v == x || v == y || contains(req.not_followed, v))
            throw std::invalid_argument("block_paths_recursively: invalid containing set");
    if (contains(req.not_followed, x) || contains(req.not_followed, y))
        throw std::invalid_argument("block_paths_recursively: endpoints in not_followed");

    std::vector<int> blocking = req.containing;
    std::vector<int> path{x};
    // Explore to a fixed point: a round that adds nothing sees the final set
    // consistently, so the connection check below must then pass.
    while (true) {
        size_t before = blocking.size();
        for (int b : g.adjacent(x)) {
            if (b == y) continue;  // ignore the direct edge on the first hop
            if (contains(req.not_followed, b)) continue;
            BlockingSearch search{g,    anc,      y,    req.not_followed, req.max_path_length,
                                  req.step_counter, path, blocking};
            if (search.explore(x, b) == StepVerdict::Unblockable) return std::nullopt;
        }
        if (!open_connection_ignoring_direct_edge(g, anc, x, y, blocking, req.not_followed))
            break;
        if (blocking.size() == before) return std::nullopt;  // cannot be closed
    }
    std::sort(blocking.begin(), blocking.end());
    return blocking;
}

}  // namespace pagsearch
