#pragma once

#include <span>

#include "pagsearch/graph.hpp"

namespace pagsearch {

struct SeparationQuery {
    int x, y;
    std::vector<int> z;
};

/// Single traversal step of the m-separation reachability relation: can a
/// path entering b from a continue to c given conditioning set `cond`?
bool reachable_step(const MixedGraph &g, int a, int b, int c, std::span<const int> cond,
                    const AncestorIndex &anc);

/// Reusable m-separation context for one immutable graph snapshot. Builds the
/// ancestor index eagerly; queries are pure and thread-safe afterwards.
class MsepContext {
public:
    explicit MsepContext(const MixedGraph &g) : g_(g), anc_(g) {}
    bool m_connected(int x, int y, std::span<const int> z) const;
    bool m_separated(int x, int y, std::span<const int> z) const {
        return !g_.has_edge(x, y) && !m_connected(x, y, z);
    }
    const MixedGraph &graph() const { return g_; }
    const AncestorIndex &ancestry() const { return anc_; }

private:
    MixedGraph g_;
    AncestorIndex anc_;
};

bool m_separated(const MixedGraph &g, const SeparationQuery &q);
bool m_separated(const MixedGraph &g, int x, int y, std::span<const int> z);

/// Possible-D-SEP of a relative to b: nodes v != a reachable from a along a
/// path whose every interior triple has a collider middle node, or a middle
/// node that is not a definite noncollider while the triple is a triangle.
std::vector<int> possible_dsep(const MixedGraph &g, int a, int b);

/// True iff a path from x to y exists whose every interior node is a collider
/// and an ancestor of x, y, or a selection node.
bool has_inducing_path(const MixedGraph &g, int x, int y, std::span<const int> selection);

/// Latent projection of a DAG onto its measured nodes: adjacency iff an
/// inducing path relative to the latent set exists; mark at X on X-Y is a
/// tail iff X is an ancestor of Y in the DAG, else an arrow.
MixedGraph latent_project(const MixedGraph &dag);

}  // namespace pagsearch
