#include "pagsearch/separation.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace pagsearch {

bool reachable_step(const MixedGraph &g, int a, int b, int c, std::span<const int> cond,
                    const AncestorIndex &anc) {
    bool collider = is_def_collider(g, a, b, c);
    bool in_cond = std::find(cond.begin(), cond.end(), b) != cond.end();
    if ((!collider || g.is_underline(a, b, c)) && !in_cond) return true;
    return collider && anc.is_ancestor_of_any(b, cond);
}

bool MsepContext::m_connected(int x, int y, std::span<const int> z) const {
    if (x == y) throw std::invalid_argument("m_connected: endpoints must differ");
    if (g_.has_edge(x, y)) return true;
    int n = g_.num_nodes();
    std::vector<bool> visited(static_cast<size_t>(n) * n, false);
    auto id = [n](int a, int b) { return static_cast<size_t>(a) * n + b; };
    std::deque<std::pair<int, int>> queue;
    for (int b : g_.adjacent(x)) {
        queue.emplace_back(x, b);
        visited[id(x, b)] = true;
    }
    while (!queue.empty()) {
        auto [a, b] = queue.front();
        queue.pop_front();
        for (int c : g_.adjacent(b)) {
            if (c == a) continue;
            if (!reachable_step(g_, a, b, c, z, anc_)) continue;
            if (c == y) return true;
            if (!visited[id(b, c)]) {
                visited[id(b, c)] = true;
                queue.emplace_back(b, c);
            }
        }
    }
    return false;
}

bool m_separated(const MixedGraph &g, int x, int y, std::span<const int> z) {
    MsepContext ctx(g);
    return ctx.m_separated(x, y, z);
}

bool m_separated(const MixedGraph &g, const SeparationQuery &q) {
    return m_separated(g, q.x, q.y, q.z);
}

std::vector<int> possible_dsep(const MixedGraph &g, int a, int b) {
    if (a == b) throw std::invalid_argument("possible_dsep: nodes must differ");
    int n = g.num_nodes();
    std::vector<bool> visited(static_cast<size_t>(n) * n, false);
    auto id = [n](int p, int c) { return static_cast<size_t>(p) * n + c; };
    std::deque<std::pair<int, int>> queue;
    std::set<int> found;
    for (int c : g.adjacent(a)) {
        queue.emplace_back(a, c);
        visited[id(a, c)] = true;
        found.insert(c);
    }
    while (!queue.empty()) {
        auto [p, c] = queue.front();
        queue.pop_front();
        for (int m : g.adjacent(c)) {
            if (m == p || m == a) continue;
            bool ok = is_def_collider(g, p, c, m) ||
                      (!is_definite_noncollider(g, p, c, m) && g.has_edge(p, m));
            if (!ok) continue;
            found.insert(m);
            if (!visited[id(c, m)]) {
                visited[id(c, m)] = true;
                queue.emplace_back(c, m);
            }
        }
    }
    found.erase(a);
    found.erase(b);
    return std::vector<int>(found.begin(), found.end());
}

bool has_inducing_path(const MixedGraph &g, int x, int y, std::span<const int> selection) {
    if (x == y) throw std::invalid_argument("has_inducing_path: endpoints must differ");
    if (g.has_edge(x, y)) return true;
    AncestorIndex anc(g);
    std::vector<int> targets{x, y};
    targets.insert(targets.end(), selection.begin(), selection.end());
    auto collider_ok = [&](int v) { return anc.is_ancestor_of_any(v, targets); };

    // Interior nodes must be colliders, so both path edges at an interior node
    // carry arrowheads; node-level BFS is exact.
    std::vector<bool> visited(g.num_nodes(), false);
    std::deque<int> queue;
    for (int v : g.adjacent(x)) {
        if (v == y) return true;
        if (g.end_at(v, x) != Endpoint::Arrow) continue;
        if (!collider_ok(v)) continue;
        visited[v] = true;
        queue.push_back(v);
    }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int w : g.adjacent(v)) {
            if (g.end_at(v, w) != Endpoint::Arrow) continue;  // v must stay a collider
            if (w == y) return true;
            if (w == x || visited[w]) continue;
            if (g.end_at(w, v) != Endpoint::Arrow) continue;
            if (!collider_ok(w)) continue;
            visited[w] = true;
            queue.push_back(w);
        }
    }
    return false;
}

MixedGraph latent_project(const MixedGraph &dag) {
    if (!is_dag(dag)) throw std::invalid_argument("latent_project: input is not a DAG");
    std::vector<int> measured = dag.measured_nodes();
    MixedGraph mag;
    std::vector<int> back(dag.num_nodes(), -1);
    for (size_t i = 0; i < measured.size(); ++i) {
        mag.add_node(dag.name(measured[i]), false);
        back[measured[i]] = static_cast<int>(i);
    }
    AncestorIndex anc(dag);
    MsepContext ctx(dag);
    // x and y are adjacent in the projection iff they are d-connected given
    // all measured ancestors of {x, y} other than x, y themselves.
    for (size_t i = 0; i < measured.size(); ++i) {
        for (size_t j = i + 1; j < measured.size(); ++j) {
            int x = measured[i], y = measured[j];
            std::vector<int> cond;
            for (int v : measured) {
                if (v == x || v == y) continue;
                if (anc.is_ancestor(v, x) || anc.is_ancestor(v, y)) cond.push_back(v);
            }
            if (!ctx.m_connected(x, y, cond)) continue;
            Endpoint at_x = anc.is_ancestor(x, y) ? Endpoint::Tail : Endpoint::Arrow;
            Endpoint at_y = anc.is_ancestor(y, x) ? Endpoint::Tail : Endpoint::Arrow;
            mag.add_edge(back[x], back[y], at_x, at_y);
        }
    }
    return mag;
}

}  // namespace pagsearch
