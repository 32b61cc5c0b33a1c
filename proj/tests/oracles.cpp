#include "oracles.hpp"

#include <algorithm>

#include "pagsearch/separation.hpp"

namespace pagsearch::oracles {

bool path_blocked(const MixedGraph &g, const std::vector<int> &path, std::span<const int> cond) {
    auto in_cond = [&](int v) { return std::find(cond.begin(), cond.end(), v) != cond.end(); };
    for (size_t i = 1; i + 1 < path.size(); ++i) {
        int a = path[i - 1], b = path[i], c = path[i + 1];
        if (is_def_collider(g, a, b, c)) {
            bool active = false;
            for (int d : descendants(g, b))
                if (in_cond(d)) active = true;
            if (!active) return true;
        } else {
            if (in_cond(b)) return true;
        }
    }
    return false;
}

bool brute_m_connected(const MixedGraph &g, int x, int y, std::span<const int> cond) {
    for (const auto &path : all_paths(g, x, y, g.num_nodes()))
        if (!path_blocked(g, path, cond)) return true;
    return false;
}

bool brute_m_separated(const MixedGraph &g, int x, int y, std::span<const int> cond) {
    return !g.has_edge(x, y) && !brute_m_connected(g, x, y, cond);
}

bool moral_d_separated(const MixedGraph &dag, int x, int y, std::span<const int> cond) {
    if (dag.has_edge(x, y)) return false;
    // Ancestral node set of {x, y} union cond.
    std::set<int> keep;
    auto absorb = [&](int v) {
        for (int a : ancestors(dag, v)) keep.insert(a);
    };
    absorb(x);
    absorb(y);
    for (int v : cond) absorb(v);
    // Moralize: undirected edges between adjacent pairs and co-parents.
    int n = dag.num_nodes();
    std::vector<std::vector<bool>> und(n, std::vector<bool>(n, false));
    for (const Edge &e : dag.edges())
        if (keep.count(e.a) && keep.count(e.b)) und[e.a][e.b] = und[e.b][e.a] = true;
    for (int v : keep) {
        auto pars = dag.parents(v);
        for (size_t i = 0; i < pars.size(); ++i)
            for (size_t j = i + 1; j < pars.size(); ++j)
                if (keep.count(pars[i]) && keep.count(pars[j]))
                    und[pars[i]][pars[j]] = und[pars[j]][pars[i]] = true;
    }
    // Reachability avoiding conditioned nodes.
    std::vector<bool> blocked(n, false), seen(n, false);
    for (int v : cond) blocked[v] = true;
    std::vector<int> stack{x};
    seen[x] = true;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (v == y) return false;
        for (int u = 0; u < n; ++u) {
            if (!und[v][u] || seen[u] || blocked[u]) continue;
            seen[u] = true;
            stack.push_back(u);
        }
    }
    return true;
}

std::vector<int> brute_possible_dsep(const MixedGraph &g, int a, int b) {
    std::set<int> found;
    for (int v = 0; v < g.num_nodes(); ++v) {
        if (v == a || v == b) continue;
        for (const auto &path : all_paths(g, a, v, g.num_nodes())) {
            bool ok = true;
            for (size_t i = 1; i + 1 < path.size() && ok; ++i) {
                int p = path[i - 1], c = path[i], m = path[i + 1];
                if (is_def_collider(g, p, c, m)) continue;
                if (!is_definite_noncollider(g, p, c, m) && g.has_edge(p, m)) continue;
                ok = false;
            }
            if (ok) {
                found.insert(v);
                break;
            }
        }
    }
    return std::vector<int>(found.begin(), found.end());
}

bool brute_has_inducing_path(const MixedGraph &g, int x, int y, std::span<const int> selection) {
    std::vector<int> targets{x, y};
    targets.insert(targets.end(), selection.begin(), selection.end());
    AncestorIndex anc(g);
    for (const auto &path : all_paths(g, x, y, g.num_nodes())) {
        bool ok = true;
        for (size_t i = 1; i + 1 < path.size() && ok; ++i) {
            if (!is_def_collider(g, path[i - 1], path[i], path[i + 1])) ok = false;
            else if (!anc.is_ancestor_of_any(path[i], targets)) ok = false;
        }
        if (ok) return true;
    }
    return false;
}

bool brute_inducing_rel_latents(const MixedGraph &dag, int x, int y) {
    AncestorIndex anc(dag);
    std::vector<int> targets{x, y};
    for (const auto &path : all_paths(dag, x, y, dag.num_nodes())) {
        bool ok = true;
        for (size_t i = 1; i + 1 < path.size() && ok; ++i) {
            int v = path[i];
            bool collider = is_def_collider(dag, path[i - 1], v, path[i + 1]);
            if (!collider && !dag.is_latent(v)) ok = false;
            if (collider && !anc.is_ancestor_of_any(v, targets)) ok = false;
        }
        if (ok) return true;
    }
    return false;
}

std::vector<std::vector<int>> brute_disc_paths(const MixedGraph &g, int w, int y, bool strict) {
    std::vector<std::vector<int>> out;
    if (!g.has_edge(w, y)) return out;
    if (strict && !g.is_parent(w, y)) return out;
    if (!strict && g.is_parent(y, w)) return out;
    for (int x = 0; x < g.num_nodes(); ++x) {
        if (x == w || x == y) continue;
        for (const auto &path : all_paths(g, x, y, g.num_nodes())) {
            if (path.size() < 4) continue;
            int v = path[path.size() - 2];
            if (v == w) continue;
            // w must be the interior collider adjacent to v.
            if (path[path.size() - 3] != w) continue;
            if (strict && g.has_edge(x, y)) continue;
            if (g.end_at(v, y) != Endpoint::Circle || g.end_at(y, v) != Endpoint::Arrow) continue;
            bool ok = true;
            for (size_t i = 1; i + 2 < path.size() && ok; ++i) {
                int n2 = path[i];
                if (!is_def_collider(g, path[i - 1], n2, path[i + 1])) ok = false;
                else if (strict && !g.is_parent(n2, y)) ok = false;
                else if (!strict && (!g.has_edge(n2, y) || g.is_parent(y, n2))) ok = false;
            }
            if (ok) out.push_back(path);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::vector<int>> brute_circle_paths(const MixedGraph &g, int x, int y) {
    std::vector<std::vector<int>> out;
    for (const auto &path : all_paths(g, x, y, g.num_nodes())) {
        if (path.size() == 2) continue;
        bool ok = true;
        for (size_t i = 0; i + 1 < path.size() && ok; ++i) {
            if (g.end_at(path[i], path[i + 1]) != Endpoint::Circle ||
                g.end_at(path[i + 1], path[i]) != Endpoint::Circle)
                ok = false;
        }
        if (ok) out.push_back(path);
    }
    return out;
}

bool is_uncovered(const MixedGraph &g, const std::vector<int> &path) {
    for (size_t i = 1; i + 1 < path.size(); ++i)
        if (g.has_edge(path[i - 1], path[i + 1])) return false;
    return true;
}

std::optional<std::vector<int>> brute_find_separator(const MixedGraph &g, int x, int y,
                                                     const std::vector<int> &pool, int max_size) {
    int n = static_cast<int>(pool.size());
    int cap = max_size < 0 ? n : std::min(max_size, n);
    for (int k = 0; k <= cap; ++k) {
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            std::vector<int> s;
            for (int i : idx) s.push_back(pool[i]);
            if (brute_m_separated(g, x, y, s)) return s;
            if (k == 0) break;
            int i = k - 1;
            while (i >= 0 && idx[i] == n - k + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return std::nullopt;
}

MixedGraph random_dag(Rng &rng, int nodes, int edges, int latents) {
    MixedGraph g;
    for (int i = 0; i < nodes; ++i) g.add_node("N" + std::to_string(i + 1), false);
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < nodes; ++i)
        for (int j = i + 1; j < nodes; ++j) pairs.emplace_back(i, j);
    rng.shuffle(pairs);
    int count = std::min<int>(edges, static_cast<int>(pairs.size()));
    for (int k = 0; k < count; ++k)
        g.add_edge(pairs[k].first, pairs[k].second, Endpoint::Tail, Endpoint::Arrow);
    std::vector<int> order(nodes);
    for (int i = 0; i < nodes; ++i) order[i] = i;
    rng.shuffle(order);
    for (int i = 0; i < latents && i < nodes; ++i) g.set_latent(order[i], true);
    return g;
}

MixedGraph random_mag(Rng &rng, int measured, int latents, int edges) {
    while (true) {
        MixedGraph dag = random_dag(rng, measured + latents, edges, latents);
        MixedGraph mag = latent_project(dag);
        if (mag.num_nodes() == measured) return mag;
    }
}

MixedGraph random_marked_graph(Rng &rng, int nodes, int edges) {
    MixedGraph g;
    for (int i = 0; i < nodes; ++i) g.add_node("N" + std::to_string(i + 1), false);
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < nodes; ++i)
        for (int j = i + 1; j < nodes; ++j) pairs.emplace_back(i, j);
    rng.shuffle(pairs);
    auto mark = [&] {
        int r = rng.uniform_int(0, 2);
        return r == 0 ? Endpoint::Tail : r == 1 ? Endpoint::Arrow : Endpoint::Circle;
    };
    int count = std::min<int>(edges, static_cast<int>(pairs.size()));
    for (int k = 0; k < count; ++k) g.add_edge(pairs[k].first, pairs[k].second, mark(), mark());
    return g;
}

}  // namespace pagsearch::oracles
