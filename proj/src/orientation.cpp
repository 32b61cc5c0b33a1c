#include "pagsearch/orientation.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

#include "pagsearch/blocking.hpp"
#include "pagsearch/disc_paths.hpp"
#include "pagsearch/separation.hpp"
#include "pagsearch/util.hpp"

namespace pagsearch {

RuleConfig RuleConfig::full() {
    RuleConfig cfg;
    cfg.enabled.fill(true);
    return cfg;
}

RuleConfig RuleConfig::defaults_for(int num_nodes) {
    RuleConfig cfg = full();
    if (num_nodes > 25) {
        cfg.r4_max_disc_len = 4;
        cfg.max_block_len = 5;
    }
    return cfg;
}

RuleConfig RuleConfig::reduced_for_dag(int num_nodes) {
    RuleConfig cfg = defaults_for(num_nodes);
    cfg.enabled[5] = cfg.enabled[6] = cfg.enabled[7] = false;
    cfg.r4_max_disc_len = 4;
    return cfg;
}

std::string to_string(LegalityViolation::Kind kind) {
    switch (kind) {
        case LegalityViolation::Kind::AlmostCycle: return "ALMOST_CYCLE";
        case LegalityViolation::Kind::DirectedCycle: return "DIRECTED_CYCLE";
        case LegalityViolation::Kind::NonMaximal: return "NON_MAXIMAL";
        case LegalityViolation::Kind::RuleNoncompliant: return "RULE_NONCOMPLIANT";
    }
    return "?";
}

void reset_all_marks_to_circles(MixedGraph &g) {
    for (const Edge &e : g.edges()) {
        g.set_end_at(e.a, e.b, Endpoint::Circle);
        g.set_end_at(e.b, e.a, Endpoint::Circle);
    }
}

namespace {

bool orient_collider_marks(MixedGraph &g, int a, int b, int c) {
    bool changed = false;
    if (g.end_at(b, a) != Endpoint::Arrow) {
        g.set_end_at(b, a, Endpoint::Arrow);
        changed = true;
    }
    if (g.end_at(b, c) != Endpoint::Arrow) {
        g.set_end_at(b, c, Endpoint::Arrow);
        changed = true;
    }
    return changed;
}

}  // namespace

bool orient_colliders_from_reference(MixedGraph &g, const MixedGraph &reference) {
    bool changed = false;
    for (int b = 0; b < g.num_nodes(); ++b) {
        const auto &nbrs = g.adjacent(b);
        for (size_t i = 0; i < nbrs.size(); ++i) {
            for (size_t j = i + 1; j < nbrs.size(); ++j) {
                int a = nbrs[i], c = nbrs[j];
                if (g.has_edge(a, c)) continue;
                if (!reference.has_edge(a, b) || !reference.has_edge(b, c)) continue;
                if (reference.end_at(b, a) == Endpoint::Arrow &&
                    reference.end_at(b, c) == Endpoint::Arrow)
                    changed |= orient_collider_marks(g, a, b, c);
            }
        }
    }
    return changed;
}

bool orient_colliders_from_cpdag_and_sepsets(MixedGraph &g, const MixedGraph *cpdag,
                                             const SepsetMap *sepsets) {
    bool changed = false;
    for (int b = 0; b < g.num_nodes(); ++b) {
        const auto &nbrs = g.adjacent(b);
        for (size_t i = 0; i < nbrs.size(); ++i) {
            for (size_t j = i + 1; j < nbrs.size(); ++j) {
                int a = nbrs[i], c = nbrs[j];
                if (g.has_edge(a, c)) continue;
                bool collider = false;
                if (cpdag && cpdag->is_parent(a, b) && cpdag->is_parent(c, b)) collider = true;
                if (!collider && sepsets) {
                    const std::vector<int> *s = sepsets->find(a, c);
                    if (s && std::find(s->begin(), s->end(), b) == s->end()) collider = true;
                }
                if (collider) changed |= orient_collider_marks(g, a, b, c);
            }
        }
    }
    return changed;
}

bool circle_reachable(const MixedGraph &g, int x, int y) {
    std::vector<bool> seen(g.num_nodes(), false);
    std::deque<int> queue{x};
    seen[x] = true;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int u : g.adjacent(v)) {
            if (g.end_at(v, u) != Endpoint::Circle || g.end_at(u, v) != Endpoint::Circle)
                continue;
            if (u == y) return true;
            if (!seen[u]) {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    return false;
}

namespace {

bool is_circle_circle(const MixedGraph &g, int a, int b) {
    return g.end_at(a, b) == Endpoint::Circle && g.end_at(b, a) == Endpoint::Circle;
}

// Potentially directed step u toward v: no arrowhead back into u, no tail at v.
bool pd_step(const MixedGraph &g, int u, int v) {
    return g.end_at(u, v) != Endpoint::Arrow && g.end_at(v, u) != Endpoint::Tail;
}

/// DFS over simple uncovered paths with a per-edge admissibility predicate.
/// Visits paths in index order and calls fn on each complete path; stops when
/// fn returns true.
template <typename StepOk, typename Fn>
bool uncovered_path_dfs(const MixedGraph &g, std::vector<int> &path, std::vector<bool> &on_path,
                        int target, const StepOk &step_ok, Fn &&fn) {
    int cur = path.back();
    if (cur == target) return fn(path);
    for (int nxt : g.adjacent(cur)) {
        if (on_path[nxt]) continue;
        if (!step_ok(cur, nxt)) continue;
        if (path.size() >= 2 && g.has_edge(path[path.size() - 2], nxt)) continue;  // covered
        path.push_back(nxt);
        on_path[nxt] = true;
        bool done = uncovered_path_dfs(g, path, on_path, target, step_ok, fn);
        on_path[nxt] = false;
        path.pop_back();
        if (done) return true;
    }
    return false;
}

bool exists_uncovered_pd_path(const MixedGraph &g, int from, int first_hop, int target) {
    if (!g.has_edge(from, first_hop) || !pd_step(g, from, first_hop)) return false;
    if (first_hop == target) return true;
    std::vector<int> path{from, first_hop};
    std::vector<bool> on_path(g.num_nodes(), false);
    on_path[from] = on_path[first_hop] = true;
    auto step_ok = [&](int u, int v) { return pd_step(g, u, v); };
    return uncovered_path_dfs(g, path, on_path, target, step_ok,
                              [](const std::vector<int> &) { return true; });
}

}  // namespace

bool r10_uncovered_pd_paths(const MixedGraph &g, int alpha, int gamma) {
    std::vector<int> into_gamma;
    for (int b : g.adjacent(gamma))
        if (b != alpha && g.is_parent(b, gamma)) into_gamma.push_back(b);
    if (into_gamma.size() < 2) return false;
    // First hops from alpha that can start a potentially directed path.
    std::vector<int> hops;
    for (int mu : g.adjacent(alpha))
        if (mu != gamma && pd_step(g, alpha, mu)) hops.push_back(mu);
    if (hops.size() < 2) return false;
    // Cheap filter: both targets must at least be reachable by potentially
    // directed steps before the exact uncovered search runs.
    {
        std::vector<bool> seen(g.num_nodes(), false);
        std::deque<int> queue;
        seen[alpha] = true;
        for (int mu : hops) {
            seen[mu] = true;
            queue.push_back(mu);
        }
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int u : g.adjacent(v)) {
                if (seen[u] || !pd_step(g, v, u)) continue;
                seen[u] = true;
                queue.push_back(u);
            }
        }
        int reachable_targets = 0;
        for (int b : into_gamma)
            if (seen[b]) ++reachable_targets;
        if (reachable_targets < 2) return false;
    }
    for (int beta : into_gamma) {
        for (int theta : into_gamma) {
            if (beta == theta) continue;
            for (int mu : hops) {
                if (!exists_uncovered_pd_path(g, alpha, mu, beta)) continue;
                for (int omega : hops) {
                    if (omega == mu || g.has_edge(mu, omega)) continue;
                    if (exists_uncovered_pd_path(g, alpha, omega, theta)) return true;
                }
            }
        }
    }
    return false;
}

namespace {

// ---------------------------------------------------------------------------
// Final orientation rules R1..R10. Each returns true when it changed a mark;
// scans are in (node index, node index) order so reruns are reproducible.
// ---------------------------------------------------------------------------

bool rule_r1(MixedGraph &g) {
    bool changed = false;
    for (int b = 0; b < g.num_nodes(); ++b) {
        for (int c : g.adjacent(b)) {
            if (g.end_at(b, c) != Endpoint::Circle) continue;
            for (int a : g.adjacent(b)) {
                if (a == c || g.has_edge(a, c)) continue;
                if (g.end_at(b, a) != Endpoint::Arrow) continue;
                g.set_end_at(b, c, Endpoint::Tail);
                g.set_end_at(c, b, Endpoint::Arrow);
                changed = true;
                break;
            }
        }
    }
    return changed;
}

bool rule_r2(MixedGraph &g) {
    bool changed = false;
    for (int a = 0; a < g.num_nodes(); ++a) {
        for (int c : g.adjacent(a)) {
            if (g.end_at(c, a) != Endpoint::Circle) continue;
            for (int b : g.adjacent(a)) {
                if (b == c || !g.has_edge(b, c)) continue;
                bool case1 = g.is_parent(a, b) && g.end_at(c, b) == Endpoint::Arrow;
                bool case2 = g.end_at(b, a) == Endpoint::Arrow && g.is_parent(b, c);
                if (case1 || case2) {
                    g.set_end_at(c, a, Endpoint::Arrow);
                    changed = true;
                    break;
                }
            }
        }
    }
    return changed;
}

bool rule_r3(MixedGraph &g) {
    bool changed = false;
    for (int b = 0; b < g.num_nodes(); ++b) {
        for (int d : g.adjacent(b)) {
            if (g.end_at(b, d) != Endpoint::Circle) continue;
            const auto common = sorted_intersection(g.adjacent(b), g.adjacent(d));
            bool fired = false;
            for (size_t i = 0; i < common.size() && !fired; ++i) {
                for (size_t j = i + 1; j < common.size() && !fired; ++j) {
                    int a = common[i], c = common[j];
                    if (g.has_edge(a, c)) continue;
                    if (g.end_at(b, a) != Endpoint::Arrow || g.end_at(b, c) != Endpoint::Arrow)
                        continue;
                    if (g.end_at(d, a) != Endpoint::Circle || g.end_at(d, c) != Endpoint::Circle)
                        continue;
                    g.set_end_at(b, d, Endpoint::Arrow);
                    changed = true;
                    fired = true;
                }
            }
        }
    }
    return changed;
}

bool circle_reachable_indirect(const MixedGraph &g, int x, int y) {
    std::vector<bool> seen(g.num_nodes(), false);
    std::deque<int> queue;
    for (int u : g.adjacent(x)) {
        if (u == y || !is_circle_circle(g, x, u)) continue;
        seen[u] = true;
        queue.push_back(u);
    }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int u : g.adjacent(v)) {
            if (!is_circle_circle(g, v, u)) continue;
            if (u == y) return true;
            if (!seen[u]) {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    return false;
}

bool rule_r5(MixedGraph &g) {
    for (const Edge &e : g.edges()) {
        int a = e.a, b = e.b;
        if (!is_circle_circle(g, a, b)) continue;
        if (!circle_reachable_indirect(g, a, b)) continue;
        // Uncovered circle path of length >= 3 edges, avoiding the direct
        // edge, whose ends are not adjacent to the opposite first hops.
        std::vector<int> path{a};
        std::vector<bool> on_path(g.num_nodes(), false);
        on_path[a] = true;
        auto step_ok = [&](int u, int v) {
            if (u == a && v == b) return false;  // skip the direct edge
            return is_circle_circle(g, u, v);
        };
        auto accept = [&](const std::vector<int> &p) {
            if (p.size() < 4) return false;
            int mu = p[1], omega = p[p.size() - 2];
            if (g.has_edge(a, omega) || g.has_edge(b, mu)) return false;
            // Orient the edge and the whole path as undirected.
            g.set_end_at(a, b, Endpoint::Tail);
            g.set_end_at(b, a, Endpoint::Tail);
            for (size_t i = 0; i + 1 < p.size(); ++i) {
                g.set_end_at(p[i], p[i + 1], Endpoint::Tail);
                g.set_end_at(p[i + 1], p[i], Endpoint::Tail);
            }
            return true;
        };
        if (uncovered_path_dfs(g, path, on_path, b, step_ok, accept)) return true;
    }
    return false;
}

bool rule_r6(MixedGraph &g) {
    bool changed = false;
    for (int b = 0; b < g.num_nodes(); ++b) {
        bool has_undirected = false;
        for (int a : g.adjacent(b))
            if (g.is_undirected(a, b)) {
                has_undirected = true;
                break;
            }
        if (!has_undirected) continue;
        for (int c : g.adjacent(b)) {
            if (g.end_at(b, c) == Endpoint::Circle && !g.is_undirected(b, c)) {
                g.set_end_at(b, c, Endpoint::Tail);
                changed = true;
            }
        }
    }
    return changed;
}

bool rule_r7(MixedGraph &g) {
    bool changed = false;
    for (int b = 0; b < g.num_nodes(); ++b) {
        for (int c : g.adjacent(b)) {
            if (g.end_at(b, c) != Endpoint::Circle) continue;
            for (int a : g.adjacent(b)) {
                if (a == c || g.has_edge(a, c)) continue;
                if (g.end_at(a, b) == Endpoint::Tail && g.end_at(b, a) == Endpoint::Circle) {
                    g.set_end_at(b, c, Endpoint::Tail);
                    changed = true;
                    break;
                }
            }
        }
    }
    return changed;
}

bool rule_r8(MixedGraph &g) {
    bool changed = false;
    for (int a = 0; a < g.num_nodes(); ++a) {
        for (int c : g.adjacent(a)) {
            if (!(g.end_at(a, c) == Endpoint::Circle && g.end_at(c, a) == Endpoint::Arrow))
                continue;
            for (int b : g.adjacent(a)) {
                if (b == c || !g.has_edge(b, c)) continue;
                // Tail at a toward b suffices for ancestry once b -> c.
                if (g.end_at(a, b) == Endpoint::Tail && g.is_parent(b, c)) {
                    g.set_end_at(a, c, Endpoint::Tail);
                    changed = true;
                    break;
                }
            }
        }
    }
    return changed;
}

bool rule_r9(MixedGraph &g) {
    bool changed = false;
    for (int a = 0; a < g.num_nodes(); ++a) {
        for (int c : g.adjacent(a)) {
            if (!(g.end_at(a, c) == Endpoint::Circle && g.end_at(c, a) == Endpoint::Arrow))
                continue;
            if (!circle_reachable(g, a, c)) continue;  // cheap existence filter
            bool fired = false;
            for (int mu : g.adjacent(a)) {
                if (mu == c || g.has_edge(mu, c)) continue;
                if (!is_circle_circle(g, a, mu)) continue;
                std::vector<int> path{a, mu};
                std::vector<bool> on_path(g.num_nodes(), false);
                on_path[a] = on_path[mu] = true;
                auto step_ok = [&](int u, int v) { return is_circle_circle(g, u, v); };
                auto accept = [](const std::vector<int> &) { return true; };
                if (uncovered_path_dfs(g, path, on_path, c, step_ok, accept)) {
                    g.set_end_at(a, c, Endpoint::Tail);
                    changed = true;
                    fired = true;
                    break;
                }
            }
            if (fired) continue;
        }
    }
    return changed;
}

bool rule_r10(MixedGraph &g) {
    bool changed = false;
    for (int a = 0; a < g.num_nodes(); ++a) {
        for (int c : g.adjacent(a)) {
            if (!(g.end_at(a, c) == Endpoint::Circle && g.end_at(c, a) == Endpoint::Arrow))
                continue;
            if (r10_uncovered_pd_paths(g, a, c)) {
                g.set_end_at(a, c, Endpoint::Tail);
                changed = true;
            }
        }
    }
    return changed;
}

std::vector<DiscPath> disc_paths_for_pair(const MixedGraph &g, int x, int y, int max_len,
                                          DiscMode mode) {
    std::vector<DiscPath> out;
    for (auto [far, near] : {std::pair{x, y}, std::pair{y, x}}) {
        for (int w : g.adjacent(near)) {
            if (w == far) continue;
            for (const DiscPath &p : list_discriminating_paths(g, w, near, max_len, mode))
                if (p.x == far) out.push_back(p);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::optional<std::vector<int>> r4_sepset_adjacency_mode(const MixedGraph &g, int x, int y,
                                                         const OrientationContext &ctx,
                                                         const RuleConfig &cfg) {
    if (ctx.sepsets) {
        const std::vector<int> *s = ctx.sepsets->find(x, y);
        if (s) return *s;
    }
    if (!ctx.tester) return std::nullopt;
    std::optional<std::vector<int>> found;
    for (int anchor : {x, y}) {
        std::vector<int> base = g.adjacent(anchor);
        base.erase(std::remove(base.begin(), base.end(), anchor == x ? y : x), base.end());
        if (for_each_subset_ascending(base, cfg.test_depth, [&](const std::vector<int> &s) {
                if (ctx.tester->test(x, y, s).independent) {
                    found = s;
                    return true;
                }
                return false;
            }))
            return found;
    }
    return std::nullopt;
}

/// One R4 sweep at a fixed point of the other rules: enumerate strict
/// discriminating paths, resolve a sepset per pair, orient the discriminated
/// mark. Returns true after the first change.
bool apply_r4_wave(MixedGraph &g, const OrientationContext &ctx, const RuleConfig &cfg) {
    auto paths = list_discriminating_paths_all_pairs(g, cfg.r4_max_disc_len, DiscMode{true});
    std::map<std::pair<int, int>, std::optional<std::vector<int>>> sepset_cache;
    for (const DiscPath &p : paths) {
        if (g.end_at(p.v, p.y) != Endpoint::Circle) continue;  // already resolved
        auto key = SepsetMap::key(p.x, p.y);
        auto it = sepset_cache.find(key);
        if (it == sepset_cache.end()) {
            std::optional<std::vector<int>> s;
            if (cfg.r4_mode == R4Mode::RecursiveBlocking && ctx.tester)
                s = rule_r4_recursive(g, p.x, p.y, *ctx.tester, cfg);
            else
                s = r4_sepset_adjacency_mode(g, p.x, p.y, ctx, cfg);
            it = sepset_cache.emplace(key, std::move(s)).first;
        }
        if (!it->second.has_value()) continue;
        const std::vector<int> &s = *it->second;
        bool v_in_sepset = std::find(s.begin(), s.end(), p.v) != s.end();
        if (v_in_sepset) {
            g.set_end_at(p.v, p.y, Endpoint::Tail);
            g.set_end_at(p.y, p.v, Endpoint::Arrow);
        } else {
            g.set_end_at(p.v, p.w, Endpoint::Arrow);
            g.set_end_at(p.w, p.v, Endpoint::Arrow);
            g.set_end_at(p.v, p.y, Endpoint::Arrow);
            g.set_end_at(p.y, p.v, Endpoint::Arrow);
        }
        return true;
    }
    return false;
}

}  // namespace

std::optional<std::vector<int>> rule_r4_recursive(const MixedGraph &g, int x, int y,
                                                  const CiTester &tester, const RuleConfig &cfg) {
    auto paths = disc_paths_for_pair(g, x, y, cfg.r4_max_disc_len, DiscMode{true});
    std::set<int> nf_set;
    for (const DiscPath &p : paths)
        if (g.end_at(p.v, p.y) == Endpoint::Circle) nf_set.insert(p.v);
    std::vector<int> nf_cand(nf_set.begin(), nf_set.end());
    std::vector<int> common = sorted_intersection(g.adjacent(x), g.adjacent(y));

    std::optional<std::vector<int>> found;
    std::set<std::vector<int>> tested;
    AncestorIndex anc(g);
    for_each_subset_ascending(nf_cand, cfg.r4_depth, [&](const std::vector<int> &nf) {
        BlockRequest req;
        req.x = x;
        req.y = y;
        req.not_followed = nf;
        req.max_path_length = cfg.max_block_len;
        BlockResult b = block_paths_recursively(g, req, anc);
        if (!b) return false;
        std::vector<int> trim_base = sorted_intersection(common, *b);
        return for_each_subset_ascending(trim_base, cfg.r4_depth, [&](const std::vector<int> &d) {
            for (int c : d)
                if (g.end_at(c, x) == Endpoint::Arrow && g.end_at(c, y) == Endpoint::Arrow)
                    return false;  // never drop a known collider
            std::vector<int> s = sorted_difference(*b, d);
            if (cfg.test_depth != -1 && static_cast<int>(s.size()) > cfg.test_depth) return false;
            if (!tested.insert(s).second) return false;
            if (tester.test(x, y, s).independent) {
                found = s;
                return true;
            }
            return false;
        });
    });
    return found;
}

bool apply_final_rules(MixedGraph &g, const OrientationContext &ctx, const RuleConfig &cfg) {
    bool changed_any = false;
    // Cheap local rules run to a fixed point before each path-search rule
    // wave; R4 runs only once everything else is quiescent.
    auto cheap_pass = [&] {
        bool changed = false;
        if (cfg.enabled[1]) changed |= rule_r1(g);
        if (cfg.enabled[2]) changed |= rule_r2(g);
        if (cfg.enabled[3]) changed |= rule_r3(g);
        if (cfg.enabled[6]) changed |= rule_r6(g);
        if (cfg.enabled[7]) changed |= rule_r7(g);
        if (cfg.enabled[8]) changed |= rule_r8(g);
        return changed;
    };
    auto path_pass = [&] {
        bool changed = false;
        if (cfg.enabled[5]) changed |= rule_r5(g);
        if (cfg.enabled[9]) changed |= rule_r9(g);
        if (cfg.enabled[10]) changed |= rule_r10(g);
        return changed;
    };
    while (true) {
        bool round = false;
        while (cheap_pass()) round = true;
        if (path_pass()) {
            changed_any = true;
            continue;
        }
        changed_any |= round;
        if (!cfg.enabled[4] || !apply_r4_wave(g, ctx, cfg)) break;
        changed_any = true;
    }
    return changed_any;
}

MixedGraph pag_to_mag(const MixedGraph &g) {
    MixedGraph mag = g;
    // Circles opposite a definite mark resolve first: o-> becomes ->, and a
    // circle facing a tail has no consistent class member; pick an arrow so
    // the round-trip check exposes it.
    for (const Edge &e : mag.edges()) {
        Endpoint ea = mag.end_at(e.a, e.b), eb = mag.end_at(e.b, e.a);
        if (ea == Endpoint::Circle && eb == Endpoint::Arrow)
            mag.set_end_at(e.a, e.b, Endpoint::Tail);
        else if (eb == Endpoint::Circle && ea == Endpoint::Arrow)
            mag.set_end_at(e.b, e.a, Endpoint::Tail);
        else if (ea == Endpoint::Circle && eb == Endpoint::Tail)
            mag.set_end_at(e.a, e.b, Endpoint::Arrow);
        else if (eb == Endpoint::Circle && ea == Endpoint::Tail)
            mag.set_end_at(e.b, e.a, Endpoint::Arrow);
    }
    // Orient the circle component into a DAG pattern without new unshielded
    // colliders: repeatedly sink a node whose circle neighbors are mutually
    // adjacent, lowest index first.
    std::vector<char> active(mag.num_nodes(), 1);
    auto circle_neighbors = [&](int v) {
        std::vector<int> out;
        for (int u : mag.adjacent(v))
            if (active[u] && is_circle_circle(mag, v, u)) out.push_back(u);
        return out;
    };
    while (true) {
        int sink = -1;
        for (int v = 0; v < mag.num_nodes() && sink < 0; ++v) {
            if (!active[v]) continue;
            auto nbrs = circle_neighbors(v);
            if (nbrs.empty()) continue;
            bool simplicial = true;
            for (size_t i = 0; i < nbrs.size() && simplicial; ++i)
                for (size_t j = i + 1; j < nbrs.size() && simplicial; ++j)
                    if (!mag.has_edge(nbrs[i], nbrs[j])) simplicial = false;
            if (simplicial) sink = v;
        }
        if (sink < 0) break;
        for (int u : circle_neighbors(sink)) {
            mag.set_end_at(u, sink, Endpoint::Tail);
            mag.set_end_at(sink, u, Endpoint::Arrow);
        }
        active[sink] = 0;
    }
    for (const Edge &e : mag.edges())
        if (mag.end_at(e.a, e.b) == Endpoint::Circle || mag.end_at(e.b, e.a) == Endpoint::Circle)
            throw std::invalid_argument("pag_to_mag: circle component is not chordal");
    return mag;
}

namespace {

bool directed_subgraph_has_cycle(const MixedGraph &g, std::vector<int> *witness) {
    int n = g.num_nodes();
    std::vector<int> state(n, 0);
    std::vector<int> stack;
    std::function<bool(int)> dfs = [&](int v) {
        state[v] = 1;
        stack.push_back(v);
        for (int c : g.children(v)) {
            if (state[c] == 1) {
                if (witness) *witness = {v, c};
                return true;
            }
            if (state[c] == 0 && dfs(c)) return true;
        }
        stack.pop_back();
        state[v] = 2;
        return false;
    };
    for (int v = 0; v < n; ++v)
        if (state[v] == 0 && dfs(v)) return true;
    return false;
}

// Inducing-path existence between nonadjacent x, y in a MAG with no latents:
// interiors must be colliders, so interior-interior edges are bidirected and
// a chain search over ancestors of {x, y} suffices.
bool mag_has_inducing_path(const MixedGraph &mag, const AncestorIndex &anc, int x, int y) {
    std::vector<int> targets{x, y};
    auto allowed = [&](int v) { return anc.is_ancestor_of_any(v, targets); };
    std::vector<bool> seen(mag.num_nodes(), false);
    std::deque<int> queue;
    for (int v : mag.adjacent(x)) {
        if (v == y) return true;
        if (mag.end_at(v, x) == Endpoint::Arrow && allowed(v)) {
            seen[v] = true;
            queue.push_back(v);
        }
    }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        if (mag.has_edge(v, y) && mag.end_at(v, y) == Endpoint::Arrow) return true;
        for (int u : mag.adjacent(v)) {
            if (u == x || u == y || seen[u]) continue;
            if (!mag.is_bidirected(v, u)) continue;
            if (!allowed(u)) continue;
            seen[u] = true;
            queue.push_back(u);
        }
    }
    return false;
}

}  // namespace

MixedGraph mag_to_pag(const MixedGraph &mag, const RuleConfig &cfg) {
    for (const Edge &e : mag.edges()) {
        if (e.end_a == Endpoint::Circle || e.end_b == Endpoint::Circle)
            throw std::invalid_argument("mag_to_pag: input has circle marks");
    }
    std::vector<int> witness;
    if (directed_subgraph_has_cycle(mag, &witness))
        throw std::invalid_argument("mag_to_pag: input has a directed cycle");
    {
        AncestorIndex anc(mag);
        for (const Edge &e : mag.edges())
            if (e.end_a == Endpoint::Arrow && e.end_b == Endpoint::Arrow &&
                (anc.is_ancestor(e.a, e.b) || anc.is_ancestor(e.b, e.a)))
                throw std::invalid_argument("mag_to_pag: input has an almost cycle");
    }
    MixedGraph g = mag;
    reset_all_marks_to_circles(g);
    orient_colliders_from_reference(g, mag);
    GraphMsepTester tester(mag);
    OrientationContext ctx;
    ctx.tester = &tester;
    apply_final_rules(g, ctx, cfg);
    return g;
}

MixedGraph mag_to_pag(const MixedGraph &mag) {
    RuleConfig cfg = is_dag(mag) ? RuleConfig::reduced_for_dag(mag.num_nodes())
                                 : RuleConfig::defaults_for(mag.num_nodes());
    return mag_to_pag(mag, cfg);
}

LegalityReport legal_pag_check(const MixedGraph &g, const RuleConfig &cfg) {
    LegalityReport report;
    auto add = [&](LegalityViolation::Kind kind, std::vector<int> witness, std::string detail) {
        report.is_legal = false;
        report.violations.push_back({kind, std::move(witness), std::move(detail)});
    };
    MixedGraph mag;
    try {
        mag = pag_to_mag(g);
    } catch (const std::exception &e) {
        add(LegalityViolation::Kind::RuleNoncompliant, {}, e.what());
        return report;
    }
    std::vector<int> cycle;
    if (directed_subgraph_has_cycle(mag, &cycle))
        add(LegalityViolation::Kind::DirectedCycle, cycle, "directed cycle in implied MAG");
    AncestorIndex anc(mag);
    for (const Edge &e : mag.edges()) {
        if (e.end_a == Endpoint::Arrow && e.end_b == Endpoint::Arrow &&
            (anc.is_ancestor(e.a, e.b) || anc.is_ancestor(e.b, e.a)))
            add(LegalityViolation::Kind::AlmostCycle, {e.a, e.b},
                "bidirected edge with a directed path between its endpoints");
    }
    if (!report.is_legal) return report;  // cyclic ancestry poisons the rest
    for (int x = 0; x < mag.num_nodes(); ++x) {
        for (int y = x + 1; y < mag.num_nodes(); ++y) {
            if (mag.has_edge(x, y)) continue;
            if (mag_has_inducing_path(mag, anc, x, y))
                add(LegalityViolation::Kind::NonMaximal, {x, y},
                    "inducing path between nonadjacent nodes");
        }
    }
    MixedGraph round_trip = mag_to_pag(mag, cfg);
    if (!round_trip.same_marks(g)) {
        std::string detail = "orientation closure of implied MAG differs";
        for (const Edge &e : g.edges()) {
            if (round_trip.end_at(e.a, e.b) != g.end_at(e.a, e.b) ||
                round_trip.end_at(e.b, e.a) != g.end_at(e.b, e.a)) {
                detail += " at " + g.name(e.a) + " - " + g.name(e.b);
                add(LegalityViolation::Kind::RuleNoncompliant, {e.a, e.b}, detail);
                break;
            }
        }
        if (report.is_legal)
            add(LegalityViolation::Kind::RuleNoncompliant, {}, detail);
    }
    return report;
}

LegalityReport legal_pag_check(const MixedGraph &g) {
    return legal_pag_check(g, RuleConfig::defaults_for(g.num_nodes()));
}

}  // namespace pagsearch
