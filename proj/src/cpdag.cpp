#include "pagsearch/cpdag.hpp"

#include <algorithm>
#include <stdexcept>

#include <unordered_map>

#include "pagsearch/rng.hpp"

namespace pagsearch {

namespace {
constexpr double kScoreEps = 1e-9;
}

std::vector<int> grow_shrink_over_prefix(std::span<const int> prefix, int target,
                                         const Score &score) {
    std::vector<int> parents;
    // Grow: add the best-gain predecessor while any gain is positive.
    while (true) {
        int best = -1;
        double best_gain = kScoreEps;
        for (int x : prefix) {
            if (x == target) continue;
            if (std::find(parents.begin(), parents.end(), x) != parents.end()) continue;
            double gain = score.gain(x, target, parents);
            if (gain > best_gain) {
                best_gain = gain;
                best = x;
            }
        }
        if (best < 0) break;
        parents.push_back(best);
    }
    // Shrink: drop any parent whose removal does not hurt.
    bool removed = true;
    while (removed) {
        removed = false;
        for (size_t i = 0; i < parents.size(); ++i) {
            std::vector<int> rest = parents;
            rest.erase(rest.begin() + i);
            if (score.gain(parents[i], target, rest) <= kScoreEps) {
                parents = rest;
                removed = true;
                break;
            }
        }
    }
    std::sort(parents.begin(), parents.end());
    return parents;
}

std::vector<int> grow_shrink_parents(std::span<const int> perm, int target, const Score &score) {
    auto it = std::find(perm.begin(), perm.end(), target);
    if (it == perm.end()) throw std::invalid_argument("grow_shrink_parents: target not in perm");
    std::span<const int> prefix(perm.begin(), it);
    return grow_shrink_over_prefix(prefix, target, score);
}

namespace {

struct OrderState {
    const Score &score;
    std::vector<int> perm;
    std::vector<int> pos;                  // pos[v] = index in perm
    std::vector<std::vector<int>> parents; // per variable
    std::vector<double> local;             // per variable
    double total = 0.0;
    // The relocation walk revisits the same (variable, predecessor-set)
    // states constantly; memoize the grow-shrink outcome per set.
    std::unordered_map<std::vector<int>, std::pair<std::vector<int>, double>, IntVecHash> memo;

    explicit OrderState(const Score &s, std::vector<int> p)
        : score(s), perm(std::move(p)) {
        int n = static_cast<int>(perm.size());
        pos.assign(n, 0);
        parents.assign(n, {});
        local.assign(n, 0.0);
        for (int i = 0; i < n; ++i) pos[perm[i]] = i;
        for (int i = 0; i < n; ++i) rescore(perm[i]);
        total = 0.0;
        for (int v = 0; v < n; ++v) total += local[v];
    }

    void rescore(int v) {
        std::span<const int> prefix(perm.data(), pos[v]);
        total -= local[v];
        std::vector<int> key(prefix.begin(), prefix.end());
        std::sort(key.begin(), key.end());
        key.push_back(v);
        auto it = memo.find(key);
        if (it == memo.end()) {
            std::vector<int> pars = grow_shrink_over_prefix(prefix, v, score);
            double sc = score.local(v, pars);
            it = memo.emplace(std::move(key), std::pair{std::move(pars), sc}).first;
        }
        parents[v] = it->second.first;
        local[v] = it->second.second;
        total += local[v];
    }

    // Swap positions i and i+1 and rescore the two nodes involved.
    void swap_adjacent(int i) {
        int u = perm[i], w = perm[i + 1];
        std::swap(perm[i], perm[i + 1]);
        pos[u] = i + 1;
        pos[w] = i;
        rescore(u);
        rescore(w);
    }

    // Move v (currently anywhere) to position j by adjacent swaps.
    void move_to(int v, int j) {
        while (pos[v] > j) swap_adjacent(pos[v] - 1);
        while (pos[v] < j) swap_adjacent(pos[v]);
    }
};

}  // namespace

BossResult boss_dag(const Score &score, const std::vector<std::string> &names,
                    BossParams params) {
    int p = score.variable_count();
    if (static_cast<int>(names.size()) != p)
        throw std::invalid_argument("boss_dag: name count does not match score");
    std::optional<OrderState> best;
    double best_start_score = 0.0;
    for (int start = 0; start < std::max(1, params.num_starts); ++start) {
        Rng rng(Rng::derive(params.seed, static_cast<uint64_t>(start)));
        std::vector<int> perm(p);
        for (int i = 0; i < p; ++i) perm[i] = i;
        rng.shuffle(perm);
        OrderState state(score, std::move(perm));
        double start_score = state.total;

        bool improved = true;
        while (improved) {
            improved = false;
            for (int v = 0; v < p; ++v) {
                int original = state.pos[v];
                double original_total = state.total;
                std::vector<double> totals(p);
                totals[original] = state.total;
                state.move_to(v, 0);
                totals[0] = state.total;
                for (int j = 1; j < p; ++j) {
                    state.swap_adjacent(j - 1);
                    state.pos[v] = j;  // already set by swap; kept for clarity
                    totals[j] = state.total;
                }
                int best_j = original;
                double best_total = original_total;
                for (int j = 0; j < p; ++j) {
                    if (totals[j] > best_total + kScoreEps) {
                        best_total = totals[j];
                        best_j = j;
                    }
                }
                state.move_to(v, best_j);
                if (best_j != original) improved = true;
            }
        }
        if (!best || state.total > best->total + kScoreEps) {
            best.emplace(std::move(state));
            best_start_score = start_score;
        }
    }

    BossResult result;
    for (int v = 0; v < p; ++v) result.dag.add_node(names[v], false);
    for (int v = 0; v < p; ++v)
        for (int par : best->parents[v]) result.dag.add_edge(par, v, Endpoint::Tail, Endpoint::Arrow);
    result.order = best->perm;
    result.total_score = best->total;
    result.start_score = best_start_score;
    return result;
}

MixedGraph boss_search(const Score &score, const std::vector<std::string> &names,
                       BossParams params) {
    return dag_to_cpdag(boss_dag(score, names, params).dag);
}

namespace {

// Meek propagation over a partially directed graph. Undirected edges are
// tail-tail, directed edges tail-arrow.
bool meek_pass(MixedGraph &g) {
    bool changed = false;
    auto orient = [&](int a, int b) {
        g.set_end_at(a, b, Endpoint::Tail);
        g.set_end_at(b, a, Endpoint::Arrow);
        changed = true;
    };
    for (int b = 0; b < g.num_nodes(); ++b) {
        for (int c : g.adjacent(b)) {
            if (!g.is_undirected(b, c)) continue;
            // M1: a -> b - c with a, c nonadjacent.
            bool done = false;
            for (int a : g.adjacent(b)) {
                if (a != c && g.is_parent(a, b) && !g.has_edge(a, c)) {
                    orient(b, c);
                    done = true;
                    break;
                }
            }
            if (done) continue;
            // M2: b -> d -> c with b - c.
            for (int d : g.adjacent(b)) {
                if (d != c && g.is_parent(b, d) && g.is_parent(d, c)) {
                    orient(b, c);
                    done = true;
                    break;
                }
            }
            if (done) continue;
            // M3: b - d1, b - d2, d1 -> c, d2 -> c, d1, d2 nonadjacent.
            const auto &nbrs = g.adjacent(b);
            for (size_t i = 0; i < nbrs.size() && !done; ++i) {
                for (size_t j = i + 1; j < nbrs.size() && !done; ++j) {
                    int d1 = nbrs[i], d2 = nbrs[j];
                    if (d1 == c || d2 == c || g.has_edge(d1, d2)) continue;
                    if (g.is_undirected(b, d1) && g.is_undirected(b, d2) &&
                        g.is_parent(d1, c) && g.is_parent(d2, c)) {
                        orient(b, c);
                        done = true;
                    }
                }
            }
        }
    }
    return changed;
}

}  // namespace

MixedGraph dag_to_cpdag(const MixedGraph &dag) {
    if (!is_dag(dag)) throw std::invalid_argument("dag_to_cpdag: input is not a DAG");
    MixedGraph g;
    for (int v = 0; v < dag.num_nodes(); ++v) g.add_node(dag.name(v), dag.is_latent(v));
    for (const Edge &e : dag.edges()) g.add_edge(e.a, e.b, Endpoint::Tail, Endpoint::Tail);
    for (int b = 0; b < dag.num_nodes(); ++b) {
        auto pars = dag.parents(b);
        for (size_t i = 0; i < pars.size(); ++i) {
            for (size_t j = i + 1; j < pars.size(); ++j) {
                if (dag.has_edge(pars[i], pars[j])) continue;
                g.set_end_at(pars[i], b, Endpoint::Tail);
                g.set_end_at(b, pars[i], Endpoint::Arrow);
                g.set_end_at(pars[j], b, Endpoint::Tail);
                g.set_end_at(b, pars[j], Endpoint::Arrow);
            }
        }
    }
    while (meek_pass(g)) {
    }
    return g;
}

std::optional<MixedGraph> pdag_to_dag(const MixedGraph &pdag) {
    MixedGraph result = pdag;
    MixedGraph work = pdag;
    std::vector<char> active(pdag.num_nodes(), 1);
    int remaining = pdag.num_nodes();
    while (remaining > 0) {
        int found = -1;
        for (int v = 0; v < work.num_nodes() && found < 0; ++v) {
            if (!active[v]) continue;
            bool sink = true;
            for (int u : work.adjacent(v))
                if (active[u] && work.is_parent(v, u)) sink = false;
            if (!sink) continue;
            // Undirected neighbors must be adjacent to every other neighbor.
            bool ok = true;
            for (int u : work.adjacent(v)) {
                if (!active[u] || !work.is_undirected(v, u)) continue;
                for (int w : work.adjacent(v)) {
                    if (w == u || !active[w]) continue;
                    if (!work.has_edge(u, w)) ok = false;
                }
            }
            if (ok) found = v;
        }
        if (found < 0) return std::nullopt;
        for (int u : work.adjacent(found)) {
            if (!active[u]) continue;
            if (work.is_undirected(found, u)) {
                result.set_end_at(u, found, Endpoint::Tail);
                result.set_end_at(found, u, Endpoint::Arrow);
            }
        }
        active[found] = 0;
        --remaining;
    }
    if (!is_dag(result)) return std::nullopt;
    return result;
}

bool is_valid_cpdag(const MixedGraph &g) {
    for (const Edge &e : g.edges()) {
        bool directed = (e.end_a == Endpoint::Tail && e.end_b == Endpoint::Arrow) ||
                        (e.end_a == Endpoint::Arrow && e.end_b == Endpoint::Tail);
        bool undirected = e.end_a == Endpoint::Tail && e.end_b == Endpoint::Tail;
        if (!directed && !undirected) return false;
    }
    auto dag = pdag_to_dag(g);
    if (!dag) return false;
    return dag_to_cpdag(*dag).same_marks(g);
}

}  // namespace pagsearch
