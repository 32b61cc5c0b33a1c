#include "pagsearch/algorithms.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "pagsearch/blocking.hpp"
#include "pagsearch/disc_paths.hpp"
#include "pagsearch/separation.hpp"
#include "pagsearch/util.hpp"

namespace pagsearch {

RuleConfig SearchConfig::rule_config(int num_nodes) const {
    RuleConfig rc = RuleConfig::defaults_for(num_nodes);
    rc.r4_mode = r4_mode;
    rc.r4_depth = r4_depth;
    rc.test_depth = depth;
    if (max_disc_len) rc.r4_max_disc_len = *max_disc_len;
    if (max_block_len) rc.max_block_len = *max_block_len;
    return rc;
}

bool FcitSeparatorGenerator::enumerate(
    const MixedGraph &g, int x, int y, const CiTester &tester, const SearchConfig &cfg,
    int stage, const std::function<bool(const std::vector<int> &)> &try_candidate) {
    RuleConfig rc = cfg.rule_config(g.num_nodes());
    std::vector<int> v_cand;
    if (cfg.disc_removal) {
        auto pdps = list_pre_discriminating_paths(g, x, y, rc.r4_max_disc_len);
        std::set<int> v_set;
        for (const DiscPath &p : pdps) v_set.insert(p.v);
        v_cand.assign(v_set.begin(), v_set.end());
    }
    std::vector<int> common = sorted_intersection(g.adjacent(x), g.adjacent(y));

    std::set<std::vector<int>> tested;
    auto scan = [&](const MixedGraph &host) {
        AncestorIndex anc(host);
        return for_each_subset_ascending(v_cand, -1, [&](const std::vector<int> &f) {
            BlockRequest req;
            req.x = x;
            req.y = y;
            req.not_followed = f;
            req.max_path_length = rc.max_block_len;
            BlockResult b = block_paths_recursively(host, req, anc);
            if (!b) return false;
            std::vector<int> trim_base = sorted_intersection(common, *b);
            return for_each_subset_ascending(trim_base, -1, [&](const std::vector<int> &d) {
                for (int c : d)
                    if (g.end_at(c, x) == Endpoint::Arrow && g.end_at(c, y) == Endpoint::Arrow)
                        return false;  // never drop a known collider
                std::vector<int> s = sorted_difference(*b, d);
                if (cfg.depth != -1 && static_cast<int>(s.size()) > cfg.depth) return false;
                if (!tested.insert(s).second) return false;
                if (!tester.test(x, y, s).independent) return false;
                return try_candidate(s);
            });
        });
    };
    if (stage == 0) return scan(g);
    if (!cfg.disc_removal) return false;
    // Stage 1, entered only once the stage-0 scan has converged: block in a
    // concrete class member. Circle marks on the PAG hide collider statuses
    // the class does determine, which can leave every path-blocking attempt
    // open even though a separating set exists. The CI test above still
    // certifies each candidate.
    try {
        MixedGraph mag = pag_to_mag(g);
        return scan(mag);
    } catch (const std::exception &) {
        return false;
    }
}

namespace {

/// Reorientation used after every committed change: all marks back to
/// circles, colliders from the CPDAG and the sepset cache, rules to closure.
void reorient(MixedGraph &g, const MixedGraph *cpdag, const SepsetMap &sepsets,
              const CiTester *tester, const RuleConfig &rc) {
    reset_all_marks_to_circles(g);
    orient_colliders_from_cpdag_and_sepsets(g, cpdag, &sepsets);
    OrientationContext ctx;
    ctx.sepsets = &sepsets;
    ctx.tester = tester;
    apply_final_rules(g, ctx, rc);
}

template <typename Fn>
void parallel_over(int jobs, int count, Fn &&fn) {
    if (jobs <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    int workers = std::min(jobs, count);
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            while (true) {
                int i = next.fetch_add(1);
                if (i >= count) break;
                fn(i);
            }
        });
    }
    for (auto &th : pool) th.join();
}

}  // namespace

SearchResult fci_backward(MixedGraph pag, const CiTester &tester, SeparatorGenerator &generator,
                          const SearchConfig &cfg, const BackwardOptions &opts,
                          SepsetMap sepsets) {
    RuleConfig rc = cfg.rule_config(pag.num_nodes());
    // Later generator stages run only once the earlier ones have converged;
    // any accepted deletion drops back to stage 0 and rescans from the first
    // edge.
    int stage = 0;
    while (stage < generator.stages()) {
        bool modified = false;
        auto edges = pag.adjacency_pairs();
        std::vector<char> has_candidate(edges.size(), 1);
        if (opts.parallel_edges) {
            // Discovery pass against an immutable snapshot; acceptance below
            // re-validates serially in edge order.
            const MixedGraph snapshot = pag;
            int jobs = static_cast<int>(std::thread::hardware_concurrency());
            parallel_over(jobs, static_cast<int>(edges.size()), [&](int i) {
                has_candidate[i] = generator.enumerate(
                    snapshot, edges[i].first, edges[i].second, tester, cfg, stage,
                    [](const std::vector<int> &) { return true; });
            });
        }
        for (size_t i = 0; i < edges.size() && !modified; ++i) {
            if (!has_candidate[i]) continue;
            auto [x, y] = edges[i];
            generator.enumerate(pag, x, y, tester, cfg, stage, [&](const std::vector<int> &s) {
                MixedGraph snapshot = pag;
                pag.remove_edge(x, y);
                sepsets.set(x, y, s);
                reorient(pag, opts.cpdag, sepsets, &tester, rc);
                if (opts.legality_revert && !legal_pag_check(pag, rc).is_legal) {
                    pag = std::move(snapshot);
                    sepsets.erase(x, y);
                    return false;  // keep enumerating candidates for this edge
                }
                modified = true;
                return true;
            });
        }
        stage = modified ? 0 : stage + 1;
    }
    return {std::move(pag), std::move(sepsets)};
}

SearchResult fcit(const MixedGraph &init_cpdag, const CiTester &tester, const SearchConfig &cfg) {
    MixedGraph g = init_cpdag;
    SepsetMap sepsets;
    RuleConfig rc = cfg.rule_config(g.num_nodes());
    reorient(g, &init_cpdag, sepsets, &tester, rc);
    // The search only ever moves between legal PAGs, so the starting point
    // must be one: test-driven R4 probes can misfire on unfaithful samples,
    // in which case the initial orientation is projected back by dropping R4
    // and, failing that, keeping just the copied colliders.
    if (!legal_pag_check(g, rc).is_legal) {
        g = init_cpdag;
        RuleConfig no_r4 = rc;
        no_r4.enabled[4] = false;
        reorient(g, &init_cpdag, sepsets, &tester, no_r4);
        if (!legal_pag_check(g, rc).is_legal) {
            g = init_cpdag;
            reset_all_marks_to_circles(g);
            orient_colliders_from_cpdag_and_sepsets(g, &init_cpdag, &sepsets);
        }
    }
    FcitSeparatorGenerator generator;
    BackwardOptions opts;
    opts.cpdag = &init_cpdag;
    opts.legality_revert = true;
    opts.parallel_edges = cfg.parallel_edges;
    return fci_backward(std::move(g), tester, generator, cfg, opts, std::move(sepsets));
}

namespace {

/// Star-FCI step 2: per edge, test subsets of the current adjacency sets of
/// either endpoint, ascending size, lexicographic. First independence removes
/// the edge and stores the set.
void adjacency_removal_pass(MixedGraph &g, const CiTester &tester, const SearchConfig &cfg,
                            SepsetMap &sepsets) {
    for (auto [x, y] : g.adjacency_pairs()) {
        std::set<std::vector<int>> seen;
        int max_k = cfg.depth;
        bool removed = false;
        auto try_set = [&](const std::vector<int> &s) {
            std::vector<int> key(s);
            std::sort(key.begin(), key.end());
            if (!seen.insert(key).second) return false;
            if (!tester.test(x, y, key).independent) return false;
            g.remove_edge(x, y);
            sepsets.set(x, y, key);
            removed = true;
            return true;
        };
        int cap = std::max(static_cast<int>(g.adjacent(x).size()),
                           static_cast<int>(g.adjacent(y).size()));
        if (max_k >= 0) cap = std::min(cap, max_k);
        for (int k = 0; k <= cap && !removed; ++k) {
            for (int anchor : {x, y}) {
                std::vector<int> base = g.adjacent(anchor);
                base.erase(std::remove(base.begin(), base.end(), anchor == x ? y : x),
                           base.end());
                if (static_cast<int>(base.size()) < k) continue;
                bool done = false;
                std::vector<int> idx(k);
                for (int i = 0; i < k; ++i) idx[i] = i;
                int n = static_cast<int>(base.size());
                while (!done) {
                    std::vector<int> pick;
                    for (int i : idx) pick.push_back(base[i]);
                    if (try_set(pick)) done = true;
                    if (done || k == 0) break;
                    int i = k - 1;
                    while (i >= 0 && idx[i] == n - k + i) --i;
                    if (i < 0) break;
                    ++idx[i];
                    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
                }
                if (removed) break;
            }
        }
    }
}

void possible_dsep_removal_pass(MixedGraph &g, const CiTester &tester, const SearchConfig &cfg,
                                SepsetMap &sepsets) {
    for (auto [x, y] : g.adjacency_pairs()) {
        bool removed = false;
        for (int anchor : {x, y}) {
            std::vector<int> base = possible_dsep(g, anchor, anchor == x ? y : x);
            base.erase(std::remove_if(base.begin(), base.end(),
                                      [&](int v) { return v == x || v == y; }),
                       base.end());
            removed = for_each_subset_ascending(base, cfg.depth, [&](const std::vector<int> &s) {
                if (!tester.test(x, y, s).independent) return false;
                g.remove_edge(x, y);
                std::vector<int> key(s);
                std::sort(key.begin(), key.end());
                sepsets.set(x, y, key);
                return true;
            });
            if (removed) break;
        }
        (void)removed;
    }
}

}  // namespace

SearchResult star_fci(const MixedGraph &init_cpdag, const CiTester &tester,
                      const SearchConfig &cfg) {
    MixedGraph g = init_cpdag;
    SepsetMap sepsets;
    RuleConfig rc = cfg.rule_config(g.num_nodes());

    adjacency_removal_pass(g, tester, cfg, sepsets);

    reset_all_marks_to_circles(g);
    orient_colliders_from_cpdag_and_sepsets(g, &init_cpdag, &sepsets);
    OrientationContext ctx;
    ctx.sepsets = &sepsets;
    ctx.tester = &tester;
    apply_final_rules(g, ctx, rc);

    if (cfg.legacy_pdsep) {
        possible_dsep_removal_pass(g, tester, cfg, sepsets);
        reset_all_marks_to_circles(g);
        orient_colliders_from_cpdag_and_sepsets(g, &init_cpdag, &sepsets);
        apply_final_rules(g, ctx, rc);
    }
    return {std::move(g), std::move(sepsets)};
}

MixedGraph lv_lite_from_dag(const MixedGraph &dag, const SearchConfig &cfg) {
    RuleConfig rc = RuleConfig::reduced_for_dag(dag.num_nodes());
    // The depth cap stays off here: orientation probes run against the graph
    // itself, and the legality round trip re-derives marks the same way.
    if (cfg.max_disc_len) rc.r4_max_disc_len = *cfg.max_disc_len;
    if (cfg.max_block_len) rc.max_block_len = *cfg.max_block_len;
    return mag_to_pag(dag, rc);
}

SearchResult run_star_fci(const Score &score, const CiTester &tester,
                          const std::vector<std::string> &names, const SearchConfig &cfg) {
    MixedGraph cpdag = boss_search(score, names, {cfg.seed, cfg.num_starts});
    return star_fci(cpdag, tester, cfg);
}

SearchResult run_fcit(const Score &score, const CiTester &tester,
                      const std::vector<std::string> &names, const SearchConfig &cfg) {
    MixedGraph cpdag = boss_search(score, names, {cfg.seed, cfg.num_starts});
    return fcit(cpdag, tester, cfg);
}

MixedGraph run_lv_lite(const Score &score, const std::vector<std::string> &names,
                       const SearchConfig &cfg) {
    BossResult boss = boss_dag(score, names, {cfg.seed, cfg.num_starts});
    return lv_lite_from_dag(boss.dag, cfg);
}

}  // namespace pagsearch
