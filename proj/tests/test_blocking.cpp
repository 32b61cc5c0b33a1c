#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "pagsearch/blocking.hpp"
#include "pagsearch/separation.hpp"
#include "test_support.hpp"

using namespace pagsearch;

namespace {

BlockResult block(const MixedGraph &g, int x, int y, std::vector<int> not_followed = {},
                  int max_len = -1) {
    BlockRequest req;
    req.x = x;
    req.y = y;
    req.not_followed = std::move(not_followed);
    req.max_path_length = max_len;
    return block_paths_recursively(g, req);
}

}  // namespace

TEST_CASE("find_path_to_target verdicts") {
    MixedGraph chain = graph_of("X,B,Y", {"X --> B", "B --> Y"});
    AncestorIndex anc(chain);
    std::vector<int> path{0}, blocking, forbidden;

    // b == y is immediately unblockable.
    CHECK(find_path_to_target(chain, anc, 0, 2, 2, path, blocking, forbidden, -1) ==
          StepVerdict::Unblockable);
    // Cycle guard.
    path = {0, 1};
    CHECK(find_path_to_target(chain, anc, 0, 1, 2, path, blocking, forbidden, -1) ==
          StepVerdict::Unblockable);
    // Chain: branch without b fails, branch with b succeeds and keeps it.
    path = {0};
    blocking.clear();
    CHECK(find_path_to_target(chain, anc, 0, 1, 2, path, blocking, forbidden, -1) ==
          StepVerdict::Blocked);
    CHECK(blocking == std::vector<int>{1});
    CHECK(path == std::vector<int>{0});  // membership restored
    CHECK(m_separated(chain, 0, 2, blocking));
}

TEST_CASE("blocking on the worked examples") {
    // MAG where the empty set already separates; nothing must be added.
    MixedGraph mag = graph_of("x,b,z,y,a",
                              {"x --> b", "b --> z", "z <-> y", "x <-> a", "a <-> y", "a --> b"});
    auto b1 = block(mag, mag.index_of("x"), mag.index_of("y"));
    REQUIRE(b1.has_value());
    CHECK(b1->empty());

    // Score DAG with the covering edge: blocking (X, Z) collects {Y}.
    MixedGraph dag = graph_of("X,Y,Z,W", {"X --> Y", "Y --> Z", "X --> Z", "W --> Z"});
    auto b2 = block(dag, 0, 2);
    REQUIRE(b2.has_value());
    CHECK(*b2 == std::vector<int>{1});

    // Adjacent with no other paths.
    MixedGraph pair = graph_of("A,B", {"A o-> B"});
    auto b3 = block(pair, 0, 1);
    REQUIRE(b3.has_value());
    CHECK(b3->empty());
}

TEST_CASE("latent nodes are never added to the blocking set") {
    MixedGraph dag = graph_of("X,(L),Y", {"X --> L", "L --> Y"});
    auto b = block(dag, 0, 2);
    // The only way to block X -> L -> Y is conditioning on latent L, which is
    // not allowed, so there is no graphical sepset.
    CHECK_FALSE(b.has_value());
}

TEST_CASE("request validation") {
    MixedGraph g = graph_of("A,B,C", {"A --> B", "B --> C"});
    BlockRequest req;
    req.x = 0;
    req.y = 2;
    req.containing = {2};
    CHECK_THROWS(block_paths_recursively(g, req));
    req.containing = {};
    req.not_followed = {0};
    CHECK_THROWS(block_paths_recursively(g, req));
}

TEST_CASE("soundness, coverage, domain restriction and constraint law") {
    Rng rng(71);
    long sound_checked = 0, coverage_checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        MixedGraph mag = oracles::random_mag(rng, 7, 2, 11);
        MsepContext ctx(mag);
        for (int x = 0; x < mag.num_nodes(); ++x) {
            for (int y = x + 1; y < mag.num_nodes(); ++y) {
                auto result = block(mag, x, y);
                if (!mag.has_edge(x, y)) {
                    // Search space: adjacents of both plus Possible-D-SEP.
                    std::set<int> pool_set;
                    for (int v : mag.adjacent(x)) pool_set.insert(v);
                    for (int v : mag.adjacent(y)) pool_set.insert(v);
                    for (int v : possible_dsep(mag, x, y)) pool_set.insert(v);
                    pool_set.erase(x);
                    pool_set.erase(y);
                    std::vector<int> pool(pool_set.begin(), pool_set.end());
                    auto exhaustive = oracles::brute_find_separator(mag, x, y, pool, -1);
                    if (result.has_value()) {
                        // Soundness: the returned set m-separates.
                        CHECK(ctx.m_separated(x, y, *result));
                        CHECK(oracles::brute_m_separated(mag, x, y, *result));
                        ++sound_checked;
                        // Domain restriction.
                        for (int v : *result) CHECK(pool_set.count(v) == 1);
                    }
                    // Coverage: if exhaustive search finds a separator over
                    // the space, recursive blocking must return one.
                    if (exhaustive.has_value()) {
                        CHECK(result.has_value());
                        ++coverage_checked;
                    }
                } else if (result.has_value()) {
                    // Adjacent case: every non-inducing path of length >= 2
                    // is blocked by the returned set.
                    AncestorIndex anc(mag);
                    std::vector<int> targets{x, y};
                    for (const auto &p : all_paths(mag, x, y, mag.num_nodes())) {
                        if (p.size() == 2) continue;
                        bool inducing = true;
                        for (size_t i = 1; i + 1 < p.size() && inducing; ++i) {
                            if (!is_def_collider(mag, p[i - 1], p[i], p[i + 1])) inducing = false;
                            else if (!anc.is_ancestor_of_any(p[i], targets)) inducing = false;
                        }
                        if (!inducing) CHECK(oracles::path_blocked(mag, p, *result));
                    }
                }
                if (result.has_value()) {
                    // Constraint law: x, y never inside the blocking set.
                    CHECK(std::find(result->begin(), result->end(), x) == result->end());
                    CHECK(std::find(result->begin(), result->end(), y) == result->end());
                }
            }
        }
    }
    CHECK(sound_checked > 200);
    CHECK(coverage_checked > 200);
}

TEST_CASE("containing and not_followed constraints hold") {
    Rng rng(73);
    for (int trial = 0; trial < 40; ++trial) {
        MixedGraph mag = oracles::random_mag(rng, 7, 2, 10);
        int x = rng.uniform_int(0, mag.num_nodes() - 1);
        int y = rng.uniform_int(0, mag.num_nodes() - 1);
        if (x == y) continue;
        std::vector<int> candidates;
        for (int v = 0; v < mag.num_nodes(); ++v)
            if (v != x && v != y) candidates.push_back(v);
        if (candidates.size() < 2) continue;
        BlockRequest req;
        req.x = x;
        req.y = y;
        req.containing = {candidates[0]};
        req.not_followed = {candidates[1]};
        auto result = block_paths_recursively(mag, req);
        if (!result) continue;
        CHECK(std::find(result->begin(), result->end(), candidates[0]) != result->end());
        CHECK(std::find(result->begin(), result->end(), candidates[1]) == result->end());
    }
}

TEST_CASE("bounded budget keeps the work within the branch ceiling") {
    Rng rng(79);
    const int budget = 4;
    for (int trial = 0; trial < 40; ++trial) {
        MixedGraph mag = oracles::random_mag(rng, 8, 2, 12);
        for (int x = 0; x < mag.num_nodes(); ++x) {
            for (int y = 0; y < mag.num_nodes(); ++y) {
                if (x == y) continue;
                long steps = 0;
                BlockRequest req;
                req.x = x;
                req.y = y;
                req.max_path_length = budget;
                req.step_counter = &steps;
                block_paths_recursively(mag, req);
                long degree = static_cast<long>(mag.adjacent(x).size());
                long ceiling = 4L * std::max(degree, 1L) * (1L << budget) * mag.num_edges();
                CHECK(steps <= ceiling);
            }
        }
    }
}
