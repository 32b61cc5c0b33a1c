#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "pagsearch/graph.hpp"
#include "pagsearch/rng.hpp"
#include "test_support.hpp"

using namespace pagsearch;

TEST_CASE("edge bookkeeping and marks") {
    MixedGraph g;
    int a = g.add_node("A"), b = g.add_node("B"), c = g.add_node("C");
    g.add_edge(a, b, Endpoint::Tail, Endpoint::Arrow);
    g.add_edge(c, b, Endpoint::Circle, Endpoint::Arrow);
    CHECK(g.has_edge(b, a));
    CHECK(g.end_at(a, b) == Endpoint::Tail);
    CHECK(g.end_at(b, a) == Endpoint::Arrow);
    CHECK(g.end_at(c, b) == Endpoint::Circle);
    CHECK(g.is_parent(a, b));
    CHECK_FALSE(g.is_parent(b, a));
    CHECK(g.adjacent(b) == std::vector<int>{0, 2});
    CHECK_THROWS(g.add_edge(a, b, Endpoint::Tail, Endpoint::Tail));
    CHECK_THROWS(g.add_edge(a, a, Endpoint::Tail, Endpoint::Tail));
    g.remove_edge(a, b);
    CHECK_FALSE(g.has_edge(a, b));
    CHECK_THROWS(g.end_at(a, b));
}

TEST_CASE("definite collider and noncollider") {
    MixedGraph chain = graph_of("A,B,C", {"A --> B", "B --> C"});
    auto v = ids(chain, {"A", "B", "C"});
    CHECK_FALSE(is_def_collider(chain, v[0], v[1], v[2]));
    CHECK(is_definite_noncollider(chain, v[0], v[1], v[2]));

    MixedGraph coll = graph_of("A,B,C", {"A --> B", "C --> B"});
    CHECK(is_def_collider(coll, 0, 1, 2));
    CHECK_FALSE(is_definite_noncollider(coll, 0, 1, 2));

    MixedGraph circles = graph_of("A,B,C", {"A o-> B", "C o-> B"});
    CHECK(is_def_collider(circles, 0, 1, 2));

    MixedGraph oo = graph_of("A,B,C", {"A o-o B", "B o-o C"});
    CHECK(is_definite_noncollider(oo, 0, 1, 2));
    MixedGraph shielded = graph_of("A,B,C", {"A o-o B", "B o-o C", "A o-o C"});
    CHECK_FALSE(is_definite_noncollider(shielded, 0, 1, 2));

    CHECK_THROWS(is_def_collider(chain, 0, 2, 1));
    CHECK_THROWS(is_definite_noncollider(chain, 0, 2, 1));
}

TEST_CASE("collider and noncollider are mutually exclusive") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        MixedGraph g = oracles::random_marked_graph(rng, 6, 8);
        for (int b = 0; b < g.num_nodes(); ++b) {
            const auto &nbrs = g.adjacent(b);
            for (size_t i = 0; i < nbrs.size(); ++i) {
                for (size_t j = i + 1; j < nbrs.size(); ++j) {
                    bool both = is_def_collider(g, nbrs[i], b, nbrs[j]) &&
                                is_definite_noncollider(g, nbrs[i], b, nbrs[j]);
                    CHECK_FALSE(both);
                }
            }
        }
    }
}

TEST_CASE("ancestors") {
    MixedGraph g = graph_of("X,Y,Z,W", {"X --> Y", "Y --> Z"});
    CHECK(ancestors(g, g.index_of("Z")) == std::vector<int>{0, 1, 2});
    CHECK(ancestors(g, g.index_of("W")) == std::vector<int>{3});
    MixedGraph bi = graph_of("X,Y", {"X <-> Y"});
    CHECK(ancestors(bi, 1) == std::vector<int>{1});
}

TEST_CASE("all_paths") {
    MixedGraph chain = graph_of("X,Y,Z", {"X --> Y", "Y --> Z"});
    auto paths = all_paths(chain, 0, 2, 4);
    REQUIRE(paths.size() == 1);
    CHECK(paths[0] == std::vector<int>{0, 1, 2});

    MixedGraph disc = graph_of("X,Y", {});
    CHECK(all_paths(disc, 0, 1, 4).empty());

    // Complete graph on 4 nodes: 5 simple paths of length <= 3 between a pair.
    MixedGraph k4 = graph_of("A,B,C,D", {"A --- B", "A --- C", "A --- D", "B --- C", "B --- D",
                                         "C --- D"});
    CHECK(all_paths(k4, 0, 1, 3).size() == 5);
}

TEST_CASE("all_paths output is simple, connected, and ordered") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        MixedGraph g = oracles::random_marked_graph(rng, 7, 10);
        auto paths = all_paths(g, 0, 1, 7);
        for (const auto &p : paths) {
            std::set<int> uniq(p.begin(), p.end());
            CHECK(uniq.size() == p.size());
            for (size_t i = 0; i + 1 < p.size(); ++i) CHECK(g.has_edge(p[i], p[i + 1]));
        }
        CHECK(std::is_sorted(paths.begin(), paths.end()));
    }
}

TEST_CASE("dag checks") {
    MixedGraph dag = graph_of("A,B,C", {"A --> B", "B --> C", "A --> C"});
    CHECK(is_dag(dag));
    CHECK(topological_order(dag).has_value());
    MixedGraph pag = graph_of("A,B", {"A o-> B"});
    CHECK_FALSE(is_dag(pag));
}

TEST_CASE("graph text round trip") {
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        MixedGraph g = oracles::random_marked_graph(rng, 6, 7);
        if (trial % 3 == 0) g.set_latent(rng.uniform_int(0, 5), true);
        MixedGraph parsed = parse_graph_text(write_graph_text(g));
        CHECK(parsed.same_marks(g));
        for (int v = 0; v < g.num_nodes(); ++v) CHECK(parsed.is_latent(v) == g.is_latent(v));
    }
    MixedGraph g = graph_of("X1,X2,(L1),X3",
                            {"X1 o-> X2", "X2 <-> L1", "L1 --- X3", "X1 --> X3"});
    CHECK(g.is_latent(2));
    CHECK(g.end_at(0, 1) == Endpoint::Circle);
    CHECK(g.is_bidirected(1, 2));
    CHECK(g.is_undirected(2, 3));
    CHECK(g.is_parent(0, 3));
}
