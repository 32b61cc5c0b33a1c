#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pagsearch/benchlab.hpp"
#include "pagsearch/orientation.hpp"
#include "pagsearch/separation.hpp"
#include "pagsearch/separation.hpp"
#include "test_support.hpp"

using namespace pagsearch;

TEST_CASE("random forward dag") {
    SimSpec spec;
    spec.n_measured = 20;
    spec.n_latent = 4;
    spec.avg_degree = 4;
    CHECK(random_forward_dag(spec, 1).num_edges() == 48);

    spec.avg_degree = 0;
    CHECK(random_forward_dag(spec, 1).num_edges() == 0);

    spec.avg_degree = 100;
    CHECK_THROWS(random_forward_dag(spec, 1));

    // Mean degree over many seeds lands on the target.
    spec.n_measured = 10;
    spec.n_latent = 2;
    spec.avg_degree = 3;
    double total_deg = 0;
    for (uint64_t s = 0; s < 1000; ++s) {
        MixedGraph g = random_forward_dag(spec, s);
        CHECK(is_dag(g));
        CHECK(static_cast<int>(g.latent_nodes().size()) == 2);
        total_deg += 2.0 * g.num_edges() / g.num_nodes();
    }
    CHECK(std::abs(total_deg / 1000 - 3.0) < 0.03);
}

TEST_CASE("simulate_sem moments") {
    // Single node: variance inside the sampled noise range.
    MixedGraph one = graph_of("A", {});
    SimSpec spec;
    spec.n_samples = 10000;
    Dataset d = simulate_sem(one, spec, 5);
    double var = covariance(d).cov(0, 0);
    CHECK(var > 0.9);
    CHECK(var < 3.3);

    // X -> Y: regression slope recovers the drawn coefficient. The edge
    // coefficient is the first uniform draw of the stream.
    MixedGraph pair = graph_of("X,Y", {"X --> Y"});
    Dataset d2 = simulate_sem(pair, spec, 7);
    Rng replay(7);
    double beta = replay.uniform(spec.coef_low, spec.coef_high);
    CovarianceModel cm = covariance(d2);
    int xi = 0;
    for (size_t j = 0; j < d2.names.size(); ++j)
        if (d2.names[j] == "X") xi = static_cast<int>(j);
    double slope = cm.cov(xi, 1 - xi) / cm.cov(xi, xi);
    CHECK(std::abs(slope - beta) < 0.05);

    // Zero-edge graph: cross-correlations near zero.
    MixedGraph indep = graph_of("A,B,C", {});
    Dataset d3 = simulate_sem(indep, spec, 9);
    CovarianceModel cm3 = covariance(d3);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            CHECK(std::abs(cm3.cov(i, j) / std::sqrt(cm3.cov(i, i) * cm3.cov(j, j))) < 0.05);
}

TEST_CASE("simulate_sem is deterministic and drops latent columns") {
    MixedGraph dag = graph_of("X,(L),Y", {"X --> Y", "L --> Y"});
    SimSpec spec;
    spec.n_samples = 50;
    Dataset a = simulate_sem(dag, spec, 11);
    Dataset b = simulate_sem(dag, spec, 11);
    CHECK(a.names == b.names);
    CHECK(a.values == b.values);
    CHECK(a.names.size() == 2);
    for (const auto &n : a.names) CHECK(n != "L");
    Dataset c = simulate_sem(dag, spec, 12);
    CHECK(c.values != a.values);
}

TEST_CASE("true_pag") {
    MixedGraph dag = graph_of("X,Y,(L),Z,W", {"X --> Y", "L --> Y", "L --> Z", "W --> Z"});
    MixedGraph pag = true_pag(dag);
    CHECK(pag.is_bidirected(pag.index_of("Y"), pag.index_of("Z")));
    CHECK(pag.end_at(pag.index_of("Y"), pag.index_of("X")) == Endpoint::Arrow);

    MixedGraph chain = graph_of("A,B,C", {"A --> B", "B --> C"});
    MixedGraph cp = true_pag(chain);
    CHECK(cp.num_edges() == 2);
    CHECK(cp.end_at(0, 1) == Endpoint::Circle);

    // Pure confounding projects to X <-> Y; with no third node the class
    // cannot pin either mark, so the rendering keeps both circles.
    MixedGraph conf = graph_of("(L),X,Y", {"L --> X", "L --> Y"});
    MixedGraph confp = true_pag(conf);
    CHECK(confp.has_edge(confp.index_of("X"), confp.index_of("Y")));
    CHECK(confp.end_at(confp.index_of("X"), confp.index_of("Y")) == Endpoint::Circle);
    CHECK(latent_project(conf).is_bidirected(0, 1));

    Rng rng(301);
    for (int trial = 0; trial < 25; ++trial) {
        MixedGraph rd = oracles::random_dag(rng, 8, 12, 2);
        CHECK(legal_pag_check(true_pag(rd)).is_legal);
    }
}

TEST_CASE("compare_graphs on exact and empty estimates") {
    MixedGraph dag = graph_of("X,Y,(L),Z,W", {"X --> Y", "L --> Y", "L --> Z", "W --> Z"});
    MixedGraph truth = true_pag(dag);
    MetricsReport same = compare_graphs(truth, truth, dag);
    for (auto v : {same.ap, same.ar, same.ahp, same.ahr, same.ahpc, same.ahrc, same.tp, same.tr,
                   same.arrow_path_prec, same.bidir_latent_prec}) {
        if (v) CHECK(*v == doctest::Approx(1.0));
    }
    CHECK(same.legal_pag);

    MixedGraph empty;
    for (const auto &n : truth.names()) empty.add_node(n);
    MetricsReport er = compare_graphs(empty, truth, dag);
    CHECK_FALSE(er.ap.has_value());
    CHECK_FALSE(er.ahp.has_value());
    CHECK(er.ar == doctest::Approx(0.0));
    CHECK(er.ahr == doctest::Approx(0.0));

    MixedGraph wrong = graph_of("A,B", {});
    CHECK_THROWS(compare_graphs(wrong, truth, dag));
}

TEST_CASE("perfect estimates score ones on random models") {
    Rng rng(307);
    for (int trial = 0; trial < 20; ++trial) {
        MixedGraph dag = oracles::random_dag(rng, 8, 11, 2);
        MixedGraph truth = true_pag(dag);
        if (truth.num_edges() == 0) continue;
        MetricsReport m = compare_graphs(truth, truth, dag);
        CHECK(m.legal_pag);
        if (m.ap) CHECK(*m.ap == doctest::Approx(1.0));
        if (m.ar) CHECK(*m.ar == doctest::Approx(1.0));
        if (m.ahp) CHECK(*m.ahp == doctest::Approx(1.0));
        if (m.tp) CHECK(*m.tp == doctest::Approx(1.0));
        if (m.arrow_path_prec) CHECK(*m.arrow_path_prec == doctest::Approx(1.0));
        if (m.tail_path_prec) CHECK(*m.tail_path_prec == doctest::Approx(1.0));
    }
}

TEST_CASE("metric denominators") {
    // One correct adjacency with a wrong extra: precision 1/2, recall 1/1.
    MixedGraph dag = graph_of("A,B,C", {"A --> B"});
    MixedGraph truth = true_pag(dag);
    MixedGraph est;
    for (const auto &n : truth.names()) est.add_node(n);
    est.add_edge(est.index_of("A"), est.index_of("B"), Endpoint::Circle, Endpoint::Circle);
    est.add_edge(est.index_of("B"), est.index_of("C"), Endpoint::Circle, Endpoint::Circle);
    MetricsReport m = compare_graphs(est, truth, dag);
    CHECK(*m.ap == doctest::Approx(0.5));
    CHECK(*m.ar == doctest::Approx(1.0));
    CHECK_FALSE(m.ahp.has_value());  // no arrowheads estimated
    CHECK_FALSE(m.bidir_latent_prec.has_value());
}

TEST_CASE("bidirected latent precision is literal direct confounding") {
    MixedGraph dag = graph_of("(L),X,Y,Z", {"L --> X", "L --> Y", "X --> Z"});
    MixedGraph truth = true_pag(dag);
    MixedGraph est;
    for (const auto &n : truth.names()) est.add_node(n);
    est.add_edge(est.index_of("X"), est.index_of("Y"), Endpoint::Arrow, Endpoint::Arrow);
    est.add_edge(est.index_of("X"), est.index_of("Z"), Endpoint::Arrow, Endpoint::Arrow);
    MetricsReport m = compare_graphs(est, truth, dag);
    CHECK(*m.bidir_latent_prec == doctest::Approx(0.5));
}
