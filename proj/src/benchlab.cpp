#include "pagsearch/benchlab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pagsearch/orientation.hpp"
#include "pagsearch/rng.hpp"
#include "pagsearch/separation.hpp"

namespace pagsearch {

MixedGraph random_forward_dag(const SimSpec &spec, uint64_t seed) {
    int n = spec.n_measured + spec.n_latent;
    if (n <= 0) throw std::invalid_argument("random_forward_dag: empty graph");
    long target = std::lround(spec.avg_degree * n / 2.0);
    long max_edges = static_cast<long>(n) * (n - 1) / 2;
    if (target > max_edges)
        throw std::invalid_argument("random_forward_dag: density not achievable");
    Rng rng(seed);
    MixedGraph g;
    for (int i = 0; i < n; ++i) g.add_node("V" + std::to_string(i + 1), false);
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(max_edges);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    rng.shuffle(pairs);
    for (long k = 0; k < target; ++k)
        g.add_edge(pairs[k].first, pairs[k].second, Endpoint::Tail, Endpoint::Arrow);
    std::vector<int> nodes(n);
    for (int i = 0; i < n; ++i) nodes[i] = i;
    rng.shuffle(nodes);
    for (int i = 0; i < spec.n_latent; ++i) g.set_latent(nodes[i], true);
    return g;
}

MixedGraph random_forward_dag(const SimSpec &spec) {
    return random_forward_dag(spec, spec.seed);
}

Dataset simulate_sem(const MixedGraph &dag, const SimSpec &spec, uint64_t seed) {
    auto order = topological_order(dag);
    if (!order) throw std::invalid_argument("simulate_sem: graph is cyclic");
    Rng rng(seed);
    int n_nodes = dag.num_nodes();
    long n = spec.n_samples;

    std::map<std::pair<int, int>, double> coef;
    for (const Edge &e : dag.edges()) {
        int from = e.end_a == Endpoint::Tail ? e.a : e.b;
        int to = from == e.a ? e.b : e.a;
        coef[{from, to}] = rng.uniform(spec.coef_low, spec.coef_high);
    }
    std::vector<double> noise_var(n_nodes);
    for (int v = 0; v < n_nodes; ++v) noise_var[v] = rng.uniform(spec.var_low, spec.var_high);

    Eigen::MatrixXd values(n, n_nodes);
    for (int v : *order) {
        double sd = std::sqrt(noise_var[v]);
        for (long i = 0; i < n; ++i) values(i, v) = sd * rng.normal();
        for (int par : dag.parents(v)) values.col(v) += coef[{par, v}] * values.col(par);
    }

    std::vector<int> measured = dag.measured_nodes();
    rng.shuffle(measured);
    Dataset out;
    out.values.resize(n, static_cast<int>(measured.size()));
    for (size_t j = 0; j < measured.size(); ++j) {
        out.names.push_back(dag.name(measured[j]));
        out.values.col(static_cast<int>(j)) = values.col(measured[j]);
    }
    return out;
}

MixedGraph true_pag(const MixedGraph &dag) {
    return mag_to_pag(latent_project(dag));
}

namespace {

std::optional<double> ratio(long num, long den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MetricsReport compare_graphs(const MixedGraph &est, const MixedGraph &truth_pag,
                             const MixedGraph &true_dag) {
    // Node sets are matched by name; est and truth must agree.
    std::vector<int> est_to_truth(est.num_nodes(), -1);
    std::vector<int> est_to_dag(est.num_nodes(), -1);
    if (est.num_nodes() != truth_pag.num_nodes())
        throw std::invalid_argument("compare_graphs: node sets differ");
    for (int v = 0; v < est.num_nodes(); ++v) {
        est_to_truth[v] = truth_pag.index_of(est.name(v));
        est_to_dag[v] = true_dag.index_of(est.name(v));
        if (est_to_truth[v] < 0 || est_to_dag[v] < 0)
            throw std::invalid_argument("compare_graphs: node sets differ at " + est.name(v));
    }

    MetricsReport report;
    long adj_tp = 0, adj_est = 0, adj_true = 0;
    for (auto [a, b] : est.adjacency_pairs()) {
        ++adj_est;
        if (truth_pag.has_edge(est_to_truth[a], est_to_truth[b])) ++adj_tp;
    }
    adj_true = truth_pag.num_edges();
    report.ap = ratio(adj_tp, adj_est);
    report.ar = ratio(adj_tp, adj_true);

    // Endpoint instances: (a, b) counts when the edge a-b carries the mark at
    // b. Common-adjacency variants restrict both sides to shared edges.
    auto mark_stats = [&](Endpoint mark, bool common_only) {
        long tp_cnt = 0, est_cnt = 0, true_cnt = 0;
        for (auto [a, b] : est.adjacency_pairs()) {
            int ta = est_to_truth[a], tb = est_to_truth[b];
            bool shared = truth_pag.has_edge(ta, tb);
            if (common_only && !shared) continue;
            for (auto [u, v, tu, tv] :
                 {std::tuple{a, b, ta, tb}, std::tuple{b, a, tb, ta}}) {
                if (est.end_at(v, u) != mark) continue;
                ++est_cnt;
                if (shared && truth_pag.end_at(tv, tu) == mark) ++tp_cnt;
            }
        }
        for (auto [ta, tb] : truth_pag.adjacency_pairs()) {
            int a = est.index_of(truth_pag.name(ta)), b = est.index_of(truth_pag.name(tb));
            bool shared = est.has_edge(a, b);
            if (common_only && !shared) continue;
            for (auto [u, v] : {std::pair{ta, tb}, std::pair{tb, ta}})
                if (truth_pag.end_at(v, u) == mark) ++true_cnt;
        }
        return std::tuple{tp_cnt, est_cnt, true_cnt};
    };

    {
        auto [tp_cnt, est_cnt, true_cnt] = mark_stats(Endpoint::Arrow, false);
        report.ahp = ratio(tp_cnt, est_cnt);
        report.ahr = ratio(tp_cnt, true_cnt);
    }
    {
        auto [tp_cnt, est_cnt, true_cnt] = mark_stats(Endpoint::Arrow, true);
        report.ahpc = ratio(tp_cnt, est_cnt);
        report.ahrc = ratio(tp_cnt, true_cnt);
    }
    {
        auto [tp_cnt, est_cnt, true_cnt] = mark_stats(Endpoint::Tail, false);
        report.tp = ratio(tp_cnt, est_cnt);
        report.tr = ratio(tp_cnt, true_cnt);
    }

    AncestorIndex dag_anc(true_dag);
    long arrow_ok = 0, arrow_all = 0, tail_ok = 0, tail_all = 0, bidir_ok = 0, bidir_all = 0;
    for (auto [a, b] : est.adjacency_pairs()) {
        int da = est_to_dag[a], db = est_to_dag[b];
        for (auto [u, v, du, dv] : {std::tuple{a, b, da, db}, std::tuple{b, a, db, da}}) {
            if (est.end_at(v, u) == Endpoint::Arrow) {
                ++arrow_all;
                if (!dag_anc.is_ancestor(dv, du)) ++arrow_ok;  // no back-path v ~> u
            }
        }
        if (est.is_directed_from(a, b) || est.is_directed_from(b, a)) {
            int from = est.is_directed_from(a, b) ? a : b;
            int to = from == a ? b : a;
            ++tail_all;
            if (dag_anc.is_ancestor(est_to_dag[from], est_to_dag[to])) ++tail_ok;
        }
        if (est.is_bidirected(a, b)) {
            ++bidir_all;
            bool confounded = false;
            for (int latent : true_dag.latent_nodes())
                if (true_dag.is_parent(latent, da) && true_dag.is_parent(latent, db))
                    confounded = true;
            if (confounded) ++bidir_ok;
        }
    }
    report.arrow_path_prec = ratio(arrow_ok, arrow_all);
    report.tail_path_prec = ratio(tail_ok, tail_all);
    report.bidir_latent_prec = ratio(bidir_ok, bidir_all);
    report.legal_pag = legal_pag_check(est).is_legal;
    return report;
}

}  // namespace pagsearch
