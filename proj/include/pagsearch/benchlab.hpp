#pragma once

#include <optional>

#include "pagsearch/graph.hpp"
#include "pagsearch/stats.hpp"

namespace pagsearch {

struct SimSpec {
    int n_measured = 20;
    int n_latent = 0;
    double avg_degree = 2.0;
    long n_samples = 1000;
    double coef_low = -1.0, coef_high = 1.0;
    double var_low = 1.0, var_high = 3.0;
    uint64_t seed = 0;
    int replicates = 1;
};

/// Random forward DAG: fixed node order, edges sampled uniformly among
/// forward pairs until round(avg_degree * nodes / 2) edges, latents chosen
/// uniformly at random. Deterministic per seed.
MixedGraph random_forward_dag(const SimSpec &spec);
MixedGraph random_forward_dag(const SimSpec &spec, uint64_t seed);

/// Linear Gaussian SEM sample: node = sum(coef * parent) + noise, coef ~
/// U[coef_low, coef_high], noise variance ~ U(var_low, var_high). Latent
/// columns are dropped and the measured column order is randomized.
Dataset simulate_sem(const MixedGraph &dag, const SimSpec &spec, uint64_t seed);

/// mag_to_pag(latent_project(dag)).
MixedGraph true_pag(const MixedGraph &dag);

struct MetricsReport {
    std::optional<double> ap, ar;          // adjacency precision / recall
    std::optional<double> ahp, ahr;        // arrowhead precision / recall
    std::optional<double> ahpc, ahrc;      // restricted to common adjacencies
    std::optional<double> tp, tr;          // tail precision / recall
    std::optional<double> arrow_path_prec; // no directed back-path in the DAG
    std::optional<double> tail_path_prec;  // forward directed path in the DAG
    std::optional<double> bidir_latent_prec;
    bool legal_pag = false;
    double elapsed_ms = 0.0;
};

/// est and truth_pag are over the measured variables (matched by name);
/// the three path precisions are computed against the latent DAG.
MetricsReport compare_graphs(const MixedGraph &est, const MixedGraph &truth_pag,
                             const MixedGraph &true_dag);

}  // namespace pagsearch
