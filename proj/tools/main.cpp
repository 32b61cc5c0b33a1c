#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <mutex>
#include <thread>

#include "pagsearch/algorithms.hpp"
#include "pagsearch/benchlab.hpp"
#include "pagsearch/rng.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace pagsearch;

namespace {

constexpr const char *kVersion = "pagsearch 0.1.0";

double now_ms() {
    using namespace std::chrono;
    return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

json metrics_to_json(const MetricsReport &m) {
    auto opt = [](const std::optional<double> &v) {
        return v ? json(*v) : json(nullptr);
    };
    return json{{"ap", opt(m.ap)},
                {"ar", opt(m.ar)},
                {"ahp", opt(m.ahp)},
                {"ahr", opt(m.ahr)},
                {"ahpc", opt(m.ahpc)},
                {"ahrc", opt(m.ahrc)},
                {"tp", opt(m.tp)},
                {"tr", opt(m.tr)},
                {"arrow_path_prec", opt(m.arrow_path_prec)},
                {"tail_path_prec", opt(m.tail_path_prec)},
                {"bidir_latent_prec", opt(m.bidir_latent_prec)},
                {"legal_pag", m.legal_pag},
                {"elapsed_ms", m.elapsed_ms}};
}

std::string metric_cell(const std::optional<double> &v) {
    if (!v) return "*";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", *v);
    return buf;
}

void write_text(const fs::path &path, const std::string &text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void write_manifest(const fs::path &dir, const std::string &command, const json &config,
                    const json &inputs, const json &outputs, double wall_ms) {
    json manifest{{"tool", kVersion},     {"command", command}, {"config", config},
                  {"inputs", inputs},     {"outputs", outputs}, {"wall_clock_ms", wall_ms}};
    write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

/// Reorders graph nodes to the given name order (edges preserved).
MixedGraph remap_to_names(const MixedGraph &g, const std::vector<std::string> &names) {
    if (static_cast<size_t>(g.num_nodes()) != names.size())
        throw std::runtime_error("graph / data variable sets differ in size");
    MixedGraph out;
    std::vector<int> to_new(g.num_nodes(), -1);
    for (const auto &nm : names) {
        int idx = g.index_of(nm);
        if (idx < 0) throw std::runtime_error("graph is missing variable " + nm);
        to_new[idx] = out.add_node(nm, g.is_latent(idx));
    }
    for (const Edge &e : g.edges())
        out.add_edge(to_new[e.a], to_new[e.b], e.end_a, e.end_b);
    return out;
}

struct SearchFlags {
    std::string algorithm;
    std::string data_path;
    std::string out_dir = ".";
    std::string oracle_path;
    std::string init_cpdag_path;
    SearchConfig cfg;
    int max_disc_len = -2;   // -2 = auto
    int max_block_len = -2;  // -2 = auto
    std::string r4_mode = "recursive";
};

json search_config_json(const SearchFlags &flags) {
    return json{{"algorithm", flags.algorithm},
                {"alpha", flags.cfg.alpha},
                {"penalty", flags.cfg.score.penalty_discount},
                {"depth", flags.cfg.depth},
                {"max_disc_len", flags.max_disc_len},
                {"max_block_len", flags.max_block_len},
                {"r4_mode", flags.r4_mode},
                {"seed", flags.cfg.seed},
                {"num_starts", flags.cfg.num_starts},
                {"parallel_edges", flags.cfg.parallel_edges},
                {"legacy_pdsep", flags.cfg.legacy_pdsep},
                {"disc_removal", flags.cfg.disc_removal},
                {"oracle", flags.oracle_path},
                {"init_cpdag", flags.init_cpdag_path}};
}

struct SearchOutput {
    MixedGraph pag;
    SepsetMap sepsets;
    double elapsed_ms = 0.0;
};

SearchOutput run_search_command(SearchFlags &flags) {
    Dataset data = read_csv(flags.data_path);
    if (flags.max_disc_len != -2) flags.cfg.max_disc_len = flags.max_disc_len;
    if (flags.max_block_len != -2) flags.cfg.max_block_len = flags.max_block_len;
    flags.cfg.r4_mode =
        flags.r4_mode == "subsets" ? R4Mode::AdjacencySubsets : R4Mode::RecursiveBlocking;

    std::unique_ptr<CiTester> tester;
    std::unique_ptr<Score> score;
    std::optional<MixedGraph> oracle_graph;
    if (!flags.oracle_path.empty()) {
        oracle_graph = load_graph_file(flags.oracle_path);
        tester = std::make_unique<MsepOracleTester>(*oracle_graph, data.names);
        score = std::make_unique<GraphScore>(*oracle_graph, data.names);
    } else {
        CovarianceModel cm = covariance(data);
        tester = std::make_unique<FisherZTester>(cm, flags.cfg.alpha);
        score = std::make_unique<BicScore>(std::move(cm), flags.cfg.score);
    }

    std::optional<MixedGraph> init_cpdag;
    if (!flags.init_cpdag_path.empty()) {
        init_cpdag = remap_to_names(load_graph_file(flags.init_cpdag_path), data.names);
        if (!is_valid_cpdag(*init_cpdag)) throw std::runtime_error("--init-cpdag is not a CPDAG");
    }

    SearchOutput out;
    double t0 = now_ms();
    if (flags.algorithm == "lv-lite") {
        BossResult boss = boss_dag(*score, data.names, {flags.cfg.seed, flags.cfg.num_starts});
        out.pag = lv_lite_from_dag(boss.dag, flags.cfg);
    } else {
        MixedGraph cpdag = init_cpdag ? *init_cpdag
                                      : boss_search(*score, data.names,
                                                    {flags.cfg.seed, flags.cfg.num_starts});
        SearchResult res = flags.algorithm == "fcit" ? fcit(cpdag, *tester, flags.cfg)
                                                     : star_fci(cpdag, *tester, flags.cfg);
        out.pag = std::move(res.pag);
        out.sepsets = std::move(res.sepsets);
    }
    out.elapsed_ms = now_ms() - t0;
    return out;
}

json sepsets_to_json(const SepsetMap &sepsets, const MixedGraph &g) {
    json arr = json::array();
    for (const auto &[key, s] : sepsets.sets) {
        json names = json::array();
        for (int v : s) names.push_back(g.name(v));
        arr.push_back(json{{"x", g.name(key.first)}, {"y", g.name(key.second)}, {"set", names}});
    }
    return arr;
}

int cmd_simulate(const SimSpec &spec, const std::string &out_dir) {
    double t0 = now_ms();
    fs::create_directories(out_dir);
    MixedGraph dag = random_forward_dag(spec);
    Dataset data = simulate_sem(dag, spec, Rng::derive(spec.seed, 1));
    MixedGraph pag = true_pag(dag);
    write_csv(data, (fs::path(out_dir) / "data.csv").string());
    save_graph_file(dag, (fs::path(out_dir) / "true_dag.txt").string());
    save_graph_file(pag, (fs::path(out_dir) / "true_pag.txt").string());
    json config{{"measured", spec.n_measured}, {"latents", spec.n_latent},
                {"avg_degree", spec.avg_degree}, {"n", spec.n_samples},
                {"coef_low", spec.coef_low},     {"coef_high", spec.coef_high},
                {"var_low", spec.var_low},       {"var_high", spec.var_high},
                {"seed", spec.seed}};
    write_manifest(out_dir, "simulate", config, json::object(),
                   json{{"data", "data.csv"},
                        {"true_dag", "true_dag.txt"},
                        {"true_pag", "true_pag.txt"}},
                   now_ms() - t0);
    return 0;
}

int cmd_search(SearchFlags &flags) {
    double t0 = now_ms();
    fs::create_directories(flags.out_dir);
    SearchOutput out = run_search_command(flags);
    save_graph_file(out.pag, (fs::path(flags.out_dir) / "est_pag.txt").string());
    write_text(fs::path(flags.out_dir) / "sepsets.json",
               sepsets_to_json(out.sepsets, out.pag).dump(2) + "\n");
    write_manifest(flags.out_dir, "search", search_config_json(flags),
                   json{{"data", flags.data_path}},
                   json{{"est_pag", "est_pag.txt"}, {"sepsets", "sepsets.json"},
                        {"elapsed_ms", out.elapsed_ms}},
                   now_ms() - t0);
    std::cout << "wrote " << (fs::path(flags.out_dir) / "est_pag.txt").string() << " ("
              << out.pag.num_edges() << " edges, " << out.elapsed_ms << " ms)\n";
    return 0;
}

int cmd_eval(const std::string &est_path, const std::string &dag_path,
             const std::string &out_path) {
    MixedGraph est = load_graph_file(est_path);
    MixedGraph dag = load_graph_file(dag_path);
    MixedGraph truth = true_pag(dag);
    double t0 = now_ms();
    MetricsReport m = compare_graphs(est, truth, dag);
    m.elapsed_ms = now_ms() - t0;
    json out = metrics_to_json(m);
    write_text(out_path, out.dump(2) + "\n");
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_check(const std::string &graph_path) {
    MixedGraph g = load_graph_file(graph_path);
    LegalityReport report = legal_pag_check(g);
    if (report.is_legal) {
        std::cout << "legal PAG\n";
        return 0;
    }
    for (const auto &v : report.violations) {
        std::cout << to_string(v.kind);
        if (!v.witness.empty()) {
            std::cout << " [";
            for (size_t i = 0; i < v.witness.size(); ++i)
                std::cout << (i ? ", " : "") << g.name(v.witness[i]);
            std::cout << "]";
        }
        std::cout << " " << v.detail << "\n";
    }
    return 1;
}

struct BenchFlags {
    std::vector<std::string> algorithms{"fcit", "lv-lite", "star-fci"};
    int measured = 20;
    std::vector<int> latents{0, 4, 8};
    std::vector<double> degrees{2, 4, 6};
    std::vector<long> sample_sizes{200, 500, 1000, 5000};
    int reps = 20;
    uint64_t seed = 0;
    int jobs = 1;
    double alpha = 0.01;
    double penalty = 2.0;
    int depth = -1;
    std::string out_path = "results.csv";
};

struct BenchRow {
    std::string algorithm;
    int latents;
    double degree;
    long n;
    int rep;
    uint64_t seed;
    MetricsReport metrics;
    std::string error;
};

int cmd_bench(const BenchFlags &flags) {
    double t0 = now_ms();
    struct Task {
        std::string algorithm;
        int latents;
        double degree;
        long n;
        int rep;
        uint64_t seed;
    };
    std::vector<Task> tasks;
    uint64_t run_index = 0;
    for (int latents : flags.latents)
        for (double degree : flags.degrees)
            for (long n : flags.sample_sizes)
                for (int rep = 0; rep < flags.reps; ++rep) {
                    uint64_t run_seed = Rng::derive(flags.seed, run_index++);
                    for (const auto &alg : flags.algorithms)
                        tasks.push_back({alg, latents, degree, n, rep, run_seed});
                }

    std::vector<BenchRow> rows(tasks.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= tasks.size()) break;
            const Task &t = tasks[i];
            BenchRow row{t.algorithm, t.latents, t.degree, t.n, t.rep, t.seed, {}, ""};
            try {
                SimSpec spec;
                spec.n_measured = flags.measured;
                spec.n_latent = t.latents;
                spec.avg_degree = t.degree;
                spec.n_samples = t.n;
                spec.seed = t.seed;
                MixedGraph dag = random_forward_dag(spec);
                Dataset data = simulate_sem(dag, spec, Rng::derive(t.seed, 1));
                CovarianceModel cm = covariance(data);
                SearchConfig cfg;
                cfg.alpha = flags.alpha;
                cfg.score.penalty_discount = flags.penalty;
                cfg.depth = flags.depth;
                cfg.seed = Rng::derive(t.seed, 2);
                FisherZTester tester(cm, cfg.alpha);
                BicScore score(std::move(cm), cfg.score);
                double s0 = now_ms();
                MixedGraph est;
                if (t.algorithm == "lv-lite")
                    est = run_lv_lite(score, data.names, cfg);
                else if (t.algorithm == "fcit")
                    est = run_fcit(score, tester, data.names, cfg).pag;
                else if (t.algorithm == "star-fci")
                    est = run_star_fci(score, tester, data.names, cfg).pag;
                else
                    throw std::runtime_error("unknown algorithm " + t.algorithm);
                double elapsed = now_ms() - s0;
                row.metrics = compare_graphs(est, true_pag(dag), dag);
                row.metrics.elapsed_ms = elapsed;
            } catch (const std::exception &e) {
                row.error = e.what();
            }
            rows[i] = std::move(row);
        }
    };
    int jobs = std::max(1, flags.jobs);
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto &th : pool) th.join();

    std::ofstream out(flags.out_path);
    if (!out) throw std::runtime_error("cannot write " + flags.out_path);
    out << "algorithm,measured,latents,avg_degree,n,rep,seed,ap,ar,ahp,ahr,ahpc,ahrc,tp,tr,"
           "arrow_path_prec,tail_path_prec,bidir_latent_prec,legal_pag,elapsed_ms,error\n";
    for (const BenchRow &r : rows) {
        const MetricsReport &m = r.metrics;
        out << r.algorithm << ',' << flags.measured << ',' << r.latents << ',' << r.degree << ','
            << r.n << ',' << r.rep << ',' << r.seed << ',' << metric_cell(m.ap) << ','
            << metric_cell(m.ar) << ',' << metric_cell(m.ahp) << ',' << metric_cell(m.ahr) << ','
            << metric_cell(m.ahpc) << ',' << metric_cell(m.ahrc) << ',' << metric_cell(m.tp)
            << ',' << metric_cell(m.tr) << ',' << metric_cell(m.arrow_path_prec) << ','
            << metric_cell(m.tail_path_prec) << ',' << metric_cell(m.bidir_latent_prec) << ','
            << (m.legal_pag ? 1 : 0) << ',' << m.elapsed_ms << ',' << r.error << "\n";
    }
    out.close();

    fs::path dir = fs::path(flags.out_path).parent_path();
    if (dir.empty()) dir = ".";
    json config{{"algorithms", flags.algorithms},
                {"measured", flags.measured},
                {"latents", flags.latents},
                {"degrees", flags.degrees},
                {"sample_sizes", flags.sample_sizes},
                {"reps", flags.reps},
                {"seed", flags.seed},
                {"alpha", flags.alpha},
                {"penalty", flags.penalty},
                {"depth", flags.depth},
                {"jobs", flags.jobs}};
    write_manifest(dir, "bench", config, json::object(),
                   json{{"results", fs::path(flags.out_path).filename().string()},
                        {"rows", rows.size()}},
                   now_ms() - t0);
    std::cout << "wrote " << flags.out_path << " (" << rows.size() << " rows)\n";
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"PAG discovery toolkit: simulation, search, evaluation, legality checks"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // simulate
    SimSpec spec;
    std::string sim_out = ".";
    auto *sim = app.add_subcommand("simulate", "Generate a latent DAG and SEM data");
    sim->add_option("--measured", spec.n_measured);
    sim->add_option("--latents", spec.n_latent);
    sim->add_option("--avg-degree", spec.avg_degree);
    sim->add_option("--n", spec.n_samples);
    sim->add_option("--coef-low", spec.coef_low);
    sim->add_option("--coef-high", spec.coef_high);
    sim->add_option("--var-low", spec.var_low);
    sim->add_option("--var-high", spec.var_high);
    sim->add_option("--seed", spec.seed);
    sim->add_option("--out", sim_out);

    // search
    SearchFlags sf;
    auto *search = app.add_subcommand("search", "Run a PAG search on a CSV dataset");
    search->add_option("--algorithm", sf.algorithm, "fcit | lv-lite | star-fci")
        ->required()
        ->check(CLI::IsMember({"fcit", "lv-lite", "star-fci"}));
    search->add_option("--data", sf.data_path)->required();
    search->add_option("--out", sf.out_dir);
    search->add_option("--alpha", sf.cfg.alpha);
    search->add_option("--penalty", sf.cfg.score.penalty_discount);
    search->add_option("--depth", sf.cfg.depth);
    search->add_option("--max-disc-len", sf.max_disc_len);
    search->add_option("--max-block-len", sf.max_block_len);
    search->add_option("--r4-mode", sf.r4_mode)->check(CLI::IsMember({"recursive", "subsets"}));
    search->add_option("--seed", sf.cfg.seed);
    search->add_option("--num-starts", sf.cfg.num_starts);
    search->add_option("--oracle", sf.oracle_path, "true DAG file; swaps in the m-sep oracle");
    search->add_option("--init-cpdag", sf.init_cpdag_path, "CPDAG file, bypasses the order search");
    search->add_flag("--parallel-edges", sf.cfg.parallel_edges);
    search->add_flag("--legacy-pdsep", sf.cfg.legacy_pdsep);
    search->add_flag("!--no-disc-removal", sf.cfg.disc_removal,
                     "disable the discriminating-path step in edge removal");

    // eval
    std::string est_path, eval_dag_path, eval_out = "metrics.json";
    auto *eval = app.add_subcommand("eval", "Compare an estimated PAG against the truth");
    eval->add_option("--est", est_path)->required();
    eval->add_option("--true-dag", eval_dag_path)->required();
    eval->add_option("--out", eval_out);

    // check
    std::string check_path;
    auto *check = app.add_subcommand("check", "Check PAG legality (exit 1 on violations)");
    check->add_option("--graph", check_path)->required();

    // bench
    BenchFlags bf;
    auto *bench = app.add_subcommand("bench", "Cross-product benchmark grid");
    bench->add_option("--algos", bf.algorithms)->delimiter(',');
    bench->add_option("--measured", bf.measured);
    bench->add_option("--latents", bf.latents)->delimiter(',');
    bench->add_option("--degrees", bf.degrees)->delimiter(',');
    bench->add_option("--n", bf.sample_sizes)->delimiter(',');
    bench->add_option("--reps", bf.reps);
    bench->add_option("--seed", bf.seed);
    bench->add_option("--jobs", bf.jobs);
    bench->add_option("--alpha", bf.alpha);
    bench->add_option("--penalty", bf.penalty);
    bench->add_option("--depth", bf.depth);
    bench->add_option("--out", bf.out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*sim) return cmd_simulate(spec, sim_out);
        if (*search) return cmd_search(sf);
        if (*eval) return cmd_eval(est_path, eval_dag_path, eval_out);
        if (*check) return cmd_check(check_path);
        if (*bench) return cmd_bench(bf);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
