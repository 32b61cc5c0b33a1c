#pragma once

#include <functional>
#include <optional>

#include "pagsearch/cpdag.hpp"
#include "pagsearch/orientation.hpp"

namespace pagsearch {

struct SearchConfig {
    double alpha = 0.01;
    ScoreParams score;
    int depth = -1;  // max conditioning-set size in CI tests
    std::optional<int> max_disc_len;   // L_d, unset = by graph size
    std::optional<int> max_block_len;  // L_b, unset = by graph size
    int r4_depth = -1;
    R4Mode r4_mode = R4Mode::RecursiveBlocking;
    bool parallel_edges = false;
    bool legacy_pdsep = false;
    // Discriminating-path machinery inside edge removal: pre-discriminating
    // path forbiddances plus the implied-MAG fallback stage. Disabling it
    // reduces the generator to plain empty-forbiddance blocking.
    bool disc_removal = true;
    uint64_t seed = 0;
    int num_starts = 1;

    RuleConfig rule_config(int num_nodes) const;
};

struct SearchResult {
    MixedGraph pag;
    SepsetMap sepsets;
};

/// Yields certified-independent candidate separating sets for an edge, in a
/// deterministic order, until try_candidate accepts one. Returns whether a
/// candidate was accepted. Stage 0 runs the primary strategy; stage 1 may
/// produce extra candidates once the stage-0 scan has converged.
class SeparatorGenerator {
public:
    virtual ~SeparatorGenerator() = default;
    virtual bool enumerate(const MixedGraph &g, int x, int y, const CiTester &tester,
                           const SearchConfig &cfg, int stage,
                           const std::function<bool(const std::vector<int> &)> &try_candidate) = 0;
    virtual int stages() const { return 1; }
};

/// The targeted-testing generator: enumerates pre-discriminating-path
/// forbiddance subsets, runs recursive blocking, trims the blocking set by
/// common adjacents and tests the survivors.
class FcitSeparatorGenerator : public SeparatorGenerator {
public:
    bool enumerate(const MixedGraph &g, int x, int y, const CiTester &tester,
                   const SearchConfig &cfg, int stage,
                   const std::function<bool(const std::vector<int> &)> &try_candidate) override;
    int stages() const override { return 2; }
};

struct BackwardOptions {
    const MixedGraph *cpdag = nullptr;  // collider source during reorientation
    bool legality_revert = true;
    bool parallel_edges = false;
};

/// Backward template: repeatedly scan edges, remove the first whose generator
/// certifies a separating set (subject to the legality check), reorient, and
/// restart the scan. Committed deletions leave sepset entries; reverted ones
/// are purged.
SearchResult fci_backward(MixedGraph pag, const CiTester &tester, SeparatorGenerator &generator,
                          const SearchConfig &cfg, const BackwardOptions &opts,
                          SepsetMap sepsets = {});

/// Star-FCI: CPDAG copy, adjacency-subset edge removal, collider transfer
/// from the CPDAG plus stored sepsets, then the final rules.
SearchResult star_fci(const MixedGraph &init_cpdag, const CiTester &tester,
                      const SearchConfig &cfg);

/// FCIT: CPDAG converted to circles plus known colliders, then targeted
/// backward refinement with per-deletion reorientation and legality checks.
SearchResult fcit(const MixedGraph &init_cpdag, const CiTester &tester, const SearchConfig &cfg);

/// PAG of a DAG under the reduced rule set.
MixedGraph lv_lite_from_dag(const MixedGraph &dag, const SearchConfig &cfg);

// Orchestration with a BOSS initialization.
SearchResult run_star_fci(const Score &score, const CiTester &tester,
                          const std::vector<std::string> &names, const SearchConfig &cfg);
SearchResult run_fcit(const Score &score, const CiTester &tester,
                      const std::vector<std::string> &names, const SearchConfig &cfg);
MixedGraph run_lv_lite(const Score &score, const std::vector<std::string> &names,
                       const SearchConfig &cfg);

}  // namespace pagsearch
