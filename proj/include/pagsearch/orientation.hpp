#pragma once

#include <array>
#include <map>
#include <optional>

#include "pagsearch/graph.hpp"
#include "pagsearch/stats.hpp"

namespace pagsearch {

/// Cache from unordered node pairs to the certified separating set used when
/// their edge was removed.
struct SepsetMap {
    std::map<std::pair<int, int>, std::vector<int>> sets;

    static std::pair<int, int> key(int x, int y) { return {std::min(x, y), std::max(x, y)}; }
    const std::vector<int> *find(int x, int y) const {
        auto it = sets.find(key(x, y));
        return it == sets.end() ? nullptr : &it->second;
    }
    void set(int x, int y, std::vector<int> s) { sets[key(x, y)] = std::move(s); }
    void erase(int x, int y) { sets.erase(key(x, y)); }
    bool empty() const { return sets.empty(); }
};

enum class R4Mode { AdjacencySubsets, RecursiveBlocking };

struct RuleConfig {
    std::array<bool, 11> enabled{};  // R0..R10
    R4Mode r4_mode = R4Mode::RecursiveBlocking;
    int r4_max_disc_len = -1;  // L_d, bound on disc-path body size
    int r4_depth = -1;         // d, subset-depth bound for the R4 search
    int max_block_len = -1;    // L_b, path-length budget for recursive blocking
    int test_depth = -1;       // max conditioning-set size for CI probes

    static RuleConfig full();
    /// Full rules; disc/blocking budgets capped for graphs above 25 nodes.
    static RuleConfig defaults_for(int num_nodes);
    /// For DAG inputs: short discriminating paths suffice and R5-R7 cannot
    /// fire, so they are skipped.
    static RuleConfig reduced_for_dag(int num_nodes);
};

struct LegalityViolation {
    enum class Kind { AlmostCycle, DirectedCycle, NonMaximal, RuleNoncompliant };
    Kind kind;
    std::vector<int> witness;
    std::string detail;
};

std::string to_string(LegalityViolation::Kind kind);

struct LegalityReport {
    bool is_legal = true;
    std::vector<LegalityViolation> violations;
};

void reset_all_marks_to_circles(MixedGraph &g);

/// R0 against a reference graph: orients every triple that is unshielded in g
/// and a definite collider in the reference.
bool orient_colliders_from_reference(MixedGraph &g, const MixedGraph &reference);

/// R0 for searches: colliders where the CPDAG had X -> Y <- Z, plus sepset
/// colliders (entry exists for (X,Z) and Y is outside it).
bool orient_colliders_from_cpdag_and_sepsets(MixedGraph &g, const MixedGraph *cpdag,
                                             const SepsetMap *sepsets);

struct OrientationContext {
    const SepsetMap *sepsets = nullptr;  // R4 sepset lookups
    const CiTester *tester = nullptr;    // R4 independence probes
};

/// Applies the enabled final orientation rules to a fixed point. R4 runs only
/// at fixed points of the other rules. Only marks change, never adjacencies.
/// Returns whether anything changed.
bool apply_final_rules(MixedGraph &g, const OrientationContext &ctx, const RuleConfig &cfg);

/// The discriminating-path search for one pair: enumerates forbiddance
/// subsets over circle-marked v candidates, runs recursive blocking, trims by
/// common adjacents and returns the first certified separating set.
std::optional<std::vector<int>> rule_r4_recursive(const MixedGraph &g, int x, int y,
                                                  const CiTester &tester, const RuleConfig &cfg);

/// True iff x and y are connected by edges whose endpoints are all circles.
bool circle_reachable(const MixedGraph &g, int x, int y);

/// R10 premise: some beta -> gamma <- theta with uncovered potentially
/// directed paths alpha ~> beta and alpha ~> theta whose first hops are
/// distinct and nonadjacent.
bool r10_uncovered_pd_paths(const MixedGraph &g, int alpha, int gamma);

/// Zhang MAG of a PAG: circle-arrow edges get tails, the circle component is
/// oriented into a DAG pattern by repeated sink finding with index-order tie
/// breaks. Throws on contradictory marks.
MixedGraph pag_to_mag(const MixedGraph &g);

MixedGraph mag_to_pag(const MixedGraph &mag);
MixedGraph mag_to_pag(const MixedGraph &mag, const RuleConfig &cfg);

LegalityReport legal_pag_check(const MixedGraph &g);
LegalityReport legal_pag_check(const MixedGraph &g, const RuleConfig &cfg);

}  // namespace pagsearch
