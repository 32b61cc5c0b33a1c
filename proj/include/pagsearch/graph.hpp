#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace pagsearch {

enum class Endpoint : uint8_t { Tail, Arrow, Circle };

struct Edge {
    int a = -1;
    int b = -1;
    Endpoint end_a = Endpoint::Circle;  // mark at a
    Endpoint end_b = Endpoint::Circle;  // mark at b
};

// A triple <x, y, z> with y the middle node.
struct Triple {
    int x, y, z;
    bool operator==(const Triple &o) const {
        return y == o.y && ((x == o.x && z == o.z) || (x == o.z && z == o.x));
    }
};

/// Mixed graph over a fixed node table. Represents DAGs, CPDAGs, MAGs and
/// PAGs uniformly: every edge carries one endpoint mark per side.
/// Node identity is a dense integer index; iteration order is index order.
class MixedGraph {
public:
    MixedGraph() = default;

    int add_node(std::string name, bool latent = false);
    int num_nodes() const { return static_cast<int>(names_.size()); }
    const std::string &name(int v) const { return names_.at(v); }
    const std::vector<std::string> &names() const { return names_; }
    int index_of(const std::string &name) const;
    bool is_latent(int v) const { return latent_.at(v); }
    void set_latent(int v, bool latent) { latent_.at(v) = latent; }
    std::vector<int> measured_nodes() const;
    std::vector<int> latent_nodes() const;

    bool has_edge(int a, int b) const;
    void add_edge(int a, int b, Endpoint end_a, Endpoint end_b);
    void remove_edge(int a, int b);
    void clear_edges();
    int num_edges() const { return static_cast<int>(marks_.size()); }
    std::vector<Edge> edges() const;  // sorted by (a, b) with a < b

    /// Mark at `node` on the edge between node and other. Throws if absent.
    Endpoint end_at(int node, int other) const;
    void set_end_at(int node, int other, Endpoint e);

    const std::vector<int> &adjacent(int v) const { return adj_.at(v); }

    // x -> y (tail at x, arrow at y)
    bool is_directed_from(int x, int y) const;
    bool is_parent(int x, int y) const { return is_directed_from(x, y); }
    bool is_bidirected(int x, int y) const;
    bool is_undirected(int x, int y) const;
    std::vector<int> parents(int v) const;
    std::vector<int> children(int v) const;
    /// Neighbors u of t whose edge carries `mark` at t (e.g. u *-> t for Arrow).
    std::vector<int> nodes_into(int t, Endpoint mark) const;

    // Definite-noncollider bookkeeping used by reachability.
    void add_underline(int x, int y, int z);
    bool is_underline(int x, int y, int z) const;
    void clear_underlines() { underlines_.clear(); }

    bool same_node_table(const MixedGraph &o) const;
    /// Same adjacencies and identical endpoint marks everywhere.
    bool same_marks(const MixedGraph &o) const;
    std::vector<std::pair<int, int>> adjacency_pairs() const;  // a < b, sorted

private:
    static uint64_t pair_key(int a, int b);
    void check_node(int v) const;

    std::vector<std::string> names_;
    std::vector<bool> latent_;
    std::vector<std::vector<int>> adj_;  // sorted neighbor lists
    std::unordered_map<uint64_t, std::pair<Endpoint, Endpoint>> marks_;  // key (min,max)
    std::unordered_map<std::string, int> name_index_;
    std::set<std::tuple<int, int, int>> underlines_;  // (min(x,z), y, max(x,z))
};

bool is_def_collider(const MixedGraph &g, int a, int b, int c);
bool is_definite_noncollider(const MixedGraph &g, int a, int b, int c);

/// Nodes y such that y == x or a fully directed path y => x exists.
std::vector<int> ancestors(const MixedGraph &g, int x);
std::vector<int> descendants(const MixedGraph &g, int x);

bool is_dag(const MixedGraph &g);
std::optional<std::vector<int>> topological_order(const MixedGraph &g);

/// All simple paths from x to y with at most max_len edges, in lexicographic
/// order by node index. Brute-force support for the oracle tests.
std::vector<std::vector<int>> all_paths(const MixedGraph &g, int x, int y, int max_len);

/// Ancestor/descendant closure over fully directed edges, precomputed once
/// per graph snapshot. Safe for concurrent reads.
class AncestorIndex {
public:
    explicit AncestorIndex(const MixedGraph &g);
    /// True iff a is an ancestor of d (a == d counts).
    bool is_ancestor(int a, int d) const { return anc_[d][static_cast<size_t>(a)]; }
    bool is_ancestor_of_any(int a, std::span<const int> ds) const;

private:
    std::vector<std::vector<bool>> anc_;  // anc_[d][a] = a ancestor of d
};

// Text format:
//   Graph Nodes:
//   X1,X2,(L1)
//
//   Graph Edges:
//   1. X1 o-> X2
// Latent nodes are wrapped in parentheses.
std::string write_graph_text(const MixedGraph &g);
MixedGraph parse_graph_text(const std::string &text);
MixedGraph load_graph_file(const std::string &path);
void save_graph_file(const MixedGraph &g, const std::string &path);

}  // namespace pagsearch
