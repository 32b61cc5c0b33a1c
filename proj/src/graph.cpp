#include "pagsearch/graph.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace pagsearch {

uint64_t MixedGraph::pair_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
}

void MixedGraph::check_node(int v) const {
    if (v < 0 || v >= num_nodes()) throw std::out_of_range("node index out of range");
}

int MixedGraph::add_node(std::string name, bool latent) {
    if (name_index_.count(name)) throw std::invalid_argument("duplicate node name: " + name);
    int idx = num_nodes();
    name_index_[name] = idx;
    names_.push_back(std::move(name));
    latent_.push_back(latent);
    adj_.emplace_back();
    return idx;
}

int MixedGraph::index_of(const std::string &name) const {
    auto it = name_index_.find(name);
    return it == name_index_.end() ? -1 : it->second;
}

std::vector<int> MixedGraph::measured_nodes() const {
    std::vector<int> out;
    for (int v = 0; v < num_nodes(); ++v)
        if (!latent_[v]) out.push_back(v);
    return out;
}

std::vector<int> MixedGraph::latent_nodes() const {
    std::vector<int> out;
    for (int v = 0; v < num_nodes(); ++v)
        if (latent_[v]) out.push_back(v);
    return out;
}

bool MixedGraph::has_edge(int a, int b) const {
    if (a == b) return false;
    return marks_.count(pair_key(a, b)) != 0;
}

void MixedGraph::add_edge(int a, int b, Endpoint end_a, Endpoint end_b) {
    check_node(a);
    check_node(b);
    if (a == b) throw std::invalid_argument("self loop");
    if (has_edge(a, b)) throw std::invalid_argument("edge already present");
    if (a > b) {
        std::swap(a, b);
        std::swap(end_a, end_b);
    }
    marks_[pair_key(a, b)] = {end_a, end_b};
    auto insert_sorted = [](std::vector<int> &xs, int v) {
        xs.insert(std::lower_bound(xs.begin(), xs.end(), v), v);
    };
    insert_sorted(adj_[a], b);
    insert_sorted(adj_[b], a);
}

void MixedGraph::remove_edge(int a, int b) {
    if (!has_edge(a, b)) throw std::invalid_argument("no such edge");
    marks_.erase(pair_key(a, b));
    auto erase_sorted = [](std::vector<int> &xs, int v) {
        xs.erase(std::lower_bound(xs.begin(), xs.end(), v));
    };
    erase_sorted(adj_[a], b);
    erase_sorted(adj_[b], a);
}

void MixedGraph::clear_edges() {
    marks_.clear();
    for (auto &xs : adj_) xs.clear();
    underlines_.clear();
}

std::vector<Edge> MixedGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(marks_.size());
    for (const auto &[key, mk] : marks_) {
        Edge e;
        e.a = static_cast<int>(key >> 32);
        e.b = static_cast<int>(key & 0xffffffffu);
        e.end_a = mk.first;
        e.end_b = mk.second;
        out.push_back(e);
    }
    std::sort(out.begin(), out.end(),
              [](const Edge &l, const Edge &r) { return std::tie(l.a, l.b) < std::tie(r.a, r.b); });
    return out;
}

Endpoint MixedGraph::end_at(int node, int other) const {
    auto it = marks_.find(pair_key(node, other));
    if (it == marks_.end()) throw std::invalid_argument("no edge between given nodes");
    return node < other ? it->second.first : it->second.second;
}

void MixedGraph::set_end_at(int node, int other, Endpoint e) {
    auto it = marks_.find(pair_key(node, other));
    if (it == marks_.end()) throw std::invalid_argument("no edge between given nodes");
    if (node < other)
        it->second.first = e;
    else
        it->second.second = e;
}

bool MixedGraph::is_directed_from(int x, int y) const {
    return has_edge(x, y) && end_at(x, y) == Endpoint::Tail && end_at(y, x) == Endpoint::Arrow;
}

bool MixedGraph::is_bidirected(int x, int y) const {
    return has_edge(x, y) && end_at(x, y) == Endpoint::Arrow && end_at(y, x) == Endpoint::Arrow;
}

bool MixedGraph::is_undirected(int x, int y) const {
    return has_edge(x, y) && end_at(x, y) == Endpoint::Tail && end_at(y, x) == Endpoint::Tail;
}

std::vector<int> MixedGraph::parents(int v) const {
    std::vector<int> out;
    for (int u : adjacent(v))
        if (is_directed_from(u, v)) out.push_back(u);
    return out;
}

std::vector<int> MixedGraph::children(int v) const {
    std::vector<int> out;
    for (int u : adjacent(v))
        if (is_directed_from(v, u)) out.push_back(u);
    return out;
}

std::vector<int> MixedGraph::nodes_into(int t, Endpoint mark) const {
    std::vector<int> out;
    for (int u : adjacent(t))
        if (end_at(t, u) == mark) out.push_back(u);
    return out;
}

void MixedGraph::add_underline(int x, int y, int z) {
    underlines_.insert({std::min(x, z), y, std::max(x, z)});
}

bool MixedGraph::is_underline(int x, int y, int z) const {
    return underlines_.count({std::min(x, z), y, std::max(x, z)}) != 0;
}

bool MixedGraph::same_node_table(const MixedGraph &o) const {
    return names_ == o.names_ && latent_ == o.latent_;
}

bool MixedGraph::same_marks(const MixedGraph &o) const {
    if (!same_node_table(o)) return false;
    if (marks_.size() != o.marks_.size()) return false;
    for (const auto &[key, mk] : marks_) {
        auto it = o.marks_.find(key);
        if (it == o.marks_.end() || it->second != mk) return false;
    }
    return true;
}

std::vector<std::pair<int, int>> MixedGraph::adjacency_pairs() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(marks_.size());
    for (const auto &[key, mk] : marks_) {
        (void)mk;
        out.emplace_back(static_cast<int>(key >> 32), static_cast<int>(key & 0xffffffffu));
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_def_collider(const MixedGraph &g, int a, int b, int c) {
    if (!g.has_edge(a, b) || !g.has_edge(b, c))
        throw std::invalid_argument("is_def_collider: missing edge");
    return g.end_at(b, a) == Endpoint::Arrow && g.end_at(b, c) == Endpoint::Arrow;
}

bool is_definite_noncollider(const MixedGraph &g, int a, int b, int c) {
    if (!g.has_edge(a, b) || !g.has_edge(b, c))
        throw std::invalid_argument("is_definite_noncollider: missing edge");
    if (g.end_at(b, a) == Endpoint::Tail || g.end_at(b, c) == Endpoint::Tail) return true;
    return g.end_at(b, a) == Endpoint::Circle && g.end_at(b, c) == Endpoint::Circle &&
           !g.has_edge(a, c);
}

std::vector<int> ancestors(const MixedGraph &g, int x) {
    // Reverse reachability along directed edges; a node is its own ancestor.
    std::vector<bool> seen(g.num_nodes(), false);
    std::vector<int> stack{x}, out;
    seen[x] = true;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        out.push_back(v);
        for (int p : g.parents(v))
            if (!seen[p]) {
                seen[p] = true;
                stack.push_back(p);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> descendants(const MixedGraph &g, int x) {
    std::vector<bool> seen(g.num_nodes(), false);
    std::vector<int> stack{x}, out;
    seen[x] = true;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        out.push_back(v);
        for (int c : g.children(v))
            if (!seen[c]) {
                seen[c] = true;
                stack.push_back(c);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<std::vector<int>> topological_order(const MixedGraph &g) {
    int n = g.num_nodes();
    std::vector<int> indeg(n, 0);
    for (int v = 0; v < n; ++v) indeg[v] = static_cast<int>(g.parents(v).size());
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.push(v);
    std::vector<int> order;
    while (!ready.empty()) {
        int v = ready.top();
        ready.pop();
        order.push_back(v);
        for (int c : g.children(v))
            if (--indeg[c] == 0) ready.push(c);
    }
    if (static_cast<int>(order.size()) != n) return std::nullopt;
    return order;
}

bool is_dag(const MixedGraph &g) {
    for (const Edge &e : g.edges()) {
        bool directed = (e.end_a == Endpoint::Tail && e.end_b == Endpoint::Arrow) ||
                        (e.end_a == Endpoint::Arrow && e.end_b == Endpoint::Tail);
        if (!directed) return false;
    }
    return topological_order(g).has_value();
}

namespace {
void all_paths_dfs(const MixedGraph &g, int cur, int y, int max_len, std::vector<int> &path,
                   std::vector<bool> &on_path, std::vector<std::vector<int>> &out) {
    if (cur == y) {
        out.push_back(path);
        return;
    }
    if (static_cast<int>(path.size()) - 1 >= max_len) return;
    for (int nb : g.adjacent(cur)) {
        if (on_path[nb]) continue;
        on_path[nb] = true;
        path.push_back(nb);
        all_paths_dfs(g, nb, y, max_len, path, on_path, out);
        path.pop_back();
        on_path[nb] = false;
    }
}
}  // namespace

std::vector<std::vector<int>> all_paths(const MixedGraph &g, int x, int y, int max_len) {
    if (x == y) throw std::invalid_argument("all_paths: endpoints must differ");
    std::vector<std::vector<int>> out;
    std::vector<int> path{x};
    std::vector<bool> on_path(g.num_nodes(), false);
    on_path[x] = true;
    all_paths_dfs(g, x, y, max_len, path, on_path, out);
    return out;
}

AncestorIndex::AncestorIndex(const MixedGraph &g) {
    int n = g.num_nodes();
    anc_.assign(n, std::vector<bool>(n, false));
    for (int d = 0; d < n; ++d)
        for (int a : ancestors(g, d)) anc_[d][a] = true;
}

bool AncestorIndex::is_ancestor_of_any(int a, std::span<const int> ds) const {
    for (int d : ds)
        if (is_ancestor(a, d)) return true;
    return false;
}

namespace {

std::string mark_pair_text(Endpoint left, Endpoint right) {
    auto lc = [](Endpoint e) {
        switch (e) {
            case Endpoint::Tail: return '-';
            case Endpoint::Arrow: return '<';
            case Endpoint::Circle: return 'o';
        }
        return '?';
    };
    auto rc = [](Endpoint e) {
        switch (e) {
            case Endpoint::Tail: return '-';
            case Endpoint::Arrow: return '>';
            case Endpoint::Circle: return 'o';
        }
        return '?';
    };
    return std::string() + lc(left) + '-' + rc(right);
}

bool parse_mark_pair(const std::string &tok, Endpoint &left, Endpoint &right) {
    if (tok.size() != 3 || tok[1] != '-') return false;
    switch (tok[0]) {
        case '-': left = Endpoint::Tail; break;
        case '<': left = Endpoint::Arrow; break;
        case 'o': left = Endpoint::Circle; break;
        default: return false;
    }
    switch (tok[2]) {
        case '-': right = Endpoint::Tail; break;
        case '>': right = Endpoint::Arrow; break;
        case 'o': right = Endpoint::Circle; break;
        default: return false;
    }
    return true;
}

std::string trim(const std::string &s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::string write_graph_text(const MixedGraph &g) {
    std::ostringstream out;
    out << "Graph Nodes:\n";
    for (int v = 0; v < g.num_nodes(); ++v) {
        if (v) out << ",";
        if (g.is_latent(v))
            out << "(" << g.name(v) << ")";
        else
            out << g.name(v);
    }
    out << "\n\nGraph Edges:\n";
    int k = 0;
    for (Edge e : g.edges()) {
        // Canonical direction: arrows point right when only one side has one.
        if (e.end_a == Endpoint::Arrow && e.end_b != Endpoint::Arrow) {
            std::swap(e.a, e.b);
            std::swap(e.end_a, e.end_b);
        }
        out << ++k << ". " << g.name(e.a) << " " << mark_pair_text(e.end_a, e.end_b) << " "
            << g.name(e.b) << "\n";
    }
    return out.str();
}

MixedGraph parse_graph_text(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    MixedGraph g;
    enum { Preamble, Nodes, Edges } state = Preamble;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        if (line == "Graph Nodes:") {
            state = Nodes;
            continue;
        }
        if (line == "Graph Edges:") {
            state = Edges;
            continue;
        }
        if (state == Nodes) {
            std::stringstream ss(line);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                tok = trim(tok);
                if (tok.empty()) continue;
                bool latent = tok.front() == '(' && tok.back() == ')';
                if (latent) tok = trim(tok.substr(1, tok.size() - 2));
                g.add_node(tok, latent);
            }
        } else if (state == Edges) {
            // "<k>. A o-> B"
            size_t dot = line.find('.');
            std::string rest = dot == std::string::npos ? line : trim(line.substr(dot + 1));
            std::istringstream es(rest);
            std::string na, mk, nb;
            if (!(es >> na >> mk >> nb)) throw std::runtime_error("bad edge line: " + line);
            Endpoint ea, eb;
            if (!parse_mark_pair(mk, ea, eb)) throw std::runtime_error("bad edge mark: " + mk);
            int a = g.index_of(na), b = g.index_of(nb);
            if (a < 0 || b < 0) throw std::runtime_error("edge references unknown node: " + line);
            g.add_edge(a, b, ea, eb);
        }
    }
    if (g.num_nodes() == 0) throw std::runtime_error("graph text has no nodes");
    return g;
}

MixedGraph load_graph_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_graph_text(buf.str());
}

void save_graph_file(const MixedGraph &g, const std::string &path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write graph file: " + path);
    out << write_graph_text(g);
}

}  // namespace pagsearch
