#include "pagsearch/disc_paths.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace pagsearch {

std::vector<int> DiscPath::full_path() const {
    std::vector<int> p;
    p.push_back(x);
    p.insert(p.end(), body.begin(), body.end());
    p.push_back(v);
    p.push_back(y);
    return p;
}

bool DiscPath::operator<(const DiscPath &o) const {
    return std::tie(x, y, v, body) < std::tie(o.x, o.y, o.v, o.body);
}

bool DiscPath::operator==(const DiscPath &o) const {
    return x == o.x && y == o.y && v == o.v && w == o.w && body == o.body;
}

bool exists_discriminating_path(const MixedGraph &g, int x, int w, int v, int y,
                                std::span<const int> body, DiscMode mode) {
    std::set<int> distinct{x, w, v, y};
    if (distinct.size() != 4) return false;
    if (mode.strict && g.has_edge(x, y)) return false;
    if (!g.has_edge(v, y)) return false;
    if (std::find(body.begin(), body.end(), w) == body.end()) return false;

    // Walk <x, body..., v>; every middle node must be a definite collider on
    // the path and satisfy the interior condition toward y.
    std::vector<int> p;
    p.push_back(x);
    p.insert(p.end(), body.begin(), body.end());
    p.push_back(v);
    std::set<int> seen(p.begin(), p.end());
    if (seen.size() != p.size() || seen.count(y)) return false;
    for (size_t i = 1; i + 1 < p.size(); ++i) {
        int n1 = p[i - 1], n2 = p[i], n3 = p[i + 1];
        if (!g.has_edge(n1, n2) || !g.has_edge(n2, n3)) return false;
        if (!is_def_collider(g, n1, n2, n3)) return false;
        if (mode.strict) {
            if (!g.is_parent(n2, y)) return false;
        } else {
            if (!g.has_edge(n2, y) || g.is_parent(y, n2)) return false;
        }
    }
    if (g.end_at(w, v) != Endpoint::Arrow)
        throw std::logic_error("discriminating path enumeration: v must point at w");
    return true;
}

namespace {

void disc_bfs(const MixedGraph &g, int w, int v, int y, int max_len, DiscMode mode,
              std::set<DiscPath> &out) {
    // States are (tip, body) with the body ordered from w outward; dedupe on
    // (tip, body-as-set) keeps the frontier polynomial in practice.
    struct State {
        int tip;
        std::vector<int> body;  // body.front() == w, body.back() == tip
    };
    std::set<std::pair<int, std::vector<int>>> seen;
    std::deque<State> queue;
    queue.push_back({w, {w}});
    {
        std::vector<int> key{w};
        seen.insert({w, key});
    }
    while (!queue.empty()) {
        State st = queue.front();
        queue.pop_front();
        if (max_len != -1 && static_cast<int>(st.body.size()) > max_len) continue;
        for (int u : g.nodes_into(st.tip, Endpoint::Arrow)) {
            if (u == v || u == y) continue;
            if (std::find(st.body.begin(), st.body.end(), u) != st.body.end()) continue;
            DiscPath cand;
            cand.x = u;
            cand.body.assign(st.body.rbegin(), st.body.rend());  // path order, w last
            cand.v = v;
            cand.y = y;
            cand.w = w;
            if (exists_discriminating_path(g, cand.x, w, v, y, cand.body, mode))
                out.insert(cand);
            // Extend only through parents of y that can become colliders on
            // the path (arrowhead at u from the tip side).
            if (!g.is_parent(u, y)) continue;
            if (g.end_at(u, st.tip) != Endpoint::Arrow) continue;
            std::vector<int> body = st.body;
            body.push_back(u);
            if (max_len != -1 && static_cast<int>(body.size()) > max_len) continue;
            std::vector<int> key(body.begin(), body.end());
            std::sort(key.begin(), key.end());
            if (seen.insert({u, key}).second) queue.push_back({u, std::move(body)});
        }
    }
}

}  // namespace

std::vector<DiscPath> list_discriminating_paths(const MixedGraph &g, int w, int y, int max_len,
                                                DiscMode mode) {
    std::set<DiscPath> out;
    if (!g.has_edge(w, y)) return {};
    if (mode.strict) {
        if (!g.is_parent(w, y)) return {};
    } else {
        if (g.is_parent(y, w)) return {};
    }
    for (int vv : g.adjacent(w)) {
        if (vv == y || !g.has_edge(vv, y)) continue;
        if (g.end_at(vv, y) != Endpoint::Circle) continue;  // v o-* y
        if (g.end_at(y, vv) != Endpoint::Arrow) continue;   // v *-> y
        disc_bfs(g, w, vv, y, max_len, mode, out);
    }
    return std::vector<DiscPath>(out.begin(), out.end());
}

std::vector<DiscPath> list_discriminating_paths_all_pairs(const MixedGraph &g, int max_len,
                                                          DiscMode mode) {
    std::vector<DiscPath> out;
    for (int w = 0; w < g.num_nodes(); ++w) {
        for (int y : g.adjacent(w)) {
            auto paths = list_discriminating_paths(g, w, y, max_len, mode);
            out.insert(out.end(), paths.begin(), paths.end());
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<DiscPath> list_pre_discriminating_paths(const MixedGraph &g, int x, int y,
                                                    int max_len) {
    if (!g.has_edge(x, y))
        throw std::invalid_argument("list_pre_discriminating_paths: pair must be adjacent");
    DiscMode relaxed{false};
    std::vector<DiscPath> out;
    for (auto [far, near] : {std::pair{x, y}, std::pair{y, x}}) {
        for (int w : g.adjacent(near)) {
            if (w == far) continue;
            for (const DiscPath &p : list_discriminating_paths(g, w, near, max_len, relaxed))
                if (p.x == far) out.push_back(p);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace pagsearch
