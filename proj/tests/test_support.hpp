#pragma once

#include <string>
#include <vector>

#include "pagsearch/graph.hpp"

namespace pagsearch {

/// Builds a graph from a node list ("A,B,(L)" with parens for latents) and
/// edge lines in the text-format syntax ("A --> B", "A o-> B", "A <-> B").
inline MixedGraph graph_of(const std::string &nodes, const std::vector<std::string> &edges) {
    std::string text = "Graph Nodes:\n" + nodes + "\n\nGraph Edges:\n";
    int k = 0;
    for (const auto &e : edges) text += std::to_string(++k) + ". " + e + "\n";
    return parse_graph_text(text);
}

inline std::vector<int> ids(const MixedGraph &g, const std::vector<std::string> &names) {
    std::vector<int> out;
    for (const auto &n : names) out.push_back(g.index_of(n));
    return out;
}

}  // namespace pagsearch
