#ifndef TOPOREG_GRAPH_HPP
#define TOPOREG_GRAPH_HPP

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "toporeg/errors.hpp"

namespace toporeg {

// Undirected simple graph on nodes 0..n-1.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges; // normalized u < v, sorted, unique
    std::vector<std::vector<int>> adjacency;

    bool has_edge(int u, int v) const {
        if (u > v) std::swap(u, v);
        return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
    }
};

inline Graph make_graph(int n, std::vector<std::pair<int, int>> edge_list) {
    if (n <= 0) fail(ErrorCode::EmptyGraph, "graph needs at least one node");
    for (auto& [u, v] : edge_list) {
        if (u < 0 || v < 0 || u >= n || v >= n)
            fail(ErrorCode::BadConfig, "edge endpoint out of range: " + std::to_string(u) + " " +
                                           std::to_string(v));
        if (u == v) fail(ErrorCode::BadConfig, "self loop at node " + std::to_string(u));
        if (u > v) std::swap(u, v);
    }
    std::sort(edge_list.begin(), edge_list.end());
    edge_list.erase(std::unique(edge_list.begin(), edge_list.end()), edge_list.end());

    Graph g;
    g.n = n;
    g.edges = std::move(edge_list);
    g.adjacency.resize(n);
    for (const auto& [u, v] : g.edges) {
        g.adjacency[u].push_back(v);
        g.adjacency[v].push_back(u);
    }
    for (auto& nbrs : g.adjacency) std::sort(nbrs.begin(), nbrs.end());
    return g;
}

} // namespace toporeg

#endif
