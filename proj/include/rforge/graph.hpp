#pragma once

#include <algorithm>
#include <cassert>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rforge {

using Edge = std::pair<int, int>;  // normalized: first < second

inline Edge make_edge(int u, int v) {
    assert(u != v);
    return u < v ? Edge{u, v} : Edge{v, u};
}

// Simple undirected graph. No self-loops, no parallel edges. Edges are kept
// sorted so that edge ids are stable and lookups are branch-free of hashing.
// An optional color label per edge (parallel vector) represents k-colorings.
struct Graph {
    int n = 0;
    std::vector<Edge> edges;
    std::vector<int> colors;              // empty, or parallel to edges
    std::vector<std::vector<int>> adj;    // built by finalize()

    Graph() = default;
    explicit Graph(int n_verts) : n(n_verts) {}

    Graph(int n_verts, std::vector<Edge> es, std::vector<int> cols = {})
        : n(n_verts), edges(std::move(es)), colors(std::move(cols)) {
        finalize();
    }

    void add_edge(int u, int v) { edges.push_back(make_edge(u, v)); }

    // Normalizes, sorts, rejects loops/duplicates, rebuilds adjacency.
    void finalize() {
        for (auto& e : edges) {
            if (e.first == e.second) throw std::invalid_argument("graph: self-loop");
            if (e.first > e.second) std::swap(e.first, e.second);
            if (e.first < 0 || e.second >= n) throw std::invalid_argument("graph: vertex out of range");
        }
        if (colors.empty()) {
            std::sort(edges.begin(), edges.end());
        } else {
            if (colors.size() != edges.size())
                throw std::invalid_argument("graph: colors not parallel to edges");
            std::vector<size_t> order(edges.size());
            for (size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::sort(order.begin(), order.end(),
                      [&](size_t a, size_t b) { return edges[a] < edges[b]; });
            std::vector<Edge> es(edges.size());
            std::vector<int> cs(colors.size());
            for (size_t i = 0; i < order.size(); ++i) {
                es[i] = edges[order[i]];
                cs[i] = colors[order[i]];
            }
            edges = std::move(es);
            colors = std::move(cs);
        }
        if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
            throw std::invalid_argument("graph: parallel edge");
        adj.assign(n, {});
        for (auto& [u, v] : edges) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        for (auto& a : adj) std::sort(a.begin(), a.end());
    }

    size_t e() const { return edges.size(); }
    int degree(int v) const { return static_cast<int>(adj[v].size()); }

    int max_degree() const {
        int d = 0;
        for (const auto& a : adj) d = std::max<int>(d, static_cast<int>(a.size()));
        return d;
    }

    bool has_edge(int u, int v) const {
        Edge e = make_edge(u, v);
        return std::binary_search(edges.begin(), edges.end(), e);
    }

    std::optional<int> edge_id(int u, int v) const {
        Edge e = make_edge(u, v);
        auto it = std::lower_bound(edges.begin(), edges.end(), e);
        if (it == edges.end() || *it != e) return std::nullopt;
        return static_cast<int>(it - edges.begin());
    }

    // vertices with positive degree
    std::vector<int> support() const {
        std::vector<int> out;
        for (int v = 0; v < n; ++v)
            if (!adj[v].empty()) out.push_back(v);
        return out;
    }
};

inline Graph complete_graph(int k) {
    Graph g(k);
    for (int u = 0; u < k; ++u)
        for (int v = u + 1; v < k; ++v) g.add_edge(u, v);
    g.finalize();
    return g;
}

inline Graph cycle_graph(int k) {
    Graph g(k);
    for (int v = 0; v < k; ++v) g.add_edge(v, (v + 1) % k);
    g.finalize();
    return g;
}

// e_G(A) <= ratio * |A|, the edge-sparsity test on vertex subsets.
// A = {} passes vacuously.
inline bool check_edge_sparsity_q2(const Graph& g, const std::vector<int>& a, double ratio) {
    if (a.empty()) return true;
    std::vector<char> in(g.n, 0);
    for (int v : a) in[v] = 1;
    size_t inside = 0;
    for (auto& [u, v] : g.edges)
        if (in[u] && in[v]) ++inside;
    return static_cast<double>(inside) <= ratio * static_cast<double>(a.size());
}

inline size_t edges_inside(const Graph& g, const std::vector<char>& in) {
    size_t cnt = 0;
    for (auto& [u, v] : g.edges)
        if (in[u] && in[v]) ++cnt;
    return cnt;
}

}  // namespace rforge
