#pragma once

#include <numeric>
#include <stdexcept>
#include <vector>

#include "rforge/graph.hpp"
#include "rforge/types.hpp"

namespace rforge {

// A base graph H with per-edge subdivision lengths sigma. H^sigma replaces
// edge i by a path of length sigma[i]; original vertices keep their ids,
// internal vertices are numbered consecutively per edge in edge order.
struct SubdivisionTask {
    Graph base;                // H
    std::vector<int> sigma;    // parallel to base.edges, each >= 1
    int max_degree_bound = 2;  // D
    Mode mode = Mode::plain;
    CaseKind case_kind = CaseKind::even;

    void validate() const {
        if (sigma.size() != base.edges.size())
            throw std::invalid_argument("task: sigma not parallel to E(H)");
        for (int s : sigma)
            if (s < 1) throw std::invalid_argument("task: sigma(e) must be >= 1");
        if (case_kind == CaseKind::even)
            for (int s : sigma)
                if (s % 2 != 0) throw std::invalid_argument("task: even case requires even sigma");
        if (base.max_degree() > max_degree_bound)
            throw std::invalid_argument("task: max degree of H exceeds D");
    }

    // |V(H^sigma)| = v(H) + sum(sigma(e) - 1)
    int subdivided_order() const {
        int n = base.n;
        for (int s : sigma) n += s - 1;
        return n;
    }

    // first internal vertex id of edge i in H^sigma
    int internal_base(int edge_idx) const {
        int off = base.n;
        for (int i = 0; i < edge_idx; ++i) off += sigma[i] - 1;
        return off;
    }

    // The subdivided graph itself, with the canonical vertex numbering.
    Graph subdivided() const {
        Graph g(subdivided_order());
        int next = base.n;
        for (size_t i = 0; i < base.edges.size(); ++i) {
            auto [u, v] = base.edges[i];
            int prev = u;
            for (int j = 0; j + 1 < sigma[i]; ++j) {
                g.add_edge(prev, next);
                prev = next++;
            }
            g.add_edge(prev, v);
        }
        g.finalize();
        return g;
    }

    // path of H^sigma vertex ids realizing edge i, from tail to head
    std::vector<int> path_of_edge(int edge_idx) const {
        auto [u, v] = base.edges[edge_idx];
        std::vector<int> p{u};
        int b = internal_base(edge_idx);
        for (int j = 0; j + 1 < sigma[edge_idx]; ++j) p.push_back(b + j);
        p.push_back(v);
        return p;
    }
};

// sigma'(e) window [ceil(sigma/L2), floor(sigma/L1)]
struct SigmaWindow {
    int lo = 0, hi = 0;
    bool empty() const { return lo > hi; }
};

inline SigmaWindow sigma_window(int sigma, int l1, int l2) {
    SigmaWindow w;
    w.lo = (sigma + l2 - 1) / l2;
    w.hi = sigma / l1;
    return w;
}

// An embedding of some subdivision into a graph: vertex_map[hsigma_vertex] =
// image vertex. sigma_realized records per-edge path lengths when they may
// differ from the task's sigma (the sigma' stage).
struct SubdivisionEmbedding {
    std::vector<int> vertex_map;
    std::vector<int> sigma_realized;
};

}  // namespace rforge
