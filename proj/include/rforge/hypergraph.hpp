#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace rforge {

// s-uniform hypergraph on vertex set [0, n). Hyperedge identity is its index
// in `edges`; all provenance maps elsewhere key on these indices.
struct Hypergraph {
    int n = 0;
    int s = 0;
    std::vector<std::vector<int>> edges;  // each sorted, strictly increasing

    Hypergraph() = default;
    Hypergraph(int n_verts, int uniformity, std::vector<std::vector<int>> es = {})
        : n(n_verts), s(uniformity), edges(std::move(es)) {
        validate();
    }

    void validate() const {
        if (s < 2) throw std::invalid_argument("hypergraph: uniformity must be >= 2");
        for (const auto& e : edges) {
            if (static_cast<int>(e.size()) != s)
                throw std::invalid_argument("hypergraph: wrong hyperedge size");
            for (size_t i = 0; i < e.size(); ++i) {
                if (e[i] < 0 || e[i] >= n)
                    throw std::invalid_argument("hypergraph: vertex out of range");
                if (i > 0 && e[i] <= e[i - 1])
                    throw std::invalid_argument("hypergraph: hyperedge not strictly sorted");
            }
        }
    }

    size_t m() const { return edges.size(); }

    // vertex -> incident hyperedge indices
    std::vector<std::vector<int>> incidence() const {
        std::vector<std::vector<int>> inc(n);
        for (size_t i = 0; i < edges.size(); ++i)
            for (int v : edges[i]) inc[v].push_back(static_cast<int>(i));
        return inc;
    }

    std::vector<int> degrees() const {
        std::vector<int> deg(n, 0);
        for (const auto& e : edges)
            for (int v : e) ++deg[v];
        return deg;
    }

    bool contains(int edge_idx, int v) const {
        const auto& e = edges[edge_idx];
        return std::binary_search(e.begin(), e.end(), v);
    }
};

// Alternating sequence v1 E1 v2 E2 ... vk Ek with v1 in E1 ^ Ek and
// v_i in E_{i-1} ^ E_i; all vertices distinct, all hyperedge indices distinct.
struct BergeCycle {
    std::vector<int> verts;
    std::vector<int> edge_ids;
    int length() const { return static_cast<int>(verts.size()); }
};

inline bool check_berge_cycle(const Hypergraph& h, const BergeCycle& c) {
    int k = c.length();
    if (k < 2 || static_cast<int>(c.edge_ids.size()) != k) return false;
    std::vector<int> vs = c.verts, es = c.edge_ids;
    std::sort(vs.begin(), vs.end());
    std::sort(es.begin(), es.end());
    if (std::adjacent_find(vs.begin(), vs.end()) != vs.end()) return false;
    if (std::adjacent_find(es.begin(), es.end()) != es.end()) return false;
    for (int e : es)
        if (e < 0 || e >= static_cast<int>(h.m())) return false;
    for (int i = 0; i < k; ++i) {
        // v_i must lie in E_{i-1} and E_i (cyclically)
        int prev = (i + k - 1) % k;
        if (!h.contains(c.edge_ids[i], c.verts[i])) return false;
        if (!h.contains(c.edge_ids[prev], c.verts[i])) return false;
    }
    return true;
}

struct GirthResult {
    bool found = false;
    int girth = 0;         // valid when found
    BergeCycle witness;    // valid when found
};

namespace detail {

// Incidence-graph view: nodes 0..n-1 are vertices, n..n+m-1 are hyperedges.
// A Berge cycle of length t is exactly a (simple) cycle of length 2t here.
// Shortest cycle through a root via BFS with branch tracking; minimized over
// all hyperedge roots (every Berge cycle contains a hyperedge node).
struct IncidenceBfs {
    const Hypergraph& h;
    const std::vector<std::vector<int>>& inc;
    const std::vector<char>* alive;  // optional hyperedge filter
    int n, m;
    std::vector<int> dist, parent, branch, stamp;
    int cur_stamp = 0;

    IncidenceBfs(const Hypergraph& hg, const std::vector<std::vector<int>>& incidence,
                 const std::vector<char>* alive_edges = nullptr)
        : h(hg), inc(incidence), alive(alive_edges), n(hg.n), m(static_cast<int>(hg.m())),
          dist(n + m), parent(n + m), branch(n + m), stamp(n + m, -1) {}

    bool edge_alive(int e) const { return !alive || (*alive)[e]; }

    template <class F>
    void for_neighbors(int x, F&& f) const {
        if (x >= n) {
            for (int v : h.edges[x - n]) f(v);
        } else {
            for (int e : inc[x])
                if (edge_alive(e)) f(e + n);
        }
    }

    // Shortest simple cycle through root (an incidence node), length <= 2*cap.
    // Returns incidence cycle length (even) and fills node sequence, or 0.
    // Levels are processed completely: once best <= 2*dist[x] no later meet
    // can improve, so the returned length is exact for this root.
    int through_root(int root, int cap, int best_known, std::vector<int>& cyc_nodes) {
        ++cur_stamp;
        std::deque<int> q;
        dist[root] = 0;
        parent[root] = -1;
        branch[root] = -1;
        stamp[root] = cur_stamp;
        q.push_back(root);
        int bound = 2 * cap;
        if (best_known) bound = std::min(bound, best_known - 2);
        int best = 0;
        std::vector<int> best_nodes;
        while (!q.empty()) {
            int x = q.front();
            q.pop_front();
            if (best && best <= 2 * dist[x]) break;
            if (2 * dist[x] > bound) break;
            int bx = branch[x];
            for_neighbors(x, [&](int y) {
                if (y == parent[x]) return;
                if (stamp[y] != cur_stamp) {
                    if (dist[x] < cap) {
                        stamp[y] = cur_stamp;
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        branch[y] = (dist[x] == 0) ? y : bx;
                        q.push_back(y);
                    }
                    return;
                }
                if (branch[y] == bx) return;  // meet not through the root
                int len = dist[x] + dist[y] + 1;
                if (len % 2 != 0) return;  // impossible in bipartite incidence
                if (len > bound || (best && len >= best)) return;
                // reconstruct and require simplicity
                std::vector<int> px, py;
                for (int t = x; t != -1; t = parent[t]) px.push_back(t);
                for (int t = y; t != -1; t = parent[t]) py.push_back(t);
                std::vector<int> nodes(px.rbegin(), px.rend());
                nodes.insert(nodes.end(), py.begin(), py.end() - 1);
                std::vector<int> sorted_nodes = nodes;
                std::sort(sorted_nodes.begin(), sorted_nodes.end());
                if (std::adjacent_find(sorted_nodes.begin(), sorted_nodes.end()) !=
                    sorted_nodes.end())
                    return;  // non-simple meet; a shorter cycle exists elsewhere
                best = len;
                best_nodes = std::move(nodes);
            });
        }
        if (best) cyc_nodes = std::move(best_nodes);
        return best;
    }
};

inline BergeCycle cycle_from_nodes(int n, const std::vector<int>& nodes) {
    // nodes[0] is the root hyperedge; odd positions hold vertices. Reading
    // from nodes[1] and closing with the root yields v1 E1 v2 E2 ... vk Ek.
    BergeCycle c;
    int len = static_cast<int>(nodes.size());
    for (int i = 1; i <= len; ++i) {
        int node = nodes[i % len];
        if (node < n)
            c.verts.push_back(node);
        else
            c.edge_ids.push_back(node - n);
    }
    return c;
}

}  // namespace detail

// Minimum Berge-cycle length <= cap with a structural witness, or not-found.
// BFS over the bipartite incidence graph; cap bounds the search depth.
inline GirthResult berge_girth(const Hypergraph& h, int cap,
                               const std::vector<char>* alive = nullptr) {
    GirthResult res;
    if (cap < 2) throw std::invalid_argument("berge_girth: cap must be >= 2");
    if (h.m() == 0) return res;
    auto inc = h.incidence();
    detail::IncidenceBfs bfs(h, inc, alive);
    int best = 0;
    std::vector<int> best_nodes;
    for (int e = 0; e < static_cast<int>(h.m()); ++e) {
        if (!bfs.edge_alive(e)) continue;
        std::vector<int> nodes;
        int len = bfs.through_root(h.n + e, cap, best, nodes);
        if (len && (best == 0 || len < best)) {
            best = len;
            best_nodes = std::move(nodes);
            if (best == 4) break;  // length-2 Berge cycle: nothing shorter exists
        }
    }
    if (best) {
        res.found = true;
        res.girth = best / 2;
        // rotate so that a vertex leads: nodes[0] is the root hyperedge
        res.witness = detail::cycle_from_nodes(h.n, best_nodes);
    }
    return res;
}

// Every pair of hyperedges shares at most one vertex; equals berge_girth > 2.
inline bool is_linear(const Hypergraph& h) {
    std::map<std::pair<int, int>, int> pair_seen;
    for (size_t i = 0; i < h.edges.size(); ++i) {
        const auto& e = h.edges[i];
        for (size_t a = 0; a < e.size(); ++a)
            for (size_t b = a + 1; b < e.size(); ++b) {
                auto key = std::make_pair(e[a], e[b]);
                auto [it, inserted] = pair_seen.emplace(key, static_cast<int>(i));
                if (!inserted) return false;
            }
    }
    return true;
}

// (P4): sum of |h ^ A| over hyperedges with |h ^ A| >= 2 is < (5/2)|A|.
// A = {} passes vacuously (the quantifier targets nonempty A).
inline bool check_sparsity_p4(const Hypergraph& h, const std::vector<int>& a) {
    if (a.empty()) return true;
    std::vector<char> in(h.n, 0);
    for (int v : a) in[v] = 1;
    long long sum = 0;
    for (const auto& e : h.edges) {
        int cap = 0;
        for (int v : e) cap += in[v];
        if (cap >= 2) sum += cap;
    }
    return 2 * sum < 5 * static_cast<long long>(a.size());
}

// (P4'): at most 2|A| hyperedges intersect A in >= 2 vertices.
inline bool check_sparsity_p4prime(const Hypergraph& h, const std::vector<int>& a) {
    if (a.empty()) return true;
    std::vector<char> in(h.n, 0);
    for (int v : a) in[v] = 1;
    long long cnt = 0;
    for (const auto& e : h.edges) {
        int cap = 0;
        for (int v : e) cap += in[v];
        if (cap >= 2) ++cnt;
    }
    return cnt <= 2 * static_cast<long long>(a.size());
}

}  // namespace rforge
