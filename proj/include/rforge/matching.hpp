#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rforge/graph.hpp"
#include "rforge/rng.hpp"

namespace rforge {

// s-uniform bipartite hypergraph: every hyperedge meets X in exactly one
// vertex. Vertex ids are arbitrary ints shared between x, y and edges.
struct BipartiteHypergraph {
    std::vector<int> x;
    std::vector<int> y;
    std::vector<std::vector<int>> edges;  // each sorted

    int uniformity() const { return edges.empty() ? 0 : static_cast<int>(edges[0].size()); }

    void validate() const {
        std::set<int> xs(x.begin(), x.end()), ys(y.begin(), y.end());
        if (xs.size() != x.size() || ys.size() != y.size())
            throw std::invalid_argument("bipartite hypergraph: duplicate vertex ids");
        for (int v : x)
            if (ys.count(v)) throw std::invalid_argument("bipartite hypergraph: X and Y intersect");
        size_t s = edges.empty() ? 0 : edges[0].size();
        for (const auto& e : edges) {
            if (e.size() != s) throw std::invalid_argument("bipartite hypergraph: not uniform");
            int in_x = 0;
            for (int v : e) {
                if (xs.count(v)) ++in_x;
                else if (!ys.count(v))
                    throw std::invalid_argument("bipartite hypergraph: unknown vertex in edge");
            }
            if (in_x != 1)
                throw std::invalid_argument("bipartite hypergraph: edge must meet X exactly once");
        }
    }

    int x_vertex_of(int edge_idx) const {
        std::set<int> xs(x.begin(), x.end());
        for (int v : edges[edge_idx])
            if (xs.count(v)) return v;
        throw std::logic_error("edge without X vertex");
    }
};

// N(I) = { A subset of Y : A + {x} is a hyperedge for some x in I }, deduplicated.
inline std::vector<std::vector<int>> neighborhood_family(const BipartiteHypergraph& b,
                                                         const std::vector<int>& i_set) {
    std::set<int> xs(b.x.begin(), b.x.end());
    std::set<int> is(i_set.begin(), i_set.end());
    std::set<std::vector<int>> fam;
    for (const auto& e : b.edges) {
        int xv = -1;
        for (int v : e)
            if (xs.count(v)) xv = v;
        if (xv < 0 || !is.count(xv)) continue;
        std::vector<int> rest;
        for (int v : e)
            if (v != xv) rest.push_back(v);
        fam.insert(rest);
    }
    return {fam.begin(), fam.end()};
}

// ---------------------------------------------------------------------------
// Exact minimum hitting set (transversal number) by branch and bound.

inline constexpr int kTransversalExactBound = 24;

inline int transversal_number(const std::vector<std::vector<int>>& family) {
    if (family.empty()) return 0;
    std::vector<int> ground;
    for (const auto& s : family) {
        if (s.empty()) throw std::invalid_argument("transversal_number: empty member");
        ground.insert(ground.end(), s.begin(), s.end());
    }
    std::sort(ground.begin(), ground.end());
    ground.erase(std::unique(ground.begin(), ground.end()), ground.end());
    if (static_cast<int>(ground.size()) > kTransversalExactBound)
        throw std::invalid_argument("transversal_number: exact bound exceeded");

    std::vector<uint32_t> masks;
    for (const auto& s : family) {
        uint32_t m = 0;
        for (int v : s)
            m |= 1u << (std::lower_bound(ground.begin(), ground.end(), v) - ground.begin());
        masks.push_back(m);
    }
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());

    int best = static_cast<int>(ground.size());

    // lower bound: greedily count pairwise-disjoint uncovered sets
    auto lower_bound_disjoint = [&](uint32_t chosen) {
        uint32_t occupied = 0;
        int cnt = 0;
        for (uint32_t m : masks) {
            if (m & chosen) continue;
            if (m & occupied) continue;
            occupied |= m;
            ++cnt;
        }
        return cnt;
    };

    std::function<void(uint32_t, int)> rec = [&](uint32_t chosen, int used) {
        if (used + lower_bound_disjoint(chosen) >= best) return;
        // first uncovered set; branch on its elements
        uint32_t pick = 0;
        for (uint32_t m : masks)
            if (!(m & chosen)) { pick = m; break; }
        if (!pick) {
            best = std::min(best, used);
            return;
        }
        for (int v = 0; v < static_cast<int>(ground.size()); ++v)
            if (pick >> v & 1) rec(chosen | (1u << v), used + 1);
    };
    rec(0, 0);
    return best;
}

// ---------------------------------------------------------------------------
// Haxell-type sufficient condition, checked level by level.

struct HaxellReport {
    bool passed = true;
    int levels_checked = 0;      // largest |I| examined
    bool complete = false;       // true when subset_cap >= |X|
    std::vector<int> violating_i;  // first violating I, if any
    int tau_found = -1, tau_required = -1;
};

inline constexpr int kHaxellDefaultCap = 5;

// tau(N(I)) >= (2s-3)(D|I|-1)+1 for all I with |I| <= subset_cap.
// D = 1 gives the plain matching condition.
inline HaxellReport haxell_condition(const BipartiteHypergraph& b, int d_mult,
                                     int subset_cap = kHaxellDefaultCap) {
    HaxellReport rep;
    int s = std::max(2, b.uniformity());  // s >= 2 even when no edge exists
    int nx = static_cast<int>(b.x.size());
    int cap = std::min(subset_cap, nx);
    rep.complete = cap >= nx;
    rep.levels_checked = cap;
    std::vector<int> idx;
    std::function<bool(int, int)> rec = [&](int start, int remaining) -> bool {
        if (remaining == 0) {
            std::vector<int> i_set;
            for (int i : idx) i_set.push_back(b.x[i]);
            auto fam = neighborhood_family(b, i_set);
            int tau = fam.empty() ? 0 : transversal_number(fam);
            int need = (2 * s - 3) * (d_mult * static_cast<int>(i_set.size()) - 1) + 1;
            if (tau < need) {
                rep.passed = false;
                rep.violating_i = i_set;
                rep.tau_found = tau;
                rep.tau_required = need;
                return false;
            }
            return true;
        }
        for (int i = start; i <= nx - remaining; ++i) {
            idx.push_back(i);
            bool ok = rec(i + 1, remaining - 1);
            idx.pop_back();
            if (!ok) return false;
        }
        return true;
    };
    for (int size = 1; size <= cap && rep.passed; ++size) rec(0, size);
    return rep;
}

// ---------------------------------------------------------------------------
// D-matching search via the vertex-splitting reduction + exhaustive
// backtracking with disjointness pruning.

struct DMatching {
    std::vector<std::vector<int>> per_x;  // per X-vertex (in b.x order): D edge indices
    int d_mult = 1;
};

struct DMatchingResult {
    bool found = false;
    bool conclusive = true;  // false when the node budget ran out
    DMatching matching;
    long long nodes = 0;
};

inline bool verify_d_matching(const BipartiteHypergraph& b, const DMatching& m) {
    if (m.per_x.size() != b.x.size()) return false;
    std::set<int> xs(b.x.begin(), b.x.end());
    std::set<int> used_y;
    std::set<int> used_edges;
    for (size_t i = 0; i < b.x.size(); ++i) {
        if (static_cast<int>(m.per_x[i].size()) != m.d_mult) return false;
        for (int e : m.per_x[i]) {
            if (e < 0 || e >= static_cast<int>(b.edges.size())) return false;
            if (!used_edges.insert(e).second) return false;
            if (b.x_vertex_of(e) != b.x[i]) return false;
            for (int v : b.edges[e]) {
                if (xs.count(v)) continue;
                if (!used_y.insert(v).second) return false;  // Y-parts must be disjoint
            }
        }
    }
    return true;
}

inline DMatchingResult find_d_matching(const BipartiteHypergraph& b, int d_mult,
                                       long long node_budget = 50'000'000) {
    DMatchingResult res;
    int nx = static_cast<int>(b.x.size());
    // incidence: for each x (in b.x order), its edges in index order
    std::map<int, int> xpos;
    for (int i = 0; i < nx; ++i) xpos[b.x[i]] = i;
    std::vector<std::vector<int>> inc(nx);
    for (size_t e = 0; e < b.edges.size(); ++e) inc[xpos[b.x_vertex_of(static_cast<int>(e))]].push_back(static_cast<int>(e));

    std::set<int> xs(b.x.begin(), b.x.end());
    std::set<int> used_y;
    std::vector<std::vector<int>> chosen(nx);

    // slots in (x index, copy) order realizes the D-fold vertex splitting
    std::function<bool(int, int, int)> rec = [&](int xi, int copy, int min_edge) -> bool {
        if (++res.nodes > node_budget) { res.conclusive = false; return false; }
        if (xi == nx) return true;
        if (copy == d_mult) return rec(xi + 1, 0, 0);
        for (int e : inc[xi]) {
            if (e < min_edge) continue;  // copies are interchangeable: force ascending
            bool clash = false;
            for (int v : b.edges[e])
                if (!xs.count(v) && used_y.count(v)) { clash = true; break; }
            if (clash) continue;
            for (int v : b.edges[e])
                if (!xs.count(v)) used_y.insert(v);
            chosen[xi].push_back(e);
            if (rec(xi, copy + 1, e + 1)) return true;
            chosen[xi].pop_back();
            for (int v : b.edges[e])
                if (!xs.count(v)) used_y.erase(v);
            if (!res.conclusive) return false;
        }
        return false;
    };

    if (rec(0, 0, 0)) {
        res.found = true;
        res.matching.per_x = chosen;
        res.matching.d_mult = d_mult;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Degeneracy orientation: in-degree <= d iff degeneracy <= d.

struct Orientation {
    bool ok = false;
    std::vector<int> removal_order;          // vertex removal sequence
    std::vector<std::pair<int, int>> arcs;   // (tail, head) per edge
    std::vector<int> stuck_subgraph;         // min-degree > d certificate on failure
};

inline Orientation degeneracy_orient(const Graph& g, int d) {
    Orientation o;
    std::vector<int> deg(g.n);
    std::vector<char> removed(g.n, 0);
    for (int v = 0; v < g.n; ++v) deg[v] = g.degree(v);
    std::vector<int> order;
    for (int step = 0; step < g.n; ++step) {
        int pick = -1;
        for (int v = 0; v < g.n; ++v)
            if (!removed[v] && (pick == -1 || deg[v] < deg[pick])) pick = v;
        if (deg[pick] > d) {
            for (int v = 0; v < g.n; ++v)
                if (!removed[v]) o.stuck_subgraph.push_back(v);
            return o;  // remaining subgraph certifies degeneracy > d
        }
        removed[pick] = 1;
        order.push_back(pick);
        for (int u : g.adj[pick])
            if (!removed[u]) --deg[u];
    }
    std::vector<int> pos(g.n);
    for (int i = 0; i < g.n; ++i) pos[order[i]] = i;
    for (auto& [u, v] : g.edges) {
        // orient from the later-removed endpoint to the earlier-removed one;
        // in-degree of w then equals its remaining degree at removal time
        if (pos[u] < pos[v])
            o.arcs.emplace_back(v, u);
        else
            o.arcs.emplace_back(u, v);
    }
    o.ok = true;
    o.removal_order = order;
    return o;
}

// ---------------------------------------------------------------------------
// Stable-set selection by sample-and-delete resampling (the constructive
// reading of the LLL step). Output is verified stable on every round.

struct LllResult {
    bool ok = false;
    std::vector<std::vector<int>> selected;  // per part
    int rounds_used = 0;
    std::vector<int> deficit;  // per part on exhaustion: target - best |A'_i|
    std::string error;
};

inline LllResult lll_select(const std::vector<std::vector<int>>& parts, const Graph& l, int d,
                            int target, int retries, Rng rng) {
    LllResult res;
    if (d < 1) { res.error = "d must be positive"; return res; }
    Orientation orient = degeneracy_orient(l, d);
    if (!orient.ok) {
        res.error = "graph is not d-degenerate";
        return res;
    }
    std::vector<char> in_part(l.n, 0);
    for (const auto& p : parts)
        for (int v : p) {
            if (v < 0 || v >= l.n || in_part[v]) { res.error = "parts must partition V(L)"; return res; }
            in_part[v] = 1;
        }
    for (int v = 0; v < l.n; ++v)
        if (!in_part[v]) { res.error = "parts must partition V(L)"; return res; }

    std::vector<std::vector<int>> in_nbrs(l.n);
    for (auto& [tail, head] : orient.arcs) in_nbrs[head].push_back(tail);

    double p = 1.0 / d;
    std::vector<int> best_sizes(parts.size(), 0);
    for (int round = 1; round <= retries; ++round) {
        std::vector<char> s(l.n, 0);
        for (int v = 0; v < l.n; ++v) s[v] = rng.bernoulli(p);
        // delete every sampled vertex with a sampled in-neighbor
        std::vector<char> sprime = s;
        for (int v = 0; v < l.n; ++v) {
            if (!s[v]) continue;
            for (int u : in_nbrs[v])
                if (s[u]) { sprime[v] = 0; break; }
        }
        // stability must hold unconditionally
        for (auto& [u, v] : l.edges)
            if (sprime[u] && sprime[v]) throw std::logic_error("lll_select: unstable survivor set");
        std::vector<std::vector<int>> sel(parts.size());
        bool all_met = true;
        for (size_t i = 0; i < parts.size(); ++i) {
            for (int v : parts[i])
                if (sprime[v]) sel[i].push_back(v);
            best_sizes[i] = std::max(best_sizes[i], static_cast<int>(sel[i].size()));
            if (static_cast<int>(sel[i].size()) < target) all_met = false;
        }
        if (all_met) {
            res.ok = true;
            res.selected = std::move(sel);
            res.rounds_used = round;
            return res;
        }
    }
    res.error = "retries exhausted";
    res.rounds_used = retries;
    res.deficit.resize(parts.size());
    for (size_t i = 0; i < parts.size(); ++i)
        res.deficit[i] = std::max(0, target - best_sizes[i]);
    return res;
}

}  // namespace rforge
