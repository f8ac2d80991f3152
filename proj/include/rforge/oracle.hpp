#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "rforge/gadgets.hpp"
#include "rforge/graph.hpp"
#include "rforge/hypergraph.hpp"
#include "rforge/subdivision.hpp"

// Brute-force reference implementations. These share no code with the modules
// they validate and carry hard size guards; exceeding a guard throws rather
// than silently sampling.
namespace rforge::oracle {

inline constexpr int kGirthEdgeGuard = 8;      // brute_girth: <= 8 hyperedges, or
inline constexpr int kGirthVertexGuard = 20;   //              <= 20 vertices
inline constexpr int kTransversalGuard = 20;   // brute_transversal ground set
inline constexpr int kSubdivisionGuard = 14;   // brute_find_mono_subdivision host order
inline constexpr int kExpanderGuard = 18;      // verify_expander order

struct Verdict {
    bool ok = false;
    std::string notes;
    std::vector<int> witness;
};

// ---------------------------------------------------------------------------
// Exhaustive Berge girth: enumerate alternating sequences v1 E1 v2 E2 ...

inline std::optional<int> brute_girth(const Hypergraph& h) {
    int m = static_cast<int>(h.m());
    if (m > kGirthEdgeGuard && h.n > kGirthVertexGuard)
        throw std::invalid_argument("brute_girth: size guard exceeded");
    if (m < 2) return std::nullopt;

    std::vector<int> vseq, eseq;
    std::vector<char> vused(h.n, 0), eused(m, 0);

    // depth-limited search for a closure of exactly `target` hyperedges;
    // iterative deepening makes short girths cheap and bounds the fanout
    std::function<bool(int)> extend = [&](int target) -> bool {
        int last_e = eseq.back();
        if (static_cast<int>(eseq.size()) == target)
            return h.contains(last_e, vseq[0]);  // close: v1 in E_k
        for (int u : h.edges[last_e]) {
            if (vused[u]) continue;
            vused[u] = 1;
            vseq.push_back(u);
            for (int e2 = 0; e2 < m; ++e2) {
                if (eused[e2] || !h.contains(e2, u)) continue;
                eused[e2] = 1;
                eseq.push_back(e2);
                bool hit = extend(target);
                eseq.pop_back();
                eused[e2] = 0;
                if (hit) {
                    vseq.pop_back();
                    vused[u] = 0;
                    return true;
                }
            }
            vseq.pop_back();
            vused[u] = 0;
        }
        return false;
    };

    for (int target = 2; target <= m; ++target) {
        for (int e1 = 0; e1 < m; ++e1) {
            for (int v1 : h.edges[e1]) {
                vused[v1] = 1;
                eused[e1] = 1;
                vseq = {v1};
                eseq = {e1};
                bool hit = extend(target);
                vused[v1] = 0;
                eused[e1] = 0;
                if (hit) return target;
            }
        }
    }
    return std::nullopt;  // acyclic: full exhaustion found no closure
}

// ---------------------------------------------------------------------------
// Exact minimum transversal by subset enumeration

inline int brute_transversal(const std::vector<std::vector<int>>& family) {
    if (family.empty()) return 0;
    std::vector<int> ground;
    for (const auto& s : family) ground.insert(ground.end(), s.begin(), s.end());
    std::sort(ground.begin(), ground.end());
    ground.erase(std::unique(ground.begin(), ground.end()), ground.end());
    int g = static_cast<int>(ground.size());
    if (g > kTransversalGuard) throw std::invalid_argument("brute_transversal: size guard exceeded");
    for (const auto& s : family)
        if (s.empty()) throw std::invalid_argument("brute_transversal: empty member has no transversal");
    // remap sets to bitmasks over the ground set
    std::vector<uint32_t> masks;
    for (const auto& s : family) {
        uint32_t m = 0;
        for (int x : s) {
            int idx = static_cast<int>(std::lower_bound(ground.begin(), ground.end(), x) -
                                       ground.begin());
            m |= 1u << idx;
        }
        masks.push_back(m);
    }
    for (int size = 0; size <= g; ++size) {
        // enumerate subsets of exactly `size` elements
        std::vector<int> idx(size);
        std::function<bool(int, int)> rec = [&](int pos, int start) -> bool {
            if (pos == size) {
                uint32_t t = 0;
                for (int i : idx) t |= 1u << i;
                for (uint32_t m : masks)
                    if (!(m & t)) return false;
                return true;
            }
            for (int i = start; i < g; ++i) {
                idx[pos] = i;
                if (rec(pos + 1, i + 1)) return true;
            }
            return false;
        };
        if (rec(0, 0)) return size;
    }
    return g;  // unreachable: the whole ground set is always a transversal
}

// ---------------------------------------------------------------------------
// Subdivision embedding verification

// Checks that `mapping` embeds H^sigma monochromatically into the host graph:
// injectivity, edge adjacency with one common color, per-edge path lengths by
// construction, and (induced mode) no host edge between mapped vertices
// outside the image. Failures carry the violating vertex/edge pair.
inline Verdict verify_subdivision_embedding(const Graph& host, const std::vector<int>& coloring,
                                            const std::vector<int>& mapping,
                                            const SubdivisionTask& task) {
    Verdict v;
    if (coloring.size() != host.edges.size()) {
        v.notes = "coloring not total on host edges";
        return v;
    }
    Graph hs = task.subdivided();
    if (static_cast<int>(mapping.size()) != hs.n) {
        v.notes = "mapping not total on V(H^sigma)";
        return v;
    }
    std::map<int, int> seen;  // image -> preimage
    for (int x = 0; x < hs.n; ++x) {
        int y = mapping[x];
        if (y < 0 || y >= host.n) {
            v.notes = "image vertex out of range";
            v.witness = {x, y};
            return v;
        }
        auto [it, fresh] = seen.emplace(y, x);
        if (!fresh) {
            v.notes = "mapping not injective";
            v.witness = {it->second, x, y};
            return v;
        }
    }
    int color = -1;
    for (auto& [a, b] : hs.edges) {
        auto id = host.edge_id(mapping[a], mapping[b]);
        if (!id) {
            v.notes = "image edge missing in host";
            v.witness = {a, b, mapping[a], mapping[b]};
            return v;
        }
        int c = coloring[*id];
        if (color == -1) color = c;
        if (c != color) {
            v.notes = "image not monochromatic";
            v.witness = {a, b, color, c};
            return v;
        }
    }
    if (task.mode == Mode::induced) {
        // no host edge may join two mapped vertices outside the image edges
        std::vector<int> pre(host.n, -1);
        for (int x = 0; x < hs.n; ++x) pre[mapping[x]] = x;
        for (auto& [hu, hv] : host.edges) {
            if (pre[hu] < 0 || pre[hv] < 0) continue;
            if (!hs.has_edge(pre[hu], pre[hv])) {
                v.notes = "induced violation: extra host edge inside image";
                v.witness = {pre[hu], pre[hv], hu, hv};
                return v;
            }
        }
    }
    v.ok = true;
    v.notes = "embedding verified";
    return v;
}

// ---------------------------------------------------------------------------
// Existence oracle for tiny hosts: exhaustive injection search

inline Verdict brute_find_mono_subdivision(const Graph& host, const std::vector<int>& coloring,
                                           const SubdivisionTask& task) {
    Verdict out;
    if (host.n > kSubdivisionGuard)
        throw std::invalid_argument("brute_find_mono_subdivision: size guard exceeded");
    Graph hs = task.subdivided();
    if (hs.n > host.n) {
        out.notes = "target larger than host";
        return out;
    }
    // assignment order: vertices of H^sigma in a path-contiguous order
    std::vector<int> order;
    std::vector<char> placed(hs.n, 0);
    for (int v = 0; v < task.base.n; ++v) {
        order.push_back(v);
        placed[v] = 1;
    }
    for (size_t i = 0; i < task.base.edges.size(); ++i)
        for (int x : task.path_of_edge(static_cast<int>(i)))
            if (!placed[x]) {
                order.push_back(x);
                placed[x] = 1;
            }

    std::vector<int> map(hs.n, -1);
    std::vector<char> used(host.n, 0);
    int color = -1;

    std::function<bool(size_t)> rec = [&](size_t pos) -> bool {
        if (pos == order.size()) {
            auto verdict = verify_subdivision_embedding(host, coloring, map, task);
            return verdict.ok;
        }
        int x = order[pos];
        for (int y = 0; y < host.n; ++y) {
            if (used[y]) continue;
            // all already-mapped neighbors of x must be host-adjacent with the color
            bool fits = true;
            int local_color = color;
            for (int xn : hs.adj[x]) {
                if (map[xn] < 0) continue;
                auto id = host.edge_id(y, map[xn]);
                if (!id) { fits = false; break; }
                int c = coloring[*id];
                if (local_color == -1) local_color = c;
                if (c != local_color) { fits = false; break; }
            }
            if (!fits) continue;
            int save_color = color;
            map[x] = y;
            used[y] = 1;
            color = local_color;
            if (rec(pos + 1)) return true;
            color = save_color;
            used[y] = 0;
            map[x] = -1;
        }
        return false;
    };

    if (rec(0)) {
        out.ok = true;
        out.notes = "monochromatic copy found";
        out.witness = map;
    } else {
        out.notes = "no monochromatic copy";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exhaustive expander check: every S with |S| <= |V|/2 has |N(S)| >= gamma|S|

inline Verdict verify_expander(const Graph& g, double gamma) {
    Verdict v;
    if (g.n > kExpanderGuard) throw std::invalid_argument("verify_expander: size guard exceeded");
    int n = g.n;
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
        int size = __builtin_popcount(mask);
        if (2 * size > n) continue;
        uint32_t nb = 0;
        for (int x = 0; x < n; ++x) {
            if (!(mask >> x & 1)) continue;
            for (int y : g.adj[x])
                if (!(mask >> y & 1)) nb |= 1u << y;
        }
        if (__builtin_popcount(nb) < gamma * size) {
            v.notes = "expansion violated";
            for (int x = 0; x < n; ++x)
                if (mask >> x & 1) v.witness.push_back(x);
            return v;
        }
    }
    v.ok = true;
    v.notes = "gamma-expander verified";
    return v;
}

}  // namespace rforge::oracle
