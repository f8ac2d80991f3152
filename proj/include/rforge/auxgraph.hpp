#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rforge/gadgets.hpp"
#include "rforge/graph.hpp"
#include "rforge/hypergraph.hpp"
#include "rforge/oracle.hpp"
#include "rforge/subdivision.hpp"
#include "rforge/types.hpp"

namespace rforge {

// Auxiliary colored chord graph G: one edge per hyperedge whose gadget copy
// produced a monochromatic cycle. h_of maps each G-edge to its owning
// hyperedge; the stored cycle provides two internally disjoint arcs of
// lengths exactly L1 and L2 between the chord endpoints.
struct AuxGraph {
    Hypergraph hyper;
    Graph g;                          // colored
    std::vector<int> h_of;            // parallel to g.edges
    std::vector<std::vector<int>> arc_l1;   // host-vertex path u..v, length l1
    std::vector<std::vector<int>> arc_l2;   // host-vertex path u..v, length l2
    std::vector<std::vector<int>> stored_cycle;  // the chosen cycle per edge
    int ell = 6, l1 = 2, l2 = 4;
    std::vector<std::vector<int>> incidence;  // hypergraph incidence cache

    int hyperedge_of(int u, int v) const {
        auto id = g.edge_id(u, v);
        if (!id) throw std::invalid_argument("hyperedge_of: not an aux edge");
        return h_of[*id];
    }

    void build_caches() { incidence = hyper.incidence(); }
};

struct ExtractResult {
    bool ok = false;
    AuxGraph aux;
    std::vector<int> failed_hyperedges;  // gadget copies without a usable cycle
    std::vector<int> cycle_lengths;      // per-copy reports (plain/general)
    int modal_ell = 0;
};

namespace detail {

// chord endpoints: among all pairs at the given cycle distance, take the one
// minimizing the (min,max) host-vertex tuple
inline std::pair<int, int> pick_chord(const std::vector<int>& cyc, int dist) {
    int l = static_cast<int>(cyc.size());
    std::pair<int, int> best{-1, -1};
    for (int i = 0; i < l; ++i) {
        int u = cyc[i], v = cyc[(i + dist) % l];
        std::pair<int, int> cand{std::min(u, v), std::max(u, v)};
        if (best.first < 0 || cand < best) best = cand;
    }
    return best;
}

// split the cycle at u,v into its two arcs, each returned as a u..v path
inline std::pair<std::vector<int>, std::vector<int>> split_arcs(const std::vector<int>& cyc,
                                                                int u, int v) {
    int l = static_cast<int>(cyc.size());
    int iu = -1, iv = -1;
    for (int i = 0; i < l; ++i) {
        if (cyc[i] == u) iu = i;
        if (cyc[i] == v) iv = i;
    }
    std::vector<int> a, b;
    for (int i = iu;; i = (i + 1) % l) {
        a.push_back(cyc[i]);
        if (i == iv) break;
    }
    for (int i = iu;; i = (i + l - 1) % l) {
        b.push_back(cyc[i]);
        if (i == iv) break;
    }
    if (a.size() > b.size()) std::swap(a, b);
    return {a, b};  // first = shorter arc (length L1), second = L2
}

}  // namespace detail

// Build G from a colored host graph. Even/induced cases require every gadget
// copy to yield a cycle ("gadget failure" otherwise); plain/general keeps the
// copies whose reported odd-cycle length is the modal one.
inline ExtractResult extract_aux(const HostGraph& host, const std::vector<int>& coloring,
                                 Mode mode, CaseKind case_kind, const Gadget& gadget) {
    if (coloring.size() != host.graph.edges.size())
        throw std::invalid_argument("extract_aux: coloring must be total");
    ExtractResult res;
    int m = static_cast<int>(host.base.m());
    bool general_plain = mode == Mode::plain && case_kind == CaseKind::general;
    int ell_target = case_kind == CaseKind::even ? 6 : (mode == Mode::induced ? 5 : 0);

    // gadget copies as local colored graphs over the sorted hyperedge verts
    std::vector<std::vector<int>> owner_edges(m);
    for (size_t e = 0; e < host.graph.edges.size(); ++e)
        owner_edges[host.edge_owner[e]].push_back(static_cast<int>(e));

    std::vector<std::optional<MonoCycle>> found(m);
    std::vector<int> lengths;
    for (int h = 0; h < m; ++h) {
        const auto& verts = host.base.edges[h];  // sorted host ids
        std::map<int, int> local;
        for (size_t i = 0; i < verts.size(); ++i) local[verts[i]] = static_cast<int>(i);
        Graph copy(static_cast<int>(verts.size()));
        std::vector<int> cols;
        for (int e : owner_edges[h]) {
            auto [u, v] = host.graph.edges[e];
            copy.add_edge(local[u], local[v]);
            cols.push_back(coloring[e]);
        }
        copy.colors = std::move(cols);
        copy.finalize();
        std::optional<MonoCycle> mc;
        if (general_plain)
            mc = find_mono_odd_cycle(copy, gadget.target_cycle_len);
        else
            mc = find_mono_cycle_exact(copy, ell_target, mode == Mode::induced);
        if (mc) {
            for (int& x : mc->verts) x = verts[x];  // back to host ids
            found[h] = mc;
            if (general_plain) lengths.push_back(mc->length());
        } else {
            res.failed_hyperedges.push_back(h);
        }
    }
    res.cycle_lengths = lengths;

    if (!general_plain && !res.failed_hyperedges.empty()) return res;  // gadget failure
    if (general_plain && lengths.empty()) return res;

    int ell = general_plain ? most_frequent_odd_length(lengths) : ell_target;
    res.modal_ell = ell;
    int chord_dist = general_plain ? (ell - 1) / 2 : 2;

    AuxGraph aux;
    aux.hyper = host.base;
    aux.ell = ell;
    aux.l1 = (ell - 1) / 2;
    aux.l2 = (ell + 2) / 2;  // ceil((ell+1)/2)
    Graph g(host.base.n);
    std::vector<int> colors;
    std::vector<int> h_of;
    std::vector<std::vector<int>> arcs1, arcs2, cycles;
    for (int h = 0; h < m; ++h) {
        if (!found[h]) continue;
        if (general_plain && found[h]->length() != ell) continue;  // non-modal copy
        const auto& cyc = found[h]->verts;
        auto [u, v] = detail::pick_chord(cyc, chord_dist);
        auto [a1, a2] = detail::split_arcs(cyc, u, v);
        // normalize arcs to run from min(u,v) to max(u,v)
        if (a1.front() != std::min(u, v)) std::reverse(a1.begin(), a1.end());
        if (a2.front() != std::min(u, v)) std::reverse(a2.begin(), a2.end());
        g.add_edge(u, v);
        colors.push_back(found[h]->color);
        h_of.push_back(h);
        arcs1.push_back(a1);
        arcs2.push_back(a2);
        cycles.push_back(cyc);
    }
    // edges sort under finalize; keep parallel arrays aligned
    std::vector<size_t> order(g.edges.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<Edge> raw = g.edges;
    for (auto& e : raw)
        if (e.first > e.second) std::swap(e.first, e.second);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return raw[a] < raw[b]; });
    Graph sorted_g(host.base.n);
    aux.h_of.clear();
    for (size_t i : order) {
        sorted_g.edges.push_back(raw[i]);
        sorted_g.colors.push_back(colors[i]);
        aux.h_of.push_back(h_of[i]);
        aux.arc_l1.push_back(arcs1[i]);
        aux.arc_l2.push_back(arcs2[i]);
        aux.stored_cycle.push_back(cycles[i]);
    }
    sorted_g.finalize();
    aux.g = std::move(sorted_g);
    aux.build_caches();

    // invariant: arcs have lengths exactly L1/L2 and are internally disjoint
    for (size_t i = 0; i < aux.g.edges.size(); ++i) {
        if (static_cast<int>(aux.arc_l1[i].size()) != aux.l1 + 1 ||
            static_cast<int>(aux.arc_l2[i].size()) != aux.l2 + 1)
            throw std::logic_error("extract_aux: arc length mismatch");
    }
    res.ok = true;
    res.aux = std::move(aux);
    return res;
}

// Color class with the most edges (ties toward the smaller color index),
// returned as an uncolored graph on the same vertex set.
inline std::pair<Graph, int> mono_max_subgraph(const AuxGraph& aux) {
    if (aux.g.edges.empty()) throw std::invalid_argument("mono_max_subgraph: empty graph");
    std::map<int, int> count;
    for (int c : aux.g.colors) ++count[c];
    int best = -1, bestc = -1;
    for (auto [c, k] : count)
        if (k > bestc) { best = c; bestc = k; }
    Graph out(aux.g.n);
    for (size_t i = 0; i < aux.g.edges.size(); ++i)
        if (aux.g.colors[i] == best) out.edges.push_back(aux.g.edges[i]);
    out.finalize();
    return {out, best};
}

// ---------------------------------------------------------------------------
// Expander extraction by density increment

struct ExpanderCert {
    std::vector<int> verts;
    double density = 0;
    double gamma = 0;
    bool exact = false;  // expansion checked by full subset enumeration
    bool ok = false;
    std::string note;
    std::vector<double> density_trace;
};

namespace detail {

struct InducedView {
    const Graph& g;
    std::vector<char> in;
    std::vector<int> verts;

    InducedView(const Graph& gr, std::vector<int> vs) : g(gr), in(gr.n, 0), verts(std::move(vs)) {
        for (int v : verts) in[v] = 1;
    }

    size_t edge_count() const {
        size_t c = 0;
        for (auto& [u, v] : g.edges)
            if (in[u] && in[v]) ++c;
        return c;
    }

    double density() const {
        return verts.empty() ? 0 : static_cast<double>(edge_count()) / verts.size();
    }

    // |N(S)| within the induced subgraph
    int nbhd_size(const std::vector<char>& s) const {
        int c = 0;
        for (int v : verts) {
            if (s[v]) continue;
            for (int u : g.adj[v])
                if (in[u] && s[u]) { ++c; break; }
        }
        return c;
    }
};

// exact violating-set search: all S with |S| <= |U|/2
inline std::optional<std::vector<int>> violating_exact(const InducedView& view, double gamma) {
    int k = static_cast<int>(view.verts.size());
    std::vector<char> s(view.g.n, 0);
    for (uint32_t mask = 1; mask < (1u << k); ++mask) {
        int size = __builtin_popcount(mask);
        if (2 * size > k) continue;
        for (int i = 0; i < k; ++i) s[view.verts[i]] = (mask >> i) & 1;
        if (view.nbhd_size(s) < gamma * size) {
            std::vector<int> out;
            for (int i = 0; i < k; ++i)
                if ((mask >> i) & 1) out.push_back(view.verts[i]);
            return out;
        }
    }
    return std::nullopt;
}

// heuristic search: connected components, then a spectral sweep with an
// incremental neighborhood count. Finding nothing is not a proof of expansion.
inline std::optional<std::vector<int>> violating_heuristic(const InducedView& view, double gamma) {
    int k = static_cast<int>(view.verts.size());
    if (k < 2) return std::nullopt;
    std::vector<int> pos(view.g.n, -1);
    for (int i = 0; i < k; ++i) pos[view.verts[i]] = i;
    // components first: a small component has empty outside neighborhood
    {
        std::vector<int> comp(k, -1);
        int nc = 0;
        for (int i = 0; i < k; ++i) {
            if (comp[i] >= 0) continue;
            std::vector<int> stack{i};
            comp[i] = nc;
            while (!stack.empty()) {
                int x = stack.back();
                stack.pop_back();
                for (int u : view.g.adj[view.verts[x]]) {
                    if (!view.in[u]) continue;
                    int j = pos[u];
                    if (comp[j] < 0) {
                        comp[j] = nc;
                        stack.push_back(j);
                    }
                }
            }
            ++nc;
        }
        if (nc > 1) {
            std::vector<int> sizes(nc, 0);
            for (int c : comp) ++sizes[c];
            int smallest = static_cast<int>(std::min_element(sizes.begin(), sizes.end()) -
                                            sizes.begin());
            if (2 * sizes[smallest] <= k) {
                std::vector<int> out;
                for (int i = 0; i < k; ++i)
                    if (comp[i] == smallest) out.push_back(view.verts[i]);
                return out;  // |N(S)| = 0
            }
        }
    }
    // spectral sweep on the adjacency, deflated against the all-ones vector
    std::vector<double> x(k);
    for (int i = 0; i < k; ++i) x[i] = (i % 2) ? 1.0 : -1.0;
    for (int iter = 0; iter < 60; ++iter) {
        std::vector<double> y(k, 0.0);
        for (int i = 0; i < k; ++i)
            for (int u : view.g.adj[view.verts[i]])
                if (view.in[u]) y[pos[u]] += x[i];
        double mean = 0;
        for (double v : y) mean += v;
        mean /= k;
        double norm = 0;
        for (double& v : y) {
            v -= mean;
            norm += v * v;
        }
        norm = std::sqrt(norm);
        if (norm < 1e-12) break;
        for (double& v : y) v /= norm;
        x = std::move(y);
    }
    std::vector<int> sweep(k);
    for (int i = 0; i < k; ++i) sweep[i] = i;
    std::sort(sweep.begin(), sweep.end(), [&](int a, int b) { return x[a] < x[b]; });
    // grow S along the sweep; 0 = outside, 1 = in S, 2 = in N(S)
    std::vector<char> state(view.g.n, 0);
    int nbhd = 0;
    std::optional<std::vector<int>> best;
    double best_ratio = gamma;
    int best_prefix = 0;
    for (int t = 0; t < k - 1; ++t) {
        int w = view.verts[sweep[t]];
        if (state[w] == 2) --nbhd;
        state[w] = 1;
        for (int u : view.g.adj[w])
            if (view.in[u] && state[u] == 0) {
                state[u] = 2;
                ++nbhd;
            }
        int size = t + 1;
        if (2 * size > k) break;
        double ratio = static_cast<double>(nbhd) / size;
        if (ratio < best_ratio) {
            best_ratio = ratio;
            best_prefix = size;
        }
    }
    if (best_prefix) {
        std::vector<int> out;
        for (int t = 0; t < best_prefix; ++t) out.push_back(view.verts[sweep[t]]);
        std::sort(out.begin(), out.end());
        best = out;
    }
    return best;
}

}  // namespace detail

// Density-increment extraction of a gamma-expander subgraph: while a
// violating set exists, keep the denser of S+N(S) and U-S. gamma follows the
// (c1-c2)/(2*Delta*ceil(log2(1/alpha))) formula. Exact certification for
// |U| <= 18, heuristic above (recorded in the certificate).
inline constexpr int kExpanderExactLimit = 18;

inline std::pair<Graph, ExpanderCert> extract_expander(const Graph& g_red, double c1, double c2,
                                                       double alpha, int delta_cap) {
    ExpanderCert cert;
    int n = g_red.n;
    double density0 = n ? static_cast<double>(g_red.e()) / n : 0;
    if (!(c1 > c2 && c2 > 1.0)) {
        cert.note = "hypothesis breach: require c1 > c2 > 1";
        return {Graph(0), cert};
    }
    if (density0 < c1) {
        std::ostringstream os;
        os << "hypothesis breach: density " << density0 << " < c1 = " << c1;
        cert.note = os.str();
        cert.density_trace.push_back(density0);
        return {Graph(0), cert};
    }
    if (g_red.max_degree() > delta_cap) {
        cert.note = "hypothesis breach: max degree exceeds delta cap";
        return {Graph(0), cert};
    }
    double gamma = (c1 - c2) / (2.0 * delta_cap * std::ceil(std::log2(1.0 / alpha)));
    cert.gamma = gamma;

    std::vector<int> u(n);
    for (int i = 0; i < n; ++i) u[i] = i;
    double target = (c1 + c2) / 2.0;
    int guard = 4 * (32 - __builtin_clz(std::max(2, n)));
    for (int step = 0; step <= guard; ++step) {
        detail::InducedView view(g_red, u);
        double dens = view.density();
        cert.density_trace.push_back(dens);
        bool exact = static_cast<int>(u.size()) <= kExpanderExactLimit;
        // disconnected candidates shed everything but the largest component in
        // one move: stripping tiny components one violating set at a time
        // would exhaust the step guard on any graph with many isolated bits
        if (!exact) {
            std::vector<int> pos(g_red.n, -1);
            int k = static_cast<int>(u.size());
            for (int i = 0; i < k; ++i) pos[u[i]] = i;
            std::vector<int> comp(k, -1);
            int nc = 0;
            std::vector<int> sizes;
            for (int i = 0; i < k; ++i) {
                if (comp[i] >= 0) continue;
                std::vector<int> stack{i};
                comp[i] = nc;
                int sz = 0;
                while (!stack.empty()) {
                    int x = stack.back();
                    stack.pop_back();
                    ++sz;
                    for (int w : g_red.adj[u[x]]) {
                        if (!view.in[w]) continue;
                        int j = pos[w];
                        if (comp[j] < 0) {
                            comp[j] = nc;
                            stack.push_back(j);
                        }
                    }
                }
                sizes.push_back(sz);
                ++nc;
            }
            if (nc > 1) {
                int big = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) -
                                           sizes.begin());
                std::vector<int> keep;
                for (int i = 0; i < k; ++i)
                    if (comp[i] == big) keep.push_back(u[i]);
                u = std::move(keep);
                continue;
            }
        }
        auto violator = exact ? detail::violating_exact(view, gamma)
                              : detail::violating_heuristic(view, gamma);
        if (!violator) {
            if (dens < target) {
                std::ostringstream os;
                os << "hypothesis breach: expander found but density " << dens << " < (c1+c2)/2 = "
                   << target;
                cert.note = os.str();
                return {Graph(0), cert};
            }
            if (static_cast<double>(u.size()) < alpha * n) {
                cert.note = "hypothesis breach: expander smaller than alpha*N";
                return {Graph(0), cert};
            }
            cert.ok = true;
            cert.exact = exact;
            cert.density = dens;
            cert.verts = u;
            cert.note = exact ? "expansion certified exactly" : "expansion certified heuristically";
            Graph out(n);
            for (auto& [a, b] : g_red.edges)
                if (view.in[a] && view.in[b]) out.edges.push_back({a, b});
            out.finalize();
            return {out, cert};
        }
        // increment: denser side wins
        std::vector<char> in_s(n, 0);
        for (int v : *violator) in_s[v] = 1;
        std::vector<int> side_a = *violator;  // S + N(S) inside U
        for (int v : u) {
            if (in_s[v]) continue;
            for (int w : g_red.adj[v])
                if (view.in[w] && in_s[w]) { side_a.push_back(v); break; }
        }
        std::sort(side_a.begin(), side_a.end());
        std::vector<int> side_b;
        for (int v : u)
            if (!in_s[v]) side_b.push_back(v);
        detail::InducedView va(g_red, side_a), vb(g_red, side_b);
        u = va.density() >= vb.density() ? side_a : side_b;
        if (u.empty()) break;
    }
    cert.note = "hypothesis breach: density increment failed to converge";
    return {Graph(0), cert};
}

// Iteratively delete vertices of degree < delta; the (possibly empty) core.
inline Graph min_degree_core(const Graph& g, int delta) {
    std::vector<int> deg(g.n);
    std::vector<char> dead(g.n, 0);
    std::vector<int> queue;
    for (int v = 0; v < g.n; ++v) {
        deg[v] = g.degree(v);
        if (deg[v] < delta) {
            dead[v] = 1;
            queue.push_back(v);
        }
    }
    while (!queue.empty()) {
        int v = queue.back();
        queue.pop_back();
        for (int u : g.adj[v]) {
            if (dead[u]) continue;
            if (--deg[u] < delta) {
                dead[u] = 1;
                queue.push_back(u);
            }
        }
    }
    Graph out(g.n);
    for (auto& [u, v] : g.edges)
        if (!dead[u] && !dead[v]) out.edges.push_back({u, v});
    out.finalize();
    return out;
}

// ---------------------------------------------------------------------------
// Closures and goodness

// cl_1(J) = union of h(e) over e in J; each further depth adds every
// hyperedge intersecting the current set. Returns a vertex mask.
inline std::vector<char> closure_mask(const AuxGraph& aux, const std::vector<int>& edge_ids,
                                      int depth) {
    std::vector<char> mask(aux.hyper.n, 0);
    std::vector<int> frontier;
    for (int e : edge_ids) {
        if (e < 0 || e >= static_cast<int>(aux.g.edges.size()))
            throw std::invalid_argument("closure: edge outside G");
        for (int v : aux.hyper.edges[aux.h_of[e]])
            if (!mask[v]) {
                mask[v] = 1;
                frontier.push_back(v);
            }
    }
    for (int d = 2; d <= depth; ++d) {
        std::vector<int> next;
        std::set<int> hyper_seen;
        for (int v : frontier)
            for (int h : aux.incidence[v]) hyper_seen.insert(h);
        for (int h : hyper_seen)
            for (int v : aux.hyper.edges[h])
                if (!mask[v]) {
                    mask[v] = 1;
                    next.push_back(v);
                }
        frontier = std::move(next);
    }
    return mask;
}

inline std::vector<int> closure(const AuxGraph& aux, const std::vector<int>& edge_ids, int depth) {
    auto mask = closure_mask(aux, edge_ids, depth);
    std::vector<int> out;
    for (int v = 0; v < aux.hyper.n; ++v)
        if (mask[v]) out.push_back(v);
    return out;
}

struct GoodReport {
    bool ok = true;
    std::string violation;         // "pair" or "closure"
    std::pair<int, int> edge_pair{-1, -1};  // offending edge ids (pair case)
    int hyperedge = -1;            // offending hyperedge (closure case)
};

// plain: non-adjacent J-edges have disjoint hyperedges. induced additionally:
// any hyperedge meeting cl(J) twice must be h(e) of some J-edge.
inline GoodReport is_good(const AuxGraph& aux, const std::vector<int>& edge_ids, Mode mode) {
    GoodReport rep;
    int k = static_cast<int>(edge_ids.size());
    for (int i = 0; i < k && rep.ok; ++i)
        for (int j = i + 1; j < k; ++j) {
            int e1 = edge_ids[i], e2 = edge_ids[j];
            auto [a1, b1] = aux.g.edges[e1];
            auto [a2, b2] = aux.g.edges[e2];
            bool adjacent = a1 == a2 || a1 == b2 || b1 == a2 || b1 == b2;
            if (adjacent) continue;
            const auto& h1 = aux.hyper.edges[aux.h_of[e1]];
            const auto& h2 = aux.hyper.edges[aux.h_of[e2]];
            bool disjoint = true;
            for (int v : h1)
                if (std::binary_search(h2.begin(), h2.end(), v)) { disjoint = false; break; }
            if (!disjoint) {
                rep.ok = false;
                rep.violation = "pair";
                rep.edge_pair = {e1, e2};
                break;
            }
        }
    if (rep.ok && mode == Mode::induced) {
        auto mask = closure_mask(aux, edge_ids, 1);
        std::set<int> own;
        for (int e : edge_ids) own.insert(aux.h_of[e]);
        std::set<int> candidates;
        for (int v = 0; v < aux.hyper.n; ++v)
            if (mask[v])
                for (int h : aux.incidence[v]) candidates.insert(h);
        for (int h : candidates) {
            if (own.count(h)) continue;
            int cap = 0;
            for (int v : aux.hyper.edges[h]) cap += mask[v];
            if (cap >= 2) {
                rep.ok = false;
                rep.violation = "closure";
                rep.hyperedge = h;
                break;
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// sigma mixing and the lift to the host graph

struct PathMix {
    bool ok = false;
    int count_l1 = 0, count_l2 = 0;
};

// nonnegative (a,b) with a+b = sigma_prime, a*L1 + b*L2 = sigma
inline PathMix solve_path_mix(int sigma, int sigma_prime, int l1, int l2) {
    PathMix m;
    if (sigma_prime < 1 || l2 <= l1) return m;
    int num = sigma - l1 * sigma_prime;
    int den = l2 - l1;
    if (num < 0 || num % den != 0) return m;
    int b = num / den;
    if (b > sigma_prime) return m;
    m.ok = true;
    m.count_l1 = sigma_prime - b;
    m.count_l2 = b;
    return m;
}

struct LiftResult {
    bool ok = false;
    SubdivisionEmbedding embedding;  // into the host graph
    std::string error;
    oracle::Verdict verdict;
};

// Replace each G-edge of every sigma'-path by its stored L1- or L2-arc so the
// per-edge host path has length exactly sigma(e); re-verified before return.
inline LiftResult lift_embedding(const AuxGraph& aux, const HostGraph& host,
                                 const std::vector<int>& host_coloring,
                                 const SubdivisionTask& task,
                                 const std::vector<int>& branch_map,
                                 const std::vector<std::vector<int>>& sigma_prime_paths) {
    LiftResult res;
    if (sigma_prime_paths.size() != task.base.edges.size()) {
        res.error = "paths not parallel to E(H)";
        return res;
    }
    std::vector<int> mapping(task.subdivided_order(), -1);
    for (int v = 0; v < task.base.n; ++v) mapping[v] = branch_map[v];

    for (size_t ei = 0; ei < task.base.edges.size(); ++ei) {
        const auto& p = sigma_prime_paths[ei];
        int sp = static_cast<int>(p.size()) - 1;
        PathMix mix = solve_path_mix(task.sigma[ei], sp, aux.l1, aux.l2);
        if (!mix.ok) {
            res.error = "no mix for edge " + std::to_string(ei);
            return res;
        }
        // walk the sigma'-path, expanding the first a edges by L1-arcs
        std::vector<int> host_path{p[0]};
        for (int j = 0; j < sp; ++j) {
            auto id = aux.g.edge_id(p[j], p[j + 1]);
            if (!id) {
                res.error = "path step not an aux edge";
                return res;
            }
            const auto& arc = j < mix.count_l1 ? aux.arc_l1[*id] : aux.arc_l2[*id];
            std::vector<int> seg = arc;
            if (seg.front() != p[j]) std::reverse(seg.begin(), seg.end());
            if (seg.front() != p[j] || seg.back() != p[j + 1]) {
                res.error = "arc endpoints mismatch";
                return res;
            }
            host_path.insert(host_path.end(), seg.begin() + 1, seg.end());
        }
        auto ids = task.path_of_edge(static_cast<int>(ei));
        if (ids.size() != host_path.size()) {
            res.error = "lifted path length != sigma(e)";
            return res;
        }
        for (size_t t = 0; t < ids.size(); ++t) {
            if (mapping[ids[t]] >= 0 && mapping[ids[t]] != host_path[t]) {
                res.error = "branch image clash";
                return res;
            }
            mapping[ids[t]] = host_path[t];
        }
    }
    res.embedding.vertex_map = mapping;
    res.verdict = oracle::verify_subdivision_embedding(host.graph, host_coloring, mapping, task);
    if (!res.verdict.ok) {
        // a failure here means goodness was violated upstream
        throw std::logic_error("lift_embedding: verifier rejected lifted embedding: " +
                               res.verdict.notes);
    }
    res.ok = true;
    return res;
}

}  // namespace rforge
