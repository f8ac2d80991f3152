#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rforge/auxgraph.hpp"
#include "rforge/generator.hpp"  // EmbedKnobs
#include "rforge/matching.hpp"
#include "rforge/rng.hpp"
#include "rforge/subdivision.hpp"

namespace rforge {

struct EmbedDiagnostic {
    std::string kind;  // stuck | disconnected | window | matching | lll | goodness | no-root | hypothesis | gadget
    std::string detail;
};

struct EdgeTrace {
    int h_edge = -1;
    int attempts = 0;
    bool ok = false;
    int sigma_realized = 0;
    int path_len_used = 0;
    int prime_path_len = 0;  // |P'|
    int extends = 0;
    std::string failure;
};

struct EmbedResult {
    bool ok = false;
    std::vector<int> branch_map;               // H vertex -> G' vertex
    std::vector<std::vector<int>> paths;       // per H edge: realized vertex path
    std::vector<int> sigma_prime;              // realized path lengths
    int color = -1;
    std::vector<EdgeTrace> trace;
    EmbedDiagnostic diag;
    // audit counters
    long long invariant_checks = 0;
    long long invariant_violations = 0;
    long long critical_bound_applicable = 0;
    long long critical_bound_violations = 0;
    std::vector<std::string> audit_failures;
};

// ---------------------------------------------------------------------------
// Incremental closure bookkeeping for an edge set over the aux graph.
// Tracks the vertex masks of cl_1..cl_depth and, for goodness condition 2,
// how often each foreign hyperedge meets cl_1.

class ClosureCache {
public:
    void init(const AuxGraph* aux, int depth) {
        aux_ = aux;
        depth_ = depth;
        masks_.assign(depth, std::vector<char>(aux->hyper.n, 0));
        members_.assign(depth, {});
        hyper_hits_.assign(aux->hyper.m(), 0);
        own_.assign(aux->hyper.m(), 0);
        edges_.clear();
    }

    const std::vector<char>& mask(int depth) const { return masks_[depth - 1]; }
    bool contains(int depth, int v) const { return masks_[depth - 1][v]; }
    const std::set<int>& edges() const { return edges_; }
    // number of cl_1 vertices inside a hyperedge
    int hits(int h) const { return hyper_hits_[h]; }
    bool owned(int h) const { return own_[h]; }

    // adding edge e keeps goodness-2 queryable: returns the first foreign
    // hyperedge that would meet cl_1 twice, or -1
    int foreign_violation_if_added(int e) const {
        int h = aux_->h_of[e];
        if (own_[h]) return -1;  // impossible: one G-edge per hyperedge
        // new cl_1 vertices from h(e) may push a foreign hyperedge to 2 hits
        for (int v : aux_->hyper.edges[h]) {
            if (masks_[0][v]) continue;
            for (int g : aux_->incidence[v]) {
                if (g == h || own_[g]) continue;
                int hits = hyper_hits_[g];
                // count additional hits from other new vertices of h(e)
                int fresh = 0;
                for (int w : aux_->hyper.edges[g])
                    if (!masks_[0][w] &&
                        std::binary_search(aux_->hyper.edges[h].begin(),
                                           aux_->hyper.edges[h].end(), w))
                        ++fresh;
                if (hits + fresh >= 2) return g;
            }
        }
        // h(e) itself becomes own; its previous hits are fine by definition
        return -1;
    }

    void add_edge(int e) {
        edges_.insert(e);
        int h = aux_->h_of[e];
        own_[h] = 1;
        std::vector<int> fresh;
        for (int v : aux_->hyper.edges[h])
            if (!masks_[0][v]) {
                masks_[0][v] = 1;
                members_[0].push_back(v);
                fresh.push_back(v);
                for (int g : aux_->incidence[v]) ++hyper_hits_[g];
            }
        // deeper masks absorb cl_1 then expand by incident hyperedges
        for (int d = 1; d < depth_; ++d) {
            std::vector<int> next;
            for (int v : fresh)
                if (!masks_[d][v]) {
                    masks_[d][v] = 1;
                    members_[d].push_back(v);
                    next.push_back(v);
                }
            fresh.clear();
            for (int v : next)
                for (int g : aux_->incidence[v])
                    for (int w : aux_->hyper.edges[g])
                        if (!masks_[d][w]) {
                            masks_[d][w] = 1;
                            members_[d].push_back(w);
                            fresh.push_back(w);
                        }
        }
    }

    void rebuild(const std::set<int>& edge_ids) {
        auto* aux = aux_;
        int depth = depth_;
        init(aux, depth);
        for (int e : edge_ids) add_edge(e);
    }

    // does a foreign hyperedge currently meet cl_1 twice?
    std::optional<int> foreign_double_hit() const {
        for (size_t g = 0; g < hyper_hits_.size(); ++g)
            if (!own_[g] && hyper_hits_[g] >= 2) return static_cast<int>(g);
        return std::nullopt;
    }

private:
    const AuxGraph* aux_ = nullptr;
    int depth_ = 1;
    std::vector<std::vector<char>> masks_;
    std::vector<std::vector<int>> members_;
    std::vector<int> hyper_hits_;
    std::vector<char> own_;
    std::set<int> edges_;
};

// ---------------------------------------------------------------------------
// Dynamic subgraph of G' (edge ids into the aux graph) with degree and
// adjacency maps plus pairwise hyperedge-disjointness bookkeeping.

class DynSubgraph {
public:
    void init(const AuxGraph* aux) {
        aux_ = aux;
        deg_.assign(aux->g.n, 0);
        adj_.assign(aux->g.n, {});
        vert_.assign(aux->g.n, 0);
        hyper_vertex_owner_.clear();
        edges_.clear();
    }

    const std::set<int>& edges() const { return edges_; }
    bool has_vertex(int v) const { return vert_[v]; }
    int degree(int v) const { return deg_[v]; }
    const std::map<int, int>& adj(int v) const { return adj_[v]; }  // neighbor -> edge id

    void add_vertex(int v) { vert_[v] = 1; }

    std::vector<int> vertices() const {
        std::vector<int> out;
        for (int v = 0; v < static_cast<int>(vert_.size()); ++v)
            if (vert_[v]) out.push_back(v);
        return out;
    }

    // goodness condition 1 for edge e against current edges: a non-adjacent
    // edge whose hyperedge intersects h(e)
    std::optional<std::pair<int, int>> pair_violation_if_added(int e) const {
        auto [u, v] = aux_->g.edges[e];
        int h = aux_->h_of[e];
        for (int w : aux_->hyper.edges[h]) {
            auto it = hyper_vertex_owner_.find(w);
            if (it == hyper_vertex_owner_.end()) continue;
            for (int f : it->second) {
                if (f == e) continue;
                auto [a, b] = aux_->g.edges[f];
                bool adjacent = a == u || a == v || b == u || b == v;
                if (!adjacent) return std::make_pair(e, f);
            }
        }
        return std::nullopt;
    }

    void add_edge(int e) {
        auto [u, v] = aux_->g.edges[e];
        edges_.insert(e);
        vert_[u] = vert_[v] = 1;
        ++deg_[u];
        ++deg_[v];
        adj_[u][v] = e;
        adj_[v][u] = e;
        for (int w : aux_->hyper.edges[aux_->h_of[e]]) hyper_vertex_owner_[w].push_back(e);
    }

    void remove_edge(int e) {
        auto [u, v] = aux_->g.edges[e];
        edges_.erase(e);
        --deg_[u];
        --deg_[v];
        adj_[u].erase(v);
        adj_[v].erase(u);
        for (int w : aux_->hyper.edges[aux_->h_of[e]]) {
            auto& owners = hyper_vertex_owner_[w];
            owners.erase(std::find(owners.begin(), owners.end(), e));
            if (owners.empty()) hyper_vertex_owner_.erase(w);
        }
    }

    void remove_isolated_vertex(int v) { vert_[v] = 0; }

    bool has_edge_id(int e) const { return edges_.count(e) > 0; }

private:
    const AuxGraph* aux_ = nullptr;
    std::vector<int> deg_;
    std::vector<std::map<int, int>> adj_;
    std::vector<char> vert_;
    std::map<int, std::vector<int>> hyper_vertex_owner_;  // hyperedge vertex -> J edges whose h() contains it
    std::set<int> edges_;
};

// ---------------------------------------------------------------------------

struct CriticalTrace {
    std::vector<std::vector<int>> levels;  // X_0, X_1, ...
    std::set<int> result;
};

class Embedder {
public:
    Embedder(const AuxGraph& aux, const Graph& gprime, const Graph& gdoubleprime,
             const EmbedKnobs& knobs, Mode mode, Rng rng)
        : aux_(aux), gp_(gprime), gpp_(gdoubleprime), knobs_(knobs), mode_(mode), rng_(rng) {
        if (knobs_.dprime < 2 || knobs_.d < 2)
            throw std::invalid_argument("embedder: d, d' must be >= 2");
        if (knobs_.dprime < knobs_.dprime_matching)
            throw std::invalid_argument("embedder: d' must be at least D' (matching width)");
        if (knobs_.dprime_matching < knobs_.cap_d)
            throw std::invalid_argument("embedder: D' must be at least D");
        in_gp_.assign(aux.g.n, 0);
        for (int v = 0; v < gp_.n; ++v)
            if (!gp_.adj[v].empty()) in_gp_[v] = 1;
        in_gpp_.assign(aux.g.n, 0);
        for (int v = 0; v < gpp_.n; ++v)
            if (!gpp_.adj[v].empty()) in_gpp_[v] = 1;
        j_.init(&aux_);
        k_.init(&aux_);
        depth_ = closure_depth(mode);
        jcl_.init(&aux_, 1);
        kcl_.init(&aux_, 1);
        forbidden_.assign(aux.g.n, 0);
        // criticality via unavailability needs d neighbors in G'; cheaper scans
        // only ever look at these candidates
        for (int v = 0; v < gp_.n; ++v)
            if (static_cast<int>(gp_.adj[v].size()) >= knobs_.d) crit_candidates_.push_back(v);
    }

    EmbedResult run(const SubdivisionTask& task);

    // exposed for tests
    std::vector<int> available_neighbors(const DynSubgraph& ref, const ClosureCache& cl,
                                         int v) const;
    CriticalTrace critical_set(const DynSubgraph& ref);

private:
    friend struct EmbedderTestHook;

    const AuxGraph& aux_;
    const Graph& gp_;   // G'
    const Graph& gpp_;  // G''
    EmbedKnobs knobs_;
    Mode mode_;
    Rng rng_;
    int depth_ = 1;

    std::vector<char> in_gp_, in_gpp_;
    DynSubgraph j_, k_;
    ClosureCache jcl_, kcl_;
    std::vector<char> forbidden_;
    std::set<int> critical_;
    std::map<int, std::vector<int>> reserved_;   // vertex -> reserved aux edge ids (sticky)
    std::map<int, std::vector<int>> kchildren_;  // parent -> K\J children
    std::map<int, int> kparent_;                 // child -> parent
    std::set<int> rooted_;                       // vertices owning K\J children
    std::vector<char> original_;                 // image of an original H vertex
    std::vector<int> crit_candidates_;
    uint64_t extend_counter_ = 0;

    EmbedResult* res_ = nullptr;
    const SubdivisionTask* task_ = nullptr;

    // --- helpers ---------------------------------------------------------
    bool edge_in_kminusj(int e) const { return k_.has_edge_id(e) && !j_.has_edge_id(e); }

    bool candidate_child_ok(int u) const {
        return in_gpp_[u] && !forbidden_[u] && !k_.has_vertex(u);
    }

    bool edge_available(const ClosureCache& cl, int v, int edge_id) const;
    std::vector<int> available_filtered(int v) const;
    std::vector<int>& reservation(int v);
    std::set<int> critical_of(const DynSubgraph& ref, CriticalTrace* trace = nullptr);

    struct ExtendOutcome {
        bool ok = false;
        std::string kind, detail;
        std::vector<int> added_edges;
    };
    ExtendOutcome extend_good(const std::vector<int>& c_new);

    struct LeafOutcome {
        bool ok = false;
        int leaf = -1;
        std::string kind, detail;
        bool extended = false;
    };
    LeafOutcome add_leaf(int v, int rotation = 0);

    void recompute_forbidden_additive();
    void set_forbidden_fresh();
    void audit_invariants(const char* where);
    void check_critical_bound(const DynSubgraph& ref, const std::set<int>& crit);

    struct TreeGrow {
        bool ok = false;
        std::vector<int> path_tips;           // path from root, root first
        std::vector<std::vector<int>> levels; // tree levels beyond the path end
        std::map<int, int> parent;            // within the grown tree
        std::string kind, detail;
        int extends = 0;
    };
    TreeGrow grow_tree(int root, int path_len, int tree_size, int rotation = 0);

    struct ConnectOutcome {
        bool ok = false;
        std::vector<int> full_path;  // a .. b realized vertex path
        int prime_len = 0;
        int best_total = -1;  // shortest reachable a..b length (diagnostics)
        std::string kind, detail;
    };
    ConnectOutcome connect_trees(const TreeGrow& t1, const TreeGrow& t2, int a_img, int b_img,
                                 int lo, int hi);

    void rollback(const std::vector<std::vector<int>>& committed_paths,
                  const std::vector<int>& branch_map);
};

// --- availability ----------------------------------------------------------

// u is available for v when h(uv)-v avoids cl(J) and, in induced mode, no
// foreign hyperedge joins h(uv)-v to cl(J). The hyperedge h(uv) itself is
// exempt: embedded endpoints would otherwise absorb their own candidate into
// the second closure and no vertex of V(K) could ever have an available
// neighbor, against the extension lemma's hypothesis.
inline bool Embedder::edge_available(const ClosureCache& cl, int v, int edge_id) const {
    int h = aux_.h_of[edge_id];
    const auto& mask1 = cl.mask(1);
    for (int w : aux_.hyper.edges[h]) {
        if (w == v) continue;
        if (mask1[w]) return false;
        if (depth_ >= 2)
            for (int h2 : aux_.incidence[w])
                if (h2 != h && cl.hits(h2) >= 1) return false;
    }
    return true;
}

inline std::vector<int> Embedder::available_neighbors(const DynSubgraph& /*ref*/,
                                                      const ClosureCache& cl, int v) const {
    std::vector<int> out;
    for (int u : gp_.adj[v]) {
        auto id = aux_.g.edge_id(u, v);
        if (edge_available(cl, v, *id)) out.push_back(u);
    }
    return out;
}

inline std::vector<int> Embedder::available_filtered(int v) const {
    std::vector<int> out;
    for (int u : gp_.adj[v]) {
        if (!candidate_child_ok(u)) continue;
        auto id = aux_.g.edge_id(u, v);
        if (edge_available(kcl_, v, *id)) out.push_back(u);
    }
    return out;
}

// sticky reservation: chosen once, preferring currently available neighbors,
// then by vertex index; K-tree children are written back on extension so the
// recomputed critical iteration sees exactly the edges K actually holds
inline std::vector<int>& Embedder::reservation(int v) {
    auto it = reserved_.find(v);
    if (it != reserved_.end()) return it->second;
    std::vector<int> picks;
    if (static_cast<int>(gp_.adj[v].size()) >= knobs_.dprime) {
        auto avail = available_filtered(v);
        std::set<int> avail_set(avail.begin(), avail.end());
        for (int u : avail) {
            if (static_cast<int>(picks.size()) >= knobs_.dprime) break;
            picks.push_back(*aux_.g.edge_id(u, v));
        }
        for (int u : gp_.adj[v]) {
            if (static_cast<int>(picks.size()) >= knobs_.dprime) break;
            if (avail_set.count(u)) continue;
            picks.push_back(*aux_.g.edge_id(u, v));
        }
    }
    // degree < d' adds no edges (the iteration still marks v critical)
    return reserved_.emplace(v, std::move(picks)).first->second;
}

// --- critical sets -----------------------------------------------------------

inline std::set<int> Embedder::critical_of(const DynSubgraph& ref, CriticalTrace* trace) {
    // X_0: non-leaves of the reference subgraph, plus vertices of it that
    // already own reserve trees (the choice discipline that keeps the J- and
    // K-side iterations in agreement)
    std::set<int> c;
    std::vector<int> x0;
    for (int v : ref.vertices())
        if (ref.degree(v) >= 2 || (rooted_.count(v) && ref.has_vertex(v))) x0.push_back(v);
    c.insert(x0.begin(), x0.end());
    if (trace) trace->levels.push_back(x0);

    if (!crit_candidates_.empty()) {
        // working graph: ref plus reserved edges of newly critical vertices
        std::set<int> work = ref.edges();
        for (int v : x0)
            if (rooted_.count(v))
                for (int e : reservation(v)) work.insert(e);
        ClosureCache wcl;
        wcl.init(&aux_, 1);
        for (int e : work) wcl.add_edge(e);
        while (true) {
            std::vector<int> level;
            for (int v : crit_candidates_) {
                if (c.count(v)) continue;
                int unavailable = 0;
                for (int u : gp_.adj[v]) {
                    auto id = aux_.g.edge_id(u, v);
                    if (!edge_available(wcl, v, *id)) ++unavailable;
                }
                if (unavailable >= knobs_.d) level.push_back(v);
            }
            if (level.empty()) break;
            for (int v : level) {
                c.insert(v);
                for (int e : reservation(v)) wcl.add_edge(e);
            }
            if (trace) trace->levels.push_back(level);
        }
    }
    if (trace) trace->result = c;
    return c;
}

inline CriticalTrace Embedder::critical_set(const DynSubgraph& ref) {
    CriticalTrace t;
    critical_of(ref, &t);
    return t;
}

inline void Embedder::check_critical_bound(const DynSubgraph& ref, const std::set<int>& crit) {
    if (!res_) return;
    double alpha_n = knobs_.alpha_n;
    if (alpha_n <= 0) return;
    int s = aux_.hyper.s;
    double ej = static_cast<double>(ref.edges().size());
    double limit = mode_ == Mode::induced ? alpha_n / (22.0 * s) - knobs_.dprime
                                          : alpha_n / (2.0 * s) - knobs_.dprime / 2.0;
    if (ej > limit) return;  // hypothesis not machine-verified
    ++res_->critical_bound_applicable;
    long long x0 = 0;
    for (int v : ref.vertices())
        if (ref.degree(v) >= 2 || rooted_.count(v)) ++x0;
    double bound = static_cast<double>(x0) + ej / knobs_.dprime;
    bool ok = mode_ == Mode::induced ? (static_cast<double>(crit.size()) < bound)
                                     : (static_cast<double>(crit.size()) <= bound);
    if (!ok) {
        ++res_->critical_bound_violations;
        res_->audit_failures.push_back("critical-set bound violated");
    }
}

// --- forbidden set -----------------------------------------------------------

inline void Embedder::recompute_forbidden_additive() {
    // F += (cl(K) + C) - V(K); embedded vertices never enter F
    const auto& mask = kcl_.mask(1);
    for (int v = 0; v < aux_.g.n; ++v)
        if (mask[v] && !k_.has_vertex(v)) forbidden_[v] = 1;
    for (int v : critical_)
        if (!k_.has_vertex(v)) forbidden_[v] = 1;
}

inline void Embedder::set_forbidden_fresh() {
    std::fill(forbidden_.begin(), forbidden_.end(), 0);
    recompute_forbidden_additive();
}

// --- extension (pending trees for critical vertices) -------------------------

inline Embedder::ExtendOutcome Embedder::extend_good(const std::vector<int>& c_new) {
    ExtendOutcome out;
    if (c_new.empty()) {
        out.ok = true;
        return out;
    }
    ++extend_counter_;
    int dprime_m = knobs_.dprime_matching;
    int cap_d = knobs_.cap_d;

    // the reservation is the "choose d' available neighbors" step; requiring
    // d'+1 available leaves one spare, the desk version of the slack the
    // paper gets from its magnitudes
    std::map<int, std::vector<int>> star_edges;  // v -> chosen aux edge ids
    for (int v : c_new) {
        auto avail = available_filtered(v);
        if (static_cast<int>(avail.size()) < knobs_.dprime + 1) {
            out.kind = "hypothesis";
            out.detail = "critical vertex lacks d'+1 available neighbors";
            return out;
        }
        auto& resv = reservation(v);
        // reservations fixed before any tree existed may point at vertices
        // that have since been embedded; refresh the unusable picks
        std::vector<int> usable;
        std::set<int> used(resv.begin(), resv.end());
        for (int e : resv) {
            auto [a, b] = aux_.g.edges[e];
            int u = a == v ? b : a;
            if (candidate_child_ok(u) && edge_available(kcl_, v, e)) usable.push_back(e);
        }
        for (int u : avail) {
            if (static_cast<int>(usable.size()) >= knobs_.dprime) break;
            int e = *aux_.g.edge_id(u, v);
            if (!used.count(e)) usable.push_back(e);
        }
        if (static_cast<int>(usable.size()) < dprime_m) {
            out.kind = "hypothesis";
            out.detail = "reservation too small for the matching width";
            return out;
        }
        resv = usable;  // sticky update: this is what the iteration will see
        star_edges[v] = usable;
    }

    // auxiliary bipartite hypergraph: a disjoint copy of C on the X side,
    // hyperedges h(e) with the critical endpoint swapped for its copy.
    // Vertex ids: hypergraph vertices stay as-is, copies live above n.
    BipartiteHypergraph bip;
    std::map<int, int> copy_id;
    int next_id = aux_.hyper.n;
    std::set<int> yset;
    std::vector<std::pair<int, int>> edge_source;  // (v, aux edge id) per bip edge
    for (int v : c_new) {
        copy_id[v] = next_id;
        bip.x.push_back(next_id);
        ++next_id;
    }
    for (int v : c_new)
        for (int e : star_edges[v]) {
            std::vector<int> he;
            for (int w : aux_.hyper.edges[aux_.h_of[e]]) {
                if (w == v) continue;
                he.push_back(w);
                yset.insert(w);
            }
            he.push_back(copy_id[v]);
            std::sort(he.begin(), he.end());
            bip.edges.push_back(he);
            edge_source.emplace_back(v, e);
        }
    bip.y.assign(yset.begin(), yset.end());

    auto match = find_d_matching(bip, dprime_m, knobs_.matching_budget);
    if (!match.found) {
        out.kind = "matching";
        out.detail = match.conclusive ? "no D'-matching exists for the reservation hypergraph"
                                      : "matching search budget exhausted";
        return out;
    }

    // A_x: matched neighbors per critical vertex
    std::map<int, std::vector<int>> a_sets;
    std::map<std::pair<int, int>, int> child_edge;  // (x, child) -> aux edge id
    for (size_t xi = 0; xi < bip.x.size(); ++xi) {
        int v = c_new[xi];
        for (int be : match.matching.per_x[xi]) {
            auto [src_v, aux_e] = edge_source[be];
            auto [a, b] = aux_.g.edges[aux_e];
            int u = a == src_v ? b : a;
            a_sets[v].push_back(u);
            child_edge[{v, u}] = aux_e;
        }
        std::sort(a_sets[v].begin(), a_sets[v].end());
    }

    // induced mode: thin the candidate sets to a stable set of the conflict
    // graph L before growing (the pre-emptive step that protects goodness)
    if (mode_ == Mode::induced) {
        std::vector<int> lverts;
        for (int v : c_new)
            for (int u : a_sets[v]) lverts.push_back(u);
        std::map<int, int> lidx;
        for (size_t i = 0; i < lverts.size(); ++i) lidx[lverts[i]] = static_cast<int>(i);
        Graph l(static_cast<int>(lverts.size()));
        std::map<int, int> owner;  // L vertex -> its critical vertex
        for (int v : c_new)
            for (int u : a_sets[v]) owner[lidx[u]] = v;
        for (size_t i = 0; i < lverts.size(); ++i)
            for (size_t j = i + 1; j < lverts.size(); ++j) {
                int u = lverts[i], w = lverts[j];
                int x = owner[static_cast<int>(i)], y = owner[static_cast<int>(j)];
                int eu = child_edge[{x, u}], ew = child_edge[{y, w}];
                int hu = aux_.h_of[eu], hw = aux_.h_of[ew];
                // adjacent iff some other hyperedge meets both h(xu)-x and h(yw)-y
                bool conflict = false;
                for (int z : aux_.hyper.edges[hu]) {
                    if (z == x) continue;
                    for (int g : aux_.incidence[z]) {
                        if (g == hu || g == hw) continue;
                        for (int t : aux_.hyper.edges[g]) {
                            if (t == y) continue;
                            if (std::binary_search(aux_.hyper.edges[hw].begin(),
                                                   aux_.hyper.edges[hw].end(), t) &&
                                t != y) {
                                conflict = true;
                                break;
                            }
                        }
                        if (conflict) break;
                    }
                    if (conflict) break;
                }
                if (conflict) l.add_edge(static_cast<int>(i), static_cast<int>(j));
            }
        l.finalize();
        // degeneracy of L, then the sample-and-delete selection
        int d_lll = 2;
        while (!degeneracy_orient(l, d_lll).ok) ++d_lll;
        std::vector<std::vector<int>> parts;
        for (int v : c_new) {
            std::vector<int> p;
            for (int u : a_sets[v]) p.push_back(lidx[u]);
            parts.push_back(p);
        }
        auto sel = lll_select(parts, l, d_lll, cap_d, knobs_.lll_retries,
                              rng_.stream("lll", extend_counter_));
        if (!sel.ok) {
            out.kind = "lll";
            out.detail = "stable-set selection exhausted retries: " + sel.error;
            return out;
        }
        for (size_t i = 0; i < c_new.size(); ++i) {
            std::vector<int> keep;
            for (int li : sel.selected[i]) keep.push_back(lverts[li]);
            std::sort(keep.begin(), keep.end());
            a_sets[c_new[i]] = keep;
        }
    }

    // grow the pending forest from roots in V(K), children from A'_x
    std::vector<int> roots;
    std::set<int> c_set(c_new.begin(), c_new.end());
    for (int v : c_new)
        if (k_.has_vertex(v)) roots.push_back(v);

    std::vector<int> staged;
    std::vector<std::pair<int, int>> staged_children;  // (parent, child)
    auto undo = [&]() {
        for (auto it = staged.rbegin(); it != staged.rend(); ++it) k_.remove_edge(*it);
        kcl_.rebuild(k_.edges());
    };
    std::vector<int> queue = roots;
    std::set<int> treed;
    bool failed = false;
    std::string fail_detail;
    while (!queue.empty() && !failed) {
        int x = queue.front();
        queue.erase(queue.begin());
        if (treed.count(x)) continue;
        treed.insert(x);
        int got = 0;
        for (int u : a_sets[x]) {
            if (got == cap_d) break;
            if (!candidate_child_ok(u)) continue;
            int e = child_edge[{x, u}];
            if (k_.has_edge_id(e)) continue;
            // goodness guards before committing the staged edge
            if (k_.pair_violation_if_added(e)) continue;
            if (mode_ == Mode::induced) {
                int viol = kcl_.foreign_violation_if_added(e);
                if (viol >= 0) {
                    continue;
                }
            }
            k_.add_edge(e);
            kcl_.add_edge(e);
            staged.push_back(e);
            staged_children.emplace_back(x, u);
            ++got;
            if (c_set.count(u)) queue.push_back(u);
        }
        if (got < cap_d) {
            failed = true;
            fail_detail = "extension tree root ran out of usable children";
        }
    }
    if (failed) {
        undo();
        out.kind = "goodness";
        out.detail = fail_detail;
        return out;
    }
    // whole-K goodness verification before the commit becomes visible
    GoodReport rep = is_good(aux_, {k_.edges().begin(), k_.edges().end()}, mode_);
    if (!rep.ok) {
        undo();
        out.kind = "goodness";
        out.detail = "extended K failed verification: " + rep.violation;
        return out;
    }
    // commit bookkeeping
    for (auto [p, c] : staged_children) {
        kchildren_[p].push_back(c);
        kparent_[c] = p;
        rooted_.insert(p);
        critical_.insert(p);
    }
    for (int v : c_new) critical_.insert(v);
    out.ok = true;
    out.added_edges = staged;
    recompute_forbidden_additive();
    return out;
}

// --- single leaf addition ----------------------------------------------------

inline Embedder::LeafOutcome Embedder::add_leaf(int v, int rotation) {
    LeafOutcome out;
    // consume a reserved child when the tip is critical and has one; the
    // rotation index varies the otherwise-lexicographic pick across retries
    if (critical_.count(v)) {
        auto it = kchildren_.find(v);
        if (it != kchildren_.end()) {
            std::vector<int> usable;
            for (int u : it->second)
                if (!j_.has_vertex(u)) usable.push_back(u);
            std::sort(usable.begin(), usable.end());
            int pick = usable.empty() ? -1
                                      : usable[rotation % static_cast<int>(usable.size())];
            if (pick >= 0) {
                int e = *aux_.g.edge_id(v, pick);
                j_.add_edge(e);
                jcl_.add_edge(e);
                auto& ch = it->second;
                ch.erase(std::find(ch.begin(), ch.end(), pick));
                if (ch.empty()) {
                    // the reserve tree is spent; v leaves the rooted set so a
                    // later visit reruns the extension instead of starving
                    kchildren_.erase(v);
                    rooted_.erase(v);
                    if (j_.degree(v) < 2) critical_.erase(v);
                }
                out.ok = true;
                out.leaf = pick;
                audit_invariants("add_leaf/reserved");
                return out;
            }
        }
        out.kind = "stuck";
        out.detail = "critical tip " + std::to_string(v) + " has no unconsumed reserved child";
        return out;
    }

    // fresh tip: tentatively reserve, find the new criticals, extend K, then
    // walk into one of the tip's new children
    auto avail = available_filtered(v);
    if (static_cast<int>(avail.size()) < knobs_.dprime + 1) {
        out.kind = "stuck";
        out.detail = "tip has fewer than d'+1 available neighbors in G''";
        return out;
    }
    // J' = J + reserved edges at v; its critical set yields the fresh wave
    DynSubgraph jprime = j_;
    for (int e : reservation(v)) jprime.add_edge(e);
    std::set<int> cprime = critical_of(jprime);
    check_critical_bound(jprime, cprime);
    std::vector<int> c_new;
    for (int u : cprime)
        if (!critical_.count(u)) c_new.push_back(u);
    if (std::find(c_new.begin(), c_new.end(), v) == c_new.end()) c_new.push_back(v);
    std::sort(c_new.begin(), c_new.end());

    auto ext = extend_good(c_new);
    if (!ext.ok) {
        out.kind = ext.kind;
        out.detail = ext.detail;
        return out;
    }
    out.extended = true;
    auto it = kchildren_.find(v);
    if (it == kchildren_.end()) {
        out.kind = "stuck";
        out.detail = "extension gave the tip no children";
        return out;
    }
    std::vector<int> usable;
    for (int u : it->second)
        if (!j_.has_vertex(u)) usable.push_back(u);
    std::sort(usable.begin(), usable.end());
    if (usable.empty()) {
        out.kind = "stuck";
        out.detail = "tip children all embedded";
        return out;
    }
    int pick = usable[rotation % static_cast<int>(usable.size())];
    int e = *aux_.g.edge_id(v, pick);
    j_.add_edge(e);
    jcl_.add_edge(e);
    auto& ch = it->second;
    ch.erase(std::find(ch.begin(), ch.end(), pick));
    if (ch.empty()) kchildren_.erase(v);
    recompute_forbidden_additive();
    out.ok = true;
    out.leaf = pick;
    audit_invariants("add_leaf/fresh");
    return out;
}

// --- invariant audit (A1)-(A4) ------------------------------------------------

inline void Embedder::audit_invariants(const char* where) {
    if (!knobs_.audit || !res_) return;
    ++res_->invariant_checks;
    auto fail = [&](const std::string& what) {
        ++res_->invariant_violations;
        res_->audit_failures.push_back(std::string(where) + ": " + what);
    };
    // (A1) J subset of K; both good; K-J is a forest of fresh G'' vertices
    for (int e : j_.edges())
        if (!k_.has_edge_id(e)) { fail("A1: J not a subgraph of K"); break; }
    {
        GoodReport gj = is_good(aux_, {j_.edges().begin(), j_.edges().end()}, mode_);
        if (!gj.ok) fail("A1: J not good (" + gj.violation + ")");
        GoodReport gk = is_good(aux_, {k_.edges().begin(), k_.edges().end()}, mode_);
        if (!gk.ok) fail("A1: K not good (" + gk.violation + ")");
    }
    for (auto& [child, parent] : kparent_) {
        (void)parent;
        if (j_.has_vertex(child) && !j_.adj(child).count(parent))
            continue;  // consumed edges leave the map when they enter J
    }
    for (auto& [p, children] : kchildren_)
        for (int c : children) {
            if (j_.has_vertex(c)) fail("A1: reserve child already embedded");
            if (!in_gpp_[c]) fail("A1: reserve child outside G''");
            int e = *aux_.g.edge_id(p, c);
            if (!k_.has_edge_id(e) || j_.has_edge_id(e)) fail("A1: reserve edge not in K-J");
        }
    // (A2) non-internal non-leaf vertices of K keep D - deg_H(v) reserve children
    for (int v : k_.vertices()) {
        if (k_.degree(v) < 2) continue;          // leaf of K
        bool is_internal = j_.has_vertex(v) && !original_[v];
        if (is_internal) continue;
        int degj = j_.has_vertex(v) ? j_.degree(v) : 0;
        int have = 0;
        auto it = kchildren_.find(v);
        if (it != kchildren_.end()) have = static_cast<int>(it->second.size());
        if (have < knobs_.cap_d - degj) fail("A2: reserve shortfall");
    }
    // (A3) cl(K) - V(K) inside F; F never touches embedded vertices
    {
        const auto& mask = kcl_.mask(1);
        for (int v = 0; v < aux_.g.n; ++v) {
            if (mask[v] && !k_.has_vertex(v) && !forbidden_[v]) { fail("A3: closure leak"); break; }
            if (forbidden_[v] && k_.has_vertex(v)) { fail("A3: embedded vertex forbidden"); break; }
        }
    }
    // (A4) critical set agreement and sandwich
    {
        std::set<int> cj = critical_of(j_);
        std::set<int> ck = critical_of(k_);
        if (cj != ck) fail("A4: critical sets of J and K differ");
        if (ck != critical_) fail("A4: stored C differs from recomputation");
        for (int v : k_.vertices())
            if (k_.degree(v) >= 2 && !critical_.count(v)) { fail("A4: non-leaf of K not critical"); break; }
        for (int v : critical_)
            if (!forbidden_[v]) {
                bool nonleaf = k_.has_vertex(v) && k_.degree(v) >= 2;
                bool isolated_root = k_.has_vertex(v) && k_.degree(v) == 0;
                if (!nonleaf && !isolated_root && !(k_.has_vertex(v) && rooted_.count(v))) {
                    fail("A4: critical vertex neither forbidden nor a K non-leaf");
                    break;
                }
            }
    }
}

// --- phase 1: tree growing ----------------------------------------------------

inline Embedder::TreeGrow Embedder::grow_tree(int root, int path_len, int tree_size,
                                              int rotation) {
    TreeGrow t;
    t.path_tips.push_back(root);
    int tip = root;
    for (int i = 0; i < path_len; ++i) {
        auto leaf = add_leaf(tip, i == 0 ? rotation : 0);
        if (leaf.extended) ++t.extends;
        if (!leaf.ok) {
            t.kind = leaf.kind;
            t.detail = "path growth: " + leaf.detail;
            return t;
        }
        tip = leaf.leaf;
        t.path_tips.push_back(tip);
        t.parent[tip] = t.path_tips[t.path_tips.size() - 2];
    }
    // expand a tree of max degree D from the path end, level by level; a
    // vertex that cannot take another child is skipped, a failing extension
    // machinery aborts the tree
    std::vector<int> level{tip};
    t.levels.push_back(level);
    int grown = 1;
    while (grown < tree_size) {
        std::vector<int> next;
        for (int v : level) {
            int want = std::max(0, knobs_.cap_d - j_.degree(v));
            for (int c = 0; c < want && grown < tree_size; ++c) {
                auto leaf = add_leaf(v);
                if (leaf.extended) ++t.extends;
                if (!leaf.ok) {
                    if (leaf.kind != "stuck") {
                        t.kind = leaf.kind;
                        t.detail = "tree growth: " + leaf.detail;
                        return t;
                    }
                    break;  // saturated vertex, move on
                }
                next.push_back(leaf.leaf);
                t.parent[leaf.leaf] = v;
                ++grown;
            }
            if (grown >= tree_size) break;
        }
        if (next.empty()) break;
        t.levels.push_back(next);
        level = std::move(next);
    }
    t.ok = true;
    return t;
}

// --- phase 2: connecting the trees ---------------------------------------------

inline Embedder::ConnectOutcome Embedder::connect_trees(const TreeGrow& t1, const TreeGrow& t2,
                                                        int a_img, int b_img, int lo, int hi) {
    ConnectOutcome out;
    int avoid_depth = mode_ == Mode::induced ? 3 : 2;

    // frontier sets: the last frontier_levels tree levels. The path itself is
    // never part of the frontier, so the shrunken K always keeps the trunk
    // and the avoidance closure stays meaningful.
    auto frontier = [&](const TreeGrow& t) {
        std::vector<std::pair<int, int>> seeds;  // (vertex, depth offset from a)
        int nl = static_cast<int>(t.levels.size());
        int from = std::max(0, nl - knobs_.frontier_levels);
        int base = static_cast<int>(t.path_tips.size()) - 1;  // path length
        for (int li = from; li < nl; ++li)
            for (int v : t.levels[li]) seeds.emplace_back(v, base + li);
        return seeds;
    };
    auto r1 = frontier(t1), r2 = frontier(t2);
    if (r1.empty() || r2.empty()) {
        out.kind = "disconnected";
        out.detail = "empty frontier";
        return out;
    }

    // The avoidance closure is computed on a shrunken copy of K: every vertex
    // that stops being critical once the frontiers are deleted from J loses
    // its children (tree children and reserves alike). This vacates the
    // frontier region so the escape BFS has somewhere to go; the state K is
    // untouched and phase 3 does the real pruning.
    std::vector<char> avoid;
    {
        std::set<int> rset;
        for (auto [v, d] : r1) { (void)d; rset.insert(v); }
        for (auto [v, d] : r2) { (void)d; rset.insert(v); }
        DynSubgraph jless = j_;
        for (int v : rset) {
            std::vector<std::pair<int, int>> incident(jless.adj(v).begin(), jless.adj(v).end());
            for (auto [u, e] : incident) { (void)u; jless.remove_edge(e); }
            jless.remove_isolated_vertex(v);
        }
        std::set<int> ccon = critical_of(jless);
        std::set<int> shrunk = k_.edges();
        auto strip_children_of = [&](int v) {
            auto it = kchildren_.find(v);
            if (it != kchildren_.end())
                for (int c : it->second) shrunk.erase(*aux_.g.edge_id(v, c));
        };
        auto strip_tree_children = [&](const TreeGrow& t) {
            for (auto& [child, parent] : t.parent)
                if (!ccon.count(parent)) shrunk.erase(*aux_.g.edge_id(parent, child));
        };
        for (int v : k_.vertices())
            if (!ccon.count(v)) strip_children_of(v);
        strip_tree_children(t1);
        strip_tree_children(t2);
        avoid = closure_mask(aux_, {shrunk.begin(), shrunk.end()}, avoid_depth);
    }
    for (int v = 0; v < aux_.g.n; ++v)
        if (forbidden_[v] || k_.has_vertex(v)) avoid[v] = 1;

    // induced mode: a connector vertex whose hyperedges touch V(J) anywhere
    // outside its own path edges drags a foreign hyperedge onto cl(J). A
    // vertex is therefore admitted as pure interior (no J-neighbors), as an
    // entry hop (its unique J-neighbor is the seed it came from), or as a
    // terminal whose unconsumed J-neighbor is an R2 seed it will exit into.
    std::vector<int> jn;
    std::vector<std::array<int, 2>> jnb;
    std::vector<char> in_r2seed(aux_.g.n, 0), in_r1seed(aux_.g.n, 0);
    std::map<int, int> off2;
    for (auto [v, off] : r2) {
        in_r2seed[v] = 1;
        if (!off2.count(v)) off2[v] = off;
    }
    for (auto [v, off] : r1) {
        (void)off;
        in_r1seed[v] = 1;
    }
    if (mode_ == Mode::induced) {
        jn.assign(aux_.g.n, 0);
        jnb.assign(aux_.g.n, {-1, -1});
        for (int v = 0; v < aux_.g.n; ++v)
            for (int u : gp_.adj[v])
                if (j_.has_vertex(u)) {
                    if (jn[v] < 2) jnb[v][jn[v]] = u;
                    ++jn[v];
                }
    }

    // one bounded BFS over G' from the R1 seeds (with depth offsets). The
    // connector is then a single shortest path, which cannot chord against
    // itself; it ends on a G'-edge into an R2 seed.
    const int inf = 1 << 28;
    std::vector<int> da(aux_.g.n, inf), pa(aux_.g.n, -1);
    std::vector<char> terminal(aux_.g.n, 0);
    std::vector<int> exit_to(aux_.g.n, -1);
    {
        std::map<int, std::vector<int>> buckets;  // bucket queue over offsets
        for (auto [v, off] : r1)
            if (off < da[v]) {
                da[v] = off;
                pa[v] = -1;
                buckets[off].push_back(v);
            }
        auto admit = [&](int u, int parent) -> int {
            // 0 = reject, 1 = expandable, 2 = terminal exit
            if (mode_ != Mode::induced) return 1;
            if (jn[u] == 0) return 1;
            if (jn[u] == 1) {
                if (jnb[u][0] == parent) return 1;  // entry contact consumed
                if (in_r2seed[jnb[u][0]]) {
                    exit_to[u] = jnb[u][0];
                    return 2;
                }
                return 0;
            }
            if (jn[u] == 2) {
                int other = jnb[u][0] == parent ? jnb[u][1]
                            : jnb[u][1] == parent ? jnb[u][0]
                                                  : -1;
                if (other >= 0 && in_r2seed[other]) {
                    exit_to[u] = other;
                    return 2;
                }
            }
            return 0;
        };
        while (!buckets.empty()) {
            auto it = buckets.begin();
            int dcur = it->first;
            auto layer = std::move(it->second);
            buckets.erase(it);
            if (dcur > hi) break;
            for (int v : layer) {
                if (da[v] != dcur) continue;
                if (terminal[v]) continue;
                for (int u : gp_.adj[v]) {
                    if (avoid[u]) continue;
                    if (da[u] <= dcur + 1) continue;
                    int kind = admit(u, v);
                    if (!kind) continue;
                    da[u] = dcur + 1;
                    pa[u] = v;
                    terminal[u] = kind == 2;
                    buckets[dcur + 1].push_back(u);
                }
            }
        }
    }

    // candidate meets: (entry vertex adjacent to an R2 seed, that seed);
    // total length in [lo,hi], shortest first then smallest ids. Several are
    // tried because a meet can still fail goodness verification at desk scale.
    std::vector<std::pair<int, std::pair<int, int>>> meets;  // (total, (y, x2))
    int best_any = inf;
    {
        std::set<int> r1set;
        for (auto [v, off] : r1) { (void)off; r1set.insert(v); }
        for (auto [x2, offx] : r2) {
            (void)offx;
            for (int y : gp_.adj[x2]) {
                if (da[y] >= inf) continue;
                if (avoid[y] && !r1set.count(y)) continue;
                if (mode_ == Mode::induced && !r1set.count(y)) {
                    // only terminals aimed at this seed (or entry hops whose
                    // sole contact is this seed) may exit here
                    if (terminal[y] && exit_to[y] != x2) continue;
                    if (!terminal[y] && !(jn[y] == 1 && jnb[y][0] == x2)) continue;
                }
                int total = da[y] + 1 + off2[x2];
                best_any = std::min(best_any, total);
                if (total < lo || total > hi) continue;
                meets.push_back({total, {y, x2}});
            }
        }
    }
    std::sort(meets.begin(), meets.end());
    if (meets.empty()) {
        out.kind = best_any >= inf ? "disconnected" : "window";
        out.best_total = best_any >= inf ? -1 : best_any;
        std::ostringstream os;
        if (best_any >= inf)
            os << "frontiers do not meet under closure avoidance";
        else
            os << "meet lengths miss the window: best " << best_any << " vs [" << lo << "," << hi << "]";
        out.detail = os.str();
        return out;
    }

    // reconstruct both fresh segments (meet back to each frontier seed)
    auto walk = [&](int v, const std::vector<int>& par) {
        std::vector<int> seq{v};
        while (par[seq.back()] >= 0) seq.push_back(par[seq.back()]);
        return seq;  // v .. seed
    };
    // tree walks from the roots to the frontier picks
    auto tree_walk = [&](const TreeGrow& t, int from_root, int x) {
        std::vector<int> up{x};
        int cur = x;
        while (cur != from_root) {
            auto it = t.parent.find(cur);
            if (it == t.parent.end()) break;
            cur = it->second;
            up.push_back(cur);
        }
        std::reverse(up.begin(), up.end());  // root .. x
        return up;
    };

    std::vector<int> full;
    std::vector<int> staged;
    int best_total = -1;
    int prime_len_committed = 0;
    auto undo = [&]() {
        for (auto it = staged.rbegin(); it != staged.rend(); ++it) {
            j_.remove_edge(*it);
            k_.remove_edge(*it);
        }
        staged.clear();
        jcl_.rebuild(j_.edges());
        kcl_.rebuild(k_.edges());
    };
    bool committed = false;
    int tried = 0;
    for (auto& [total, meet] : meets) {
        if (++tried > 24) break;
        auto [y, x2] = meet;
        std::vector<int> seg_a = walk(y, pa);  // y .. x1
        int x1 = seg_a.back();
        std::vector<int> left = tree_walk(t1, a_img, x1);
        std::vector<int> right = tree_walk(t2, b_img, x2);

        // assemble a .. x1 .. y .. x2 .. b
        full = left;
        std::vector<int> sa = seg_a;
        std::reverse(sa.begin(), sa.end());  // x1 .. y
        full.insert(full.end(), sa.begin() + 1, sa.end());
        std::vector<int> tail = right;
        std::reverse(tail.begin(), tail.end());  // x2 .. b
        full.insert(full.end(), tail.begin(), tail.end());
        int plen = static_cast<int>(seg_a.size());  // fresh edges incl y->x2

        // vertex-disjointness of everything assembled
        std::set<int> seen(full.begin(), full.end());
        if (seen.size() != full.size()) continue;

        // stage the fresh edges into J (and K), verified
        bool bad = false;
        for (size_t i = 0; i + 1 < full.size() && !bad; ++i) {
            auto id = aux_.g.edge_id(full[i], full[i + 1]);
            if (!id) { bad = true; break; }
            if (j_.has_edge_id(*id)) continue;  // tree edges already embedded
            if (j_.pair_violation_if_added(*id)) {
                bad = true;
                break;
            }
            // no per-edge foreign guard here: the exit edge owns its
            // hyperedge only once staged, so a mid-path check would falsely
            // reject valid connectors; the goodness verification below decides
            j_.add_edge(*id);
            jcl_.add_edge(*id);
            k_.add_edge(*id);
            kcl_.add_edge(*id);
            staged.push_back(*id);
        }
        if (!bad) {
            GoodReport gj = is_good(aux_, {j_.edges().begin(), j_.edges().end()}, mode_);
            if (gj.ok) {
                committed = true;
                best_total = total;
                prime_len_committed = plen;
                break;
            }
        }
        undo();
    }
    if (!committed) {
        out.kind = "goodness";
        out.detail = "every candidate connector violates goodness (" +
                     std::to_string(std::min<size_t>(meets.size(), 24)) + " meets tried)";
        return out;
    }

    // post-connect critical refresh: vertices newly critical, off the fresh
    // path, get reserve trees
    {
        std::set<int> cnow = critical_of(j_);
        check_critical_bound(j_, cnow);
        std::set<int> pset;
        for (int e : staged) {
            pset.insert(aux_.g.edges[e].first);
            pset.insert(aux_.g.edges[e].second);
        }
        std::vector<int> c_star;
        for (int v : cnow)
            if (!critical_.count(v) && !pset.count(v)) c_star.push_back(v);
        if (!c_star.empty()) {
            auto ext = extend_good(c_star);
            if (!ext.ok) {
                // reserves for bystanders failed; treat as a connect failure
                undo();
                out.kind = ext.kind;
                out.detail = "post-connect extension: " + ext.detail;
                return out;
            }
        }
        critical_ = critical_of(j_);
        recompute_forbidden_additive();
    }
    audit_invariants("connect");
    out.ok = true;
    out.full_path = full;
    out.best_total = best_total;
    out.prime_len = prime_len_committed;
    return out;
}

// --- phase 3: rollback ----------------------------------------------------------

inline void Embedder::rollback(const std::vector<std::vector<int>>& committed_paths,
                               const std::vector<int>& branch_map) {
    // J := exactly the image of the committed subdivision paths
    std::set<int> keep_edges;
    std::set<int> keep_verts;
    for (int v : branch_map)
        if (v >= 0) keep_verts.insert(v);
    for (const auto& p : committed_paths)
        for (size_t i = 0; i + 1 < p.size(); ++i) {
            keep_edges.insert(*aux_.g.edge_id(p[i], p[i + 1]));
            keep_verts.insert(p[i]);
            keep_verts.insert(p[i + 1]);
        }
    std::set<int> old_critical = critical_;
    {
        std::vector<int> drop;
        for (int e : j_.edges())
            if (!keep_edges.count(e)) drop.push_back(e);
        for (int e : drop) {
            auto [u, v] = aux_.g.edges[e];
            j_.remove_edge(e);
            k_.remove_edge(e);
            if (j_.degree(u) == 0 && !keep_verts.count(u)) j_.remove_isolated_vertex(u);
            if (j_.degree(v) == 0 && !keep_verts.count(v)) j_.remove_isolated_vertex(v);
        }
        jcl_.rebuild(j_.edges());
    }

    // C-drop: vertices leaving the critical set lose their children
    std::set<int> cnew = critical_of(j_);
    for (int v : old_critical) {
        if (cnew.count(v)) continue;
        auto it = kchildren_.find(v);
        if (it == kchildren_.end()) continue;
        for (int c : it->second) {
            int e = *aux_.g.edge_id(v, c);
            if (k_.has_edge_id(e)) k_.remove_edge(e);
            kparent_.erase(c);
        }
        kchildren_.erase(v);
        rooted_.erase(v);
    }

    // keep only K components that meet the embedded image
    {
        std::vector<char> reach(aux_.g.n, 0);
        std::vector<int> stack;
        for (int v : keep_verts) {
            reach[v] = 1;
            stack.push_back(v);
        }
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (auto [u, e] : k_.adj(v)) {
                (void)e;
                if (!reach[u]) {
                    reach[u] = 1;
                    stack.push_back(u);
                }
            }
        }
        std::vector<int> drop;
        for (int e : k_.edges()) {
            auto [u, v] = aux_.g.edges[e];
            if (!reach[u] || !reach[v]) drop.push_back(e);
        }
        for (int e : drop) k_.remove_edge(e);
        for (int v : k_.vertices())
            if (!reach[v] && k_.degree(v) == 0) k_.remove_isolated_vertex(v);
        // prune children maps of dropped material, then rebuild the parent map
        for (auto it = kchildren_.begin(); it != kchildren_.end();) {
            auto& [p, children] = *it;
            children.erase(std::remove_if(children.begin(), children.end(),
                                          [&](int c) {
                                              return !k_.has_edge_id(*aux_.g.edge_id(p, c));
                                          }),
                           children.end());
            if (children.empty()) {
                rooted_.erase(p);
                it = kchildren_.erase(it);
            } else {
                ++it;
            }
        }
        kparent_.clear();
        for (auto& [p, children] : kchildren_)
            for (int c : children) kparent_[c] = p;
        kcl_.rebuild(k_.edges());
    }

    critical_ = critical_of(j_);
    set_forbidden_fresh();
    audit_invariants("rollback");

    // section-7.3 bookkeeping bound, reported not enforced
    if (res_ && task_) {
        double n_target = static_cast<double>(task_->subdivided_order());
        double bound = knobs_.cap_d * (1.0 + 1.0 / knobs_.dprime) * n_target;
        if (static_cast<double>(k_.edges().size()) > bound)
            res_->audit_failures.push_back("rollback: e(K) exceeds D(1+1/d')n");
    }
}

// --- driver ---------------------------------------------------------------------

inline EmbedResult Embedder::run(const SubdivisionTask& task) {
    EmbedResult res;
    res_ = &res;
    task_ = &task;
    task.validate();
    original_.assign(aux_.g.n, 0);

    int l1 = aux_.l1, l2 = aux_.l2;
    res.branch_map.assign(task.base.n, -1);
    res.paths.resize(task.base.edges.size());
    res.sigma_prime.assign(task.base.edges.size(), 0);
    std::vector<std::vector<int>> committed;

    std::set<int> burned_roots;
    auto pick_root = [&](int skip = -1) -> int {
        for (int v = 0; v < gpp_.n; ++v) {
            if (!in_gpp_[v] || forbidden_[v] || k_.has_vertex(v) || v == skip) continue;
            if (burned_roots.count(v)) continue;
            // induced mode: embedding v pulls it into cl(K), so no hyperedge
            // through v may already meet the closure (the root counterpart of
            // the availability test; candidates get it through edge_available)
            if (mode_ == Mode::induced) {
                bool fringe = false;
                for (int h : aux_.incidence[v])
                    if (kcl_.hits(h) > 0) { fringe = true; break; }
                if (fringe) continue;
            }
            // a usable root needs enough available neighbors for its first step
            if (static_cast<int>(available_filtered(v).size()) < knobs_.dprime + 1) continue;
            return v;
        }
        return -1;
    };

    for (size_t ei = 0; ei < task.base.edges.size(); ++ei) {
        auto [ha, hb] = task.base.edges[ei];
        SigmaWindow win = sigma_window(task.sigma[ei], l1, l2);
        EdgeTrace tr;
        tr.h_edge = static_cast<int>(ei);
        if (win.empty()) {
            res.diag = {"window", "empty sigma' window"};
            tr.failure = "window";
            res.trace.push_back(tr);
            res_ = nullptr;
            return res;
        }
        int path_len = std::max(1, task.sigma[ei] / (2 * l2));
        bool edge_done = false;
        for (int attempt = 0; attempt < knobs_.window_retries && !edge_done; ++attempt) {
            ++tr.attempts;
            tr.path_len_used = path_len;
            // snapshot for transactional retry
            auto j_snap = j_;
            auto k_snap = k_;
            auto critical_snap = critical_;
            auto reserved_snap = reserved_;
            auto kchildren_snap = kchildren_;
            auto kparent_snap = kparent_;
            auto rooted_snap = rooted_;
            auto forbidden_snap = forbidden_;
            auto original_snap = original_;
            auto restore = [&]() {
                j_ = j_snap;
                k_ = k_snap;
                critical_ = critical_snap;
                reserved_ = reserved_snap;
                kchildren_ = kchildren_snap;
                kparent_ = kparent_snap;
                rooted_ = rooted_snap;
                forbidden_ = forbidden_snap;
                original_ = original_snap;
                jcl_.rebuild(j_.edges());
                kcl_.rebuild(k_.edges());
            };

            // roots: committed branch images persist, fresh picks can be
            // burned by a failed attempt and the next candidate tried.
            // b is picked only after tree A has grown, so its fringe check
            // sees the closure tree A actually produces.
            int a_img = res.branch_map[ha], b_img = res.branch_map[hb];
            bool a_fresh = a_img < 0, b_fresh = b_img < 0;

            auto burn_region = [&](int root) {
                // burn the root and its 2-ball: a stuck root usually sits on
                // the ragged edge of the embedded region's closure influence
                burned_roots.insert(root);
                for (int u : gp_.adj[root]) {
                    burned_roots.insert(u);
                    for (int w : gp_.adj[u]) burned_roots.insert(w);
                }
            };
            bool burn_a = false, burn_b = false;
            auto fail_attempt = [&](const std::string& kind, const std::string& detail,
                                    bool burn_roots) {
                restore();
                tr.failure = kind + ": " + detail;
                if (burn_roots) {
                    if (a_fresh && burn_a) burn_region(a_img);
                    if (b_fresh && burn_b) burn_region(b_img);
                }
            };

            if (a_fresh) {
                a_img = pick_root();
                if (a_img < 0) {
                    res.diag = {"no-root", "no usable vertex in G'' for a root"};
                    tr.failure = "no-root";
                    break;
                }
                k_.add_vertex(a_img);
                j_.add_vertex(a_img);
                original_[a_img] = 1;
                burn_a = true;
            }
            auto t1 = grow_tree(a_img, path_len, knobs_.tree_size, attempt);
            if (!t1.ok) {
                fail_attempt(t1.kind, "tree A: " + t1.detail, true);
                continue;
            }
            if (b_fresh) {
                b_img = pick_root(a_img);
                if (b_img < 0) {
                    restore();
                    res.diag = {"no-root", "no usable vertex in G'' for b root"};
                    tr.failure = "no-root";
                    break;
                }
                k_.add_vertex(b_img);
                j_.add_vertex(b_img);
                original_[b_img] = 1;
                burn_b = true;
            }
            auto t2 = grow_tree(b_img, path_len, knobs_.tree_size, attempt);
            if (!t2.ok) {
                fail_attempt(t2.kind, "tree B: " + t2.detail, true);
                if (t2.kind == "stuck") path_len = std::max(1, path_len - 1);
                continue;
            }
            tr.extends += t1.extends + t2.extends;

            auto con = connect_trees(t1, t2, a_img, b_img, win.lo, win.hi);
            if (!con.ok) {
                bool too_long = con.kind == "window" && con.best_total > win.hi;
                bool too_short = con.kind == "window" && con.best_total >= 0 &&
                                 con.best_total < win.lo;
                fail_attempt(con.kind, con.detail, con.kind != "window");
                if (too_long) path_len = std::max(1, path_len - 1);
                if (too_short) ++path_len;
                continue;
            }

            int realized = static_cast<int>(con.full_path.size()) - 1;
            PathMix mix = solve_path_mix(task.sigma[ei], realized, l1, l2);
            if (realized < win.lo || realized > win.hi || !mix.ok) {
                fail_attempt("window", "realized " + std::to_string(realized), false);
                path_len = std::max(1, path_len + (realized < win.lo ? 1 : -1));
                continue;
            }

            res.branch_map[ha] = a_img;
            res.branch_map[hb] = b_img;
            res.paths[ei] = con.full_path;
            res.sigma_prime[ei] = realized;
            tr.sigma_realized = realized;
            tr.prime_path_len = con.prime_len;
            committed.push_back(con.full_path);
            rollback(committed, res.branch_map);
            tr.ok = true;
            edge_done = true;
        }
        res.trace.push_back(tr);
        if (!edge_done) {
            if (res.diag.kind.empty())
                res.diag = {"retries", "edge " + std::to_string(ei) + " failed: " + tr.failure};
            res_ = nullptr;
            return res;
        }
    }

    // final verification: the embedded image is good and monochromatic
    GoodReport fin = is_good(aux_, {j_.edges().begin(), j_.edges().end()}, mode_);
    if (!fin.ok) {
        res.diag = {"goodness", "final image not good: " + fin.violation};
        res_ = nullptr;
        return res;
    }
    std::set<int> colors_seen;
    for (int e : j_.edges()) colors_seen.insert(aux_.g.colors[e]);
    if (colors_seen.size() > 1) {
        res.diag = {"goodness", "final image not monochromatic"};
        res_ = nullptr;
        return res;
    }
    res.color = colors_seen.empty() ? -1 : *colors_seen.begin();
    res.ok = true;
    res_ = nullptr;
    return res;
}

}  // namespace rforge
