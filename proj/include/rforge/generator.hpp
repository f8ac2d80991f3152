#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rforge/hypergraph.hpp"
#include "rforge/rng.hpp"
#include "rforge/types.hpp"

namespace rforge {

struct GenParams {
    int n_verts = 0;          // N
    int s = 3;                // uniformity
    double c = 1.0;           // edge multiplier: m = floor(c*N)
    int g = 2;                // girth threshold: output girth > g
    double alpha = 0.01;      // sparsity horizon: audits run over |A| <= alpha*N
    int degree_cap = 0;       // paper value 8*c*s
    Mode mode = Mode::plain;
    CaseKind case_kind = CaseKind::even;
    double scale = 1.0;       // desk-scale divisor this row was derived with
    uint64_t seed = 0;

    void validate() const {
        if (s < 3 || n_verts < s) throw std::invalid_argument("gen params: require N >= s >= 3");
        if (g < 2) throw std::invalid_argument("gen params: g >= 2 (linearity at minimum)");
        if (c <= 0 || alpha <= 0 || alpha * n_verts < 1)
            throw std::invalid_argument("gen params: c > 0 and alpha*N >= 1 required");
        if (degree_cap < 1) throw std::invalid_argument("gen params: degree cap >= 1");
    }

    long long m_target() const { return static_cast<long long>(c * n_verts); }
};

struct SparsityAudit {
    bool violation_found = false;
    std::vector<int> witness;      // violating subset A
    int exhaustive_to_size = 0;    // all subsets up to this size were enumerated
    long long subsets_checked = 0;
    bool p4_variant = true;        // true: (P4) sum form, false: (P4') count form
};

struct GenReport {
    long long edges_sampled = 0;
    long long duplicates_removed = 0;
    long long girth_removed = 0;
    long long degree_removed = 0;
    long long final_edge_count = 0;
    int max_degree = 0;
    bool girth_check = false;  // (P3)
    bool degree_check = false; // (P2)
    bool p1_check = false;     // e in [cN/2, cN]
    SparsityAudit sparsity;
};

// ---------------------------------------------------------------------------

// m = floor(c*N) independent uniform s-subsets of [N]; deterministic per seed.
inline Hypergraph sample_raw(const GenParams& p) {
    p.validate();
    if (p.s > p.n_verts) throw std::invalid_argument("sample_raw: s > N");
    Rng rng = Rng(p.seed).stream("sample_raw");
    Hypergraph h;
    h.n = p.n_verts;
    h.s = p.s;
    long long m = p.m_target();
    h.edges.reserve(m);
    for (long long i = 0; i < m; ++i) h.edges.push_back(rng.subset(p.n_verts, p.s));
    return h;
}

namespace detail {

struct PruneCounts {
    long long duplicates = 0, girth = 0, degree = 0;
};

}  // namespace detail

// Removal order: duplicates; then short Berge cycles (repeatedly find a
// shortest cycle of length <= g and delete its smallest-index hyperedge);
// then one degree sweep deleting every hyperedge incident to a vertex whose
// degree exceeds the cap. Output girth > g and max degree <= cap.
inline std::pair<Hypergraph, detail::PruneCounts> prune_impl(const Hypergraph& h, int g,
                                                             int degree_cap) {
    detail::PruneCounts cnt;
    int m = static_cast<int>(h.m());
    std::vector<char> alive(m, 1);

    // duplicates: keep the first occurrence
    {
        std::set<std::vector<int>> seen;
        for (int i = 0; i < m; ++i)
            if (!seen.insert(h.edges[i]).second) {
                alive[i] = 0;
                ++cnt.duplicates;
            }
    }

    // stage 2 fast path: any vertex pair covered twice is a length-2 cycle.
    // Sorted (pair, edge) records instead of a map: the sweep visits pairs in
    // lexicographic order and keeps the smallest-index hyperedge per pair.
    if (g >= 2) {
        std::vector<std::pair<uint64_t, int>> recs;
        recs.reserve(m * h.s * (h.s - 1) / 2);
        for (int i = 0; i < m; ++i) {
            if (!alive[i]) continue;
            const auto& e = h.edges[i];
            for (size_t a = 0; a < e.size(); ++a)
                for (size_t b = a + 1; b < e.size(); ++b)
                    recs.emplace_back(static_cast<uint64_t>(e[a]) * h.n + e[b], i);
        }
        std::sort(recs.begin(), recs.end());
        // repeat until fixpoint: deleting an edge can orphan later pairs
        bool changed = true;
        while (changed) {
            changed = false;
            size_t i = 0;
            while (i < recs.size()) {
                size_t j = i;
                int keep = -1;
                while (j < recs.size() && recs[j].first == recs[i].first) {
                    int id = recs[j].second;
                    if (alive[id]) {
                        if (keep < 0) {
                            keep = id;
                        } else {
                            alive[std::min(keep, id)] = 0;
                            ++cnt.girth;
                            keep = std::max(keep, id);
                            changed = true;
                        }
                    }
                    ++j;
                }
                i = j;
            }
        }
    }

    // stages 3..g: sweep hyperedge roots in index order; deletions never
    // create cycles, so the sweep resumes at the current root
    if (g >= 3 && m > 0) {
        auto inc = h.incidence();
        detail::IncidenceBfs bfs(h, inc, &alive);
        for (int stage = 3; stage <= g; ++stage) {
            for (int root = 0; root < m; ++root) {
                if (!alive[root]) continue;
                while (alive[root]) {
                    std::vector<int> nodes;
                    int len = bfs.through_root(h.n + root, stage, 0, nodes);
                    if (!len) break;
                    BergeCycle cyc = detail::cycle_from_nodes(h.n, nodes);
                    int victim = *std::min_element(cyc.edge_ids.begin(), cyc.edge_ids.end());
                    alive[victim] = 0;
                    ++cnt.girth;
                }
            }
        }
    }

    // degree sweep, once, after cycle removal
    {
        std::vector<int> deg(h.n, 0);
        for (int i = 0; i < m; ++i)
            if (alive[i])
                for (int v : h.edges[i]) ++deg[v];
        std::vector<char> bad(h.n, 0);
        for (int v = 0; v < h.n; ++v) bad[v] = deg[v] > degree_cap;
        for (int i = 0; i < m; ++i) {
            if (!alive[i]) continue;
            for (int v : h.edges[i])
                if (bad[v]) {
                    alive[i] = 0;
                    ++cnt.degree;
                    break;
                }
        }
    }

    Hypergraph out;
    out.n = h.n;
    out.s = h.s;
    for (int i = 0; i < m; ++i)
        if (alive[i]) out.edges.push_back(h.edges[i]);
    return {out, cnt};
}

inline std::pair<Hypergraph, GenReport> prune(const Hypergraph& h, int g, int degree_cap) {
    auto [out, cnt] = prune_impl(h, g, degree_cap);
    GenReport rep;
    rep.edges_sampled = static_cast<long long>(h.m());
    rep.duplicates_removed = cnt.duplicates;
    rep.girth_removed = cnt.girth;
    rep.degree_removed = cnt.degree;
    rep.final_edge_count = static_cast<long long>(out.m());
    auto degs = out.degrees();
    rep.max_degree = degs.empty() ? 0 : *std::max_element(degs.begin(), degs.end());
    rep.degree_check = rep.max_degree <= degree_cap;
    rep.girth_check = !berge_girth(out, std::max(2, g)).found;
    return {out, rep};
}

// ---------------------------------------------------------------------------
// Sparsity audit: exhaustive up to a subset-count budget, then random subsets.
// Sound but incomplete beyond the exhaustive horizon.

inline constexpr long long kAuditExhaustiveBudget = 2'000'000;

inline SparsityAudit audit_sparsity(const Hypergraph& h, double alpha, int size_cap,
                                    int trials, uint64_t seed, bool p4_variant) {
    SparsityAudit audit;
    audit.p4_variant = p4_variant;
    int horizon = std::min<long long>(size_cap, static_cast<long long>(alpha * h.n));
    auto inc = h.incidence();

    // incidence-driven check: only hyperedges touching A matter
    std::map<int, int> cap;
    auto check = [&](const std::vector<int>& a) {
        ++audit.subsets_checked;
        cap.clear();
        for (int v : a)
            for (int e : inc[v]) ++cap[e];
        long long sum = 0, cnt = 0;
        for (auto [e, k] : cap)
            if (k >= 2) {
                sum += k;
                ++cnt;
            }
        bool ok = p4_variant ? (2 * sum < 5 * static_cast<long long>(a.size()))
                             : (cnt <= 2 * static_cast<long long>(a.size()));
        if (a.empty()) ok = true;
        if (!ok && !audit.violation_found) {
            audit.violation_found = true;
            audit.witness = a;
        }
        return ok;
    };

    // |A| = 1 is vacuous (no hyperedge meets a single vertex twice), so the
    // exhaustive enumeration starts at pairs
    audit.exhaustive_to_size = std::min(1, horizon);
    long long level_count = static_cast<long long>(h.n) * (h.n - 1) / 2;
    int size = 2;
    std::vector<int> subset;
    std::function<bool(int, int)> rec = [&](int start, int remaining) -> bool {
        if (remaining == 0) return check(subset);
        for (int v = start; v <= h.n - remaining; ++v) {
            subset.push_back(v);
            bool ok = rec(v + 1, remaining - 1);
            subset.pop_back();
            if (!ok) return false;
        }
        return true;
    };
    for (; size <= horizon && level_count <= kAuditExhaustiveBudget; ++size) {
        if (!rec(0, size)) return audit;
        audit.exhaustive_to_size = size;
        level_count = level_count * (h.n - size) / (size + 1);
    }

    // random subsets for the remaining sizes
    Rng rng = Rng(seed).stream("audit_sparsity");
    for (int sz = std::max(size, 2); sz <= horizon; ++sz)
        for (int t = 0; t < trials; ++t) {
            auto a = rng.subset(h.n, sz);
            if (!check(a)) return audit;
        }
    return audit;
}

// ---------------------------------------------------------------------------

// sample + prune + property report. (P2) and (P3) hold by construction and
// are re-checked; (P1) and the sparsity audit are reported, not enforced.
inline std::pair<Hypergraph, GenReport> generate_verified(const GenParams& p,
                                                          int audit_size_cap = 3,
                                                          int audit_trials = 200) {
    Hypergraph raw = sample_raw(p);
    auto [pruned, rep] = prune(raw, p.g, p.degree_cap);
    double e = static_cast<double>(pruned.m());
    rep.p1_check = e >= p.c * p.n_verts / 2.0 && e <= p.c * p.n_verts;
    rep.sparsity = audit_sparsity(pruned, p.alpha, audit_size_cap, audit_trials, p.seed,
                                  p.mode == Mode::induced);
    return {pruned, rep};
}

// ---------------------------------------------------------------------------
// Presets. Paper magnitudes are recorded as formula strings; desk rows divide
// the magnitudes while preserving the relations that the pipeline relies on
// (degree cap 8cs, d/d' ratio, window arithmetic).

struct EmbedKnobs {
    int d = 0;             // unavailable-neighbor threshold for criticality
    int dprime = 0;        // reserved edges per critical vertex
    int cap_d = 2;         // D: children per critical vertex / max tree degree
    int dprime_matching = 2;  // D' used in the extension matching
    int core_min_degree = 2;  // delta for the G'' core
    double c1 = 1.3, c2 = 1.1;  // expander extraction densities
    int tree_size = 7;
    int frontier_levels = 1;
    int connect_radius = 8;    // BFS expansion cap in phase 2
    int window_retries = 3;
    int lll_retries = 64;
    long long matching_budget = 2'000'000;
    double alpha_n = 0;        // alpha*N, the critical-bound hypothesis horizon
    bool audit = false;        // assert (A1)-(A4) after every mutation
};

struct PresetBundle {
    std::string name;
    GenParams gen;
    int k = 2;
    int cap_d = 2;  // D
    std::optional<int> gadget_override;
    EmbedKnobs embed;
    std::map<std::string, std::string> formulas;
};

namespace detail {

inline std::map<std::string, std::string> table2_formulas(Mode mode, CaseKind ck) {
    std::map<std::string, std::string> f;
    if (mode == Mode::induced) {
        f["c"] = "10^7 * k * s^4 * ln(s) * D";
        f["alpha"] = "10^-4 * c^-5 * s^-15";
        f["N"] = "ceil(10^13 * c^7 * s^22 * k * ln(sD) * D * n)";
        f["g"] = "ceil(10^10 * s * k * ln^2(sD))";
        f["s"] = ck == CaseKind::even ? "O(k^6), induced k-Ramsey gadget for C6"
                                      : "e^{O(k log k)}, induced k-Ramsey gadget for C5";
        f["d'"] = "10^5 * D * s^3 * ln(s)";
        f["d"] = "20 * s * d'";
        f["D'"] = "10^4 * D * s^2 * ln(s)";
    } else {
        f["c"] = ck == CaseKind::even ? "10^3 * k * s^2 * D"
                                      : "10^3 * (2*ceil(log2 k)+1) * k * s^2 * D";
        f["alpha"] = "10^-3 * c^-2 * s^-4";
        f["N"] = "ceil(10^13 * c^3 * s^9 * k * ln(k) * D * ln(sD) * n)";
        f["g"] = "ceil(10^10 * s * k * ln(k) * ln(sD))";
        f["s"] = ck == CaseKind::even ? "O(k^{3/2}), complete gadget for C6"
                                      : "4^k + 1, complete gadget for short odd cycles";
        f["d'"] = "8 * s * D";
        f["d"] = "10 * s * d'";
        f["D'"] = "D";
    }
    f["degree_cap"] = "8 * c * s";
    return f;
}

inline double table2_c(Mode mode, CaseKind ck, int k, int s, int d_cap) {
    if (mode == Mode::induced) return 1e7 * k * std::pow(s, 4) * std::log(s) * d_cap;
    if (ck == CaseKind::even) return 1e3 * k * s * s * d_cap;
    return 1e3 * (2 * std::ceil(std::log2(std::max(2, k))) + 1) * k * s * s * d_cap;
}

}  // namespace detail

// Numeric scaling path: paper magnitudes divided by `scale` and floored to
// feasible desk values; rejects when the result is still out of desk range.
inline PresetBundle preset(Mode mode, CaseKind ck, double scale, int k = 2, int d_cap = 2) {
    if (scale <= 0) throw std::invalid_argument("preset: scale must be positive");
    PresetBundle b;
    b.name = "scaled";
    b.k = k;
    b.cap_d = d_cap;
    b.formulas = detail::table2_formulas(mode, ck);

    int s = mode == Mode::plain && ck == CaseKind::general
                ? std::min(17, (1 << (2 * std::min(k, 3))) + 1)
                : std::max<int>(4, static_cast<int>(std::ceil(3.0 * std::pow(k, 1.5))));
    double c_paper = detail::table2_c(mode, ck, k, s, d_cap);
    double g_paper = mode == Mode::induced
                         ? 1e10 * s * k * std::pow(std::log(static_cast<double>(s) * d_cap), 2)
                         : 1e10 * s * k * std::log(std::max(2.0, static_cast<double>(k))) *
                               std::log(static_cast<double>(s) * d_cap);
    double n_paper = mode == Mode::induced
                         ? 1e13 * std::pow(c_paper, 7) * std::pow(s, 22) * k *
                               std::log(static_cast<double>(s) * d_cap) * d_cap
                         : 1e13 * std::pow(c_paper, 3) * std::pow(s, 9) * k *
                               std::log(std::max(2.0, static_cast<double>(k))) * d_cap *
                               std::log(static_cast<double>(s) * d_cap);

    GenParams gp;
    gp.mode = mode;
    gp.case_kind = ck;
    gp.scale = scale;
    gp.s = s;
    gp.c = std::max(1.0, std::floor(c_paper / scale));
    gp.g = std::max(2, static_cast<int>(g_paper / scale));
    gp.n_verts = static_cast<int>(std::min<double>(1e9, n_paper / scale));
    gp.degree_cap = static_cast<int>(8 * gp.c * gp.s);
    double alpha_formula = mode == Mode::induced ? 1e-4 * std::pow(gp.c, -5) * std::pow(s, -15)
                                                 : 1e-3 * std::pow(gp.c, -2) * std::pow(s, -4);
    gp.alpha = std::max(alpha_formula, 20.0 / gp.n_verts);

    if (gp.n_verts > 2'000'000 || gp.g > 64) {
        std::ostringstream os;
        os << "preset: infeasible at desk scale (scale=" << scale << "): Table-2 magnitudes are N="
           << n_paper << ", c=" << c_paper << ", g=" << g_paper << ", s=" << s
           << "; scaled values N=" << gp.n_verts << ", g=" << gp.g
           << " still exceed desk bounds (N <= 2e6, g <= 64)";
        throw std::invalid_argument(os.str());
    }
    gp.validate();
    b.gen = gp;

    b.embed.cap_d = d_cap;
    b.embed.dprime = 2;
    b.embed.d = (mode == Mode::induced ? 20 : 10) * s * b.embed.dprime;
    b.embed.dprime_matching = mode == Mode::induced ? std::max(d_cap + 1, 3) : d_cap;
    return b;
}

// Documented desk rows. Values are desk-feasible stand-ins; each parameter's
// paper formula travels alongside in `formulas`.
inline PresetBundle preset_named(const std::string& name) {
    PresetBundle b;
    b.name = name;
    auto desk = [&](Mode mode, CaseKind ck, int n, int s, double c, int g, double alpha, int k,
                    int d_cap, std::optional<int> gadget) {
        b.gen.mode = mode;
        b.gen.case_kind = ck;
        b.gen.n_verts = n;
        b.gen.s = s;
        b.gen.c = c;
        b.gen.g = g;
        b.gen.alpha = alpha;
        b.gen.degree_cap = static_cast<int>(8 * c * s);
        b.gen.scale = 0;  // marker: hand-documented desk row
        b.k = k;
        b.cap_d = d_cap;
        b.gadget_override = gadget;
        b.formulas = detail::table2_formulas(mode, ck);
        b.embed.cap_d = d_cap;
        b.embed.dprime = 2;
        b.embed.d = (mode == Mode::induced ? 20 : 10) * s * b.embed.dprime;
        b.embed.dprime_matching = mode == Mode::induced ? d_cap + 1 : d_cap;
    };
    if (name == "desk-small") {
        // exactly the documented row; the K8 gadget forces uniformity 8 in
        // end-to-end runs (recorded by the pipeline when it adjusts)
        desk(Mode::plain, CaseKind::even, 2000, 4, 3.0, 6, 0.01, 2, 2, 8);
        b.embed.core_min_degree = 4;
        b.embed.c1 = 1.3;
        b.embed.c2 = 1.1;
        b.embed.tree_size = 7;
        b.embed.frontier_levels = 2;
        b.embed.window_retries = 8;
    } else if (name == "desk-dense") {
        // linearity-only pruning keeps the aux graph dense enough to embed;
        // vertex count leaves room for the phase-2 closure avoidance
        desk(Mode::plain, CaseKind::even, 50000, 6, 5.0, 2, 0.05, 1, 3, 6);
        b.embed.core_min_degree = 5;
        b.embed.c1 = 4.5;
        b.embed.c2 = 1.5;
        b.embed.dprime = 3;
        b.embed.d = 10 * 6 * 3;
        b.embed.dprime_matching = 3;
        b.embed.cap_d = 3;
        b.embed.tree_size = 7;
        b.embed.frontier_levels = 2;
        b.embed.window_retries = 10;
    } else if (name == "desk-tiny") {
        desk(Mode::plain, CaseKind::even, 600, 6, 1.0, 2, 0.2, 1, 2, 6);
        b.embed.core_min_degree = 2;
        b.embed.c1 = 1.5;
        b.embed.c2 = 1.2;
    } else if (name == "desk-induced") {
        desk(Mode::induced, CaseKind::even, 1500, 6, 2.0, 2, 0.1, 1, 2, std::nullopt);
        b.embed.core_min_degree = 4;
        b.embed.c1 = 1.5;
        b.embed.c2 = 1.2;
        b.embed.dprime = 3;
        b.embed.d = 20 * 6 * 3;
        b.embed.dprime_matching = 3;
        b.embed.window_retries = 10;
    } else if (name == "desk-general") {
        desk(Mode::plain, CaseKind::general, 30000, 5, 2.5, 3, 0.05, 1, 2, 5);
        b.embed.core_min_degree = 3;
        b.embed.c1 = 1.6;
        b.embed.c2 = 1.2;
        b.embed.tree_size = 7;
        b.embed.frontier_levels = 2;
        b.embed.window_retries = 10;
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    b.gen.validate();
    return b;
}

inline std::vector<std::string> preset_names() {
    return {"desk-small", "desk-dense", "desk-tiny", "desk-induced", "desk-general"};
}

}  // namespace rforge
