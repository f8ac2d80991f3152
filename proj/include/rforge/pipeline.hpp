#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rforge/auxgraph.hpp"
#include "rforge/embedder.hpp"
#include "rforge/gadgets.hpp"
#include "rforge/generator.hpp"
#include "rforge/oracle.hpp"
#include "rforge/subdivision.hpp"

namespace rforge {

enum class ColoringStrategy { uniform_random, per_gadget_adversarial, from_file };

inline std::string to_string(ColoringStrategy s) {
    switch (s) {
        case ColoringStrategy::uniform_random: return "uniform-random";
        case ColoringStrategy::per_gadget_adversarial: return "per-gadget-adversarial";
        case ColoringStrategy::from_file: return "from-file";
    }
    return "?";
}

inline ColoringStrategy parse_strategy(const std::string& s) {
    if (s == "uniform-random") return ColoringStrategy::uniform_random;
    if (s == "per-gadget-adversarial") return ColoringStrategy::per_gadget_adversarial;
    if (s == "from-file") return ColoringStrategy::from_file;
    throw std::invalid_argument("unknown coloring strategy: " + s);
}

// uniform color per host edge from a named substream
inline std::vector<int> color_uniform(const HostGraph& host, int k, Rng rng) {
    std::vector<int> out(host.graph.e());
    for (auto& c : out) c = rng.below_int(k);
    return out;
}

// within each gadget copy, color edges greedily to minimize the number of
// monochromatic target cycles completed so far (a stress test, not an
// optimal adversary)
inline std::vector<int> color_adversarial(const HostGraph& host, int k, const Gadget& gadget,
                                          Rng rng) {
    std::vector<int> out(host.graph.e(), -1);
    std::vector<std::vector<int>> owner_edges(host.base.m());
    for (size_t e = 0; e < host.graph.e(); ++e)
        owner_edges[host.edge_owner[e]].push_back(static_cast<int>(e));
    for (size_t h = 0; h < host.base.m(); ++h) {
        const auto& verts = host.base.edges[h];
        std::map<int, int> local;
        for (size_t i = 0; i < verts.size(); ++i) local[verts[i]] = static_cast<int>(i);
        Graph copy(static_cast<int>(verts.size()));
        for (int e : owner_edges[h]) {
            auto [u, v] = host.graph.edges[e];
            copy.add_edge(local[u], local[v]);
        }
        copy.finalize();
        std::vector<int> cols(copy.e(), -1);
        for (size_t i = 0; i < copy.e(); ++i) {
            int best_c = 0;
            long long best_new = -1;
            for (int c = 0; c < k; ++c) {
                cols[i] = c;
                Graph probe = copy;
                probe.colors = cols;
                // count completed monochromatic target cycles through edge i
                long long created = 0;
                auto [u, v] = copy.edges[i];
                if (gadget.odd_bound_semantics) {
                    for (int len = 3; len <= gadget.target_cycle_len; len += 2)
                        created += detail::mono_cycle_through(copy, cols, u, v, c, len, false,
                                                              false)
                                       ? 1
                                       : 0;
                } else {
                    created = detail::mono_cycle_through(copy, cols, u, v, c,
                                                         gadget.target_cycle_len, false,
                                                         gadget.induced_mode)
                                  ? 1
                                  : 0;
                }
                if (best_new < 0 || created < best_new) {
                    best_new = created;
                    best_c = c;
                }
                cols[i] = -1;
            }
            cols[i] = best_c;
        }
        // map back to host edge ids (copy.finalize sorted local edges the
        // same way owner_edges were pushed: rebuild the correspondence)
        for (int e : owner_edges[h]) {
            auto [u, v] = host.graph.edges[e];
            auto id = copy.edge_id(local[u], local[v]);
            out[e] = cols[*id];
        }
    }
    (void)rng;
    return out;
}

// --- one full trial -----------------------------------------------------------

struct TrialOutcome {
    int trial = -1;
    bool produced = false;   // an embedding was produced
    bool verified = false;   // and the oracle accepted it
    std::string failure_kind, failure_detail;
    // statistics
    size_t aux_edges = 0;
    bool q1_check = false;
    bool q2_check = false;
    int mono_color = -1;
    size_t mono_edges = 0;
    ExpanderCert cert;
    size_t core_vertices = 0;
    EmbedResult embed;
    std::vector<int> sigma_prime;
    oracle::Verdict verdict;
};

struct ExperimentConfig {
    PresetBundle preset;
    SubdivisionTask task;
    int trials = 1;
    uint64_t seed = 0;
    ColoringStrategy strategy = ColoringStrategy::uniform_random;
    std::vector<int> fixed_coloring;  // from-file
    bool audit = true;
};

inline std::vector<int> make_coloring(const ExperimentConfig& cfg, const HostGraph& host,
                                      const Gadget& gadget, int trial) {
    Rng rng = Rng(cfg.seed).stream("color", static_cast<uint64_t>(trial));
    switch (cfg.strategy) {
        case ColoringStrategy::uniform_random:
            return color_uniform(host, cfg.preset.k, rng);
        case ColoringStrategy::per_gadget_adversarial:
            return color_adversarial(host, cfg.preset.k, gadget, rng);
        case ColoringStrategy::from_file:
            if (cfg.fixed_coloring.size() != host.graph.e())
                throw std::invalid_argument("fixed coloring not parallel to host edges");
            return cfg.fixed_coloring;
    }
    throw std::logic_error("unreachable");
}

// color -> extract -> expander -> core -> embed -> lift -> verify
inline TrialOutcome run_trial(const ExperimentConfig& cfg, const HostGraph& host,
                              const Gadget& gadget, int trial) {
    TrialOutcome out;
    out.trial = trial;
    auto coloring = make_coloring(cfg, host, gadget, trial);

    auto ext = extract_aux(host, coloring, cfg.preset.gen.mode, cfg.preset.gen.case_kind, gadget);
    if (!ext.ok) {
        out.failure_kind = "gadget";
        std::ostringstream os;
        os << ext.failed_hyperedges.size() << " gadget copies produced no usable cycle";
        out.failure_detail = os.str();
        return out;
    }
    const AuxGraph& aux = ext.aux;
    out.aux_edges = aux.g.e();

    // Q1: e(G) = e(H) (even/induced) and max degree inherited
    out.q1_check = aux.g.e() <= host.base.m() && aux.g.max_degree() <= cfg.preset.gen.degree_cap;
    // Q2 sampled audit: random small subsets
    {
        Rng rng = Rng(cfg.seed).stream("q2", static_cast<uint64_t>(trial));
        double ratio = cfg.preset.gen.mode == Mode::induced ? 1.25 : 2.0;
        out.q2_check = true;
        int cap = std::max<int>(2, static_cast<int>(cfg.preset.gen.alpha * aux.g.n));
        for (int t = 0; t < 50 && out.q2_check; ++t) {
            int size = 2 + rng.below_int(std::max(1, cap - 1));
            auto a = rng.subset(aux.g.n, std::min(size, aux.g.n));
            out.q2_check = check_edge_sparsity_q2(aux.g, a, ratio);
        }
    }

    auto [g_red, color] = mono_max_subgraph(aux);
    out.mono_color = color;
    out.mono_edges = g_red.e();

    auto [gprime, cert] = extract_expander(g_red, cfg.preset.embed.c1, cfg.preset.embed.c2,
                                           cfg.preset.gen.alpha, cfg.preset.gen.degree_cap);
    out.cert = cert;
    if (!cert.ok) {
        out.failure_kind = "hypothesis";
        out.failure_detail = "expander extraction: " + cert.note;
        return out;
    }

    Graph core = min_degree_core(gprime, cfg.preset.embed.core_min_degree);
    out.core_vertices = core.support().size();
    if (core.e() == 0) {
        out.failure_kind = "hypothesis";
        out.failure_detail = "min-degree core is empty";
        return out;
    }

    EmbedKnobs knobs = cfg.preset.embed;
    knobs.alpha_n = cfg.preset.gen.alpha * aux.g.n;
    knobs.audit = cfg.audit;
    Embedder emb(aux, gprime, core, knobs, cfg.preset.gen.mode,
                 Rng(cfg.seed).stream("embed", static_cast<uint64_t>(trial)));
    out.embed = emb.run(cfg.task);
    if (!out.embed.ok) {
        out.failure_kind = out.embed.diag.kind;
        out.failure_detail = out.embed.diag.detail;
        return out;
    }
    out.produced = true;
    out.sigma_prime = out.embed.sigma_prime;

    auto lift = lift_embedding(aux, host, coloring, cfg.task, out.embed.branch_map,
                               out.embed.paths);
    out.verdict = lift.verdict;
    out.verified = lift.ok && lift.verdict.ok;
    if (!out.verified) {
        out.failure_kind = "soundness";
        out.failure_detail = lift.ok ? lift.verdict.notes : lift.error;
    }
    return out;
}

struct ExperimentReport {
    GenReport gen_report;
    size_t host_edges = 0;
    bool uniformity_adjusted = false;  // s was raised to match the gadget order
    int uniformity_used = 0;
    std::vector<TrialOutcome> trials;
    int produced = 0;
    int verified = 0;
};

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    ExperimentReport rep;
    GenParams gp = cfg.preset.gen;
    gp.seed = Rng(cfg.seed).stream("generate").seed();
    Gadget gadget = make_gadget(cfg.preset.k, gp.mode, gp.case_kind, cfg.preset.gadget_override);
    if (gadget.order() != gp.s) {
        // substitution requires v(F) = s; follow the gadget and record it
        rep.uniformity_adjusted = true;
        gp.s = gadget.order();
        gp.degree_cap = static_cast<int>(8 * gp.c * gp.s);
    }
    rep.uniformity_used = gp.s;
    auto [hyper, gen_rep] = generate_verified(gp);
    rep.gen_report = gen_rep;
    HostGraph host = substitute(hyper, gadget, Rng(cfg.seed).stream("substitute").seed());
    rep.host_edges = host.graph.e();
    ExperimentConfig cfg_used = cfg;
    cfg_used.preset.gen = gp;
    for (int t = 0; t < cfg.trials; ++t) {
        TrialOutcome out = run_trial(cfg_used, host, gadget, t);
        if (out.produced) ++rep.produced;
        if (out.verified) ++rep.verified;
        rep.trials.push_back(std::move(out));
    }
    return rep;
}

}  // namespace rforge
