#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "rforge/auxgraph.hpp"
#include "rforge/embedder.hpp"
#include "rforge/gadgets.hpp"
#include "rforge/generator.hpp"
#include "rforge/graph.hpp"
#include "rforge/hypergraph.hpp"
#include "rforge/matching.hpp"
#include "rforge/subdivision.hpp"

// JSON wire formats. Keys are sorted by the json library, so equal values
// serialize byte-identically; reports carry no timestamps for the same reason.
namespace rforge::io {

using nlohmann::json;

// --- core types --------------------------------------------------------------

inline json to_json(const Hypergraph& h) {
    return json{{"n", h.n}, {"s", h.s}, {"edges", h.edges}};
}

inline Hypergraph hypergraph_from_json(const json& j) {
    Hypergraph h(j.at("n").get<int>(), j.at("s").get<int>(),
                 j.at("edges").get<std::vector<std::vector<int>>>());
    return h;
}

inline json to_json(const Graph& g) {
    json j{{"n", g.n}};
    json edges = json::array();
    for (auto& [u, v] : g.edges) edges.push_back(json::array({u, v}));
    j["edges"] = edges;
    if (!g.colors.empty()) j["colors"] = g.colors;
    return j;
}

inline Graph graph_from_json(const json& j) {
    Graph g(j.at("n").get<int>());
    for (const auto& e : j.at("edges")) g.add_edge(e.at(0).get<int>(), e.at(1).get<int>());
    if (j.contains("colors")) g.colors = j.at("colors").get<std::vector<int>>();
    g.finalize();
    return g;
}

// --- gadget files ------------------------------------------------------------

inline json to_json(const Gadget& g) {
    json j = to_json(g.f);
    j["ell"] = g.target_cycle_len;
    j["induced"] = g.induced_mode;
    j["claims_k"] = g.claims_k;
    j["odd_bound"] = g.odd_bound_semantics;
    j["description"] = g.description;
    return j;
}

inline Gadget gadget_from_json(const json& j) {
    Gadget g;
    g.f = graph_from_json(j);
    g.target_cycle_len = j.at("ell").get<int>();
    g.induced_mode = j.at("induced").get<bool>();
    g.claims_k = j.at("claims_k").get<int>();
    g.odd_bound_semantics = j.value("odd_bound", false);
    g.description = j.value("description", "");
    return g;
}

// --- host and aux graphs -----------------------------------------------------

inline json to_json(const HostGraph& h) {
    json j;
    j["base"] = to_json(h.base);
    j["graph"] = to_json(h.graph);
    j["placement"] = h.placement;
    j["edge_provenance"] = h.edge_owner;
    return j;
}

inline HostGraph host_from_json(const json& j) {
    HostGraph h;
    h.base = hypergraph_from_json(j.at("base"));
    h.graph = graph_from_json(j.at("graph"));
    h.placement = j.at("placement").get<std::vector<std::vector<int>>>();
    h.edge_owner = j.at("edge_provenance").get<std::vector<int>>();
    return h;
}

inline json to_json(const AuxGraph& a) {
    json j;
    j["graph"] = to_json(a.g);
    j["h"] = a.h_of;
    json cycles = json::array();
    for (size_t e = 0; e < a.g.edges.size(); ++e) {
        cycles.push_back(json{{"edge", json::array({a.g.edges[e].first, a.g.edges[e].second})},
                              {"color", a.g.colors[e]},
                              {"arcL1", a.arc_l1[e]},
                              {"arcL2", a.arc_l2[e]},
                              {"cycle", a.stored_cycle[e]}});
    }
    j["cycles"] = cycles;
    j["ell"] = a.ell;
    j["L1"] = a.l1;
    j["L2"] = a.l2;
    return j;
}

// the hypergraph travels with the host file, not the aux file
inline AuxGraph aux_from_json(const json& j, const Hypergraph& hyper) {
    AuxGraph a;
    a.hyper = hyper;
    a.g = graph_from_json(j.at("graph"));
    a.h_of = j.at("h").get<std::vector<int>>();
    for (const auto& c : j.at("cycles")) {
        a.arc_l1.push_back(c.at("arcL1").get<std::vector<int>>());
        a.arc_l2.push_back(c.at("arcL2").get<std::vector<int>>());
        a.stored_cycle.push_back(c.at("cycle").get<std::vector<int>>());
    }
    a.ell = j.at("ell").get<int>();
    a.l1 = j.at("L1").get<int>();
    a.l2 = j.at("L2").get<int>();
    a.build_caches();
    return a;
}

// --- bipartite hypergraph ------------------------------------------------------

inline json to_json(const BipartiteHypergraph& b) {
    return json{{"x", b.x}, {"y", b.y}, {"edges", b.edges}};
}

inline BipartiteHypergraph bipartite_from_json(const json& j) {
    BipartiteHypergraph b;
    b.x = j.at("x").get<std::vector<int>>();
    b.y = j.at("y").get<std::vector<int>>();
    b.edges = j.at("edges").get<std::vector<std::vector<int>>>();
    b.validate();
    return b;
}

// --- generation reports --------------------------------------------------------

inline json to_json(const GenReport& r) {
    json j;
    j["edges_sampled"] = r.edges_sampled;
    j["duplicates_removed"] = r.duplicates_removed;
    j["girth_removed"] = r.girth_removed;
    j["degree_removed"] = r.degree_removed;
    j["final_edge_count"] = r.final_edge_count;
    j["max_degree"] = r.max_degree;
    j["P2_degree_check"] = r.degree_check;
    j["P3_girth_check"] = r.girth_check;
    j["P1_count_check"] = r.p1_check;
    json sp;
    sp["variant"] = r.sparsity.p4_variant ? "P4" : "P4prime";
    sp["violation_found"] = r.sparsity.violation_found;
    sp["witness"] = r.sparsity.witness;
    sp["exhaustive_to_size"] = r.sparsity.exhaustive_to_size;
    sp["subsets_checked"] = r.sparsity.subsets_checked;
    j["sparsity_audit"] = sp;
    return j;
}

inline json to_json(const GenParams& p) {
    json j;
    j["N"] = p.n_verts;
    j["s"] = p.s;
    j["c"] = p.c;
    j["g"] = p.g;
    j["alpha"] = p.alpha;
    j["degree_cap"] = p.degree_cap;
    j["mode"] = to_string(p.mode);
    j["case"] = to_string(p.case_kind);
    j["scale"] = p.scale;
    j["seed"] = p.seed;
    return j;
}

inline GenParams gen_params_from_json(const json& j) {
    GenParams p;
    p.n_verts = j.at("N").get<int>();
    p.s = j.at("s").get<int>();
    p.c = j.at("c").get<double>();
    p.g = j.at("g").get<int>();
    p.alpha = j.at("alpha").get<double>();
    p.degree_cap = j.at("degree_cap").get<int>();
    p.mode = parse_mode(j.at("mode").get<std::string>());
    p.case_kind = parse_case(j.at("case").get<std::string>());
    p.scale = j.value("scale", 0.0);
    p.seed = j.value("seed", uint64_t{0});
    return p;
}

inline json to_json(const PresetBundle& b) {
    json j;
    j["name"] = b.name;
    j["gen"] = to_json(b.gen);
    j["k"] = b.k;
    j["D"] = b.cap_d;
    if (b.gadget_override) j["gadget_order"] = *b.gadget_override;
    json e;
    e["d"] = b.embed.d;
    e["d_prime"] = b.embed.dprime;
    e["D_prime"] = b.embed.dprime_matching;
    e["core_min_degree"] = b.embed.core_min_degree;
    e["c1"] = b.embed.c1;
    e["c2"] = b.embed.c2;
    e["tree_size"] = b.embed.tree_size;
    e["frontier_levels"] = b.embed.frontier_levels;
    e["window_retries"] = b.embed.window_retries;
    j["embed"] = e;
    j["table2_formulas"] = b.formulas;
    return j;
}

// --- tasks and embeddings -------------------------------------------------------

inline json to_json(const SubdivisionTask& t) {
    json j;
    j["H"] = to_json(t.base);
    j["sigma"] = t.sigma;
    j["mode"] = to_string(t.mode);
    j["case"] = to_string(t.case_kind);
    j["D"] = t.max_degree_bound;
    return j;
}

inline SubdivisionTask task_from_json(const json& j) {
    SubdivisionTask t;
    t.base = graph_from_json(j.at("H"));
    t.sigma = j.at("sigma").get<std::vector<int>>();
    t.mode = parse_mode(j.at("mode").get<std::string>());
    t.case_kind = parse_case(j.at("case").get<std::string>());
    t.max_degree_bound = j.value("D", 2);
    t.validate();
    return t;
}

inline json trace_to_json(const EdgeTrace& t) {
    json j;
    j["h_edge"] = t.h_edge;
    j["attempts"] = t.attempts;
    j["ok"] = t.ok;
    j["sigma_realized"] = t.sigma_realized;
    j["path_len_used"] = t.path_len_used;
    j["prime_path_len"] = t.prime_path_len;
    j["extends"] = t.extends;
    j["failure"] = t.failure;
    return j;
}

inline json to_json(const EmbedResult& r) {
    json j;
    j["ok"] = r.ok;
    j["branch_map"] = r.branch_map;
    j["paths"] = r.paths;
    json sp = json::object();
    for (size_t i = 0; i < r.sigma_prime.size(); ++i) sp[std::to_string(i)] = r.sigma_prime[i];
    j["sigma_prime"] = sp;
    j["color"] = r.color;
    json tr = json::array();
    for (const auto& t : r.trace) tr.push_back(trace_to_json(t));
    j["trace"] = tr;
    if (!r.ok) j["diagnostic"] = json{{"kind", r.diag.kind}, {"detail", r.diag.detail}};
    j["invariant_checks"] = r.invariant_checks;
    j["invariant_violations"] = r.invariant_violations;
    j["critical_bound_applicable"] = r.critical_bound_applicable;
    j["critical_bound_violations"] = r.critical_bound_violations;
    return j;
}

inline json embedding_to_json(const SubdivisionEmbedding& e) {
    json vm = json::object();
    for (size_t i = 0; i < e.vertex_map.size(); ++i) vm[std::to_string(i)] = e.vertex_map[i];
    json j;
    j["vertex_map"] = vm;
    if (!e.sigma_realized.empty()) {
        json sp = json::object();
        for (size_t i = 0; i < e.sigma_realized.size(); ++i)
            sp[std::to_string(i)] = e.sigma_realized[i];
        j["sigma_prime"] = sp;
    }
    return j;
}

inline SubdivisionEmbedding embedding_from_json(const json& j) {
    SubdivisionEmbedding e;
    const auto& vm = j.at("vertex_map");
    e.vertex_map.assign(vm.size(), -1);
    for (auto it = vm.begin(); it != vm.end(); ++it) {
        size_t idx = std::stoul(it.key());
        if (idx >= e.vertex_map.size()) e.vertex_map.resize(idx + 1, -1);
        e.vertex_map[idx] = it.value().get<int>();
    }
    return e;
}

// --- file helpers ----------------------------------------------------------------

inline void write_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

inline json read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    json j;
    in >> j;
    return j;
}

}  // namespace rforge::io
