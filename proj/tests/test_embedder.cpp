#include <catch2/catch_amalgamated.hpp>

#include "rforge/embedder.hpp"
#include "rforge/oracle.hpp"

using namespace rforge;

namespace rforge {

// test-only access to the embedder internals
struct EmbedderTestHook {
    static Embedder::ExtendOutcome extend(Embedder& e, const std::vector<int>& c) {
        return e.extend_good(c);
    }
    static DynSubgraph& j(Embedder& e) { return e.j_; }
    static DynSubgraph& k(Embedder& e) { return e.k_; }
    static ClosureCache& jcl(Embedder& e) { return e.jcl_; }
    static ClosureCache& kcl(Embedder& e) { return e.kcl_; }
    static std::map<int, std::vector<int>>& kchildren(Embedder& e) { return e.kchildren_; }
    static std::set<int>& critical(Embedder& e) { return e.critical_; }
    static Embedder::LeafOutcome leaf(Embedder& e, int v) { return e.add_leaf(v); }
    static Embedder::TreeGrow grow(Embedder& e, int root, int p, int size) {
        return e.grow_tree(root, p, size);
    }
};

}  // namespace rforge

namespace {

// Synthetic aux graph over a target graph: one private 6-vertex hyperedge per
// target edge, carrying a fabricated monochromatic 6-cycle whose distance-2
// chord is exactly the target edge. Closures stay local, growth is fully
// controlled.
AuxGraph synthetic_aux(const Graph& target, int color = 0) {
    AuxGraph aux;
    int fresh = target.n;
    std::vector<std::vector<int>> hedges;
    Graph g(target.n + 4 * static_cast<int>(target.e()));
    for (auto& [u, v] : target.edges) {
        int a = fresh, b = fresh + 1, c = fresh + 2, d = fresh + 3;
        fresh += 4;
        std::vector<int> he{u, v, a, b, c, d};
        std::sort(he.begin(), he.end());
        hedges.push_back(he);
        g.add_edge(u, v);
        aux.arc_l1.push_back({u, a, v});
        aux.arc_l2.push_back({u, b, c, d, v});
        aux.stored_cycle.push_back({u, a, v, d, c, b});
        aux.h_of.push_back(static_cast<int>(hedges.size()) - 1);
    }
    g.colors.assign(g.edges.size(), color);
    // edges of a finalized target are already sorted, so finalize keeps order
    g.finalize();
    aux.g = std::move(g);
    aux.hyper = Hypergraph(fresh, 6, hedges);
    aux.ell = 6;
    aux.l1 = 2;
    aux.l2 = 4;
    aux.build_caches();
    return aux;
}

Graph circulant(int n, std::vector<int> offsets) {
    Graph g(n);
    for (int v = 0; v < n; ++v)
        for (int o : offsets) g.add_edge(v, (v + o) % n);
    g.finalize();
    return g;
}

// random near-regular target: index-free structure, so lexicographic child
// choices expand in all directions instead of folding into one region
Graph random_target(int n, int half_deg, uint64_t seed) {
    Rng rng(seed);
    std::set<Edge> es;
    for (int v = 0; v < n; ++v)
        for (int i = 0; i < half_deg; ++i) {
            int u = rng.below_int(n);
            if (u != v) es.insert(make_edge(u, v));
        }
    Graph g(n);
    g.edges.assign(es.begin(), es.end());
    g.finalize();
    return g;
}

EmbedKnobs tiny_knobs(Mode mode, int s = 6) {
    EmbedKnobs k;
    k.dprime = 3;
    k.d = (mode == Mode::induced ? 20 : 10) * s * k.dprime;
    k.cap_d = 3;  // branching trees give usable frontiers
    k.dprime_matching = 3;
    k.core_min_degree = 5;
    k.tree_size = 7;
    k.frontier_levels = 2;
    k.connect_radius = 12;
    k.window_retries = 8;
    k.audit = true;
    return k;
}

SubdivisionTask single_edge_task(int sigma, Mode mode) {
    SubdivisionTask t;
    t.base = Graph(2, {{0, 1}});
    t.sigma = {sigma};
    t.mode = mode;
    t.case_kind = CaseKind::even;
    t.max_degree_bound = 2;
    return t;
}

}  // namespace

TEST_CASE("available_neighbors: empty J leaves everything available") {
    Graph target = circulant(40, {1, 2, 3});
    AuxGraph aux = synthetic_aux(target);
    EmbedKnobs knobs = tiny_knobs(Mode::plain);
    Graph core = min_degree_core(aux.g, 2);
    Embedder emb(aux, aux.g, core, knobs, Mode::plain, Rng(5));
    DynSubgraph ref;
    ref.init(&aux);
    ClosureCache cl;
    cl.init(&aux, 1);
    auto av = emb.available_neighbors(ref, cl, 7);
    CHECK(av.size() == aux.g.adj[7].size());
}

TEST_CASE("available_neighbors excludes closure hits, depth-sensitive") {
    // path target 0-1-2-3-4...; J = edge (0,1)
    Graph target(8, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}});
    AuxGraph aux = synthetic_aux(target);
    EmbedKnobs knobs = tiny_knobs(Mode::plain);
    Graph core = min_degree_core(aux.g, 1);

    DynSubgraph ref;
    ref.init(&aux);
    ref.add_edge(*aux.g.edge_id(0, 1));

    // plain depth: cl_1(J) = h(01); edge (1,2) has h containing 1 in cl
    {
        Embedder emb(aux, aux.g, core, knobs, Mode::plain, Rng(5));
        ClosureCache cl;
        cl.init(&aux, 1);
        cl.add_edge(*aux.g.edge_id(0, 1));
        auto av2 = emb.available_neighbors(ref, cl, 2);
        // neighbor 1 of 2: h(12) - {2} contains 1 which lies in cl_1 -> excluded
        CHECK(std::find(av2.begin(), av2.end(), 1) == av2.end());
        // neighbor 3 of 2: h(23) is disjoint from cl_1 -> available in plain
        CHECK(std::find(av2.begin(), av2.end(), 3) != av2.end());
    }
    // induced depth 2: cl_2 absorbs h(12) entirely, so even 3's edge h(23)
    // stays clear, but 2's own hyperedges touching cl_2 drop out
    {
        EmbedKnobs ki = tiny_knobs(Mode::induced);
        Embedder emb(aux, aux.g, core, ki, Mode::induced, Rng(5));
        ClosureCache cl;
        cl.init(&aux, 2);
        cl.add_edge(*aux.g.edge_id(0, 1));
        auto av3 = emb.available_neighbors(ref, cl, 3);
        // h(23) - {3} contains 2; 2 lies in cl_2 (via h(12) meeting cl_1 at 1)
        CHECK(std::find(av3.begin(), av3.end(), 2) == av3.end());
        // plain mode would keep it
        Embedder embp(aux, aux.g, core, knobs, Mode::plain, Rng(5));
        ClosureCache cl1;
        cl1.init(&aux, 1);
        cl1.add_edge(*aux.g.edge_id(0, 1));
        auto avp = embp.available_neighbors(ref, cl1, 3);
        CHECK(std::find(avp.begin(), avp.end(), 2) != avp.end());
    }
}

TEST_CASE("critical_set trivial cases") {
    Graph target = circulant(40, {1, 2, 3});
    AuxGraph aux = synthetic_aux(target);
    EmbedKnobs knobs = tiny_knobs(Mode::plain);
    Graph core = min_degree_core(aux.g, 2);
    Embedder emb(aux, aux.g, core, knobs, Mode::plain, Rng(5));

    DynSubgraph empty;
    empty.init(&aux);
    CHECK(emb.critical_set(empty).result.empty());

    DynSubgraph one;
    one.init(&aux);
    one.add_edge(0);
    // a single edge has no non-leaves and d is far above every degree
    CHECK(emb.critical_set(one).result.empty());

    DynSubgraph path;
    path.init(&aux);
    path.add_edge(*aux.g.edge_id(0, 1));
    path.add_edge(*aux.g.edge_id(1, 2));
    auto c = emb.critical_set(path).result;
    CHECK(c == std::set<int>{1});  // the middle vertex
}

TEST_CASE("critical_set unavailability levels fire with small d") {
    // star-like target: center 0 joined to many, small d makes neighbors of
    // the center critical once J surrounds them
    Graph target = circulant(30, {1, 2, 3, 4, 5});
    AuxGraph aux = synthetic_aux(target);
    EmbedKnobs knobs = tiny_knobs(Mode::plain);
    knobs.d = 4;  // low threshold so the iteration has content
    Graph core = min_degree_core(aux.g, 2);
    Embedder emb(aux, aux.g, core, knobs, Mode::plain, Rng(5));
    DynSubgraph j;
    j.init(&aux);
    // a path through 0..4
    for (int v = 0; v + 1 <= 4; ++v) j.add_edge(*aux.g.edge_id(v, v + 1));
    auto trace = emb.critical_set(j);
    CHECK(trace.levels.size() >= 2);           // some unavailability level fired
    CHECK(trace.result.size() >= 3);           // at least the path interior
    for (int v = 1; v <= 3; ++v) CHECK(trace.result.count(v));
}

TEST_CASE("extend_good gives critical roots D children and stays good") {
    Graph target = circulant(40, {1, 2, 3});
    AuxGraph aux = synthetic_aux(target);
    EmbedKnobs knobs = tiny_knobs(Mode::plain);
    knobs.cap_d = 2;
    knobs.dprime_matching = 2;
    knobs.dprime = 2;
    Graph core = min_degree_core(aux.g, 2);
    Embedder emb(aux, aux.g, core, knobs, Mode::plain, Rng(5));

    auto& j = EmbedderTestHook::j(emb);
    auto& k = EmbedderTestHook::k(emb);
    auto& jcl = EmbedderTestHook::jcl(emb);
    auto& kcl = EmbedderTestHook::kcl(emb);
    int e01 = *aux.g.edge_id(0, 1);
    j.add_edge(e01);
    jcl.add_edge(e01);
    k.add_edge(e01);
    kcl.add_edge(e01);

    auto out = EmbedderTestHook::extend(emb, {1});
    REQUIRE(out.ok);
    auto& ch = EmbedderTestHook::kchildren(emb);
    REQUIRE(ch.count(1));
    CHECK(ch[1].size() == 2);  // D children
    for (int c : ch[1]) {
        CHECK_FALSE(EmbedderTestHook::critical(emb).count(c));  // leaves not critical
        CHECK(k.has_edge_id(*aux.g.edge_id(1, c)));
    }
    GoodReport rep = is_good(aux, {k.edges().begin(), k.edges().end()}, Mode::plain);
    CHECK(rep.ok);

    // empty C leaves K unchanged
    auto before = k.edges();
    auto out2 = EmbedderTestHook::extend(emb, {});
    CHECK(out2.ok);
    CHECK(k.edges() == before);
}

TEST_CASE("extend_good in induced mode applies the conflict-graph thinning") {
    Graph target = circulant(60, {1, 9, 20, 34});
    AuxGraph aux = synthetic_aux(target);
    EmbedKnobs knobs = tiny_knobs(Mode::induced);
    knobs.cap_d = 2;
    Graph core = min_degree_core(aux.g, 2);
    Embedder emb(aux, aux.g, core, knobs, Mode::induced, Rng(5));

    auto& j = EmbedderTestHook::j(emb);
    auto& k = EmbedderTestHook::k(emb);
    EmbedderTestHook::jcl(emb).add_edge(*aux.g.edge_id(0, 1));
    EmbedderTestHook::kcl(emb).add_edge(*aux.g.edge_id(0, 1));
    j.add_edge(*aux.g.edge_id(0, 1));
    k.add_edge(*aux.g.edge_id(0, 1));

    auto out = EmbedderTestHook::extend(emb, {1});
    REQUIRE(out.ok);
    auto& ch = EmbedderTestHook::kchildren(emb);
    REQUIRE(ch.count(1));
    CHECK(ch[1].size() == 2);
    GoodReport rep = is_good(aux, {k.edges().begin(), k.edges().end()}, Mode::induced);
    CHECK(rep.ok);
}

TEST_CASE("add_leaf consumes a reserved edge without changing criticals") {
    Graph target = circulant(40, {1, 2, 3});
    AuxGraph aux = synthetic_aux(target);
    EmbedKnobs knobs = tiny_knobs(Mode::plain);
    knobs.cap_d = 2;
    knobs.dprime_matching = 2;
    knobs.dprime = 2;
    Graph core = min_degree_core(aux.g, 2);
    Embedder emb(aux, aux.g, core, knobs, Mode::plain, Rng(5));

    auto& j = EmbedderTestHook::j(emb);
    auto& k = EmbedderTestHook::k(emb);
    int e01 = *aux.g.edge_id(0, 1);
    j.add_edge(e01);
    EmbedderTestHook::jcl(emb).add_edge(e01);
    k.add_edge(e01);
    EmbedderTestHook::kcl(emb).add_edge(e01);
    REQUIRE(EmbedderTestHook::extend(emb, {1}).ok);
    EmbedderTestHook::critical(emb) = {1};

    auto crit_before = EmbedderTestHook::critical(emb);
    size_t jsize = j.edges().size();
    auto leaf = EmbedderTestHook::leaf(emb, 1);
    REQUIRE(leaf.ok);
    CHECK_FALSE(leaf.extended);  // reserved edge consumed, no new extension
    CHECK(j.edges().size() == jsize + 1);
    CHECK(EmbedderTestHook::critical(emb) == crit_before);
    CHECK(j.has_edge_id(*aux.g.edge_id(1, leaf.leaf)));
}

TEST_CASE("embed single edge end to end, plain even") {
    Graph target = random_target(2000, 4, 1234);
    AuxGraph aux = synthetic_aux(target);
    EmbedKnobs knobs = tiny_knobs(Mode::plain);
    Graph core = min_degree_core(aux.g, knobs.core_min_degree);
    SubdivisionTask task = single_edge_task(20, Mode::plain);

    Embedder emb(aux, aux.g, core, knobs, Mode::plain, Rng(42));
    auto res = emb.run(task);
    INFO(res.diag.kind << ": " << res.diag.detail);
    REQUIRE(res.ok);
    CHECK(res.invariant_violations == 0);
    CHECK(res.invariant_checks > 0);
    REQUIRE(res.sigma_prime.size() == 1);
    CHECK(res.sigma_prime[0] >= 5);   // ceil(20/4)
    CHECK(res.sigma_prime[0] <= 10);  // floor(20/2)
    CHECK(res.paths[0].front() == res.branch_map[0]);
    CHECK(res.paths[0].back() == res.branch_map[1]);
    // the realized path is an induced-good monochromatic subgraph; lift it
    HostGraph host;
    host.base = aux.hyper;
    // build a host graph carrying every gadget edge: cycles stored per edge
    Graph hg(aux.hyper.n);
    for (size_t e = 0; e < aux.g.edges.size(); ++e) {
        const auto& cyc = aux.stored_cycle[e];
        for (size_t i = 0; i < cyc.size(); ++i)
            hg.add_edge(cyc[i], cyc[(i + 1) % cyc.size()]);
    }
    hg.finalize();
    std::vector<int> coloring(hg.e(), 0);
    host.graph = std::move(hg);
    host.edge_owner.assign(host.graph.e(), 0);  // unused by the lift
    auto lift = lift_embedding(aux, host, coloring, task, res.branch_map, res.paths);
    REQUIRE(lift.ok);
    CHECK(lift.verdict.ok);
}

TEST_CASE("embed rejects odd sigma in the even case") {
    Graph target = circulant(40, {1, 2});
    AuxGraph aux = synthetic_aux(target);
    EmbedKnobs knobs = tiny_knobs(Mode::plain);
    Graph core = min_degree_core(aux.g, 2);
    SubdivisionTask task = single_edge_task(7, Mode::plain);
    Embedder emb(aux, aux.g, core, knobs, Mode::plain, Rng(1));
    CHECK_THROWS_AS(emb.run(task), std::invalid_argument);
}

TEST_CASE("embed is deterministic") {
    Graph target = random_target(2000, 4, 1234);
    AuxGraph aux = synthetic_aux(target);
    EmbedKnobs knobs = tiny_knobs(Mode::plain);
    Graph core = min_degree_core(aux.g, knobs.core_min_degree);
    SubdivisionTask task = single_edge_task(20, Mode::plain);
    auto r1 = Embedder(aux, aux.g, core, knobs, Mode::plain, Rng(42)).run(task);
    auto r2 = Embedder(aux, aux.g, core, knobs, Mode::plain, Rng(42)).run(task);
    REQUIRE(r1.ok);
    REQUIRE(r2.ok);
    CHECK(r1.paths == r2.paths);
    CHECK(r1.branch_map == r2.branch_map);
}

TEST_CASE("embed a triangle, plain even") {
    Graph target = random_target(3000, 4, 777);
    AuxGraph aux = synthetic_aux(target);
    EmbedKnobs knobs = tiny_knobs(Mode::plain);
    knobs.window_retries = 8;
    knobs.tree_size = 12;
    Graph core = min_degree_core(aux.g, knobs.core_min_degree);
    SubdivisionTask task;
    task.base = Graph(3, {{0, 1}, {0, 2}, {1, 2}});
    task.sigma = {60, 60, 60};
    task.mode = Mode::plain;
    task.case_kind = CaseKind::even;
    task.max_degree_bound = 2;

    Embedder emb(aux, aux.g, core, knobs, Mode::plain, Rng(7));
    auto res = emb.run(task);
    INFO(res.diag.kind << ": " << res.diag.detail);
    REQUIRE(res.ok);
    CHECK(res.invariant_violations == 0);
    // paths pairwise disjoint except at branch images
    std::map<int, int> usage;
    for (const auto& p : res.paths)
        for (int v : p) ++usage[v];
    for (auto [v, cnt] : usage) {
        bool branch = false;
        for (int b : res.branch_map) branch |= b == v;
        if (!branch) CHECK(cnt == 1);
    }
    GoodReport rep;  // image built from the paths is good
    std::vector<int> img;
    for (const auto& p : res.paths)
        for (size_t i = 0; i + 1 < p.size(); ++i) img.push_back(*aux.g.edge_id(p[i], p[i + 1]));
    rep = is_good(aux, img, Mode::plain);
    CHECK(rep.ok);
}

TEST_CASE("embed single edge end to end, induced even") {
    Graph target = random_target(8000, 4, 4321);
    AuxGraph aux = synthetic_aux(target);
    EmbedKnobs knobs = tiny_knobs(Mode::induced);
    knobs.cap_d = 2;
    knobs.tree_size = 4;
    knobs.frontier_levels = 3;
    knobs.window_retries = 10;
    knobs.core_min_degree = 5;
    Graph core = min_degree_core(aux.g, knobs.core_min_degree);
    SubdivisionTask task = single_edge_task(32, Mode::induced);

    Embedder emb(aux, aux.g, core, knobs, Mode::induced, Rng(11));
    auto res = emb.run(task);
    INFO(res.diag.kind << ": " << res.diag.detail);
    REQUIRE(res.ok);
    CHECK(res.invariant_violations == 0);
    CHECK(res.sigma_prime[0] >= 8);
    CHECK(res.sigma_prime[0] <= 16);
    std::vector<int> img;
    const auto& p = res.paths[0];
    for (size_t i = 0; i + 1 < p.size(); ++i) img.push_back(*aux.g.edge_id(p[i], p[i + 1]));
    CHECK(is_good(aux, img, Mode::induced).ok);
}

TEST_CASE("grow_tree trivial sizes") {
    Graph target = circulant(40, {1, 2, 3});
    AuxGraph aux = synthetic_aux(target);
    EmbedKnobs knobs = tiny_knobs(Mode::plain);
    knobs.cap_d = 2;
    knobs.dprime = 2;
    knobs.dprime_matching = 2;
    Graph core = min_degree_core(aux.g, 2);
    Embedder emb(aux, aux.g, core, knobs, Mode::plain, Rng(5));
    EmbedderTestHook::j(emb).add_vertex(7);
    EmbedderTestHook::k(emb).add_vertex(7);
    auto t = EmbedderTestHook::grow(emb, 7, 0, 1);
    REQUIRE(t.ok);
    REQUIRE(t.levels.size() == 1);
    CHECK(t.levels[0] == std::vector<int>{7});
    CHECK(t.path_tips == std::vector<int>{7});
}

TEST_CASE("critical-set bound holds when unavailability levels fire") {
    // hub adjacent to a long path; every hub edge is blocked once the path is
    // embedded, so the hub enters through an unavailability level. Built with
    // the d = 10*s*d' relation intact and padding vertices so the bound's
    // e(J) hypothesis is machine-verified.
    int path_len = 100;
    Graph target(path_len + 2);
    int hub = path_len + 1;
    for (int i = 0; i + 1 <= path_len; ++i) target.add_edge(i, i + 1);
    for (int i = 0; i <= path_len; ++i) target.add_edge(hub, i);
    target.finalize();

    // synthetic aux with s = 4 (two fresh vertices per hyperedge) + padding
    AuxGraph aux;
    int fresh = target.n + 1000;  // padding raises N without structure
    std::vector<std::vector<int>> hedges;
    Graph g(0);
    std::vector<Edge> edges;
    for (auto& [u, v] : target.edges) edges.push_back({u, v});
    int total = fresh + 2 * static_cast<int>(edges.size());
    g = Graph(total);
    for (auto& [u, v] : edges) {
        int a = fresh, b = fresh + 1;
        fresh += 2;
        std::vector<int> he{u, v, a, b};
        std::sort(he.begin(), he.end());
        hedges.push_back(he);
        g.add_edge(u, v);
        aux.arc_l1.push_back({u, a, v});
        aux.arc_l2.push_back({u, b, v});  // dummy arcs, unused here
        aux.stored_cycle.push_back({u, a, v, b});
        aux.h_of.push_back(static_cast<int>(hedges.size()) - 1);
    }
    g.colors.assign(g.edges.size(), 0);
    g.finalize();
    aux.g = std::move(g);
    aux.hyper = Hypergraph(total, 4, hedges);
    aux.ell = 6;
    aux.l1 = 2;
    aux.l2 = 4;
    aux.build_caches();

    EmbedKnobs knobs;
    knobs.dprime = 2;
    knobs.d = 10 * 4 * 2;  // 80, the plain-mode relation for s = 4
    knobs.cap_d = 2;
    knobs.dprime_matching = 2;
    knobs.audit = false;
    Graph core = min_degree_core(aux.g, 1);
    Embedder emb(aux, aux.g, core, knobs, Mode::plain, Rng(3));

    DynSubgraph j;
    j.init(&aux);
    for (int i = 0; i + 1 <= path_len; ++i) j.add_edge(*aux.g.edge_id(i, i + 1));
    auto trace = emb.critical_set(j);
    REQUIRE(trace.levels.size() >= 2);  // the hub enters via unavailability
    CHECK(trace.result.count(hub));

    // Lemma-style bound with the hypothesis verified by hand:
    // e(J) = 100 <= alpha*N/(2s) - d'/2 with alpha*N = N = 1624
    double alpha_n = aux.g.n;
    REQUIRE(static_cast<double>(j.edges().size()) <=
            alpha_n / (2.0 * aux.hyper.s) - knobs.dprime / 2.0);
    size_t x0 = trace.levels[0].size();
    double bound = static_cast<double>(x0) +
                   static_cast<double>(j.edges().size()) / knobs.dprime;
    CHECK(static_cast<double>(trace.result.size()) <= bound);
}
