// ramsey-forge: experiment runner for the host-graph construction and the
// three-phase subdivision embedding. Subcommands mirror the pipeline stages;
// every artifact is JSON and reports are reproducible from config + seed.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "rforge/json_io.hpp"
#include "rforge/oracle.hpp"
#include "rforge/pipeline.hpp"

using namespace rforge;
using nlohmann::json;

namespace {

struct CommonOpts {
    uint64_t seed = 1;
    std::string preset = "desk-small";
    double scale = 0;
    std::string mode = "";
    std::string case_kind = "";
    std::string out = "";
    int trials = 1;
    int retry = 0;
};

PresetBundle resolve_preset(const CommonOpts& o) {
    if (o.scale > 0) {
        Mode m = o.mode.empty() ? Mode::plain : parse_mode(o.mode);
        CaseKind c = o.case_kind.empty() ? CaseKind::even : parse_case(o.case_kind);
        return preset(m, c, o.scale);
    }
    PresetBundle b = preset_named(o.preset);
    if (!o.mode.empty() && parse_mode(o.mode) != b.gen.mode)
        throw CLI::ValidationError("--mode conflicts with the preset's mode");
    if (!o.case_kind.empty() && parse_case(o.case_kind) != b.gen.case_kind)
        throw CLI::ValidationError("--case conflicts with the preset's case");
    return b;
}

void write_or_print(const std::string& path, const json& j) {
    if (path.empty())
        std::cout << j.dump(2) << "\n";
    else
        io::write_file(path, j);
}

SubdivisionTask load_task(const std::string& task_file, int sigma_single,
                          const PresetBundle& b) {
    if (!task_file.empty()) return io::task_from_json(io::read_file(task_file));
    SubdivisionTask t;
    t.base = Graph(2, {{0, 1}});
    t.sigma = {sigma_single};
    t.mode = b.gen.mode;
    t.case_kind = b.gen.case_kind;
    t.max_degree_bound = b.embed.cap_d;
    t.validate();
    return t;
}

json trial_to_json(const TrialOutcome& t) {
    json j;
    j["trial"] = t.trial;
    j["produced"] = t.produced;
    j["verified"] = t.verified;
    j["failure_kind"] = t.failure_kind;
    j["failure_detail"] = t.failure_detail;
    j["aux_edges"] = t.aux_edges;
    j["Q1_check"] = t.q1_check;
    j["Q2_check"] = t.q2_check;
    j["mono_color"] = t.mono_color;
    j["mono_edges"] = t.mono_edges;
    json cert;
    cert["ok"] = t.cert.ok;
    cert["exact"] = t.cert.exact;
    cert["density"] = t.cert.density;
    cert["gamma"] = t.cert.gamma;
    cert["vertices"] = t.cert.verts.size();
    cert["note"] = t.cert.note;
    j["expander"] = cert;
    j["core_vertices"] = t.core_vertices;
    if (t.produced) {
        j["sigma_prime"] = t.sigma_prime;
        j["embed"] = io::to_json(t.embed);
    }
    return j;
}

std::string trial_csv_row(const TrialOutcome& t) {
    std::ostringstream os;
    os << t.trial << "," << (t.produced ? 1 : 0) << "," << (t.verified ? 1 : 0) << ","
       << t.aux_edges << "," << t.mono_edges << "," << t.core_vertices << ","
       << (t.produced && !t.sigma_prime.empty() ? t.sigma_prime[0] : -1) << ","
       << t.failure_kind;
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ramsey-forge: host-graph construction and subdivision embedding experiments"};
    app.require_subcommand(1);

    CommonOpts opt;
    app.add_option("--seed", opt.seed, "root seed; all stage randomness derives from it");
    app.add_option("--preset", opt.preset, "named desk preset");
    app.add_option("--scale", opt.scale, "numeric desk-scale divisor (overrides --preset)");
    app.add_option("--mode", opt.mode, "induced | plain");
    app.add_option("--case", opt.case_kind, "even | general");
    app.add_option("--out", opt.out, "output file (stdout when omitted)");
    app.add_option("--trials", opt.trials, "number of trials");
    app.add_option("--retry", opt.retry, "re-seed attempts when (P1) fails");

    auto* gen = app.add_subcommand("generate", "sample and prune the hypergraph");
    auto* sub = app.add_subcommand("substitute", "place a gadget copy on every hyperedge");
    std::string hyper_file, gadget_file;
    int gadget_order = 0;
    sub->add_option("--hypergraph", hyper_file, "hypergraph JSON")->required();
    sub->add_option("--gadget-file", gadget_file, "external gadget JSON");
    sub->add_option("--gadget-order", gadget_order, "complete-gadget order override");
    auto* col = app.add_subcommand("color", "produce a k-edge-coloring of a host graph");
    std::string host_file, strategy = "uniform-random";
    col->add_option("--host", host_file, "host JSON")->required();
    col->add_option("--strategy", strategy, "uniform-random | per-gadget-adversarial");
    auto* ext = app.add_subcommand("extract", "build the auxiliary chord graph");
    std::string ext_host, ext_coloring;
    ext->add_option("--host", ext_host, "host JSON")->required();
    ext->add_option("--coloring", ext_coloring, "coloring JSON")->required();
    auto* emb = app.add_subcommand("embed", "three-phase embedding of H^sigma' in G'");
    std::string emb_host, emb_aux, emb_task;
    int emb_sigma = 12;
    emb->add_option("--host", emb_host, "host JSON (carries the hypergraph)")->required();
    emb->add_option("--aux", emb_aux, "aux graph JSON")->required();
    emb->add_option("--task", emb_task, "task JSON (H + sigma)");
    emb->add_option("--sigma", emb_sigma, "single-edge task length when --task is omitted");
    auto* lif = app.add_subcommand("lift", "lift a sigma'-embedding to the host graph");
    std::string lif_host, lif_aux, lif_embed, lif_coloring, lif_task;
    lif->add_option("--host", lif_host)->required();
    lif->add_option("--aux", lif_aux)->required();
    lif->add_option("--coloring", lif_coloring)->required();
    lif->add_option("--embedding", lif_embed, "embed-stage output JSON")->required();
    lif->add_option("--task", lif_task);
    int lif_sigma = 12;
    lif->add_option("--sigma", lif_sigma);
    auto* ver = app.add_subcommand("verify", "oracle verification of a host embedding");
    std::string ver_host, ver_coloring, ver_embedding, ver_task;
    ver->add_option("--host", ver_host)->required();
    ver->add_option("--coloring", ver_coloring)->required();
    ver->add_option("--embedding", ver_embedding)->required();
    ver->add_option("--task", ver_task);
    int ver_sigma = 12;
    ver->add_option("--sigma", ver_sigma);
    auto* e2e = app.add_subcommand("endtoend", "full pipeline: generate through verify");
    std::string e2e_task, e2e_strategy = "uniform-random", e2e_coloring_file, e2e_csv;
    int e2e_sigma = 12;
    bool e2e_no_audit = false;
    e2e->add_option("--task", e2e_task, "task JSON");
    e2e->add_option("--sigma", e2e_sigma, "single-edge task length when --task is omitted");
    e2e->add_option("--strategy", e2e_strategy,
                    "uniform-random | per-gadget-adversarial | from-file");
    e2e->add_option("--coloring", e2e_coloring_file, "coloring JSON for from-file");
    e2e->add_option("--csv", e2e_csv, "also write a per-trial CSV summary");
    e2e->add_flag("--no-audit", e2e_no_audit, "skip (A1)-(A4) assertions for speed");
    auto* pre = app.add_subcommand("preset", "show preset parameters and Table-2 formulas");
    bool show = false;
    pre->add_flag("--show", show, "emit the full preset table");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            PresetBundle b = resolve_preset(opt);
            GenParams p = b.gen;
            p.seed = opt.seed;
            auto [hyper, rep] = generate_verified(p);
            int attempts = 0;
            while (!rep.p1_check && attempts < opt.retry) {
                ++attempts;
                p.seed = opt.seed + attempts;
                std::tie(hyper, rep) = generate_verified(p);
            }
            json j;
            j["params"] = io::to_json(p);
            j["report"] = io::to_json(rep);
            j["seed_used"] = p.seed;
            j["hypergraph"] = io::to_json(hyper);
            write_or_print(opt.out, j);
            return rep.degree_check && rep.girth_check ? 0 : 1;
        }
        if (sub->parsed()) {
            PresetBundle b = resolve_preset(opt);
            json hj = io::read_file(hyper_file);
            Hypergraph hyper = hj.contains("hypergraph")
                                   ? io::hypergraph_from_json(hj.at("hypergraph"))
                                   : io::hypergraph_from_json(hj);
            Gadget gadget =
                !gadget_file.empty()
                    ? io::gadget_from_json(io::read_file(gadget_file))
                    : make_gadget(b.k, b.gen.mode, b.gen.case_kind,
                                  gadget_order > 0 ? std::optional<int>(gadget_order)
                                                   : b.gadget_override);
            HostGraph host = substitute(hyper, gadget, opt.seed);
            json j = io::to_json(host);
            j["gadget"] = io::to_json(gadget);
            write_or_print(opt.out, j);
            return 0;
        }
        if (col->parsed()) {
            PresetBundle b = resolve_preset(opt);
            json hj = io::read_file(host_file);
            HostGraph host = io::host_from_json(hj);
            Gadget gadget = io::gadget_from_json(hj.at("gadget"));
            std::vector<int> colors;
            if (strategy == "per-gadget-adversarial")
                colors = color_adversarial(host, b.k, gadget, Rng(opt.seed).stream("color"));
            else
                colors = color_uniform(host, b.k, Rng(opt.seed).stream("color"));
            write_or_print(opt.out, json{{"k", b.k}, {"colors", colors}});
            return 0;
        }
        if (ext->parsed()) {
            PresetBundle b = resolve_preset(opt);
            json hj = io::read_file(ext_host);
            HostGraph host = io::host_from_json(hj);
            Gadget gadget = io::gadget_from_json(hj.at("gadget"));
            auto colors = io::read_file(ext_coloring).at("colors").get<std::vector<int>>();
            auto res = extract_aux(host, colors, b.gen.mode, b.gen.case_kind, gadget);
            if (!res.ok) {
                json j{{"ok", false}, {"failed_hyperedges", res.failed_hyperedges}};
                write_or_print(opt.out, j);
                return 1;
            }
            json j = io::to_json(res.aux);
            j["ok"] = true;
            j["modal_ell"] = res.modal_ell;
            write_or_print(opt.out, j);
            return 0;
        }
        if (emb->parsed()) {
            PresetBundle b = resolve_preset(opt);
            HostGraph host = io::host_from_json(io::read_file(emb_host));
            AuxGraph aux = io::aux_from_json(io::read_file(emb_aux), host.base);
            SubdivisionTask task = load_task(emb_task, emb_sigma, b);
            auto [g_red, color] = mono_max_subgraph(aux);
            auto [gprime, cert] =
                extract_expander(g_red, b.embed.c1, b.embed.c2, b.gen.alpha, b.gen.degree_cap);
            if (!cert.ok) {
                write_or_print(opt.out, json{{"ok", false},
                                             {"diagnostic", {{"kind", "hypothesis"},
                                                             {"detail", cert.note}}}});
                return 1;
            }
            Graph core = min_degree_core(gprime, b.embed.core_min_degree);
            EmbedKnobs knobs = b.embed;
            knobs.alpha_n = b.gen.alpha * aux.g.n;
            knobs.audit = true;
            Embedder embedder(aux, gprime, core, knobs, b.gen.mode,
                              Rng(opt.seed).stream("embed"));
            auto res = embedder.run(task);
            json j = io::to_json(res);
            j["mono_color"] = color;
            write_or_print(opt.out, j);
            return res.ok ? 0 : 1;
        }
        if (lif->parsed()) {
            PresetBundle b = resolve_preset(opt);
            HostGraph host = io::host_from_json(io::read_file(lif_host));
            AuxGraph aux = io::aux_from_json(io::read_file(lif_aux), host.base);
            auto colors = io::read_file(lif_coloring).at("colors").get<std::vector<int>>();
            SubdivisionTask task = load_task(lif_task, lif_sigma, b);
            json ej = io::read_file(lif_embed);
            auto branch = ej.at("branch_map").get<std::vector<int>>();
            auto paths = ej.at("paths").get<std::vector<std::vector<int>>>();
            auto lift = lift_embedding(aux, host, colors, task, branch, paths);
            if (!lift.ok) {
                write_or_print(opt.out, json{{"ok", false}, {"error", lift.error}});
                return 1;
            }
            json j = io::embedding_to_json(lift.embedding);
            j["ok"] = true;
            j["verdict"] = lift.verdict.notes;
            write_or_print(opt.out, j);
            return 0;
        }
        if (ver->parsed()) {
            PresetBundle b = resolve_preset(opt);
            HostGraph host = io::host_from_json(io::read_file(ver_host));
            auto colors = io::read_file(ver_coloring).at("colors").get<std::vector<int>>();
            SubdivisionTask task = load_task(ver_task, ver_sigma, b);
            auto embedding = io::embedding_from_json(io::read_file(ver_embedding));
            auto verdict =
                oracle::verify_subdivision_embedding(host.graph, colors, embedding.vertex_map,
                                                     task);
            json j{{"ok", verdict.ok}, {"notes", verdict.notes}, {"witness", verdict.witness}};
            write_or_print(opt.out, j);
            return verdict.ok ? 0 : 1;
        }
        if (e2e->parsed()) {
            ExperimentConfig cfg;
            cfg.preset = resolve_preset(opt);
            cfg.task = load_task(e2e_task, e2e_sigma, cfg.preset);
            cfg.trials = opt.trials;
            cfg.seed = opt.seed;
            cfg.strategy = parse_strategy(e2e_strategy);
            cfg.audit = !e2e_no_audit;
            if (cfg.strategy == ColoringStrategy::from_file)
                cfg.fixed_coloring =
                    io::read_file(e2e_coloring_file).at("colors").get<std::vector<int>>();
            auto rep = run_experiment(cfg);
            json j;
            j["config"] = json{{"preset", io::to_json(cfg.preset)},
                               {"task", io::to_json(cfg.task)},
                               {"trials", cfg.trials},
                               {"seed", cfg.seed},
                               {"strategy", to_string(cfg.strategy)}};
            j["generation"] = io::to_json(rep.gen_report);
            j["host_edges"] = rep.host_edges;
            j["uniformity_adjusted"] = rep.uniformity_adjusted;
            j["uniformity_used"] = rep.uniformity_used;
            json trials = json::array();
            for (const auto& t : rep.trials) trials.push_back(trial_to_json(t));
            j["trials"] = trials;
            j["produced"] = rep.produced;
            j["verified"] = rep.verified;
            write_or_print(opt.out, j);
            if (!e2e_csv.empty()) {
                std::ofstream csv(e2e_csv);
                csv << "trial,produced,verified,aux_edges,mono_edges,core_vertices,sigma_prime,"
                       "failure\n";
                for (const auto& t : rep.trials) csv << trial_csv_row(t) << "\n";
            }
            // soundness gate: every produced embedding must verify
            return rep.produced == rep.verified ? 0 : 2;
        }
        if (pre->parsed()) {
            json j = json::array();
            for (const auto& name : preset_names()) j.push_back(io::to_json(preset_named(name)));
            write_or_print(opt.out, j);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
