#include "mrse/cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "mrse/entropy.hpp"
#include "mrse/graph.hpp"
#include "mrse/io.hpp"
#include "mrse/metrics.hpp"
#include "mrse/minimize.hpp"
#include "mrse/surfing.hpp"
#include "mrse/synth.hpp"

namespace mrse::cli {

namespace {

constexpr const char *kVersion = "mrse-kit v0.1";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_text(const std::string &path, const std::string &content) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot open file for writing: " + path);
    out << content;
    if (!out)
        throw ParseError("write failed: " + path);
}

std::size_t default_threads() {
    if (const char *env = std::getenv("MRSE_THREADS")) {
        const long v = std::atol(env);
        if (v >= 1)
            return static_cast<std::size_t>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

Objective parse_objective(const std::string &name) {
    if (name == "se")
        return Objective::SE;
    if (name == "rsse")
        return Objective::RSSE;
    if (name == "mrse")
        return Objective::MrSE;
    throw ParseError("unknown objective '" + name + "'");
}

const char *objective_name(Objective o) {
    switch (o) {
    case Objective::SE:
        return "se";
    case Objective::RSSE:
        return "rsse";
    case Objective::MrSE:
        return "mrse";
    }
    return "?";
}

struct SurfFlags {
    double teleport = 0.85;
    double tolerance = 1e-10;
    std::size_t max_iterations = 10000;

    void attach(CLI::App *cmd) {
        cmd->add_option("--teleport", teleport, "follow-the-graph probability c in (0,1]");
        cmd->add_option("--tolerance", tolerance, "L1 convergence tolerance");
        cmd->add_option("--max-iters", max_iterations, "solver iteration cap");
    }
    SurfConfig config() const { return {teleport, tolerance, max_iterations}; }
};

struct GraphFlags {
    std::string path;
    bool undirected = false;
    std::string reduce_mode = "presence";

    void attach(CLI::App *cmd) {
        cmd->add_option("--graph", path, "edge list: src dst rel [weight]")->required();
        cmd->add_flag("--undirected", undirected, "mirror every arc on load");
        cmd->add_option("--reduce-mode", reduce_mode,
                        "relation reduction for single-relational objectives")
            ->check(CLI::IsMember({"presence", "weight-sum"}));
    }
    MultiRelationalGraph load() const { return load_edge_list(path, {.undirected = undirected}); }
    ReduceMode reduction() const {
        return reduce_mode == "presence" ? ReduceMode::Presence : ReduceMode::WeightSum;
    }
};

// ---------------------------------------------------------------------------
// generate

struct GenerateParams {
    std::size_t node_count = 100;
    std::size_t attach_m = 3;
    std::size_t relations = 1;
    double sparsity = -1.0;
    std::uint64_t seed = 0;
    bool directed = false;
    bool planted = false;
    std::vector<std::size_t> sizes;
    double intra = 0.3;
    double inter = 0.02;
    std::string out;
    std::string labels_out;
};

MultiRelationalGraph generate_ba_stack(std::size_t n, std::size_t m, std::size_t relations,
                                       double sparsity, std::uint64_t seed, bool directed) {
    std::vector<SingleRelationalGraph> layers;
    layers.reserve(relations);
    for (std::size_t r = 0; r < relations; ++r) {
        SynthConfig cfg;
        cfg.node_count = n;
        cfg.attach_m = m;
        cfg.seed = substream(seed, {0x6261u, r}); // independent per relation
        cfg.directed = directed;
        auto layer = generate_ba(cfg);
        if (sparsity >= 0.0)
            layer = dropout_to_sparsity(layer, sparsity, substream(seed, {0x64726fu, r}));
        layers.push_back(std::move(layer));
    }
    return stack_relations(layers);
}

int cmd_generate(const GenerateParams &p) {
    if (p.planted) {
        if (p.sizes.empty())
            throw ParseError("planted mode requires --sizes");
        const auto [graph, labels] = planted_partition(p.sizes, p.intra, p.inter, p.relations, p.seed);
        write_edge_list(graph, p.out);
        if (!p.labels_out.empty())
            write_labels(labels, graph.node_labels(), p.labels_out);
        std::cout << "wrote " << graph.node_count() << " nodes, " << graph.arcs().size()
                  << " arcs, " << p.relations << " relations to " << p.out << "\n";
        return 0;
    }
    const auto graph = generate_ba_stack(p.node_count, p.attach_m, p.relations, p.sparsity, p.seed,
                                         p.directed);
    write_edge_list(graph, p.out);
    std::cout << "wrote " << graph.node_count() << " nodes, " << graph.arcs().size() << " arcs, "
              << p.relations << " relations to " << p.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// entropy

struct EntropyParams {
    GraphFlags graph;
    SurfFlags surf;
    std::string objective = "all";
    std::string partition_path;
    std::string out;
    std::string stationary_out;
    std::string relation_stationary_out;
};

int cmd_entropy(const EntropyParams &p) {
    const auto multi = p.graph.load();
    multi.validate_for_surfing();
    const std::size_t n = multi.node_count();
    const SurfConfig surf = p.surf.config();

    std::vector<Objective> objectives;
    if (p.objective == "all")
        objectives = {Objective::SE, Objective::RSSE, Objective::MrSE};
    else
        objectives = {parse_objective(p.objective)};

    bool have_tree = false;
    EncodingTree tree = height1_tree(n);
    if (!p.partition_path.empty()) {
        tree = tree_from_partition(n, load_partition(p.partition_path, multi.node_labels()));
        have_tree = true;
    }

    std::ostringstream csv;
    csv << "# " << kVersion << " entropy graph=" << p.graph.path << " objective=" << p.objective
        << " teleport=" << fmt(p.surf.teleport) << "\n";
    csv << "metric,dimension,value,iterations\n";
    for (Objective obj : objectives) {
        switch (obj) {
        case Objective::SE: {
            const auto reduced = reduce_to_single(multi, p.graph.reduction());
            csv << "se,1," << fmt(se(reduced, height1_tree(n))) << ",0\n";
            if (have_tree)
                csv << "se,2," << fmt(se(reduced, tree)) << ",0\n";
            break;
        }
        case Objective::RSSE: {
            const auto reduced = reduce_to_single(multi, p.graph.reduction());
            const auto tm = build_transition(reduced, surf);
            const auto x = power_method(tm, surf);
            csv << "rsse,1," << fmt(rsse_1d(x)) << "," << x.iterations << "\n";
            if (have_tree)
                csv << "rsse,2," << fmt(rsse(reduced, tree, x, tm)) << "," << x.iterations << "\n";
            if (!p.stationary_out.empty() && p.objective == "rsse") {
                std::ostringstream sx;
                sx << "node,probability\n";
                for (std::size_t v = 0; v < n; ++v)
                    sx << multi.node_labels()[v] << "," << fmt(x.values[v]) << "\n";
                write_text(p.stationary_out, sx.str());
            }
            break;
        }
        case Objective::MrSE: {
            const auto mt = build_multirel_transitions(multi, surf);
            const auto mr = multirank(mt, surf);
            csv << "mrse,1," << fmt(mrse_1d(mr)) << "," << mr.iterations << "\n";
            if (have_tree)
                csv << "mrse,2," << fmt(mrse(multi, tree, mr, mt)) << "," << mr.iterations << "\n";
            if (!p.stationary_out.empty() && p.objective != "rsse") {
                std::ostringstream sx;
                sx << "node,probability\n";
                for (std::size_t v = 0; v < n; ++v)
                    sx << multi.node_labels()[v] << "," << fmt(mr.node_dist[v]) << "\n";
                write_text(p.stationary_out, sx.str());
            }
            if (!p.relation_stationary_out.empty()) {
                std::ostringstream sy;
                sy << "relation,probability\n";
                for (std::size_t r = 0; r < multi.relation_count(); ++r)
                    sy << multi.relation_names()[r] << "," << fmt(mr.relation_dist[r]) << "\n";
                write_text(p.relation_stationary_out, sy.str());
            }
            break;
        }
        }
    }
    std::cout << csv.str();
    if (!p.out.empty())
        write_text(p.out, csv.str());
    return 0;
}

// ---------------------------------------------------------------------------
// minimize

struct MinimizeParams {
    GraphFlags graph;
    SurfFlags surf;
    std::string objective = "mrse";
    std::string strategy = "vanilla";
    std::size_t subgraph_size = 100;
    std::string delta = "exact";
    std::string out;
    std::string trace_path;
};

int cmd_minimize(const MinimizeParams &p) {
    const auto multi = p.graph.load();
    multi.validate_for_surfing();

    MinimizeConfig cfg;
    cfg.objective = parse_objective(p.objective);
    cfg.strategy = p.strategy == "hierarchical" ? Strategy::Hierarchical : Strategy::Vanilla;
    cfg.subgraph_size = p.subgraph_size;
    cfg.delta_mode = p.delta == "paper" ? DeltaMode::Paper : DeltaMode::Exact;
    cfg.surf = p.surf.config();

    const bool needs_single = cfg.objective != Objective::MrSE;
    SingleRelationalGraph reduced;
    if (needs_single)
        reduced = reduce_to_single(multi, p.graph.reduction());

    if (cfg.strategy == Strategy::Hierarchical) {
        const HierarchicalResult res = needs_single ? hierarchical_minimize(reduced, cfg)
                                                    : hierarchical_minimize(multi, cfg);
        const auto partition = partition_of_height1(res.tree);
        write_partition(partition, multi.node_labels(), p.out);
        if (!p.trace_path.empty()) {
            std::ostringstream csv;
            csv << "# " << kVersion << " minimize strategy=hierarchical objective=" << p.objective
                << "\n";
            csv << "pass,subgraph_size,groups,merges,doubled\n";
            for (std::size_t i = 0; i < res.passes.size(); ++i) {
                const auto &pass = res.passes[i];
                csv << i + 1 << "," << pass.subgraph_size << "," << pass.group_count << ","
                    << pass.merges << "," << (pass.doubled ? 1 : 0) << "\n";
            }
            write_text(p.trace_path, csv.str());
        }
        std::cout << "communities: " << partition.community_count() << " (hierarchical, "
                  << res.passes.size() << " passes)\n";
        return 0;
    }

    const MinimizeResult res =
        needs_single ? minimize_2d(reduced, cfg) : minimize_2d(multi, cfg);
    const auto partition = partition_of_height1(res.tree);
    write_partition(partition, multi.node_labels(), p.out);
    if (!p.trace_path.empty()) {
        std::ostringstream csv;
        csv << "# " << kVersion << " minimize strategy=vanilla objective=" << p.objective
            << " delta=" << p.delta << "\n";
        csv << "step,cluster_a,cluster_b,delta,objective\n";
        for (const auto &step : res.trace)
            csv << step.step << "," << step.cluster_a << "," << step.cluster_b << ","
                << fmt(step.delta) << "," << fmt(step.objective) << "\n";
        write_text(p.trace_path, csv.str());
    }
    std::cout << "objective: " << fmt(res.initial_objective) << " -> " << fmt(res.final_objective)
              << " in " << res.trace.size() << " merges; communities: "
              << partition.community_count() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// reduce

struct ReduceParams {
    GraphFlags graph;
    std::string mode = "presence";
    std::string out;
};

int cmd_reduce(const ReduceParams &p) {
    const auto multi = p.graph.load();
    const auto reduced =
        reduce_to_single(multi, p.mode == "presence" ? ReduceMode::Presence : ReduceMode::WeightSum);
    write_edge_list(as_multi(reduced, "combined"), p.out);
    std::cout << "wrote " << reduced.arcs().size() << " arcs to " << p.out << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalParams {
    std::string pred_path;
    std::string truth_path;
    std::string out;
};

int cmd_eval(const EvalParams &p) {
    const auto pred_rows = load_assignment(p.pred_path);
    const auto truth_rows = load_assignment(p.truth_path);

    // the truth file fixes the node index space
    std::vector<std::string> node_labels = truth_rows.nodes;
    GroundTruthLabels truth = load_labels(p.truth_path, node_labels);
    Partition pred = load_partition(p.pred_path, node_labels); // throws on node mismatch
    if (pred_rows.nodes.size() != truth_rows.nodes.size())
        throw ParseError("prediction and truth cover different node sets");

    std::ostringstream csv;
    csv << "# " << kVersion << " eval pred=" << p.pred_path << " truth=" << p.truth_path << "\n";
    csv << "metric,value\n";
    csv << "nmi," << fmt(nmi(pred, truth)) << "\n";
    csv << "ari," << fmt(ari(pred, truth)) << "\n";
    csv << "acc," << fmt(acc(pred, truth)) << "\n";
    std::cout << csv.str();
    if (!p.out.empty())
        write_text(p.out, csv.str());
    return 0;
}

// ---------------------------------------------------------------------------
// experiment

struct ExperimentParams {
    std::string axis = "size";
    std::vector<double> grid;
    std::size_t seeds = 1;
    std::vector<std::string> objectives{"se", "rsse", "mrse"};
    std::size_t node_count = 300;
    std::size_t attach_m = 3;
    std::size_t relations = 3;
    double sparsity = -1.0;
    std::uint64_t seed = 0;
    std::size_t threads = 0;
    std::string out;
    bool no_wall_time = false;
    SurfFlags surf;
    std::string reduce_mode = "presence";
};

struct ExperimentRow {
    double axis_value = 0.0;
    std::uint64_t seed_index = 0;
    Objective objective = Objective::SE;
    double one_d = 0.0;
    double min_two_d = 0.0;
    double fraction = 0.0;
    long long wall_ms = 0;
    std::string status = "ok";
};

int cmd_experiment(const ExperimentParams &p) {
    if (p.grid.empty())
        throw ParseError("experiment needs a non-empty --grid");
    if (p.seeds < 1)
        throw ParseError("experiment needs at least one seed");
    std::vector<Objective> objectives;
    for (const auto &name : p.objectives)
        objectives.push_back(parse_objective(name));
    // fixed report order regardless of how the flags were spelled
    std::sort(objectives.begin(), objectives.end());
    objectives.erase(std::unique(objectives.begin(), objectives.end()), objectives.end());

    struct Point {
        std::size_t axis_index;
        std::uint64_t seed_index;
    };
    std::vector<Point> points;
    for (std::size_t a = 0; a < p.grid.size(); ++a)
        for (std::uint64_t s = 0; s < p.seeds; ++s)
            points.push_back({a, s});

    std::vector<std::vector<ExperimentRow>> results(points.size());
    std::atomic<std::size_t> next{0};

    auto run_point = [&](std::size_t index) {
        const auto [axis_index, seed_index] = points[index];
        const double axis_value = p.grid[axis_index];

        std::size_t n = p.node_count;
        std::size_t relations = p.relations;
        double sparsity = p.sparsity;
        if (p.axis == "size")
            n = static_cast<std::size_t>(axis_value);
        else if (p.axis == "relations")
            relations = static_cast<std::size_t>(axis_value);
        else
            sparsity = axis_value;

        auto &rows = results[index];
        for (Objective obj : objectives) {
            ExperimentRow row;
            row.axis_value = axis_value;
            row.seed_index = seed_index;
            row.objective = obj;
            const auto started = std::chrono::steady_clock::now();
            try {
                const auto multi = generate_ba_stack(n, p.attach_m, relations, sparsity,
                                                     substream(p.seed, {axis_index, seed_index}),
                                                     /*directed=*/false);
                MinimizeConfig cfg;
                cfg.objective = obj;
                cfg.surf = p.surf.config();
                if (obj == Objective::MrSE) {
                    const auto mt = build_multirel_transitions(multi, cfg.surf);
                    row.one_d = mrse_1d(multirank(mt, cfg.surf));
                    row.min_two_d = minimize_2d(multi, cfg).final_objective;
                } else {
                    const auto reduced = reduce_to_single(
                        multi, p.reduce_mode == "presence" ? ReduceMode::Presence : ReduceMode::WeightSum);
                    if (obj == Objective::SE)
                        row.one_d = se(reduced, height1_tree(reduced.node_count()));
                    else
                        row.one_d = rsse_1d(power_method(build_transition(reduced, cfg.surf), cfg.surf));
                    row.min_two_d = minimize_2d(reduced, cfg).final_objective;
                }
                row.fraction = decoded_fraction(row.one_d, row.min_two_d);
            } catch (const std::exception &e) {
                row.status = e.what();
            }
            row.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - started)
                              .count();
            if (p.no_wall_time)
                row.wall_ms = 0;
            rows.push_back(std::move(row));
        }
    };

    const std::size_t workers = std::min(points.size(), p.threads == 0 ? default_threads() : p.threads);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t index = next.fetch_add(1);
                if (index >= points.size())
                    return;
                run_point(index);
            }
        });
    for (auto &t : pool)
        t.join();

    std::ostringstream csv;
    csv << "# " << kVersion << " experiment axis=" << p.axis << " seeds=" << p.seeds
        << " n=" << p.node_count << " m=" << p.attach_m << " relations=" << p.relations
        << " seed=" << p.seed << "\n";
    csv << "axis,value,seed,objective,entropy_1d,entropy_2d_min,decoded_fraction,wall_ms,status\n";
    for (std::size_t index = 0; index < points.size(); ++index) {
        for (const auto &row : results[index]) {
            csv << p.axis << "," << fmt(row.axis_value) << "," << row.seed_index << ","
                << objective_name(row.objective) << ",";
            if (row.status == "ok")
                csv << fmt(row.one_d) << "," << fmt(row.min_two_d) << "," << fmt(row.fraction);
            else
                csv << ",,";
            csv << "," << row.wall_ms << "," << row.status << "\n";
        }
    }
    std::cout << csv.str();
    if (!p.out.empty())
        write_text(p.out, csv.str());
    return 0;
}

} // namespace

int run(int argc, const char *const *argv) {
    CLI::App app{"structural entropy toolkit for single- and multi-relational graphs"};
    app.require_subcommand(1);

    GenerateParams gen;
    auto *generate = app.add_subcommand("generate", "write synthetic graphs");
    bool ba_mode = false;
    generate->add_flag("--ba", ba_mode, "preferential-attachment mode (the default)");
    generate->add_flag("--planted", gen.planted, "planted-community mode")->excludes("--ba");
    generate->add_option("-n,--nodes", gen.node_count, "node count");
    generate->add_option("-m,--attach", gen.attach_m, "edges per arriving node");
    generate->add_option("--relations", gen.relations, "independent relation layers");
    generate->add_option("--sparsity", gen.sparsity, "drop edges until this sparsity is reached");
    generate->add_option("--seed", gen.seed, "rng seed");
    generate->add_flag("--directed", gen.directed, "store arcs from the arriving node only");
    generate->add_option("--sizes", gen.sizes, "planted community sizes")->delimiter(',');
    generate->add_option("--intra", gen.intra, "planted intra-community edge probability");
    generate->add_option("--inter", gen.inter, "planted inter-community edge probability");
    generate->add_option("--out", gen.out, "output edge list")->required();
    generate->add_option("--labels-out", gen.labels_out, "ground-truth labels output (planted mode)");

    EntropyParams ent;
    auto *entropy = app.add_subcommand("entropy", "report 1D and 2D entropies");
    ent.graph.attach(entropy);
    ent.surf.attach(entropy);
    entropy->add_option("--objective", ent.objective, "se, rsse, mrse, or all")
        ->check(CLI::IsMember({"se", "rsse", "mrse", "all"}));
    entropy->add_option("--partition", ent.partition_path, "evaluate this height-2 partition too");
    entropy->add_option("--out", ent.out, "write the report CSV here as well");
    entropy->add_option("--stationary-out", ent.stationary_out, "write node,probability CSV");
    entropy->add_option("--relation-stationary-out", ent.relation_stationary_out,
                        "write relation,probability CSV");

    MinimizeParams min;
    auto *minimize = app.add_subcommand("minimize", "greedy two-level entropy minimization");
    min.graph.attach(minimize);
    min.surf.attach(minimize);
    minimize->add_option("--objective", min.objective, "se, rsse, or mrse")
        ->check(CLI::IsMember({"se", "rsse", "mrse"}));
    minimize->add_option("--strategy", min.strategy, "vanilla or hierarchical")
        ->check(CLI::IsMember({"vanilla", "hierarchical"}));
    minimize->add_option("-n,--subgraph-size", min.subgraph_size, "hierarchical group size");
    minimize->add_option("--delta", min.delta, "merge delta: exact or paper")
        ->check(CLI::IsMember({"exact", "paper"}));
    minimize->add_option("--out", min.out, "output partition file")->required();
    minimize->add_option("--trace", min.trace_path, "merge trace CSV");

    ReduceParams red;
    auto *reduce = app.add_subcommand("reduce", "collapse relations into a single-relational graph");
    red.graph.attach(reduce);
    reduce->add_option("--mode", red.mode, "presence or weight-sum")
        ->check(CLI::IsMember({"presence", "weight-sum"}));
    reduce->add_option("--out", red.out, "output edge list")->required();

    EvalParams ev;
    auto *eval = app.add_subcommand("eval", "score a partition against ground-truth labels");
    eval->add_option("--pred", ev.pred_path, "partition file: node community")->required();
    eval->add_option("--truth", ev.truth_path, "labels file: node class")->required();
    eval->add_option("--out", ev.out, "write the metrics CSV here as well");

    ExperimentParams exp;
    auto *experiment = app.add_subcommand("experiment", "sweep decoded fractions over synthetic graphs");
    experiment->add_option("--axis", exp.axis, "size, relations, or sparsity")
        ->check(CLI::IsMember({"size", "relations", "sparsity"}));
    experiment->add_option("--grid", exp.grid, "axis values")->delimiter(',')->required();
    experiment->add_option("--seeds", exp.seeds, "seeds per grid point");
    experiment->add_option("--objectives", exp.objectives, "subset of se,rsse,mrse")->delimiter(',');
    experiment->add_option("-n,--nodes", exp.node_count, "node count (when not the axis)");
    experiment->add_option("-m,--attach", exp.attach_m, "edges per arriving node");
    experiment->add_option("--relations", exp.relations, "relation count (when not the axis)");
    experiment->add_option("--sparsity", exp.sparsity, "target sparsity (when not the axis)");
    experiment->add_option("--seed", exp.seed, "base seed; sub-streams derive from it");
    experiment->add_option("--threads", exp.threads, "worker threads (default: MRSE_THREADS or cores)");
    experiment->add_option("--out", exp.out, "output CSV");
    experiment->add_flag("--no-wall-time", exp.no_wall_time, "zero the wall_ms column for diffable output");
    exp.surf.attach(experiment);
    experiment->add_option("--reduce-mode", exp.reduce_mode, "reduction for se/rsse rows")
        ->check(CLI::IsMember({"presence", "weight-sum"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (generate->parsed())
            return cmd_generate(gen);
        if (entropy->parsed())
            return cmd_entropy(ent);
        if (minimize->parsed())
            return cmd_minimize(min);
        if (reduce->parsed())
            return cmd_reduce(red);
        if (eval->parsed())
            return cmd_eval(ev);
        if (experiment->parsed())
            return cmd_experiment(exp);
    } catch (const ConvergenceError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

int run(const std::vector<std::string> &args) {
    std::vector<const char *> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("mrse");
    for (const auto &a : args)
        argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

} // namespace mrse::cli
