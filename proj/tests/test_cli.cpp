#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "mrse/cli.hpp"
#include "mrse/entropy.hpp"
#include "mrse/io.hpp"
#include "mrse/minimize.hpp"
#include "mrse/surfing.hpp"

using namespace mrse;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("mrse_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string &name) const { return (path / name).string(); }
};

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void spit(const std::string &path, const std::string &content) {
    std::ofstream out(path);
    out << content;
}

// CSV body with `#` comment lines stripped
std::string body(const std::string &content) {
    std::istringstream in(content);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
        if (line.empty() || line[0] != '#')
            out << line << "\n";
    return out.str();
}

} // namespace

TEST_CASE("generate is deterministic and loadable") {
    TempDir dir;
    const auto out1 = dir.file("a.tsv");
    const auto out2 = dir.file("b.tsv");
    REQUIRE(cli::run({"generate", "--ba", "-n", "50", "-m", "3", "--relations", "2", "--seed", "7",
                      "--out", out1}) == 0);
    REQUIRE(cli::run({"generate", "--ba", "-n", "50", "-m", "3", "--relations", "2", "--seed", "7",
                      "--out", out2}) == 0);
    CHECK(slurp(out1) == slurp(out2));
    const auto g = load_edge_list(out1, {.undirected = true});
    CHECK(g.node_count() == 50);
    CHECK(g.relation_count() == 2);
}

TEST_CASE("generate planted emits a labels file") {
    TempDir dir;
    const auto out = dir.file("planted.tsv");
    const auto labels = dir.file("labels.tsv");
    REQUIRE(cli::run({"generate", "--planted", "--sizes", "10,10", "--intra", "0.8", "--inter", "0.05",
                      "--relations", "2", "--seed", "3", "--out", out, "--labels-out", labels}) == 0);
    const auto g = load_edge_list(out, {.undirected = true});
    CHECK(g.node_count() == 20);
    const auto truth = load_labels(labels, g.node_labels());
    CHECK(truth.class_count == 2);
}

TEST_CASE("entropy command matches the library") {
    TempDir dir;
    const auto graph_path = dir.file("g.tsv");
    REQUIRE(cli::run({"generate", "--ba", "-n", "40", "-m", "3", "--seed", "5", "--out", graph_path}) == 0);
    const auto report = dir.file("report.csv");
    REQUIRE(cli::run({"entropy", "--graph", graph_path, "--undirected", "--objective", "se", "--out",
                      report}) == 0);
    const auto content = slurp(report);
    const auto g = reduce_to_single(load_edge_list(graph_path, {.undirected = true}));
    std::ostringstream expected;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", se(g, height1_tree(40)));
    expected << "metric,dimension,value,iterations\nse,1," << buf << ",0\n";
    CHECK(body(content) == expected.str());
}

TEST_CASE("entropy with a partition file matches the library call") {
    TempDir dir;
    const auto graph_path = dir.file("g.tsv");
    REQUIRE(cli::run({"generate", "--ba", "-n", "30", "-m", "2", "--relations", "2", "--seed", "9",
                      "--out", graph_path}) == 0);
    const auto g = load_edge_list(graph_path, {.undirected = true});

    Partition p;
    p.communities.resize(3);
    for (NodeIndex v = 0; v < 30; ++v)
        p.communities[v % 3].push_back(v);
    const auto part_path = dir.file("part.tsv");
    write_partition(p, g.node_labels(), part_path);

    const auto report = dir.file("report.csv");
    REQUIRE(cli::run({"entropy", "--graph", graph_path, "--undirected", "--objective", "mrse",
                      "--partition", part_path, "--out", report}) == 0);

    const SurfConfig surf;
    const auto mt = build_multirel_transitions(g, surf);
    const auto mr = multirank(mt, surf);
    const auto tree = tree_from_partition(30, p.canonicalized());
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", mrse::mrse(g, tree, mr, mt));
    CHECK(slurp(report).find(std::string("mrse,2,") + buf) != std::string::npos);
}

TEST_CASE("minimize writes a partition that scores perfectly on planted data") {
    TempDir dir;
    const auto graph_path = dir.file("g.tsv");
    const auto labels_path = dir.file("labels.tsv");
    REQUIRE(cli::run({"generate", "--planted", "--sizes", "15,15,15", "--intra", "0.7", "--inter",
                      "0.02", "--relations", "2", "--seed", "21", "--out", graph_path, "--labels-out",
                      labels_path}) == 0);
    const auto part_path = dir.file("part.tsv");
    const auto trace_path = dir.file("trace.csv");
    REQUIRE(cli::run({"minimize", "--graph", graph_path, "--undirected", "--objective", "mrse",
                      "--out", part_path, "--trace", trace_path}) == 0);

    const auto report = dir.file("metrics.csv");
    REQUIRE(cli::run({"eval", "--pred", part_path, "--truth", labels_path, "--out", report}) == 0);
    const auto content = slurp(report);
    CHECK(content.find("nmi,1\n") != std::string::npos);
    CHECK(content.find("ari,1\n") != std::string::npos);
    CHECK(content.find("acc,1\n") != std::string::npos);

    // the trace is well-formed: header plus one row per merge
    const auto trace = body(slurp(trace_path));
    CHECK(trace.rfind("step,cluster_a,cluster_b,delta,objective\n", 0) == 0);
    CHECK(std::count(trace.begin(), trace.end(), '\n') > 1);
}

TEST_CASE("eval is invariant under community id shuffling") {
    TempDir dir;
    const auto truth = dir.file("truth.tsv");
    spit(truth, "a\tx\nb\tx\nc\ty\nd\ty\n");
    const auto pred1 = dir.file("pred1.tsv");
    spit(pred1, "a\t0\nb\t0\nc\t1\nd\t1\n");
    const auto pred2 = dir.file("pred2.tsv");
    spit(pred2, "a\t9\nb\t9\nc\t4\nd\t4\n");
    const auto out1 = dir.file("m1.csv");
    const auto out2 = dir.file("m2.csv");
    REQUIRE(cli::run({"eval", "--pred", pred1, "--truth", truth, "--out", out1}) == 0);
    REQUIRE(cli::run({"eval", "--pred", pred2, "--truth", truth, "--out", out2}) == 0);
    CHECK(body(slurp(out1)) == body(slurp(out2)));
}

TEST_CASE("reduce emits the presence-mode union") {
    TempDir dir;
    const auto graph_path = dir.file("g.tsv");
    spit(graph_path, "a\tb\tR1\t1\na\tb\tR2\t1\nb\tc\tR2\t3\n");
    const auto out = dir.file("reduced.tsv");
    REQUIRE(cli::run({"reduce", "--graph", graph_path, "--mode", "presence", "--out", out}) == 0);
    const auto g = load_edge_list(out);
    REQUIRE(g.relation_count() == 1);
    REQUIRE(g.arcs().size() == 2);
    CHECK(g.arcs()[0].weight == 1.0);
    CHECK(g.arcs()[1].weight == 1.0);
}

TEST_CASE("experiment bodies are byte-identical across runs") {
    TempDir dir;
    const auto out1 = dir.file("e1.csv");
    const auto out2 = dir.file("e2.csv");
    const std::vector<std::string> args{"experiment", "--axis",    "size",        "--grid",  "30,40",
                                        "--seeds",    "2",         "--objectives", "se,mrse", "-m",
                                        "3",          "--relations", "2",          "--seed",  "13",
                                        "--no-wall-time", "--threads", "4"};
    auto with_out = [&](const std::string &out) {
        auto a = args;
        a.push_back("--out");
        a.push_back(out);
        return a;
    };
    REQUIRE(cli::run(with_out(out1)) == 0);
    REQUIRE(cli::run(with_out(out2)) == 0);
    CHECK(slurp(out1) == slurp(out2));

    // rows are ordered by (axis value, seed, objective) and report ok status
    std::istringstream in(body(slurp(out1)));
    std::string line;
    std::getline(in, line);
    CHECK(line == "axis,value,seed,objective,entropy_1d,entropy_2d_min,decoded_fraction,wall_ms,status");
    std::vector<std::string> rows;
    while (std::getline(in, line))
        if (!line.empty())
            rows.push_back(line);
    REQUIRE(rows.size() == 8); // 2 grid points x 2 seeds x 2 objectives
    CHECK(rows[0].rfind("size,30,0,se", 0) == 0);
    CHECK(rows[1].rfind("size,30,0,mrse", 0) == 0);
    CHECK(rows[2].rfind("size,30,1,se", 0) == 0);
    CHECK(rows[7].rfind("size,40,1,mrse", 0) == 0);
    for (const auto &row : rows)
        CHECK(row.substr(row.size() - 3) == ",ok");
}

TEST_CASE("entropy on a complete graph reports the closed-form value") {
    TempDir dir;
    const auto graph_path = dir.file("k4.tsv");
    spit(graph_path, "a\tb\tR0\na\tc\tR0\na\td\tR0\nb\tc\tR0\nb\td\tR0\nc\td\tR0\n");
    const auto report = dir.file("report.csv");
    REQUIRE(cli::run({"entropy", "--graph", graph_path, "--undirected", "--objective", "se", "--out",
                      report}) == 0);
    CHECK(slurp(report).find("se,1,2,0\n") != std::string::npos);
}

TEST_CASE("mrse on a one-relation file equals rsse on its reduction") {
    TempDir dir;
    const auto graph_path = dir.file("g.tsv");
    REQUIRE(cli::run({"generate", "--ba", "-n", "35", "-m", "2", "--seed", "31", "--out", graph_path}) == 0);
    const auto reduced_path = dir.file("reduced.tsv");
    REQUIRE(cli::run({"reduce", "--graph", graph_path, "--undirected", "--mode", "presence", "--out",
                      reduced_path}) == 0);
    const auto r1 = dir.file("r1.csv");
    const auto r2 = dir.file("r2.csv");
    REQUIRE(cli::run({"entropy", "--graph", graph_path, "--undirected", "--objective", "mrse",
                      "--tolerance", "1e-12", "--out", r1}) == 0);
    REQUIRE(cli::run({"entropy", "--graph", reduced_path, "--undirected", "--objective", "rsse",
                      "--tolerance", "1e-12", "--out", r2}) == 0);
    auto value_of = [](const std::string &content) {
        const auto pos = content.find(",1,");
        const auto end = content.find(',', pos + 3);
        return std::stod(content.substr(pos + 3, end - pos - 3));
    };
    CHECK(value_of(slurp(r1)) == doctest::Approx(value_of(slurp(r2))).epsilon(1e-9));
}

TEST_CASE("sparsity sweep fractions ascend with the target sparsity") {
    TempDir dir;
    const auto out = dir.file("sweep.csv");
    REQUIRE(cli::run({"experiment", "--axis", "sparsity", "--grid", "0.98,0.99", "--seeds", "3",
                      "--objectives", "se,rsse,mrse", "-n", "150", "-m", "3", "--relations", "2",
                      "--seed", "29", "--no-wall-time", "--threads", "4", "--out", out}) == 0);
    std::istringstream in(body(slurp(out)));
    std::string line;
    std::getline(in, line); // header
    std::map<std::pair<std::string, std::string>, double> mean;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::istringstream row(line);
        std::string field;
        while (std::getline(row, field, ','))
            fields.push_back(field);
        REQUIRE(fields[8] == "ok");
        mean[{fields[1], fields[3]}] += std::stod(fields[6]) / 3.0;
    }
    for (const std::string obj : {"se", "rsse", "mrse"})
        CHECK(mean[{"0.99", obj}] > mean[{"0.98", obj}]);
}

TEST_CASE("hierarchical strategy on a preferential-attachment graph") {
    TempDir dir;
    const auto graph_path = dir.file("g.tsv");
    REQUIRE(cli::run({"generate", "--ba", "-n", "120", "-m", "3", "--relations", "2", "--seed", "17",
                      "--out", graph_path}) == 0);
    const auto part = dir.file("part.tsv");
    const auto passes = dir.file("passes.csv");
    REQUIRE(cli::run({"minimize", "--graph", graph_path, "--undirected", "--objective", "mrse",
                      "--strategy", "hierarchical", "-n", "40", "--out", part, "--trace", passes}) == 0);
    const auto g = load_edge_list(graph_path, {.undirected = true});
    const auto p = load_partition(part, g.node_labels());
    CHECK(p.node_count() == 120); // full disjoint cover
    CHECK(body(slurp(passes)).rfind("pass,subgraph_size,groups,merges,doubled\n", 0) == 0);
}

TEST_CASE("input errors exit with code 2") {
    TempDir dir;
    CHECK(cli::run({"entropy", "--graph", dir.file("missing.tsv")}) == 2);
    const auto bad = dir.file("bad.tsv");
    spit(bad, "a\tb\n");
    CHECK(cli::run({"entropy", "--graph", bad}) == 2);
    CHECK(cli::run({"bogus-subcommand"}) == 2);
    // unknown flag
    CHECK(cli::run({"entropy", "--graph", bad, "--frobnicate"}) == 2);
}

TEST_CASE("non-convergence exits with code 3") {
    TempDir dir;
    const auto graph_path = dir.file("g.tsv");
    REQUIRE(cli::run({"generate", "--ba", "-n", "60", "-m", "3", "--seed", "2", "--out", graph_path}) == 0);
    const auto part = dir.file("p.tsv");
    CHECK(cli::run({"minimize", "--graph", graph_path, "--undirected", "--objective", "rsse",
                    "--max-iters", "1", "--tolerance", "1e-15", "--out", part}) == 3);
}
