#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <random>

#include "mrse/graph.hpp"
#include "mrse/io.hpp"
#include "oracles.hpp"

using namespace mrse;

namespace {

std::string write_temp(const std::string &content) {
    static int counter = 0;
    const auto path = std::filesystem::temp_directory_path() /
                      ("mrse_graph_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".tsv");
    std::ofstream out(path);
    out << content;
    return path.string();
}

} // namespace

TEST_CASE("arc aggregation and validation") {
    SingleRelationalGraph g(3, {{0, 1, 1.0}, {0, 1, 1.0}, {1, 0, 2.0}}, true);
    REQUIRE(g.arcs().size() == 2);
    CHECK(g.arcs()[0] == WeightedArc{0, 1, 2.0});
    CHECK(g.arcs()[1] == WeightedArc{1, 0, 2.0});

    CHECK_THROWS_AS(SingleRelationalGraph(2, {{0, 1, -1.0}}, true), std::invalid_argument);
    CHECK_THROWS_AS(SingleRelationalGraph(2, {{0, 5, 1.0}}, true), std::invalid_argument);
    // undirected storage must be symmetric
    CHECK_THROWS_AS(SingleRelationalGraph(2, {{0, 1, 1.0}}, false), std::invalid_argument);
    CHECK_NOTHROW(SingleRelationalGraph(2, {{0, 1, 1.0}, {1, 0, 1.0}}, false));
}

TEST_CASE("degrees and sparsity") {
    // path 0-1-2 plus an isolated node 3
    SingleRelationalGraph g(4, {{0, 1, 1.0}, {1, 0, 1.0}, {1, 2, 1.0}, {2, 1, 1.0}}, false);
    const auto in = g.in_degrees();
    CHECK(in[0] == 1.0);
    CHECK(in[1] == 2.0);
    CHECK(in[2] == 1.0);
    CHECK(in[3] == 0.0);
    CHECK(g.connected_pair_count() == 2);
    CHECK(g.sparsity() == doctest::Approx(1.0 - 2.0 / 6.0));
}

TEST_CASE("edge list loading matches the worked tensor example") {
    const auto path = write_temp("v1\tv2\tR1\n"
                                 "v1\tv5\tR1\n"
                                 "v1\tv2\tR2\n"
                                 "v1\tv5\tR2\n"
                                 "v1\tv3\tR3\n");
    const auto g = load_edge_list(path);
    REQUIRE(g.node_count() == 4); // v1, v2, v5, v3 in first-appearance order
    REQUIRE(g.relation_count() == 3);
    CHECK(g.node_labels() == std::vector<std::string>{"v1", "v2", "v5", "v3"});
    CHECK(g.relation_names() == std::vector<std::string>{"R1", "R2", "R3"});
    REQUIRE(g.arcs().size() == 5);
    // all arcs start at v1 (index 0); weights default to 1; canonical order
    CHECK(g.arcs()[0] == RelArc{0, 1, 0, 1.0}); // v1 -> v2 under R1
    CHECK(g.arcs()[1] == RelArc{0, 1, 1, 1.0}); // v1 -> v2 under R2
    CHECK(g.arcs()[2] == RelArc{0, 2, 0, 1.0}); // v1 -> v5 under R1
    CHECK(g.arcs()[3] == RelArc{0, 2, 1, 1.0}); // v1 -> v5 under R2
    CHECK(g.arcs()[4] == RelArc{0, 3, 2, 1.0}); // v1 -> v3 under R3
    std::filesystem::remove(path);
}

TEST_CASE("edge list error paths") {
    SUBCASE("empty file") {
        const auto path = write_temp("# just a comment\n");
        CHECK_THROWS_WITH_AS(load_edge_list(path), doctest::Contains("no arcs"), ParseError);
        std::filesystem::remove(path);
    }
    SUBCASE("malformed row reports the line") {
        const auto path = write_temp("a\tb\tR1\n\na\tb\n");
        CHECK_THROWS_WITH_AS(load_edge_list(path), doctest::Contains(":3:"), ParseError);
        std::filesystem::remove(path);
    }
    SUBCASE("negative weight") {
        const auto path = write_temp("a\tb\tR1\t-2\n");
        CHECK_THROWS_WITH_AS(load_edge_list(path), doctest::Contains("negative"), ParseError);
        std::filesystem::remove(path);
    }
    SUBCASE("unknown header") {
        const auto path = write_temp("src\tdst\tbogus\na\tb\tR1\n");
        CHECK_THROWS_WITH_AS(load_edge_list(path), doctest::Contains("unknown header"), ParseError);
        std::filesystem::remove(path);
    }
    SUBCASE("valid header is skipped") {
        const auto path = write_temp("src\tdst\trel\tweight\na\tb\tR1\t2.5\n");
        const auto g = load_edge_list(path);
        CHECK(g.arcs().size() == 1);
        CHECK(g.arcs()[0].weight == 2.5);
        std::filesystem::remove(path);
    }
}

TEST_CASE("duplicate rows aggregate by weight summation") {
    const auto path = write_temp("a,b,R1,1.0\na,b,R1,1.0\n");
    const auto g = load_edge_list(path);
    REQUIRE(g.arcs().size() == 1);
    CHECK(g.arcs()[0].weight == 2.0);
    std::filesystem::remove(path);
}

TEST_CASE("undirected option mirrors arcs") {
    const auto path = write_temp("a\tb\tR1\nb\ta\tR1\n"); // same edge listed twice
    const auto g = load_edge_list(path, {.undirected = true});
    REQUIRE(g.arcs().size() == 2);
    CHECK(g.arcs()[0].weight == 2.0);
    CHECK(g.arcs()[1].weight == 2.0);
    CHECK_FALSE(g.directed());
    std::filesystem::remove(path);
}

namespace {

// label-resolved arc multiset, insensitive to index remapping on reload
std::set<std::tuple<std::string, std::string, std::string, double>>
labeled_arcs(const MultiRelationalGraph &g) {
    std::set<std::tuple<std::string, std::string, std::string, double>> out;
    for (const auto &a : g.arcs())
        out.emplace(g.node_labels()[a.src], g.node_labels()[a.dst], g.relation_names()[a.rel], a.weight);
    return out;
}

} // namespace

TEST_CASE("write and reload is the identity on canonical graphs") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 6 + oracle::bounded(rng, 5);
        auto g = oracle::random_multigraph(rng, n, 1 + oracle::bounded(rng, 3), 0.5);
        {
            // edge lists cannot represent isolated nodes; connect any
            std::vector<char> seen(n, 0);
            for (const auto &a : g.arcs())
                seen[a.src] = seen[a.dst] = 1;
            auto arcs = g.arcs();
            for (NodeIndex v = 0; v < n; ++v)
                if (!seen[v]) {
                    const NodeIndex peer = (v + 1) % n;
                    arcs.push_back({v, peer, 0, 1.0});
                    arcs.push_back({peer, v, 0, 1.0});
                }
            g = MultiRelationalGraph(n, g.relation_count(), std::move(arcs), false);
        }
        const auto path = write_temp("");
        write_edge_list(g, path);
        const auto reloaded = load_edge_list(path, {.undirected = true});
        REQUIRE(reloaded.node_count() == g.node_count());
        REQUIRE(reloaded.relation_count() == g.relation_count());
        CHECK(labeled_arcs(reloaded) == labeled_arcs(g));
        std::filesystem::remove(path);
    }
}

TEST_CASE("reduce_to_single modes") {
    MultiRelationalGraph g(3, 2,
                           {{0, 1, 0, 1.0}, {1, 0, 0, 1.0}, {0, 1, 1, 1.0}, {1, 0, 1, 1.0}, {1, 2, 1, 3.0},
                            {2, 1, 1, 3.0}},
                           false);
    SUBCASE("presence mode emits unit weights") {
        const auto s = reduce_to_single(g, ReduceMode::Presence);
        REQUIRE(s.arcs().size() == 4);
        for (const auto &a : s.arcs())
            CHECK(a.weight == 1.0);
    }
    SUBCASE("weight-sum mode adds across relations") {
        const auto s = reduce_to_single(g, ReduceMode::WeightSum);
        CHECK(s.arcs()[0] == WeightedArc{0, 1, 2.0});
        CHECK(s.arcs()[2] == WeightedArc{1, 2, 3.0});
    }
    SUBCASE("single relation is identical under both modes") {
        MultiRelationalGraph one(3, 1, {{0, 1, 0, 1.0}, {1, 0, 0, 1.0}}, false);
        const auto a = reduce_to_single(one, ReduceMode::Presence);
        const auto b = reduce_to_single(one, ReduceMode::WeightSum);
        CHECK(a.arcs() == b.arcs());
    }
}

TEST_CASE("consolidate") {
    std::mt19937_64 rng(11);
    SUBCASE("singleton partition reproduces the graph") {
        const auto g = oracle::random_multigraph(rng, 6, 2);
        const auto c = consolidate(g, Partition::singletons(6));
        CHECK(c.arcs() == g.arcs());
    }
    SUBCASE("all-in-one keeps the per-relation mass as self-arcs") {
        const auto g = oracle::random_multigraph(rng, 5, 3);
        Partition all;
        all.communities = {{0, 1, 2, 3, 4}};
        const auto c = consolidate(g, all);
        REQUIRE(c.node_count() == 1);
        for (RelIndex r = 0; r < 3; ++r)
            CHECK(c.relation_weight(r) == doctest::Approx(g.relation_weight(r)).epsilon(1e-12));
    }
    SUBCASE("4-node 2-relation tensor against exhaustive summation") {
        const auto g = oracle::random_multigraph(rng, 4, 2, 0.8);
        Partition p;
        p.communities = {{0, 1}, {2, 3}};
        const auto c = consolidate(g, p);
        const auto member = p.membership(4);
        for (NodeIndex cs = 0; cs < 2; ++cs) {
            for (NodeIndex cd = 0; cd < 2; ++cd) {
                for (RelIndex r = 0; r < 2; ++r) {
                    double expected = 0.0;
                    for (const auto &a : g.arcs())
                        if (member[a.src] == cs && member[a.dst] == cd && a.rel == r)
                            expected += a.weight;
                    double actual = 0.0;
                    for (const auto &a : c.arcs())
                        if (a.src == cs && a.dst == cd && a.rel == r)
                            actual += a.weight;
                    CHECK(actual == doctest::Approx(expected).epsilon(1e-12));
                }
            }
        }
    }
    SUBCASE("weight per relation is preserved") {
        for (int trial = 0; trial < 10; ++trial) {
            const auto g = oracle::random_multigraph(rng, 8, 2);
            const auto p = oracle::random_partition(rng, 8, 4);
            const auto c = consolidate(g, p);
            for (RelIndex r = 0; r < 2; ++r)
                CHECK(c.relation_weight(r) == doctest::Approx(g.relation_weight(r)).epsilon(1e-12));
        }
    }
    SUBCASE("non-covering partition is rejected") {
        const auto g = oracle::random_multigraph(rng, 4, 1);
        Partition bad;
        bad.communities = {{0, 1}, {2}};
        CHECK_THROWS_AS(consolidate(g, bad), std::invalid_argument);
    }
}

TEST_CASE("presence reduction counts distinct connected ordered pairs") {
    std::mt19937_64 rng(229);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = oracle::random_multigraph(rng, 7, 3, 0.5);
        const auto reduced = reduce_to_single(g, ReduceMode::Presence);
        std::set<std::pair<NodeIndex, NodeIndex>> ordered_pairs;
        for (const auto &a : g.arcs())
            ordered_pairs.emplace(a.src, a.dst);
        CHECK(reduced.arcs().size() == ordered_pairs.size());
    }
}

TEST_CASE("validate_for_surfing rejects empty relation slices") {
    MultiRelationalGraph g(3, 2, {{0, 1, 0, 1.0}, {1, 0, 0, 1.0}}, false);
    CHECK_THROWS_WITH_AS(g.validate_for_surfing(), doctest::Contains("R1"), std::invalid_argument);
}

TEST_CASE("partition and label file round trips") {
    const std::vector<std::string> labels{"a", "b", "c", "d"};
    Partition p;
    p.communities = {{0, 2}, {1, 3}};
    const auto path = write_temp("");
    write_partition(p, labels, path);
    const auto loaded = load_partition(path, labels);
    CHECK(loaded.canonicalized() == p.canonicalized());
    std::filesystem::remove(path);

    GroundTruthLabels truth;
    truth.class_of = {0, 1, 1, 0};
    truth.class_count = 2;
    const auto lpath = write_temp("");
    write_labels(truth, labels, lpath);
    const auto reloaded = load_labels(lpath, labels);
    CHECK(reloaded.class_of == truth.class_of);
    CHECK(reloaded.class_count == 2);
    std::filesystem::remove(lpath);
}

TEST_CASE("induced subgraph keeps internal arcs and all relations") {
    MultiRelationalGraph g(5, 2,
                           {{0, 1, 0, 1.0}, {1, 0, 0, 1.0}, {1, 2, 0, 1.0}, {2, 1, 0, 1.0}, {3, 4, 1, 2.0},
                            {4, 3, 1, 2.0}},
                           false);
    const std::vector<NodeIndex> nodes{0, 1, 4};
    const auto sub = induced_subgraph(g, nodes);
    REQUIRE(sub.node_count() == 3);
    REQUIRE(sub.relation_count() == 2);
    REQUIRE(sub.arcs().size() == 2); // only the 0-1 edge survives
    CHECK(sub.arcs()[0] == RelArc{0, 1, 0, 1.0});
    CHECK(sub.node_labels()[2] == g.node_labels()[4]);
}
