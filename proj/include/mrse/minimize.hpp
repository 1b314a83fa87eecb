/*
 * minimize.hpp
 *
 * Greedy two-level entropy minimization: starting from singleton clusters,
 * repeatedly merge the edge-connected cluster pair with the most negative
 * merge delta until no merge lowers the objective. A hierarchical variant
 * refines bounded-size subgraphs, and higher levels are obtained by
 * consolidating communities into nodes and recursing.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "mrse/encoding_tree.hpp"
#include "mrse/entropy.hpp"
#include "mrse/graph.hpp"
#include "mrse/surfing.hpp"

namespace mrse {

enum class Objective { SE, RSSE, MrSE };
enum class Strategy { Vanilla, Hierarchical };
enum class DeltaMode { Exact, Paper };

struct MinimizeConfig {
    Objective objective = Objective::MrSE;
    Strategy strategy = Strategy::Vanilla;
    std::size_t subgraph_size = 100; // hierarchical only
    DeltaMode delta_mode = DeltaMode::Exact;
    SurfConfig surf;

    void validate() const {
        if (subgraph_size < 2)
            throw std::invalid_argument("subgraph size must be at least 2");
        surf.validate();
    }
};

struct MergeStep {
    std::size_t step = 0;
    EncodingTree::Ref cluster_a = EncodingTree::npos;
    EncodingTree::Ref cluster_b = EncodingTree::npos;
    double delta = 0.0;
    double objective = 0.0; // running objective after this merge
};

struct MinimizeResult {
    EncodingTree tree;
    std::vector<MergeStep> trace;
    double initial_objective = 0.0; // objective of the seeded tree
    double final_objective = 0.0;   // initial plus summed trace deltas
    std::size_t surf_iterations = 0;
};

/// Vanilla greedy minimization from singleton clusters. The multi-relational
/// overload requires the MrSE objective, the single-relational one SE or RSSE.
MinimizeResult minimize_2d(const MultiRelationalGraph &g, const MinimizeConfig &cfg);
MinimizeResult minimize_2d(const SingleRelationalGraph &g, const MinimizeConfig &cfg);

/// Same driver seeded with an existing partition instead of singletons.
MinimizeResult minimize_2d_seeded(const MultiRelationalGraph &g, const MinimizeConfig &cfg,
                                  const Partition &initial);
MinimizeResult minimize_2d_seeded(const SingleRelationalGraph &g, const MinimizeConfig &cfg,
                                  const Partition &initial);

struct HierarchicalPass {
    std::size_t subgraph_size = 0;
    std::size_t group_count = 0;
    std::size_t merges = 0;
    bool doubled = false; // pass produced no merges, so the size was doubled
};

struct HierarchicalResult {
    EncodingTree tree;
    std::vector<HierarchicalPass> passes;
};

/// Subgraph-at-a-time minimization: chunk the cluster list into consecutive
/// groups of at most cfg.subgraph_size, refine each group on its induced
/// subgraph (stationary distributions recomputed locally), and loop until a
/// single group remains; a pass without merges doubles the group size.
HierarchicalResult hierarchical_minimize(const MultiRelationalGraph &g, const MinimizeConfig &cfg);
HierarchicalResult hierarchical_minimize(const SingleRelationalGraph &g, const MinimizeConfig &cfg);

/// Multi-level decoding: level 1 is minimize_2d's partition; each further
/// level consolidates the previous communities into nodes and minimizes
/// again, lifting the result back to original node ids. Stops early once a
/// level refuses to merge anything.
std::vector<Partition> minimize_recursive(const MultiRelationalGraph &g, std::size_t depth,
                                          const MinimizeConfig &cfg);

} // namespace mrse
