/*
 * synth.hpp
 *
 * Seeded synthetic-graph generation: preferential-attachment graphs with
 * optional edge dropout to a target sparsity, relation stacking, and planted
 * community fixtures for recovery testing. Every generator is a pure
 * function of its configuration and seed.
 */

#pragma once

#include <cstdint>
#include <initializer_list>
#include <utility>
#include <vector>

#include "mrse/graph.hpp"

namespace mrse {

struct SynthConfig {
    std::size_t node_count = 100;
    std::size_t attach_m = 3;      // edges added per arriving node
    double target_sparsity = -1.0; // < 0 disables dropout
    std::size_t relation_count = 1;
    std::uint64_t seed = 0;
    bool directed = false; // arcs oriented from the arriving node when set

    void validate() const {
        if (attach_m < 1 || attach_m >= node_count)
            throw std::invalid_argument("attachment count must satisfy 1 <= m < node count");
        if (relation_count < 1)
            throw std::invalid_argument("need at least one relation");
    }
};

/// Barabasi-Albert graph: complete seed on m nodes, then each arriving node
/// attaches m edges to distinct nodes with probability proportional to degree.
SingleRelationalGraph generate_ba(const SynthConfig &cfg);

/// Remove undirected edges uniformly at random until the sparsity reaches the
/// target (within one edge). The target must not undercut the current value.
SingleRelationalGraph dropout_to_sparsity(const SingleRelationalGraph &g, double target, std::uint64_t seed);

/// Concatenate equally sized graphs along the relation axis.
MultiRelationalGraph stack_relations(const std::vector<SingleRelationalGraph> &graphs);

/// Per relation, independent Bernoulli edges with intra-/inter-community
/// probabilities over contiguous community blocks.
std::pair<MultiRelationalGraph, GroundTruthLabels>
planted_partition(const std::vector<std::size_t> &community_sizes, double intra_p, double inter_p,
                  std::size_t relation_count, std::uint64_t seed);

/// Derive an independent named sub-stream seed; used so all randomness of a
/// run flows from one base seed.
std::uint64_t substream(std::uint64_t base, std::initializer_list<std::uint64_t> path);

} // namespace mrse
