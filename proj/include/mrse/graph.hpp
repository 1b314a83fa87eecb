/*
 * graph.hpp
 *
 * Graph containers for single- and multi-relational weighted graphs,
 * plus relation reduction, community consolidation, and partitions.
 */

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrse {

using NodeIndex = std::uint32_t;
using RelIndex = std::uint32_t;

/// Error raised by file ingestion; the message carries the offending line number.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WeightedArc {
    NodeIndex src = 0;
    NodeIndex dst = 0;
    double weight = 1.0;

    friend bool operator==(const WeightedArc &, const WeightedArc &) = default;
};

struct RelArc {
    NodeIndex src = 0;
    NodeIndex dst = 0;
    RelIndex rel = 0;
    double weight = 1.0;

    friend bool operator==(const RelArc &, const RelArc &) = default;
};

/// A disjoint cover of the node set; the community-detection output.
struct Partition {
    std::vector<std::vector<NodeIndex>> communities;

    std::size_t community_count() const { return communities.size(); }
    std::size_t node_count() const;

    /// Community index per node. Throws if the communities do not cover
    /// 0..node_count-1 exactly once.
    std::vector<std::uint32_t> membership(std::size_t node_count) const;
    void validate_cover(std::size_t node_count) const;

    static Partition from_membership(std::span<const std::uint32_t> member_of);
    static Partition singletons(std::size_t node_count);

    /// Members sorted ascending, communities ordered by smallest member.
    Partition canonicalized() const;

    friend bool operator==(const Partition &, const Partition &) = default;
};

struct GroundTruthLabels {
    std::vector<std::uint32_t> class_of; // indexed by node
    std::size_t class_count = 0;
};

/**
 * Weighted directed graph over dense node indices. Undirected graphs are
 * stored as two symmetric arcs per edge so every downstream formula can use
 * the directed convention; the constructor verifies symmetry in that case.
 * Duplicate (src, dst) arcs aggregate by weight summation.
 */
class SingleRelationalGraph {
public:
    SingleRelationalGraph() = default;
    SingleRelationalGraph(std::size_t node_count, std::vector<WeightedArc> arcs, bool directed,
                          std::vector<std::string> node_labels = {});

    std::size_t node_count() const { return node_count_; }
    bool directed() const { return directed_; }
    const std::vector<WeightedArc> &arcs() const { return arcs_; }
    const std::vector<std::string> &node_labels() const { return labels_; }

    double total_weight() const;
    std::vector<double> in_degrees() const;
    std::vector<double> out_degrees() const;

    /// Distinct unordered {i,j} pairs (i != j) connected by at least one arc.
    std::size_t connected_pair_count() const;
    /// 1 - pairs / (n*(n-1)/2); 1.0 for graphs with fewer than two nodes.
    double sparsity() const;

private:
    std::size_t node_count_ = 0;
    std::vector<WeightedArc> arcs_;
    bool directed_ = true;
    std::vector<std::string> labels_;
};

/**
 * Weighted multi-relational graph: a sparse adjacency tensor over
 * (source, destination, relation). Same storage conventions as
 * SingleRelationalGraph, applied per relation slice.
 */
class MultiRelationalGraph {
public:
    MultiRelationalGraph() = default;
    MultiRelationalGraph(std::size_t node_count, std::size_t relation_count, std::vector<RelArc> arcs,
                         bool directed, std::vector<std::string> node_labels = {},
                         std::vector<std::string> relation_names = {});

    std::size_t node_count() const { return node_count_; }
    std::size_t relation_count() const { return relation_count_; }
    bool directed() const { return directed_; }
    const std::vector<RelArc> &arcs() const { return arcs_; }
    const std::vector<std::string> &node_labels() const { return labels_; }
    const std::vector<std::string> &relation_names() const { return relation_names_; }

    double relation_weight(RelIndex r) const;
    std::size_t relation_arc_count(RelIndex r) const;
    std::size_t relation_pair_count(RelIndex r) const;
    double relation_sparsity(RelIndex r) const;
    double total_weight() const;

    SingleRelationalGraph slice(RelIndex r) const;

    /// Rejects relation slices without any arc; used on external input before
    /// surfing. Internally built subgraphs may skip this and rely on the
    /// uniform stochasticity fallback.
    void validate_for_surfing() const;

private:
    std::size_t node_count_ = 0;
    std::size_t relation_count_ = 0;
    std::vector<RelArc> arcs_;
    bool directed_ = true;
    std::vector<std::string> labels_;
    std::vector<std::string> relation_names_;
};

enum class ReduceMode { Presence, WeightSum };

/// Collapse relations: Presence emits weight 1 wherever any relation connects
/// the ordered pair, WeightSum adds the weights across relations.
SingleRelationalGraph reduce_to_single(const MultiRelationalGraph &g, ReduceMode mode = ReduceMode::Presence);

/// Contract every community of p into one node, summing arc weights per
/// relation; intra-community arcs become self-arcs and are retained.
MultiRelationalGraph consolidate(const MultiRelationalGraph &g, const Partition &p);

/// Subgraph on the given (sorted, deduplicated) nodes, keeping arcs with both
/// endpoints inside and the full relation set.
MultiRelationalGraph induced_subgraph(const MultiRelationalGraph &g, std::span<const NodeIndex> nodes);
SingleRelationalGraph induced_subgraph(const SingleRelationalGraph &g, std::span<const NodeIndex> nodes);

/// Wrap a single-relational graph as a one-relation tensor.
MultiRelationalGraph as_multi(const SingleRelationalGraph &g, std::string relation_name = "R0");

} // namespace mrse
