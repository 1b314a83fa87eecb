/*
 * encoding_tree.hpp
 *
 * Encoding trees: hierarchical partitions of the node set, with the root
 * owning all of V, leaves owning single nodes, and each internal layer
 * partitioning its parent's set. This artifact constructs trees of height 1
 * (root over leaves) and height 2 (root, clusters, leaves); deeper structure
 * is realized by consolidating communities and recursing.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "mrse/graph.hpp"

namespace mrse {

class EncodingTree {
public:
    using Ref = std::int32_t;
    static constexpr Ref npos = -1;

    Ref root() const { return 0; }
    std::size_t height() const { return height_; }
    std::size_t leaf_count() const { return leaf_count_; }

    bool alive(Ref r) const { return r >= 0 && r < static_cast<Ref>(nodes_.size()) && nodes_[r].alive; }
    Ref parent(Ref r) const { return at(r).parent; }
    const std::vector<Ref> &children(Ref r) const { return at(r).children; }
    int node_height(Ref r) const { return at(r).height; }
    bool is_leaf(Ref r) const { return at(r).height == 0; }
    NodeIndex leaf_node(Ref r) const;

    /// Leaf handle of graph node v.
    Ref leaf_ref(NodeIndex v) const;
    /// Height-1 ancestor of graph node v (height-2 trees only).
    Ref cluster_of(NodeIndex v) const;

    /// Live height-1 handles in ascending order.
    std::vector<Ref> height1_refs() const;
    /// Graph nodes owned by the subtree at r.
    std::vector<NodeIndex> members(Ref r) const;

    /**
     * MERGE operator: removes two height-1 clusters and adds a node under the
     * root whose children are the union of theirs. Returns the new handle;
     * handles of untouched clusters remain valid.
     */
    Ref merge(Ref a, Ref b);

    /// Throws unless every structural invariant holds.
    void validate() const;

    friend EncodingTree singleton_tree(std::size_t node_count);
    friend EncodingTree height1_tree(std::size_t node_count);
    friend EncodingTree tree_from_partition(std::size_t node_count, const Partition &p);

private:
    struct Node {
        Ref parent = npos;
        std::vector<Ref> children;
        NodeIndex graph_node = 0; // leaves only
        int height = 0;
        bool alive = true;
    };

    const Node &at(Ref r) const;
    Node &at(Ref r);

    std::vector<Node> nodes_;
    std::vector<Ref> leaf_of_; // graph node -> leaf handle
    std::size_t leaf_count_ = 0;
    std::size_t height_ = 0;
};

/// Height-2 tree with one single-node cluster per graph node.
EncodingTree singleton_tree(std::size_t node_count);

/// Height-1 tree: the root directly over one leaf per graph node.
EncodingTree height1_tree(std::size_t node_count);

/// Height-2 tree whose clusters are the given communities.
EncodingTree tree_from_partition(std::size_t node_count, const Partition &p);

/// The height-1 layer as a partition of V (height-2 trees only).
Partition partition_of_height1(const EncodingTree &t);

} // namespace mrse
