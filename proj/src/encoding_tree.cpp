#include "mrse/encoding_tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace mrse {

const EncodingTree::Node &EncodingTree::at(Ref r) const {
    if (r < 0 || r >= static_cast<Ref>(nodes_.size()) || !nodes_[r].alive)
        throw std::invalid_argument("invalid tree handle " + std::to_string(r));
    return nodes_[r];
}

EncodingTree::Node &EncodingTree::at(Ref r) {
    return const_cast<Node &>(static_cast<const EncodingTree *>(this)->at(r));
}

NodeIndex EncodingTree::leaf_node(Ref r) const {
    const Node &n = at(r);
    if (n.height != 0)
        throw std::invalid_argument("handle is not a leaf");
    return n.graph_node;
}

EncodingTree::Ref EncodingTree::leaf_ref(NodeIndex v) const {
    if (v >= leaf_of_.size())
        throw std::invalid_argument("graph node out of range");
    return leaf_of_[v];
}

EncodingTree::Ref EncodingTree::cluster_of(NodeIndex v) const {
    if (height_ != 2)
        throw std::invalid_argument("cluster_of requires a height-2 tree");
    return at(leaf_ref(v)).parent;
}

std::vector<EncodingTree::Ref> EncodingTree::height1_refs() const {
    std::vector<Ref> refs;
    for (Ref r = 0; r < static_cast<Ref>(nodes_.size()); ++r)
        if (nodes_[r].alive && nodes_[r].height == 1 && nodes_[r].parent != npos)
            refs.push_back(r);
    return refs;
}

std::vector<NodeIndex> EncodingTree::members(Ref r) const {
    std::vector<NodeIndex> out;
    std::vector<Ref> stack{r};
    while (!stack.empty()) {
        Ref cur = stack.back();
        stack.pop_back();
        const Node &n = at(cur);
        if (n.height == 0)
            out.push_back(n.graph_node);
        else
            stack.insert(stack.end(), n.children.begin(), n.children.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

EncodingTree::Ref EncodingTree::merge(Ref a, Ref b) {
    if (height_ != 2)
        throw std::invalid_argument("merge requires a height-2 tree");
    if (a == b)
        throw std::invalid_argument("cannot merge a cluster with itself");
    const Node &na = at(a);
    const Node &nb = at(b);
    if (na.height != 1 || nb.height != 1 || na.parent != root() || nb.parent != root())
        throw std::invalid_argument("merge operands must be height-1 clusters");

    Node merged;
    merged.parent = root();
    merged.height = 1;
    merged.children = na.children;
    merged.children.insert(merged.children.end(), nb.children.begin(), nb.children.end());
    std::sort(merged.children.begin(), merged.children.end());

    const Ref id = static_cast<Ref>(nodes_.size());
    nodes_.push_back(std::move(merged));
    for (Ref child : nodes_[id].children)
        nodes_[child].parent = id;
    nodes_[a].alive = false;
    nodes_[b].alive = false;

    auto &root_children = nodes_[root()].children;
    std::erase(root_children, a);
    std::erase(root_children, b);
    root_children.push_back(id);
    return id;
}

void EncodingTree::validate() const {
    if (nodes_.empty() || !nodes_[0].alive)
        throw std::logic_error("tree has no root");
    if (nodes_[0].parent != npos)
        throw std::logic_error("root must not have a parent");

    std::vector<int> owner(leaf_count_, 0);
    std::size_t live = 0;
    for (Ref r = 0; r < static_cast<Ref>(nodes_.size()); ++r) {
        const Node &n = nodes_[r];
        if (!n.alive)
            continue;
        ++live;
        if (r != 0 && (n.parent == npos || !nodes_[n.parent].alive))
            throw std::logic_error("live node without live parent");
        if (r != 0 && nodes_[n.parent].height != n.height + 1)
            throw std::logic_error("parent height must exceed child height by one");
        if (n.height == 0) {
            if (!n.children.empty())
                throw std::logic_error("leaf with children");
            if (n.graph_node >= leaf_count_)
                throw std::logic_error("leaf owns an out-of-range graph node");
            ++owner[n.graph_node];
        } else {
            if (n.children.empty())
                throw std::logic_error("internal node without children");
            for (Ref c : n.children)
                if (!nodes_[c].alive || nodes_[c].parent != r)
                    throw std::logic_error("child link broken");
        }
    }
    for (std::size_t v = 0; v < leaf_count_; ++v)
        if (owner[v] != 1)
            throw std::logic_error("graph node " + std::to_string(v) + " owned by " +
                                   std::to_string(owner[v]) + " leaves");
    // every child list partitions the parent's member set by construction of
    // the ownership count above plus the parent-link check
    (void)live;
    if (static_cast<std::size_t>(nodes_[0].height) != height_)
        throw std::logic_error("stored height out of date");
}

EncodingTree singleton_tree(std::size_t node_count) {
    if (node_count == 0)
        throw std::invalid_argument("tree needs at least one node");
    EncodingTree t;
    t.leaf_count_ = node_count;
    t.height_ = 2;
    t.nodes_.resize(1 + 2 * node_count);
    t.leaf_of_.resize(node_count);
    t.nodes_[0].parent = EncodingTree::npos;
    t.nodes_[0].height = 2;
    for (std::size_t v = 0; v < node_count; ++v) {
        const auto cluster = static_cast<EncodingTree::Ref>(1 + v);
        const auto leaf = static_cast<EncodingTree::Ref>(1 + node_count + v);
        t.nodes_[0].children.push_back(cluster);
        t.nodes_[cluster].parent = 0;
        t.nodes_[cluster].height = 1;
        t.nodes_[cluster].children = {leaf};
        t.nodes_[leaf].parent = cluster;
        t.nodes_[leaf].height = 0;
        t.nodes_[leaf].graph_node = static_cast<NodeIndex>(v);
        t.leaf_of_[v] = leaf;
    }
    return t;
}

EncodingTree height1_tree(std::size_t node_count) {
    if (node_count == 0)
        throw std::invalid_argument("tree needs at least one node");
    EncodingTree t;
    t.leaf_count_ = node_count;
    t.height_ = 1;
    t.nodes_.resize(1 + node_count);
    t.leaf_of_.resize(node_count);
    t.nodes_[0].parent = EncodingTree::npos;
    t.nodes_[0].height = 1;
    for (std::size_t v = 0; v < node_count; ++v) {
        const auto leaf = static_cast<EncodingTree::Ref>(1 + v);
        t.nodes_[0].children.push_back(leaf);
        t.nodes_[leaf].parent = 0;
        t.nodes_[leaf].height = 0;
        t.nodes_[leaf].graph_node = static_cast<NodeIndex>(v);
        t.leaf_of_[v] = leaf;
    }
    return t;
}

EncodingTree tree_from_partition(std::size_t node_count, const Partition &p) {
    p.validate_cover(node_count);
    EncodingTree t;
    t.leaf_count_ = node_count;
    t.height_ = 2;
    t.nodes_.resize(1 + p.community_count() + node_count);
    t.leaf_of_.resize(node_count);
    t.nodes_[0].parent = EncodingTree::npos;
    t.nodes_[0].height = 2;
    for (std::size_t c = 0; c < p.community_count(); ++c) {
        const auto cluster = static_cast<EncodingTree::Ref>(1 + c);
        t.nodes_[0].children.push_back(cluster);
        t.nodes_[cluster].parent = 0;
        t.nodes_[cluster].height = 1;
        for (NodeIndex v : p.communities[c]) {
            const auto leaf = static_cast<EncodingTree::Ref>(1 + p.community_count() + v);
            t.nodes_[cluster].children.push_back(leaf);
            t.nodes_[leaf].parent = cluster;
            t.nodes_[leaf].height = 0;
            t.nodes_[leaf].graph_node = v;
            t.leaf_of_[v] = leaf;
        }
    }
    return t;
}

Partition partition_of_height1(const EncodingTree &t) {
    if (t.height() != 2)
        throw std::invalid_argument("partition extraction requires a height-2 tree");
    Partition p;
    for (EncodingTree::Ref r : t.height1_refs())
        p.communities.push_back(t.members(r));
    p.validate_cover(t.leaf_count());
    return p;
}

} // namespace mrse
