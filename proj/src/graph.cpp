#include "mrse/graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace mrse {

namespace {

std::vector<std::string> default_labels(std::size_t n, const char *prefix) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        labels.push_back(prefix + std::to_string(i));
    return labels;
}

void check_labels(const std::vector<std::string> &labels, std::size_t n, const char *what) {
    if (labels.size() != n)
        throw std::invalid_argument(std::string(what) + " label count does not match count");
    std::set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size())
        throw std::invalid_argument(std::string(what) + " labels are not unique");
}

} // namespace

// ---------------------------------------------------------------------------
// Partition

std::size_t Partition::node_count() const {
    std::size_t total = 0;
    for (const auto &c : communities)
        total += c.size();
    return total;
}

std::vector<std::uint32_t> Partition::membership(std::size_t node_count) const {
    constexpr std::uint32_t unset = 0xffffffffu;
    std::vector<std::uint32_t> member_of(node_count, unset);
    for (std::size_t c = 0; c < communities.size(); ++c) {
        for (NodeIndex v : communities[c]) {
            if (v >= node_count)
                throw std::invalid_argument("partition references node " + std::to_string(v) +
                                            " outside 0.." + std::to_string(node_count - 1));
            if (member_of[v] != unset)
                throw std::invalid_argument("node " + std::to_string(v) + " appears in two communities");
            member_of[v] = static_cast<std::uint32_t>(c);
        }
    }
    for (std::size_t v = 0; v < node_count; ++v)
        if (member_of[v] == unset)
            throw std::invalid_argument("node " + std::to_string(v) + " missing from partition");
    return member_of;
}

void Partition::validate_cover(std::size_t node_count) const {
    (void)membership(node_count);
}

Partition Partition::from_membership(std::span<const std::uint32_t> member_of) {
    std::uint32_t max_comm = 0;
    for (std::uint32_t c : member_of)
        max_comm = std::max(max_comm, c);
    Partition p;
    if (member_of.empty())
        return p;
    p.communities.resize(static_cast<std::size_t>(max_comm) + 1);
    for (std::size_t v = 0; v < member_of.size(); ++v)
        p.communities[member_of[v]].push_back(static_cast<NodeIndex>(v));
    // drop unused community ids
    std::erase_if(p.communities, [](const auto &c) { return c.empty(); });
    return p;
}

Partition Partition::singletons(std::size_t node_count) {
    Partition p;
    p.communities.resize(node_count);
    for (std::size_t v = 0; v < node_count; ++v)
        p.communities[v] = {static_cast<NodeIndex>(v)};
    return p;
}

Partition Partition::canonicalized() const {
    Partition p = *this;
    for (auto &c : p.communities)
        std::sort(c.begin(), c.end());
    std::sort(p.communities.begin(), p.communities.end(),
              [](const auto &a, const auto &b) { return a.front() < b.front(); });
    return p;
}

// ---------------------------------------------------------------------------
// SingleRelationalGraph

namespace {

// Aggregate duplicate keys by weight summation and sort canonically.
template <class Arc, class Key>
std::vector<Arc> aggregate_arcs(std::vector<Arc> arcs, Key key) {
    std::sort(arcs.begin(), arcs.end(), [&](const Arc &a, const Arc &b) { return key(a) < key(b); });
    std::vector<Arc> out;
    out.reserve(arcs.size());
    for (const Arc &a : arcs) {
        if (!out.empty() && key(out.back()) == key(a))
            out.back().weight += a.weight;
        else
            out.push_back(a);
    }
    return out;
}

} // namespace

SingleRelationalGraph::SingleRelationalGraph(std::size_t node_count, std::vector<WeightedArc> arcs,
                                             bool directed, std::vector<std::string> node_labels)
    : node_count_(node_count), directed_(directed) {
    for (const auto &a : arcs) {
        if (a.src >= node_count || a.dst >= node_count)
            throw std::invalid_argument("arc endpoint out of range");
        if (a.weight < 0.0)
            throw std::invalid_argument("negative arc weight");
    }
    arcs_ = aggregate_arcs(std::move(arcs), [](const WeightedArc &a) { return std::make_pair(a.src, a.dst); });
    if (!directed_) {
        // symmetric-storage invariant: (i,j,w) implies (j,i,w)
        for (const auto &a : arcs_) {
            if (a.src == a.dst)
                continue;
            WeightedArc probe{a.dst, a.src, 0.0};
            auto it = std::lower_bound(arcs_.begin(), arcs_.end(), probe, [](const WeightedArc &x, const WeightedArc &y) {
                return std::make_pair(x.src, x.dst) < std::make_pair(y.src, y.dst);
            });
            if (it == arcs_.end() || it->src != a.dst || it->dst != a.src || it->weight != a.weight)
                throw std::invalid_argument("undirected graph requires symmetric arc storage");
        }
    }
    if (node_labels.empty())
        labels_ = default_labels(node_count_, "v");
    else
        labels_ = std::move(node_labels);
    check_labels(labels_, node_count_, "node");
}

double SingleRelationalGraph::total_weight() const {
    double total = 0.0;
    for (const auto &a : arcs_)
        total += a.weight;
    return total;
}

std::vector<double> SingleRelationalGraph::in_degrees() const {
    std::vector<double> deg(node_count_, 0.0);
    for (const auto &a : arcs_)
        deg[a.dst] += a.weight;
    return deg;
}

std::vector<double> SingleRelationalGraph::out_degrees() const {
    std::vector<double> deg(node_count_, 0.0);
    for (const auto &a : arcs_)
        deg[a.src] += a.weight;
    return deg;
}

std::size_t SingleRelationalGraph::connected_pair_count() const {
    std::set<std::pair<NodeIndex, NodeIndex>> pairs;
    for (const auto &a : arcs_)
        if (a.src != a.dst)
            pairs.emplace(std::min(a.src, a.dst), std::max(a.src, a.dst));
    return pairs.size();
}

double SingleRelationalGraph::sparsity() const {
    if (node_count_ < 2)
        return 1.0;
    const double all_pairs = 0.5 * static_cast<double>(node_count_) * static_cast<double>(node_count_ - 1);
    return 1.0 - static_cast<double>(connected_pair_count()) / all_pairs;
}

// ---------------------------------------------------------------------------
// MultiRelationalGraph

MultiRelationalGraph::MultiRelationalGraph(std::size_t node_count, std::size_t relation_count,
                                           std::vector<RelArc> arcs, bool directed,
                                           std::vector<std::string> node_labels,
                                           std::vector<std::string> relation_names)
    : node_count_(node_count), relation_count_(relation_count), directed_(directed) {
    for (const auto &a : arcs) {
        if (a.src >= node_count || a.dst >= node_count)
            throw std::invalid_argument("arc endpoint out of range");
        if (a.rel >= relation_count)
            throw std::invalid_argument("arc relation out of range");
        if (a.weight < 0.0)
            throw std::invalid_argument("negative arc weight");
    }
    arcs_ = aggregate_arcs(std::move(arcs),
                           [](const RelArc &a) { return std::make_tuple(a.src, a.dst, a.rel); });
    if (!directed_) {
        for (const auto &a : arcs_) {
            if (a.src == a.dst)
                continue;
            auto it = std::lower_bound(
                arcs_.begin(), arcs_.end(), RelArc{a.dst, a.src, a.rel, 0.0},
                [](const RelArc &x, const RelArc &y) {
                    return std::make_tuple(x.src, x.dst, x.rel) < std::make_tuple(y.src, y.dst, y.rel);
                });
            if (it == arcs_.end() || it->src != a.dst || it->dst != a.src || it->rel != a.rel ||
                it->weight != a.weight)
                throw std::invalid_argument("undirected graph requires symmetric arc storage");
        }
    }
    labels_ = node_labels.empty() ? default_labels(node_count_, "v") : std::move(node_labels);
    relation_names_ = relation_names.empty() ? default_labels(relation_count_, "R") : std::move(relation_names);
    check_labels(labels_, node_count_, "node");
    check_labels(relation_names_, relation_count_, "relation");
}

double MultiRelationalGraph::relation_weight(RelIndex r) const {
    double total = 0.0;
    for (const auto &a : arcs_)
        if (a.rel == r)
            total += a.weight;
    return total;
}

std::size_t MultiRelationalGraph::relation_arc_count(RelIndex r) const {
    std::size_t count = 0;
    for (const auto &a : arcs_)
        if (a.rel == r)
            ++count;
    return count;
}

std::size_t MultiRelationalGraph::relation_pair_count(RelIndex r) const {
    std::set<std::pair<NodeIndex, NodeIndex>> pairs;
    for (const auto &a : arcs_)
        if (a.rel == r && a.src != a.dst)
            pairs.emplace(std::min(a.src, a.dst), std::max(a.src, a.dst));
    return pairs.size();
}

double MultiRelationalGraph::relation_sparsity(RelIndex r) const {
    if (node_count_ < 2)
        return 1.0;
    const double all_pairs = 0.5 * static_cast<double>(node_count_) * static_cast<double>(node_count_ - 1);
    return 1.0 - static_cast<double>(relation_pair_count(r)) / all_pairs;
}

double MultiRelationalGraph::total_weight() const {
    double total = 0.0;
    for (const auto &a : arcs_)
        total += a.weight;
    return total;
}

SingleRelationalGraph MultiRelationalGraph::slice(RelIndex r) const {
    if (r >= relation_count_)
        throw std::invalid_argument("relation index out of range");
    std::vector<WeightedArc> arcs;
    for (const auto &a : arcs_)
        if (a.rel == r)
            arcs.push_back({a.src, a.dst, a.weight});
    return SingleRelationalGraph(node_count_, std::move(arcs), directed_, labels_);
}

void MultiRelationalGraph::validate_for_surfing() const {
    if (node_count_ == 0)
        throw std::invalid_argument("graph has no nodes");
    std::vector<char> seen(relation_count_, 0);
    for (const auto &a : arcs_)
        seen[a.rel] = 1;
    for (std::size_t r = 0; r < relation_count_; ++r)
        if (!seen[r])
            throw std::invalid_argument("relation '" + relation_names_[r] + "' has no arcs");
}

// ---------------------------------------------------------------------------
// Derived graphs

SingleRelationalGraph reduce_to_single(const MultiRelationalGraph &g, ReduceMode mode) {
    std::map<std::pair<NodeIndex, NodeIndex>, double> merged;
    for (const auto &a : g.arcs()) {
        if (mode == ReduceMode::Presence)
            merged[{a.src, a.dst}] = 1.0;
        else
            merged[{a.src, a.dst}] += a.weight;
    }
    std::vector<WeightedArc> arcs;
    arcs.reserve(merged.size());
    for (const auto &[key, w] : merged)
        arcs.push_back({key.first, key.second, w});
    return SingleRelationalGraph(g.node_count(), std::move(arcs), g.directed(), g.node_labels());
}

MultiRelationalGraph consolidate(const MultiRelationalGraph &g, const Partition &p) {
    const auto member_of = p.membership(g.node_count());
    std::map<std::tuple<NodeIndex, NodeIndex, RelIndex>, double> merged;
    for (const auto &a : g.arcs())
        merged[{member_of[a.src], member_of[a.dst], a.rel}] += a.weight;
    std::vector<RelArc> arcs;
    arcs.reserve(merged.size());
    for (const auto &[key, w] : merged) {
        const auto [src, dst, rel] = key;
        if (!g.directed() && src > dst)
            continue; // mirrored below from the same accumulated value
        arcs.push_back({src, dst, rel, w});
        if (!g.directed() && src != dst)
            arcs.push_back({dst, src, rel, w});
    }
    return MultiRelationalGraph(p.community_count(), g.relation_count(), std::move(arcs), g.directed(),
                                default_labels(p.community_count(), "c"), g.relation_names());
}

namespace {

std::vector<std::uint32_t> local_index_of(std::size_t node_count, std::span<const NodeIndex> nodes) {
    constexpr std::uint32_t absent = 0xffffffffu;
    std::vector<std::uint32_t> local(node_count, absent);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] >= node_count)
            throw std::invalid_argument("subgraph node out of range");
        if (i > 0 && nodes[i] <= nodes[i - 1])
            throw std::invalid_argument("subgraph nodes must be sorted and unique");
        local[nodes[i]] = static_cast<std::uint32_t>(i);
    }
    return local;
}

} // namespace

MultiRelationalGraph induced_subgraph(const MultiRelationalGraph &g, std::span<const NodeIndex> nodes) {
    const auto local = local_index_of(g.node_count(), nodes);
    std::vector<RelArc> arcs;
    for (const auto &a : g.arcs())
        if (local[a.src] != 0xffffffffu && local[a.dst] != 0xffffffffu)
            arcs.push_back({local[a.src], local[a.dst], a.rel, a.weight});
    std::vector<std::string> labels;
    labels.reserve(nodes.size());
    for (NodeIndex v : nodes)
        labels.push_back(g.node_labels()[v]);
    return MultiRelationalGraph(nodes.size(), g.relation_count(), std::move(arcs), g.directed(),
                                std::move(labels), g.relation_names());
}

SingleRelationalGraph induced_subgraph(const SingleRelationalGraph &g, std::span<const NodeIndex> nodes) {
    const auto local = local_index_of(g.node_count(), nodes);
    std::vector<WeightedArc> arcs;
    for (const auto &a : g.arcs())
        if (local[a.src] != 0xffffffffu && local[a.dst] != 0xffffffffu)
            arcs.push_back({local[a.src], local[a.dst], a.weight});
    std::vector<std::string> labels;
    labels.reserve(nodes.size());
    for (NodeIndex v : nodes)
        labels.push_back(g.node_labels()[v]);
    return SingleRelationalGraph(nodes.size(), std::move(arcs), g.directed(), std::move(labels));
}

MultiRelationalGraph as_multi(const SingleRelationalGraph &g, std::string relation_name) {
    std::vector<RelArc> arcs;
    arcs.reserve(g.arcs().size());
    for (const auto &a : g.arcs())
        arcs.push_back({a.src, a.dst, 0, a.weight});
    return MultiRelationalGraph(g.node_count(), 1, std::move(arcs), g.directed(), g.node_labels(),
                                {std::move(relation_name)});
}

} // namespace mrse
