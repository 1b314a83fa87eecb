#include "mrse/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace mrse {

namespace {

// Bounded draws are hand-rolled on top of mt19937_64 so results are identical
// across standard-library implementations.
std::uint64_t bounded(std::mt19937_64 &rng, std::uint64_t n) {
    const std::uint64_t threshold = (~n + 1) % n; // 2^64 mod n
    for (;;) {
        const std::uint64_t r = rng();
        if (r >= threshold)
            return r % n;
    }
}

double unit(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<WeightedArc> symmetric_arcs(const std::set<std::pair<NodeIndex, NodeIndex>> &edges) {
    std::vector<WeightedArc> arcs;
    arcs.reserve(edges.size() * 2);
    for (const auto &[u, v] : edges) {
        arcs.push_back({u, v, 1.0});
        arcs.push_back({v, u, 1.0});
    }
    return arcs;
}

} // namespace

std::uint64_t substream(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
    // splitmix64 steps chained over the path elements
    std::uint64_t z = base;
    auto mix = [&z](std::uint64_t v) {
        z += 0x9e3779b97f4a7c15ull + v;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        z = z ^ (z >> 31);
    };
    mix(0);
    for (std::uint64_t v : path)
        mix(v);
    return z;
}

SingleRelationalGraph generate_ba(const SynthConfig &cfg) {
    cfg.validate();
    const std::size_t n = cfg.node_count;
    const std::size_t m = cfg.attach_m;
    std::mt19937_64 rng(cfg.seed);

    std::set<std::pair<NodeIndex, NodeIndex>> edges; // (min, max), arriving node second for directed reads
    std::vector<NodeIndex> endpoint_pool;            // node repeated once per incident edge

    // seed component: complete graph on the first m nodes
    for (NodeIndex u = 0; u < m; ++u) {
        for (NodeIndex v = u + 1; v < m; ++v) {
            edges.emplace(u, v);
            endpoint_pool.push_back(u);
            endpoint_pool.push_back(v);
        }
    }
    for (NodeIndex arriving = static_cast<NodeIndex>(m); arriving < n; ++arriving) {
        std::set<NodeIndex> targets;
        while (targets.size() < m) {
            NodeIndex candidate;
            if (endpoint_pool.empty())
                candidate = static_cast<NodeIndex>(bounded(rng, arriving)); // degreeless start (m = 1)
            else
                candidate = endpoint_pool[bounded(rng, endpoint_pool.size())];
            targets.insert(candidate);
        }
        for (NodeIndex t : targets) {
            edges.emplace(std::min(arriving, t), std::max(arriving, t));
            endpoint_pool.push_back(arriving);
            endpoint_pool.push_back(t);
        }
    }

    if (cfg.directed) {
        std::vector<WeightedArc> arcs;
        arcs.reserve(edges.size());
        for (const auto &[u, v] : edges)
            arcs.push_back({std::max(u, v), std::min(u, v), 1.0}); // newer node points at older
        return SingleRelationalGraph(n, std::move(arcs), true);
    }
    return SingleRelationalGraph(n, symmetric_arcs(edges), false);
}

SingleRelationalGraph dropout_to_sparsity(const SingleRelationalGraph &g, double target, std::uint64_t seed) {
    if (g.directed())
        throw std::invalid_argument("dropout operates on undirected graphs");
    if (target < g.sparsity() - 1e-12)
        throw std::invalid_argument("target sparsity is below the current sparsity");
    const std::size_t n = g.node_count();
    const double all_pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);

    std::vector<double> weight_of;
    std::vector<std::pair<NodeIndex, NodeIndex>> edge_list;
    for (const auto &a : g.arcs()) {
        if (a.src >= a.dst)
            continue;
        edge_list.emplace_back(a.src, a.dst);
        weight_of.push_back(a.weight);
    }

    std::mt19937_64 rng(seed);
    // Fisher-Yates prefix removal
    std::vector<std::size_t> order(edge_list.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i)
        std::swap(order[i - 1], order[bounded(rng, i)]);

    std::size_t keep = edge_list.size();
    auto sparsity_at = [&](std::size_t edges) { return 1.0 - static_cast<double>(edges) / all_pairs; };
    std::size_t removed = 0;
    while (keep > 0 && sparsity_at(keep) < target - 1e-12) {
        --keep;
        ++removed;
    }

    std::vector<char> dropped(edge_list.size(), 0);
    for (std::size_t k = 0; k < removed; ++k)
        dropped[order[k]] = 1;

    std::vector<WeightedArc> arcs;
    for (std::size_t k = 0; k < edge_list.size(); ++k) {
        if (dropped[k])
            continue;
        arcs.push_back({edge_list[k].first, edge_list[k].second, weight_of[k]});
        arcs.push_back({edge_list[k].second, edge_list[k].first, weight_of[k]});
    }
    // self-loops are unaffected by the pair-based sparsity definition
    for (const auto &a : g.arcs())
        if (a.src == a.dst)
            arcs.push_back(a);
    return SingleRelationalGraph(n, std::move(arcs), false, g.node_labels());
}

MultiRelationalGraph stack_relations(const std::vector<SingleRelationalGraph> &graphs) {
    if (graphs.empty())
        throw std::invalid_argument("need at least one graph to stack");
    const std::size_t n = graphs.front().node_count();
    const bool directed = graphs.front().directed();
    for (const auto &g : graphs) {
        if (g.node_count() != n)
            throw std::invalid_argument("stacked graphs must share the node count");
        if (g.directed() != directed)
            throw std::invalid_argument("stacked graphs must agree on directedness");
    }
    std::vector<RelArc> arcs;
    for (std::size_t r = 0; r < graphs.size(); ++r)
        for (const auto &a : graphs[r].arcs())
            arcs.push_back({a.src, a.dst, static_cast<RelIndex>(r), a.weight});
    return MultiRelationalGraph(n, graphs.size(), std::move(arcs), directed, graphs.front().node_labels());
}

std::pair<MultiRelationalGraph, GroundTruthLabels>
planted_partition(const std::vector<std::size_t> &community_sizes, double intra_p, double inter_p,
                  std::size_t relation_count, std::uint64_t seed) {
    if (community_sizes.empty())
        throw std::invalid_argument("need at least one community");
    if (!(intra_p > inter_p))
        throw std::invalid_argument("intra probability must exceed inter probability");
    if (intra_p < 0.0 || intra_p > 1.0 || inter_p < 0.0 || inter_p > 1.0)
        throw std::invalid_argument("probabilities must lie in [0, 1]");
    if (relation_count < 1)
        throw std::invalid_argument("need at least one relation");

    GroundTruthLabels labels;
    labels.class_count = community_sizes.size();
    for (std::size_t c = 0; c < community_sizes.size(); ++c)
        labels.class_of.insert(labels.class_of.end(), community_sizes[c], static_cast<std::uint32_t>(c));
    const std::size_t n = labels.class_of.size();

    std::vector<RelArc> arcs;
    for (std::size_t r = 0; r < relation_count; ++r) {
        std::mt19937_64 rng(substream(seed, {static_cast<std::uint64_t>(r)}));
        for (NodeIndex u = 0; u < n; ++u) {
            for (NodeIndex v = u + 1; v < n; ++v) {
                const double p = labels.class_of[u] == labels.class_of[v] ? intra_p : inter_p;
                if (unit(rng) < p) {
                    arcs.push_back({u, v, static_cast<RelIndex>(r), 1.0});
                    arcs.push_back({v, u, static_cast<RelIndex>(r), 1.0});
                }
            }
        }
    }
    return {MultiRelationalGraph(n, relation_count, std::move(arcs), false), std::move(labels)};
}

} // namespace mrse
