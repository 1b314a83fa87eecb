#include "mrse/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace mrse {

namespace {

// Merges below this are treated as zero to avoid floating-point churn.
constexpr double kMergeThreshold = -1e-12;

long long quantize(double delta) {
    return std::llround(delta * 1e12);
}

using Ref = EncodingTree::Ref;

// Which cluster pairs share at least one graph edge (Algorithm requirement:
// only edge-connected clusters are merge candidates).
struct ClusterAdjacency {
    std::map<Ref, std::set<Ref>> neighbors;

    void ensure(Ref r) { neighbors.try_emplace(r); }

    void add_edge(Ref a, Ref b) {
        if (a == b)
            return;
        neighbors[a].insert(b);
        neighbors[b].insert(a);
    }

    void merge(Ref a, Ref b, Ref merged) {
        auto sa = std::move(neighbors.at(a));
        auto sb = std::move(neighbors.at(b));
        neighbors.erase(a);
        neighbors.erase(b);
        std::set<Ref> united;
        for (const auto *s : {&sa, &sb})
            for (Ref o : *s)
                if (o != a && o != b)
                    united.insert(o);
        for (Ref o : united) {
            auto &so = neighbors.at(o);
            so.erase(a);
            so.erase(b);
            so.insert(merged);
        }
        neighbors.emplace(merged, std::move(united));
    }
};

double state_delta(const EntropyTerms &state, Ref a, Ref b, DeltaMode mode) {
    return mode == DeltaMode::Paper ? delta_mrse_paper(state, a, b) : delta_mrse_exact(state, a, b);
}

// The degree-route delta is already exact; both modes coincide.
double state_delta(const DegreeStats &state, Ref a, Ref b, DeltaMode) {
    return delta_se(state, a, b);
}

template <class State, class EdgeRange>
MinimizeResult greedy_minimize(State state, EncodingTree tree, const EdgeRange &edges, DeltaMode mode) {
    ClusterAdjacency adj;
    for (Ref r : tree.height1_refs())
        adj.ensure(r);
    for (const auto &e : edges)
        adj.add_edge(tree.cluster_of(e.src), tree.cluster_of(e.dst));

    MinimizeResult result;
    result.initial_objective = state.initial_entropy();
    double objective = result.initial_objective;

    while (true) {
        bool found = false;
        long long best_q = 0;
        double best_delta = 0.0;
        Ref best_a = EncodingTree::npos;
        Ref best_b = EncodingTree::npos;
        for (const auto &[a, others] : adj.neighbors) {
            for (Ref b : others) {
                if (b <= a)
                    continue;
                const double d = state_delta(state, a, b, mode);
                const long long q = quantize(d);
                if (!found || q < best_q) {
                    found = true;
                    best_q = q;
                    best_delta = d;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        if (!found || !(best_delta < kMergeThreshold))
            break;
        const Ref merged = tree.merge(best_a, best_b);
        state.apply_merge(best_a, best_b, merged);
        adj.merge(best_a, best_b, merged);
        objective += best_delta;
        result.trace.push_back({result.trace.size() + 1, best_a, best_b, best_delta, objective});
    }
    result.final_objective = objective;
    result.tree = std::move(tree);
    return result;
}

} // namespace

MinimizeResult minimize_2d_seeded(const MultiRelationalGraph &g, const MinimizeConfig &cfg,
                                  const Partition &initial) {
    cfg.validate();
    if (g.node_count() == 0)
        throw std::invalid_argument("empty graph");
    if (cfg.objective != Objective::MrSE)
        throw std::invalid_argument("multi-relational minimization requires the MrSE objective");
    const MultiRelTransition mt = build_multirel_transitions(g, cfg.surf);
    const MultiRankResult mr = multirank(mt, cfg.surf);
    const FlowGraph fg = make_flow_graph(mt, mr);
    EncodingTree tree = tree_from_partition(g.node_count(), initial);
    EntropyTerms state(fg, tree);
    MinimizeResult result = greedy_minimize(std::move(state), std::move(tree), g.arcs(), cfg.delta_mode);
    result.surf_iterations = mr.iterations;
    return result;
}

MinimizeResult minimize_2d_seeded(const SingleRelationalGraph &g, const MinimizeConfig &cfg,
                                  const Partition &initial) {
    cfg.validate();
    if (g.node_count() == 0)
        throw std::invalid_argument("empty graph");
    EncodingTree tree = tree_from_partition(g.node_count(), initial);
    switch (cfg.objective) {
    case Objective::SE: {
        DegreeStats state(g, tree);
        return greedy_minimize(std::move(state), std::move(tree), g.arcs(), cfg.delta_mode);
    }
    case Objective::RSSE: {
        const TransitionMatrix tm = build_transition(g, cfg.surf);
        const StationaryDistribution x = power_method(tm, cfg.surf);
        const FlowGraph fg = make_flow_graph(tm, x);
        EntropyTerms state(fg, tree);
        MinimizeResult result = greedy_minimize(std::move(state), std::move(tree), g.arcs(), cfg.delta_mode);
        result.surf_iterations = x.iterations;
        return result;
    }
    case Objective::MrSE:
        throw std::invalid_argument("MrSE minimization requires a multi-relational graph");
    }
    throw std::invalid_argument("unknown objective");
}

MinimizeResult minimize_2d(const MultiRelationalGraph &g, const MinimizeConfig &cfg) {
    return minimize_2d_seeded(g, cfg, Partition::singletons(g.node_count()));
}

MinimizeResult minimize_2d(const SingleRelationalGraph &g, const MinimizeConfig &cfg) {
    return minimize_2d_seeded(g, cfg, Partition::singletons(g.node_count()));
}

namespace {

template <class G>
HierarchicalResult hierarchical_impl(const G &g, const MinimizeConfig &cfg) {
    cfg.validate();
    if (g.node_count() == 0)
        throw std::invalid_argument("empty graph");

    std::vector<std::vector<NodeIndex>> clusters;
    clusters.reserve(g.node_count());
    for (std::size_t v = 0; v < g.node_count(); ++v)
        clusters.push_back({static_cast<NodeIndex>(v)});

    MinimizeConfig sub_cfg = cfg;
    sub_cfg.strategy = Strategy::Vanilla;

    HierarchicalResult result;
    std::size_t group_size = cfg.subgraph_size;
    while (true) {
        // consecutive chunks in ascending minimum-member order
        std::sort(clusters.begin(), clusters.end(),
                  [](const auto &a, const auto &b) { return a.front() < b.front(); });
        const std::size_t group_count = (clusters.size() + group_size - 1) / group_size;

        std::vector<std::vector<NodeIndex>> refined;
        std::size_t merges = 0;
        for (std::size_t gi = 0; gi < group_count; ++gi) {
            const std::size_t begin = gi * group_size;
            const std::size_t end = std::min(begin + group_size, clusters.size());

            std::vector<NodeIndex> nodes;
            for (std::size_t k = begin; k < end; ++k)
                nodes.insert(nodes.end(), clusters[k].begin(), clusters[k].end());
            std::sort(nodes.begin(), nodes.end());

            std::vector<std::uint32_t> local_of(g.node_count(), 0);
            for (std::size_t i = 0; i < nodes.size(); ++i)
                local_of[nodes[i]] = static_cast<std::uint32_t>(i);

            Partition local;
            for (std::size_t k = begin; k < end; ++k) {
                std::vector<NodeIndex> community;
                community.reserve(clusters[k].size());
                for (NodeIndex v : clusters[k])
                    community.push_back(local_of[v]);
                std::sort(community.begin(), community.end());
                local.communities.push_back(std::move(community));
            }

            const auto sub = induced_subgraph(g, nodes);
            MinimizeResult res = minimize_2d_seeded(sub, sub_cfg, local);
            merges += res.trace.size();
            for (const auto &community : partition_of_height1(res.tree).canonicalized().communities) {
                std::vector<NodeIndex> global;
                global.reserve(community.size());
                for (NodeIndex v : community)
                    global.push_back(nodes[v]);
                refined.push_back(std::move(global));
            }
        }

        clusters = std::move(refined);
        if (group_count == 1) {
            result.passes.push_back({group_size, group_count, merges, false});
            break;
        }
        const bool doubled = merges == 0;
        result.passes.push_back({group_size, group_count, merges, doubled});
        if (doubled)
            group_size *= 2;
    }

    Partition final_partition;
    final_partition.communities = std::move(clusters);
    result.tree = tree_from_partition(g.node_count(), final_partition.canonicalized());
    return result;
}

} // namespace

HierarchicalResult hierarchical_minimize(const MultiRelationalGraph &g, const MinimizeConfig &cfg) {
    return hierarchical_impl(g, cfg);
}

HierarchicalResult hierarchical_minimize(const SingleRelationalGraph &g, const MinimizeConfig &cfg) {
    return hierarchical_impl(g, cfg);
}

std::vector<Partition> minimize_recursive(const MultiRelationalGraph &g, std::size_t depth,
                                          const MinimizeConfig &cfg) {
    if (depth < 1)
        throw std::invalid_argument("depth must be at least 1");
    cfg.validate();

    std::vector<Partition> levels;
    MultiRelationalGraph current = g;
    std::vector<std::vector<NodeIndex>> blocks; // current node -> original nodes
    blocks.reserve(g.node_count());
    for (std::size_t v = 0; v < g.node_count(); ++v)
        blocks.push_back({static_cast<NodeIndex>(v)});

    for (std::size_t level = 1; level <= depth; ++level) {
        const MinimizeResult res = minimize_2d(current, cfg);
        const Partition local = partition_of_height1(res.tree).canonicalized();
        const bool no_merges = local.community_count() == current.node_count();
        if (level > 1 && no_merges)
            break; // would repeat the previous level

        Partition lifted;
        std::vector<std::vector<NodeIndex>> next_blocks;
        for (const auto &community : local.communities) {
            std::vector<NodeIndex> originals;
            for (NodeIndex v : community)
                originals.insert(originals.end(), blocks[v].begin(), blocks[v].end());
            std::sort(originals.begin(), originals.end());
            lifted.communities.push_back(originals);
            next_blocks.push_back(std::move(originals));
        }
        levels.push_back(lifted.canonicalized());
        if (no_merges || level == depth)
            break;
        current = consolidate(current, local);
        blocks = std::move(next_blocks);
    }
    return levels;
}

} // namespace mrse
