/*
 * entropy.hpp
 *
 * Structural entropy functionals and their merge deltas.
 *
 * Three routes are kept deliberately separate:
 *  - se() evaluates the degree-based functional (cut weight over volume),
 *  - rsse()/mrse() evaluate the random-surfing functional over a FlowGraph,
 *    the stationary-mass-weighted transition flows of the adjusted chain,
 *  - the 1D values use the explicit Shannon formulas.
 * The degree and flow routes coincide on the unadjusted chain and act as
 * mutual oracles; they must never be collapsed into one implementation.
 */

#pragma once

#include <cmath>
#include <map>
#include <span>
#include <unordered_map>
#include <vector>

#include "mrse/encoding_tree.hpp"
#include "mrse/graph.hpp"
#include "mrse/surfing.hpp"

namespace mrse {

/// x * log2(y) with the 0 * log 0 = 0 convention.
inline double xlog2(double x, double y) {
    return (x > 0.0 && y > 0.0) ? x * std::log2(y) : 0.0;
}

/// -sum p log2 p over a probability vector, in bits.
double shannon_bits(std::span<const double> p);

struct FlowArc {
    NodeIndex src;
    NodeIndex dst;
    double flow; // y-weighted normalized transition mass leaving src for dst
};

/**
 * Stationary-weighted sparse flow structure of an adjusted chain. Together
 * with the closed-form dangling and teleport corrections this is everything
 * the surfing entropies and their merge deltas need.
 */
struct FlowGraph {
    std::size_t node_count = 0;
    double teleport = 1.0;
    std::vector<double> occupancy;     // stationary mass per node
    std::vector<double> dangling_mass; // y-weighted occupancy of dangling (node, relation) fibers
    std::vector<FlowArc> arcs;         // aggregated over relations, sparse part only
};

FlowGraph make_flow_graph(const TransitionMatrix &t, const StationaryDistribution &x);
FlowGraph make_flow_graph(const MultiRelTransition &t, const MultiRankResult &mr);

/// Probability of entering each single node from elsewhere, under the
/// adjusted chain.
std::vector<double> leaf_entering(const FlowGraph &fg);

/// Surfing entropy of a height-1 or height-2 encoding tree, in bits.
double flow_entropy(const FlowGraph &fg, const EncodingTree &t);

// --- entropy functionals ----------------------------------------------------

/// Degree-route structural entropy of g relative to t (heights 1 and 2).
double se(const SingleRelationalGraph &g, const EncodingTree &t);

/// Random-surfing structural entropy from a solved single-relational chain.
double rsse(const SingleRelationalGraph &g, const EncodingTree &t, const StationaryDistribution &x,
            const TransitionMatrix &tm);

double rsse_1d(const StationaryDistribution &x);

/// Multi-relational structural entropy from a solved MultiRank fixed point.
double mrse(const MultiRelationalGraph &g, const EncodingTree &t, const MultiRankResult &mr,
            const MultiRelTransition &mt);

double mrse_1d(const MultiRankResult &mr);

/// (one_d - min_two_d) / one_d: the decoded share of structural information.
double decoded_fraction(double one_d, double min_two_d);

// --- incremental merge state ------------------------------------------------

/**
 * Per-cluster occupancy, entering probability, child entering sums, and
 * cross-cluster boundary flows of a height-2 tree, maintained incrementally
 * so a merge delta costs O(1) and applying a merge costs O(boundary).
 */
class EntropyTerms {
public:
    using Ref = EncodingTree::Ref;

    EntropyTerms(const FlowGraph &fg, const EncodingTree &t);

    double occupancy(Ref cluster) const;
    double entering(Ref cluster) const;
    double child_entering_sum(Ref cluster) const;
    /// F(a,b): flow from sources in a to destinations in b (sparse part).
    double cross_flow(Ref a, Ref b) const;
    /// Entering probability of the union of two clusters.
    double merged_entering(Ref a, Ref b) const;

    void apply_merge(Ref a, Ref b, Ref merged);

    /// Functional value of the tree this state was built from.
    double initial_entropy() const { return initial_entropy_; }
    const std::vector<double> &node_entering() const { return leaf_in_; }

private:
    struct Cluster {
        double occ = 0.0;
        double in_sum = 0.0;    // sum of cross flows into this cluster
        double child_sum = 0.0; // sum of node entering over members
        double dang = 0.0;
        std::size_t size = 0;
        std::map<Ref, double> out; // F(this, other)
        std::map<Ref, double> in;  // F(other, this)
    };

    const Cluster &cluster(Ref r) const;
    double entering_of(const Cluster &c) const;

    std::unordered_map<Ref, Cluster> clusters_;
    std::vector<double> leaf_in_;
    double teleport_ = 1.0;
    double dang_total_ = 0.0;
    std::size_t n_ = 0;
    double initial_entropy_ = 0.0;
};

/// Closed-form merge delta that substitutes cluster occupancies for
/// the child entering sums. Exact only when the chain has no self-transition
/// mass; the teleport term alone makes it deviate by O((1-c)/|V|).
double delta_mrse_paper(const EntropyTerms &terms, EncodingTree::Ref a, EncodingTree::Ref b);

/// Exact change of the surfing entropy under merging a and b.
double delta_mrse_exact(const EntropyTerms &terms, EncodingTree::Ref a, EncodingTree::Ref b);

/**
 * Degree-route counterpart of EntropyTerms: cut weights, volumes, and child
 * cut sums per cluster of a height-2 tree.
 */
class DegreeStats {
public:
    using Ref = EncodingTree::Ref;

    DegreeStats(const SingleRelationalGraph &g, const EncodingTree &t);

    double volume(Ref cluster) const;
    double cut(Ref cluster) const;
    double child_cut_sum(Ref cluster) const;
    double total_volume() const { return total_volume_; }
    double cross_cut(Ref a, Ref b) const;
    double merged_cut(Ref a, Ref b) const;

    void apply_merge(Ref a, Ref b, Ref merged);

    double initial_entropy() const { return initial_entropy_; }

private:
    struct Cluster {
        double vol = 0.0;
        double cut = 0.0;
        double child_sum = 0.0;
        std::map<Ref, double> out; // arc weight leaving this cluster, per target cluster
        std::map<Ref, double> in;
    };

    const Cluster &cluster(Ref r) const;

    std::unordered_map<Ref, Cluster> clusters_;
    double total_volume_ = 0.0;
    double initial_entropy_ = 0.0;
};

/// Exact change of the degree-route entropy under merging a and b.
double delta_se(const DegreeStats &stats, EncodingTree::Ref a, EncodingTree::Ref b);

} // namespace mrse
