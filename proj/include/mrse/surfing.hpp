/*
 * surfing.hpp
 *
 * Random-surfing machinery: column-stochastic transition structures with
 * stochasticity (dangling-column) and primitivity (teleportation)
 * adjustments, the power method, and the MultiRank fixed point for
 * multi-relational graphs. Adjustments are applied analytically inside the
 * products; the dense adjusted operators are never materialized.
 */

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrse/graph.hpp"

namespace mrse {

struct SurfConfig {
    double teleport = 0.85;      // probability of following the graph, 1-c teleports
    double tolerance = 1e-10;    // L1 residual target
    std::size_t max_iterations = 10000;

    void validate() const {
        if (!(teleport > 0.0) || teleport > 1.0)
            throw std::invalid_argument("teleport must lie in (0, 1]");
        if (!(tolerance > 0.0))
            throw std::invalid_argument("tolerance must be positive");
    }
};

struct ConvergenceError : std::runtime_error {
    ConvergenceError(const std::string &what, double residual_, std::size_t iterations_)
        : std::runtime_error(what), residual(residual_), iterations(iterations_) {}
    double residual;
    std::size_t iterations;
};

struct ColEntry {
    NodeIndex dst;
    double prob;
};

/**
 * Column-stochastic walk matrix of a single-relational graph. Columns are
 * sources; zero columns are recorded as dangling and read as uniform 1/|V|.
 * multiply() applies the teleport-adjusted operator cA + (1-c)E.
 */
class TransitionMatrix {
public:
    std::size_t size() const { return n_; }
    double teleport() const { return teleport_; }

    std::span<const ColEntry> column(NodeIndex src) const {
        return {entries_.data() + col_ptr_[src], entries_.data() + col_ptr_[src + 1]};
    }
    bool dangling(NodeIndex src) const { return dangling_[src] != 0; }
    std::size_t dangling_count() const { return dangling_count_; }

    void multiply(std::span<const double> in, std::span<double> out) const;

    friend TransitionMatrix build_transition(const SingleRelationalGraph &, const SurfConfig &);

private:
    std::size_t n_ = 0;
    double teleport_ = 0.85;
    std::vector<std::size_t> col_ptr_;
    std::vector<ColEntry> entries_;
    std::vector<std::uint8_t> dangling_;
    std::size_t dangling_count_ = 0;
};

struct StationaryDistribution {
    std::vector<double> values;
    std::size_t iterations = 0;
    double residual = 0.0;
};

/**
 * Adjusted node and relation transition tensors of a multi-relational graph.
 * Node fibers are stochastic over destinations per (source, relation);
 * relation fibers are stochastic over relations per (destination, source).
 * Teleportation applies to the node tensor only.
 */
class MultiRelTransition {
public:
    std::size_t node_count() const { return n_; }
    std::size_t relation_count() const { return r_; }
    double teleport() const { return teleport_; }

    std::span<const ColEntry> column(RelIndex rel, NodeIndex src) const {
        const auto &ptr = col_ptr_[rel];
        return {entries_.data() + ptr[src], entries_.data() + ptr[src + 1]};
    }
    bool dangling(RelIndex rel, NodeIndex src) const { return dangling_[rel * n_ + src] != 0; }

    struct PairFiber {
        NodeIndex dst; // i: arc end
        NodeIndex src; // j: arc start
    };
    /// Connected (dst, src) pairs; probs() row k holds the relation fiber of
    /// fibers()[k]. All other pairs carry the uniform 1/|R| fiber.
    const std::vector<PairFiber> &fibers() const { return fibers_; }
    std::span<const double> fiber_probs(std::size_t k) const {
        return {rel_probs_.data() + k * r_, r_};
    }

    /// x-update of the MultiRank sweep under the adjusted tensors.
    void step_nodes(std::span<const double> x, std::span<const double> y, std::span<double> out) const;
    /// y-update; a pure function of x.
    void step_relations(std::span<const double> x, std::span<double> out) const;

    friend MultiRelTransition build_multirel_transitions(const MultiRelationalGraph &, const SurfConfig &);

private:
    std::size_t n_ = 0;
    std::size_t r_ = 0;
    double teleport_ = 0.85;
    std::vector<std::vector<std::size_t>> col_ptr_; // per relation
    std::vector<ColEntry> entries_;
    std::vector<std::uint8_t> dangling_; // rel * n + src
    std::vector<PairFiber> fibers_;
    std::vector<double> rel_probs_;
};

struct MultiRankResult {
    std::vector<double> node_dist;     // x'
    std::vector<double> relation_dist; // y
    std::size_t iterations = 0;
    double node_residual = 0.0;
    double relation_residual = 0.0;
};

TransitionMatrix build_transition(const SingleRelationalGraph &g, const SurfConfig &cfg = {});
StationaryDistribution power_method(const TransitionMatrix &t, const SurfConfig &cfg = {});

MultiRelTransition build_multirel_transitions(const MultiRelationalGraph &g, const SurfConfig &cfg = {});
MultiRankResult multirank(const MultiRelTransition &t, const SurfConfig &cfg = {});

} // namespace mrse
