#include "mrse/surfing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace mrse {

namespace {

double l1_diff(std::span<const double> a, std::span<const double> b) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        total += std::abs(a[i] - b[i]);
    return total;
}

void renormalize(std::span<double> v) {
    const double total = std::accumulate(v.begin(), v.end(), 0.0);
    if (total > 0.0)
        for (double &x : v)
            x /= total;
}

} // namespace

// ---------------------------------------------------------------------------
// Single-relational chain

TransitionMatrix build_transition(const SingleRelationalGraph &g, const SurfConfig &cfg) {
    cfg.validate();
    if (g.node_count() == 0)
        throw std::invalid_argument("graph has no nodes");
    const std::size_t n = g.node_count();

    std::vector<double> out_weight(n, 0.0);
    for (const auto &a : g.arcs())
        out_weight[a.src] += a.weight;

    // bucket arcs by source column
    std::vector<std::size_t> counts(n + 1, 0);
    for (const auto &a : g.arcs())
        if (out_weight[a.src] > 0.0)
            ++counts[a.src + 1];
    TransitionMatrix t;
    t.n_ = n;
    t.teleport_ = cfg.teleport;
    t.col_ptr_.assign(n + 1, 0);
    std::partial_sum(counts.begin(), counts.end(), t.col_ptr_.begin());
    t.entries_.resize(t.col_ptr_[n]);
    std::vector<std::size_t> cursor(t.col_ptr_.begin(), t.col_ptr_.end() - 1);
    for (const auto &a : g.arcs()) {
        if (out_weight[a.src] <= 0.0)
            continue;
        t.entries_[cursor[a.src]++] = {a.dst, a.weight / out_weight[a.src]};
    }
    t.dangling_.assign(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
        if (out_weight[v] <= 0.0) {
            t.dangling_[v] = 1;
            ++t.dangling_count_;
        }
    }
    return t;
}

void TransitionMatrix::multiply(std::span<const double> in, std::span<double> out) const {
    if (in.size() != n_ || out.size() != n_)
        throw std::invalid_argument("dimension mismatch");
    double dangling_mass = 0.0;
    for (std::size_t v = 0; v < n_; ++v)
        if (dangling_[v])
            dangling_mass += in[v];
    const double base = (teleport_ * dangling_mass + (1.0 - teleport_)) / static_cast<double>(n_);
    std::fill(out.begin(), out.end(), base);
    for (std::size_t src = 0; src < n_; ++src) {
        const double mass = teleport_ * in[src];
        if (mass == 0.0)
            continue;
        for (std::size_t k = col_ptr_[src]; k < col_ptr_[src + 1]; ++k)
            out[entries_[k].dst] += mass * entries_[k].prob;
    }
}

StationaryDistribution power_method(const TransitionMatrix &t, const SurfConfig &cfg) {
    cfg.validate();
    const std::size_t n = t.size();
    StationaryDistribution result;
    result.values.assign(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n, 0.0);

    double diff = 0.0;
    for (std::size_t iter = 1; iter <= cfg.max_iterations; ++iter) {
        t.multiply(result.values, next);
        renormalize(next);
        diff = l1_diff(result.values, next);
        result.values.swap(next);
        if (diff <= cfg.tolerance) {
            result.iterations = iter;
            t.multiply(result.values, next);
            result.residual = l1_diff(result.values, next);
            return result;
        }
    }
    throw ConvergenceError("power method did not converge after " + std::to_string(cfg.max_iterations) +
                               " iterations (residual " + std::to_string(diff) + ")",
                           diff, cfg.max_iterations);
}

// ---------------------------------------------------------------------------
// Multi-relational chain

MultiRelTransition build_multirel_transitions(const MultiRelationalGraph &g, const SurfConfig &cfg) {
    cfg.validate();
    if (g.node_count() == 0 || g.relation_count() == 0)
        throw std::invalid_argument("graph needs at least one node and one relation");
    const std::size_t n = g.node_count();
    const std::size_t r = g.relation_count();

    MultiRelTransition t;
    t.n_ = n;
    t.r_ = r;
    t.teleport_ = cfg.teleport;

    std::vector<double> col_weight(r * n, 0.0); // per (relation, source)
    for (const auto &a : g.arcs())
        col_weight[a.rel * n + a.src] += a.weight;

    std::vector<std::vector<std::size_t>> counts(r, std::vector<std::size_t>(n + 1, 0));
    for (const auto &a : g.arcs())
        if (col_weight[a.rel * n + a.src] > 0.0)
            ++counts[a.rel][a.src + 1];
    t.col_ptr_.assign(r, std::vector<std::size_t>(n + 1, 0));
    std::size_t offset = 0;
    for (std::size_t rel = 0; rel < r; ++rel) {
        t.col_ptr_[rel][0] = offset;
        for (std::size_t v = 0; v < n; ++v)
            t.col_ptr_[rel][v + 1] = t.col_ptr_[rel][v] + counts[rel][v + 1];
        offset = t.col_ptr_[rel][n];
    }
    t.entries_.resize(offset);
    std::vector<std::vector<std::size_t>> cursor = t.col_ptr_;
    for (const auto &a : g.arcs()) {
        const double cw = col_weight[a.rel * n + a.src];
        if (cw <= 0.0)
            continue;
        t.entries_[cursor[a.rel][a.src]++] = {a.dst, a.weight / cw};
    }

    t.dangling_.assign(r * n, 0);
    for (std::size_t rel = 0; rel < r; ++rel)
        for (std::size_t v = 0; v < n; ++v)
            if (col_weight[rel * n + v] <= 0.0)
                t.dangling_[rel * n + v] = 1;

    // relation fibers: stochastic over relations per connected (dst, src) pair
    std::map<std::pair<NodeIndex, NodeIndex>, std::vector<double>> fiber_weight;
    for (const auto &a : g.arcs()) {
        auto &fiber = fiber_weight[{a.dst, a.src}];
        if (fiber.empty())
            fiber.assign(r, 0.0);
        fiber[a.rel] += a.weight;
    }
    t.fibers_.reserve(fiber_weight.size());
    t.rel_probs_.reserve(fiber_weight.size() * r);
    for (const auto &[pair, weights] : fiber_weight) {
        const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        if (total <= 0.0)
            continue; // all-zero fiber: handled by the uniform fallback
        t.fibers_.push_back({pair.first, pair.second});
        for (double w : weights)
            t.rel_probs_.push_back(w / total);
    }
    return t;
}

void MultiRelTransition::step_nodes(std::span<const double> x, std::span<const double> y,
                                    std::span<double> out) const {
    if (x.size() != n_ || y.size() != r_ || out.size() != n_)
        throw std::invalid_argument("dimension mismatch");
    // y-weighted mass of dangling (source, relation) fibers
    double dangling_mass = 0.0;
    for (std::size_t rel = 0; rel < r_; ++rel) {
        double per_rel = 0.0;
        for (std::size_t src = 0; src < n_; ++src)
            if (dangling_[rel * n_ + src])
                per_rel += x[src];
        dangling_mass += y[rel] * per_rel;
    }
    const double base = (teleport_ * dangling_mass + (1.0 - teleport_)) / static_cast<double>(n_);
    std::fill(out.begin(), out.end(), base);
    for (std::size_t rel = 0; rel < r_; ++rel) {
        const auto &ptr = col_ptr_[rel];
        for (std::size_t src = 0; src < n_; ++src) {
            const double mass = teleport_ * y[rel] * x[src];
            if (mass == 0.0)
                continue;
            for (std::size_t k = ptr[src]; k < ptr[src + 1]; ++k)
                out[entries_[k].dst] += mass * entries_[k].prob;
        }
    }
}

void MultiRelTransition::step_relations(std::span<const double> x, std::span<double> out) const {
    if (x.size() != n_ || out.size() != r_)
        throw std::invalid_argument("dimension mismatch");
    // connected pairs carry their normalized fibers; every other (dst, src)
    // pair contributes the uniform 1/|R| fiber, summed in closed form
    std::fill(out.begin(), out.end(), 0.0);
    double connected_mass = 0.0;
    for (std::size_t k = 0; k < fibers_.size(); ++k) {
        const double mass = x[fibers_[k].dst] * x[fibers_[k].src];
        connected_mass += mass;
        const double *probs = rel_probs_.data() + k * r_;
        for (std::size_t rel = 0; rel < r_; ++rel)
            out[rel] += mass * probs[rel];
    }
    double total_mass = 0.0;
    for (double v : x)
        total_mass += v;
    const double uniform = (total_mass * total_mass - connected_mass) / static_cast<double>(r_);
    for (std::size_t rel = 0; rel < r_; ++rel)
        out[rel] += uniform;
}

MultiRankResult multirank(const MultiRelTransition &t, const SurfConfig &cfg) {
    cfg.validate();
    const std::size_t n = t.node_count();
    const std::size_t r = t.relation_count();
    MultiRankResult result;
    result.node_dist.assign(n, 1.0 / static_cast<double>(n));
    result.relation_dist.assign(r, 1.0 / static_cast<double>(r));
    std::vector<double> next_x(n, 0.0);
    std::vector<double> next_y(r, 0.0);

    double dx = 0.0;
    double dy = 0.0;
    for (std::size_t iter = 1; iter <= cfg.max_iterations; ++iter) {
        t.step_nodes(result.node_dist, result.relation_dist, next_x);
        renormalize(next_x);
        dx = l1_diff(result.node_dist, next_x);
        result.node_dist.swap(next_x);

        t.step_relations(result.node_dist, next_y);
        renormalize(next_y);
        dy = l1_diff(result.relation_dist, next_y);
        result.relation_dist.swap(next_y);

        if (dx <= cfg.tolerance && dy <= cfg.tolerance) {
            result.iterations = iter;
            t.step_nodes(result.node_dist, result.relation_dist, next_x);
            result.node_residual = l1_diff(result.node_dist, next_x);
            t.step_relations(result.node_dist, next_y);
            renormalize(next_y);
            result.relation_residual = l1_diff(result.relation_dist, next_y);
            return result;
        }
    }
    throw ConvergenceError("multirank did not converge after " + std::to_string(cfg.max_iterations) +
                               " iterations (node residual " + std::to_string(dx) + ", relation residual " +
                               std::to_string(dy) + ")",
                           dx, cfg.max_iterations);
}

} // namespace mrse
