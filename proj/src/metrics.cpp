#include "mrse/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mrse {

ContingencyTable ContingencyTable::build(const Partition &pred, const GroundTruthLabels &truth) {
    const std::size_t n = truth.class_of.size();
    if (n == 0)
        throw std::invalid_argument("empty ground truth");
    const auto member_of = pred.membership(n); // throws on node-set mismatch
    ContingencyTable table;
    table.rows = pred.community_count();
    table.cols = truth.class_count;
    table.counts.assign(table.rows * table.cols, 0);
    table.row_sums.assign(table.rows, 0);
    table.col_sums.assign(table.cols, 0);
    table.total = static_cast<long long>(n);
    for (std::size_t v = 0; v < n; ++v) {
        const std::size_t r = member_of[v];
        const std::size_t c = truth.class_of[v];
        if (c >= table.cols)
            throw std::invalid_argument("class index out of range");
        ++table.counts[r * table.cols + c];
        ++table.row_sums[r];
        ++table.col_sums[c];
    }
    return table;
}

namespace {

double entropy_nats(const std::vector<long long> &sums, long long total) {
    double h = 0.0;
    for (long long s : sums) {
        if (s > 0) {
            const double p = static_cast<double>(s) / static_cast<double>(total);
            h -= p * std::log(p);
        }
    }
    return h;
}

bool identical_partitions(const ContingencyTable &t) {
    // every cluster maps onto exactly one class and vice versa
    if (t.rows != t.cols)
        return false;
    for (std::size_t r = 0; r < t.rows; ++r) {
        long long nonzero = 0;
        for (std::size_t c = 0; c < t.cols; ++c)
            if (t.at(r, c) > 0) {
                ++nonzero;
                if (t.at(r, c) != t.row_sums[r] || t.at(r, c) != t.col_sums[c])
                    return false;
            }
        if (nonzero != 1)
            return false;
    }
    return true;
}

double pairs(long long k) {
    return 0.5 * static_cast<double>(k) * static_cast<double>(k - 1);
}

/**
 * Exact minimum-cost assignment on a square matrix (Hungarian algorithm with
 * potentials, O(k^3)). Returns the column matched to each row.
 */
std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<double>> &cost) {
    const std::size_t k = cost.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0);
    std::vector<std::size_t> match(k + 1, 0); // column -> row (1-based, 0 = free)
    std::vector<std::size_t> way(k + 1, 0);

    for (std::size_t i = 1; i <= k; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(k + 1, inf);
        std::vector<char> used(k + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = match[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= k; ++j) {
                if (used[j])
                    continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= k; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<std::size_t> row_to_col(k, 0);
    for (std::size_t j = 1; j <= k; ++j)
        if (match[j] != 0)
            row_to_col[match[j] - 1] = j - 1;
    return row_to_col;
}

} // namespace

double nmi(const Partition &pred, const GroundTruthLabels &truth) {
    const ContingencyTable t = ContingencyTable::build(pred, truth);
    const double h_pred = entropy_nats(t.row_sums, t.total);
    const double h_true = entropy_nats(t.col_sums, t.total);
    if (h_pred <= 0.0 || h_true <= 0.0)
        return identical_partitions(t) ? 1.0 : 0.0;
    double mi = 0.0;
    for (std::size_t r = 0; r < t.rows; ++r) {
        for (std::size_t c = 0; c < t.cols; ++c) {
            const long long n_rc = t.at(r, c);
            if (n_rc <= 0)
                continue;
            const double p = static_cast<double>(n_rc) / static_cast<double>(t.total);
            mi += p * std::log(static_cast<double>(t.total) * static_cast<double>(n_rc) /
                               (static_cast<double>(t.row_sums[r]) * static_cast<double>(t.col_sums[c])));
        }
    }
    return mi / (0.5 * (h_pred + h_true));
}

double ari(const Partition &pred, const GroundTruthLabels &truth) {
    const ContingencyTable t = ContingencyTable::build(pred, truth);
    double index = 0.0;
    for (long long n_rc : t.counts)
        index += pairs(n_rc);
    double sum_rows = 0.0;
    for (long long s : t.row_sums)
        sum_rows += pairs(s);
    double sum_cols = 0.0;
    for (long long s : t.col_sums)
        sum_cols += pairs(s);
    const double all = pairs(t.total);
    const double expected = all > 0.0 ? sum_rows * sum_cols / all : 0.0;
    const double max_index = 0.5 * (sum_rows + sum_cols);
    const double denom = max_index - expected;
    if (denom == 0.0)
        return 1.0; // both partitions trivially agree on all pairs
    return (index - expected) / denom;
}

double acc(const Partition &pred, const GroundTruthLabels &truth) {
    const ContingencyTable t = ContingencyTable::build(pred, truth);
    const std::size_t k = std::max(t.rows, t.cols);
    // maximize matched counts == minimize negated counts on the padded table
    std::vector<std::vector<double>> cost(k, std::vector<double>(k, 0.0));
    for (std::size_t r = 0; r < t.rows; ++r)
        for (std::size_t c = 0; c < t.cols; ++c)
            cost[r][c] = -static_cast<double>(t.at(r, c));
    const auto row_to_col = min_cost_assignment(cost);
    long long matched = 0;
    for (std::size_t r = 0; r < t.rows; ++r)
        if (row_to_col[r] < t.cols)
            matched += t.at(r, row_to_col[r]);
    return static_cast<double>(matched) / static_cast<double>(t.total);
}

} // namespace mrse
