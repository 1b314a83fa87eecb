/*
 * metrics.hpp
 *
 * Clustering agreement metrics: normalized mutual information (arithmetic-
 * mean normalization), adjusted Rand index, and unsupervised clustering
 * accuracy via an optimal cluster-to-class assignment. All three are
 * invariant under relabeling of the predicted community ids.
 */

#pragma once

#include <vector>

#include "mrse/graph.hpp"

namespace mrse {

struct ContingencyTable {
    std::size_t rows = 0; // predicted clusters
    std::size_t cols = 0; // true classes
    std::vector<long long> counts; // row-major
    std::vector<long long> row_sums;
    std::vector<long long> col_sums;
    long long total = 0;

    long long at(std::size_t r, std::size_t c) const { return counts[r * cols + c]; }

    static ContingencyTable build(const Partition &pred, const GroundTruthLabels &truth);
};

/// NMI in [0, 1]. When either marginal entropy vanishes the value is 0 unless
/// the partitions are identical, in which case it is 1.
double nmi(const Partition &pred, const GroundTruthLabels &truth);

/// Adjusted Rand index in [-1, 1] under the permutation model.
double ari(const Partition &pred, const GroundTruthLabels &truth);

/// Best fraction of correctly assigned nodes over injective cluster-to-class
/// assignments, solved exactly on the zero-padded square contingency table.
double acc(const Partition &pred, const GroundTruthLabels &truth);

} // namespace mrse
