#pragma once

#include "amoc/core.hpp"
#include "amoc/dataset.hpp"

#include <vector>

namespace amoc {

struct ClusteringResult;

/// A hard partition: assignments[i] is the cluster/class of point i, and
/// every index in 0..k-1 occurs at least once.
using Partition = std::vector<int>;

/// 1 + max index of a partition; validates the 0..k-1 occupancy invariant.
int partition_size(const Partition& p);

/// Co-occurrence counts between two partitions over the same m points.
struct ContingencyTable {
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> counts;  // k1 x k2
  std::vector<long long> row_sums;
  std::vector<long long> col_sums;
  long long total = 0;
};

ContingencyTable contingency(const Partition& p, const Partition& q);

/// Fraction of point pairs on which the two partitions agree. In [0, 1].
double rand_index(const Partition& p, const Partition& q);

/// Hubert-Arabie chance-corrected Rand index. Degenerate denominator
/// (both partitions all-singletons or all-one-cluster): 1 if the partitions
/// are identical, 0 otherwise.
double adjusted_rand(const Partition& p, const Partition& q);

/// Mean silhouette width over all points, Euclidean distance; members of
/// singleton clusters contribute 0. Requires k >= 2. In [-1, 1].
double silhouette(const Dataset& dataset, const Partition& p);

/// Davies-Bouldin index (lower is better). Throws when two centroids
/// coincide, naming the pair.
double davies_bouldin(const Dataset& dataset, const ClusteringResult& result);

/// CS measure (lower is better): summed mean within-cluster maximum pairwise
/// distance over summed nearest-centroid separation.
double cs_measure(const Dataset& dataset, const ClusteringResult& result);

/// Misclassification percentage in [0, 100] under the best injective mapping
/// of clusters to ground-truth classes (optimal rectangular assignment;
/// unmapped clusters count entirely as errors).
double error_rate(const Partition& predicted, const Partition& truth);

}  // namespace amoc
