#include "amoc/validity.hpp"

#include "amoc/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace amoc {

namespace {

long long pairs2(long long x) { return x * (x - 1) / 2; }

void check_same_length(const Partition& p, const Partition& q, const char* op) {
  if (p.size() != q.size()) {
    throw std::invalid_argument(std::string(op) + ": partition lengths differ (" +
                                std::to_string(p.size()) + " vs " +
                                std::to_string(q.size()) + ")");
  }
  if (p.empty()) {
    throw std::invalid_argument(std::string(op) + ": empty partitions");
  }
}

struct PairCounts {
  long long together_both = 0;   // sum C(n_ij, 2)
  long long together_p = 0;      // sum C(a_i, 2)
  long long together_q = 0;      // sum C(b_j, 2)
  long long total_pairs = 0;     // C(m, 2)
};

PairCounts pair_counts(const ContingencyTable& table) {
  PairCounts pc;
  for (Eigen::Index i = 0; i < table.counts.rows(); ++i) {
    for (Eigen::Index j = 0; j < table.counts.cols(); ++j) {
      pc.together_both += pairs2(table.counts(i, j));
    }
  }
  for (long long a : table.row_sums) pc.together_p += pairs2(a);
  for (long long b : table.col_sums) pc.together_q += pairs2(b);
  pc.total_pairs = pairs2(table.total);
  return pc;
}

// Maximum total overlap over injective cluster-to-class mappings: Hungarian
// assignment with potentials on the (square-padded) count table, O(n^3).
long long max_assignment_overlap(
    const Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>& counts) {
  const int rows = static_cast<int>(counts.rows());
  const int cols = static_cast<int>(counts.cols());
  const int n = std::max(rows, cols);
  const long long kInf = std::numeric_limits<long long>::max() / 4;
  auto cost = [&](int i, int j) -> long long {
    return (i < rows && j < cols) ? -counts(i, j) : 0;  // minimize negated overlap
  };
  std::vector<long long> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<long long> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      long long delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const long long cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
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
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  long long overlap = 0;
  for (int j = 1; j <= n; ++j) {
    const int i = match[j];
    if (i >= 1 && i - 1 < rows && j - 1 < cols) overlap += counts(i - 1, j - 1);
  }
  return overlap;
}

}  // namespace

int partition_size(const Partition& p) {
  if (p.empty()) {
    throw std::invalid_argument("partition_size: empty partition");
  }
  int k = 0;
  for (int c : p) {
    if (c < 0) throw std::invalid_argument("partition_size: negative cluster index");
    k = std::max(k, c + 1);
  }
  std::vector<char> seen(k, 0);
  for (int c : p) seen[c] = 1;
  for (int c = 0; c < k; ++c) {
    if (!seen[c]) {
      throw std::invalid_argument("partition_size: cluster index " +
                                  std::to_string(c) + " is unused");
    }
  }
  return k;
}

ContingencyTable contingency(const Partition& p, const Partition& q) {
  check_same_length(p, q, "contingency");
  const int k1 = partition_size(p);
  const int k2 = partition_size(q);
  ContingencyTable table;
  table.counts.setZero(k1, k2);
  for (size_t i = 0; i < p.size(); ++i) {
    table.counts(p[i], q[i]) += 1;
  }
  table.row_sums.assign(k1, 0);
  table.col_sums.assign(k2, 0);
  for (int i = 0; i < k1; ++i) {
    for (int j = 0; j < k2; ++j) {
      table.row_sums[i] += table.counts(i, j);
      table.col_sums[j] += table.counts(i, j);
    }
  }
  table.total = static_cast<long long>(p.size());
  return table;
}

double rand_index(const Partition& p, const Partition& q) {
  check_same_length(p, q, "rand_index");
  if (p.size() < 2) {
    throw std::invalid_argument("rand_index: need m >= 2");
  }
  const PairCounts pc = pair_counts(contingency(p, q));
  const long long agreements =
      pc.total_pairs - pc.together_p - pc.together_q + 2 * pc.together_both;
  return static_cast<double>(agreements) / static_cast<double>(pc.total_pairs);
}

double adjusted_rand(const Partition& p, const Partition& q) {
  check_same_length(p, q, "adjusted_rand");
  if (p.size() < 2) {
    throw std::invalid_argument("adjusted_rand: need m >= 2");
  }
  const PairCounts pc = pair_counts(contingency(p, q));
  const double expected = static_cast<double>(pc.together_p) *
                          static_cast<double>(pc.together_q) /
                          static_cast<double>(pc.total_pairs);
  const double numerator = static_cast<double>(pc.together_both) - expected;
  const double denominator =
      0.5 * (static_cast<double>(pc.together_p) + static_cast<double>(pc.together_q)) -
      expected;
  if (denominator == 0.0) {
    // Both partitions all-singletons or both all-one-cluster.
    return pc.together_p == pc.together_q && pc.together_both == pc.together_p
               ? 1.0
               : 0.0;
  }
  return numerator / denominator;
}

double silhouette(const Dataset& dataset, const Partition& p) {
  const int m = dataset.m();
  if (static_cast<int>(p.size()) != m) {
    throw std::invalid_argument("silhouette: partition length != m");
  }
  const int k = partition_size(p);
  if (k < 2) {
    throw std::invalid_argument("silhouette: need at least 2 clusters");
  }
  std::vector<int> sizes(k, 0);
  for (int c : p) sizes[c] += 1;
  double sum = 0.0;
  std::vector<double> dist_sum(k);
  for (int i = 0; i < m; ++i) {
    std::fill(dist_sum.begin(), dist_sum.end(), 0.0);
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      dist_sum[p[j]] += euclidean(dataset.points.row(i), dataset.points.row(j));
    }
    const int own = p[i];
    if (sizes[own] == 1) continue;  // singleton convention: s = 0
    const double a = dist_sum[own] / (sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c == own) continue;
      b = std::min(b, dist_sum[c] / sizes[c]);
    }
    const double denom = std::max(a, b);
    sum += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return sum / m;
}

double davies_bouldin(const Dataset& dataset, const ClusteringResult& result) {
  const int k = result.k;
  if (k < 2) {
    throw std::invalid_argument("davies_bouldin: need at least 2 clusters");
  }
  std::vector<double> scatter(k, 0.0);
  std::vector<int> sizes(k, 0);
  for (int i = 0; i < dataset.m(); ++i) {
    const int c = result.assignments[i];
    scatter[c] += euclidean(dataset.points.row(i), result.centroids.row(c));
    sizes[c] += 1;
  }
  for (int c = 0; c < k; ++c) scatter[c] /= sizes[c];
  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    double worst = 0.0;
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      const double d = euclidean(result.centroids.row(i), result.centroids.row(j));
      if (d == 0.0) {
        throw std::runtime_error("davies_bouldin: centroids " + std::to_string(i) +
                                 " and " + std::to_string(j) + " coincide");
      }
      worst = std::max(worst, (scatter[i] + scatter[j]) / d);
    }
    total += worst;
  }
  return total / k;
}

double cs_measure(const Dataset& dataset, const ClusteringResult& result) {
  const int k = result.k;
  if (k < 2) {
    throw std::invalid_argument("cs_measure: need at least 2 clusters");
  }
  std::vector<std::vector<int>> members(k);
  for (int i = 0; i < dataset.m(); ++i) {
    members[result.assignments[i]].push_back(i);
  }
  double numerator = 0.0;
  for (int c = 0; c < k; ++c) {
    double sum_max = 0.0;
    for (int x : members[c]) {
      double far = 0.0;
      for (int y : members[c]) {
        far = std::max(far, euclidean(dataset.points.row(x), dataset.points.row(y)));
      }
      sum_max += far;
    }
    numerator += sum_max / members[c].size();
  }
  double denominator = 0.0;
  for (int i = 0; i < k; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      nearest = std::min(nearest,
                         euclidean(result.centroids.row(i), result.centroids.row(j)));
    }
    denominator += nearest;
  }
  if (denominator == 0.0) {
    throw std::runtime_error("cs_measure: zero centroid-separation denominator");
  }
  return numerator / denominator;
}

double error_rate(const Partition& predicted, const Partition& truth) {
  check_same_length(predicted, truth, "error_rate");
  const ContingencyTable table = contingency(predicted, truth);
  const long long matched = max_assignment_overlap(table.counts);
  const long long m = table.total;
  return 100.0 * static_cast<double>(m - matched) / static_cast<double>(m);
}

}  // namespace amoc
