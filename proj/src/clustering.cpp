#include "amoc/clustering.hpp"

#include "amoc/validity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace amoc {

namespace {

constexpr int kDistanceCacheLimit = 2048;  // full m x m cache above this is too big

void check_seed_args(const Dataset& dataset, int k, const char* op) {
  if (k < 2 || k > dataset.m()) {
    throw std::invalid_argument(std::string(op) + ": k must be in [2, m], got k=" +
                                std::to_string(k) + " with m=" +
                                std::to_string(dataset.m()));
  }
}

int nearest_centroid(const Matrix& points, const Matrix& centroids, int i) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int c = 0; c < centroids.rows(); ++c) {
    const double d = (points.row(i) - centroids.row(c)).squaredNorm();
    if (d < best_d) {  // strict: ties keep the lowest index
      best_d = d;
      best = c;
    }
  }
  return best;
}

double objective(const Matrix& points, const Matrix& centroids,
                 const std::vector<int>& assignments) {
  double sse = 0.0;
  for (int i = 0; i < points.rows(); ++i) {
    sse += (points.row(i) - centroids.row(assignments[i])).squaredNorm();
  }
  return sse;
}

std::vector<std::vector<int>> members_by_cluster(const std::vector<int>& assignments,
                                                 int k) {
  std::vector<std::vector<int>> members(k);
  for (size_t i = 0; i < assignments.size(); ++i) {
    members[assignments[i]].push_back(static_cast<int>(i));
  }
  return members;
}

double mean_cross_distance(const Matrix& points, const std::vector<int>& a,
                           const std::vector<int>& b, const Matrix* cache) {
  double sum = 0.0;
  for (int x : a) {
    for (int y : b) {
      sum += cache ? (*cache)(x, y)
                   : euclidean(points.row(x), points.row(y));
    }
  }
  return sum / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

}  // namespace

Matrix seed_random(const Dataset& dataset, int k, RandomSource& rng) {
  check_seed_args(dataset, k, "seed_random");
  const std::vector<int> chosen = rng.choose_distinct(dataset.m(), k);
  Matrix centroids(k, dataset.n());
  for (int c = 0; c < k; ++c) {
    centroids.row(c) = dataset.points.row(chosen[c]);
  }
  return centroids;
}

Matrix seed_kmeanspp(const Dataset& dataset, int k, RandomSource& rng) {
  check_seed_args(dataset, k, "seed_kmeanspp");
  const int m = dataset.m();
  Matrix centroids(k, dataset.n());
  std::vector<char> chosen(m, 0);
  const int first = static_cast<int>(rng.below(m));
  centroids.row(0) = dataset.points.row(first);
  chosen[first] = 1;

  std::vector<double> dist2(m);
  for (int i = 0; i < m; ++i) {
    dist2[i] = (dataset.points.row(i) - centroids.row(0)).squaredNorm();
  }
  for (int c = 1; c < k; ++c) {
    const double total = std::accumulate(dist2.begin(), dist2.end(), 0.0);
    int pick = -1;
    if (total > 0.0) {
      double target = rng.uniform01() * total;
      for (int i = 0; i < m; ++i) {
        target -= dist2[i];
        if (target <= 0.0 && dist2[i] > 0.0) {
          pick = i;
          break;
        }
      }
      if (pick < 0) {  // floating-point tail: last positive-mass index
        for (int i = m - 1; i >= 0; --i) {
          if (dist2[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    } else {
      // All remaining mass is zero (duplicates): uniform over unchosen.
      int remaining = static_cast<int>(std::count(chosen.begin(), chosen.end(), 0));
      int skip = static_cast<int>(rng.below(remaining));
      for (int i = 0; i < m; ++i) {
        if (!chosen[i] && skip-- == 0) {
          pick = i;
          break;
        }
      }
    }
    centroids.row(c) = dataset.points.row(pick);
    chosen[pick] = 1;
    for (int i = 0; i < m; ++i) {
      dist2[i] = std::min(dist2[i],
                          (dataset.points.row(i) - centroids.row(c)).squaredNorm());
    }
  }
  return centroids;
}

ClusteringResult lloyd(const Dataset& dataset, const Matrix& initial_centroids,
                       int max_iterations) {
  const int m = dataset.m();
  const int k = static_cast<int>(initial_centroids.rows());
  if (k < 1 || k > m) {
    throw std::invalid_argument("lloyd: need 1 <= k <= m");
  }
  if (initial_centroids.cols() != dataset.n()) {
    throw std::invalid_argument("lloyd: centroid dimension != dataset dimension");
  }

  ClusteringResult result;
  result.k = k;
  result.centroids = initial_centroids;
  result.assignments.assign(m, -1);

  std::vector<int> sizes(k, 0);
  for (int iter = 0; iter < max_iterations; ++iter) {
    result.iterations = iter + 1;
    bool changed = false;
    std::fill(sizes.begin(), sizes.end(), 0);
    for (int i = 0; i < m; ++i) {
      const int c = nearest_centroid(dataset.points, result.centroids, i);
      if (c != result.assignments[i]) {
        result.assignments[i] = c;
        changed = true;
      }
      sizes[c] += 1;
    }

    // Repair at most one empty cluster per iteration: the point farthest
    // from its assigned centroid becomes the empty cluster's centroid.
    bool repaired = false;
    for (int c = 0; c < k && !repaired; ++c) {
      if (sizes[c] != 0) continue;
      int farthest = -1;
      double worst = -1.0;
      for (int i = 0; i < m; ++i) {
        if (sizes[result.assignments[i]] <= 1) continue;  // keep donors nonempty
        const double d =
            (dataset.points.row(i) - result.centroids.row(result.assignments[i]))
                .squaredNorm();
        if (d > worst) {
          worst = d;
          farthest = i;
        }
      }
      if (farthest >= 0) {
        sizes[result.assignments[farthest]] -= 1;
        result.assignments[farthest] = c;
        sizes[c] = 1;
        result.centroids.row(c) = dataset.points.row(farthest);
        repaired = true;
      }
    }

    for (int c = 0; c < k; ++c) {
      if (sizes[c] == 0) continue;  // still empty: keep centroid, retry next pass
      RowVector sum = RowVector::Zero(dataset.n());
      for (int i = 0; i < m; ++i) {
        if (result.assignments[i] == c) sum += dataset.points.row(i);
      }
      result.centroids.row(c) = sum / sizes[c];
    }

    result.sse = objective(dataset.points, result.centroids, result.assignments);
    result.sse_per_iteration.push_back(result.sse);
    const bool any_empty = std::find(sizes.begin(), sizes.end(), 0) != sizes.end();
    if (!changed && !repaired && !any_empty) break;
  }

  // Iteration cap with clusters still empty (degenerate duplicate-heavy
  // data): compact so the finalized result has no empty clusters.
  if (std::find(sizes.begin(), sizes.end(), 0) != sizes.end()) {
    std::vector<int> remap(k, -1);
    int next = 0;
    for (int c = 0; c < k; ++c) {
      if (sizes[c] > 0) remap[c] = next++;
    }
    Matrix compacted(next, dataset.n());
    for (int c = 0; c < k; ++c) {
      if (remap[c] >= 0) compacted.row(remap[c]) = result.centroids.row(c);
    }
    for (int& a : result.assignments) a = remap[a];
    result.centroids = std::move(compacted);
    result.k = next;
    result.sse = objective(dataset.points, result.centroids, result.assignments);
  }
  return result;
}

namespace {

// Membership row for one point given squared distances to all centroids.
void membership_row(const std::vector<double>& d2, double exponent,
                    Eigen::Ref<Eigen::RowVectorXd> row) {
  const int k = static_cast<int>(d2.size());
  int zeros = 0;
  for (double d : d2) {
    if (d == 0.0) ++zeros;
  }
  if (zeros > 0) {
    for (int j = 0; j < k; ++j) row(j) = d2[j] == 0.0 ? 1.0 / zeros : 0.0;
    return;
  }
  for (int j = 0; j < k; ++j) {
    double denom = 0.0;
    for (int l = 0; l < k; ++l) {
      denom += std::pow(d2[j] / d2[l], exponent);
    }
    row(j) = 1.0 / denom;
  }
}

}  // namespace

FuzzyResult fuzzy_cmeans(const Dataset& dataset, int k, double fuzzifier,
                         RandomSource& rng, double tolerance,
                         int max_iterations) {
  if (fuzzifier <= 1.0) {
    throw std::invalid_argument("fuzzy_cmeans: fuzzifier must be > 1");
  }
  check_seed_args(dataset, k, "fuzzy_cmeans");
  const int m = dataset.m();
  const int n = dataset.n();
  const double exponent = 1.0 / (fuzzifier - 1.0);  // (d2_j/d2_l)^(1/(f-1)) == (d_j/d_l)^(2/(f-1))

  FuzzyResult result;
  result.fuzzifier = fuzzifier;
  result.centroids = seed_random(dataset, k, rng);
  result.membership.resize(m, k);

  std::vector<double> d2(k);
  auto refresh_memberships = [&](Matrix& target) {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < k; ++j) {
        d2[j] = (dataset.points.row(i) - result.centroids.row(j)).squaredNorm();
      }
      membership_row(d2, exponent, target.row(i));
    }
  };
  refresh_memberships(result.membership);

  Matrix next(m, k);
  for (int iter = 0; iter < max_iterations; ++iter) {
    for (int j = 0; j < k; ++j) {
      RowVector weighted = RowVector::Zero(n);
      double weight = 0.0;
      for (int i = 0; i < m; ++i) {
        const double w = std::pow(result.membership(i, j), fuzzifier);
        weighted += w * dataset.points.row(i);
        weight += w;
      }
      if (weight > 0.0) result.centroids.row(j) = weighted / weight;
    }
    refresh_memberships(next);
    const double delta = (next - result.membership).cwiseAbs().maxCoeff();
    result.membership.swap(next);
    if (delta < tolerance) break;
  }

  // Harden: argmax membership (ties to the lowest index), compact empties,
  // centroids as crisp member means.
  std::vector<int> assignments(m);
  for (int i = 0; i < m; ++i) {
    int best = 0;
    for (int j = 1; j < k; ++j) {
      if (result.membership(i, j) > result.membership(i, best)) best = j;
    }
    assignments[i] = best;
  }
  std::vector<int> sizes(k, 0);
  for (int a : assignments) sizes[a] += 1;
  std::vector<int> remap(k, -1);
  int hard_k = 0;
  for (int c = 0; c < k; ++c) {
    if (sizes[c] > 0) remap[c] = hard_k++;
  }
  ClusteringResult& hard = result.hardened;
  hard.k = hard_k;
  hard.assignments.resize(m);
  for (int i = 0; i < m; ++i) hard.assignments[i] = remap[assignments[i]];
  hard.centroids.resize(hard_k, n);
  const auto members = members_by_cluster(hard.assignments, hard_k);
  for (int c = 0; c < hard_k; ++c) {
    hard.centroids.row(c) = mean_point(dataset.points, members[c]);
  }
  hard.sse = objective(dataset.points, hard.centroids, hard.assignments);
  return result;
}

std::vector<double> cluster_probabilities(const ClusteringResult& result, int m) {
  if (m <= 0 || static_cast<int>(result.assignments.size()) != m) {
    throw std::invalid_argument("cluster_probabilities: inconsistent m");
  }
  std::vector<double> prob(result.k, 0.0);
  for (int a : result.assignments) prob[a] += 1.0;
  for (double& p : prob) p /= m;
  return prob;
}

double average_linkage(const Dataset& dataset, const ClusteringResult& result,
                       int i, int j) {
  if (i == j) {
    throw std::invalid_argument("average_linkage: cluster indices must differ");
  }
  if (i < 0 || j < 0 || i >= result.k || j >= result.k) {
    throw std::invalid_argument("average_linkage: cluster index out of range");
  }
  const auto members = members_by_cluster(result.assignments, result.k);
  if (members[i].empty() || members[j].empty()) {
    throw std::invalid_argument("average_linkage: empty cluster");
  }
  return mean_cross_distance(dataset.points, members[i], members[j], nullptr);
}

ClusteringResult merge_clusters(const Dataset& dataset,
                                const ClusteringResult& result, int src, int dst) {
  if (src == dst || src < 0 || dst < 0 || src >= result.k || dst >= result.k) {
    throw std::invalid_argument("merge_clusters: invalid cluster indices");
  }
  ClusteringResult merged;
  merged.k = result.k - 1;
  merged.assignments = result.assignments;
  for (int& a : merged.assignments) {
    if (a == src) a = dst;
    if (a > src) a -= 1;  // compact indices to 0..k-2
  }
  const auto members = members_by_cluster(merged.assignments, merged.k);
  merged.centroids.resize(merged.k, dataset.n());
  for (int c = 0; c < merged.k; ++c) {
    if (members[c].empty()) {
      throw std::invalid_argument("merge_clusters: source partition has an empty cluster");
    }
    merged.centroids.row(c) = mean_point(dataset.points, members[c]);
  }
  merged.sse = objective(dataset.points, merged.centroids, merged.assignments);
  return merged;
}

namespace {

struct AmocScorer {
  const Dataset& dataset;
  const AmocOptions& options;
  const Matrix* distance_cache;

  double operator()(const ClusteringResult& result) const {
    switch (options.criterion) {
      case MergeCriterion::kReferenceRand:
        return rand_index(result.assignments, *options.reference);
      case MergeCriterion::kInternalSilhouette:
        return silhouette(dataset, result.assignments);
    }
    throw std::logic_error("unreachable");
  }
};

}  // namespace

AmocResult amoc(const Dataset& dataset, const AmocOptions& options,
                RandomSource& rng) {
  const int m = dataset.m();
  const int k_max = options.k_max.value_or(
      static_cast<int>(std::lround(std::sqrt(static_cast<double>(m)))));
  if (k_max < 2 || k_max > m) {
    throw std::invalid_argument("amoc: k_max must be in [2, m], got " +
                                std::to_string(k_max));
  }
  if (options.criterion == MergeCriterion::kReferenceRand) {
    if (!options.reference) {
      throw std::invalid_argument(
          "amoc: REFERENCE_RAND criterion requires a reference partition");
    }
    if (static_cast<int>(options.reference->size()) != m) {
      throw std::invalid_argument("amoc: reference partition length != m");
    }
  }

  // Point-point distances are partition-independent; cache them once for
  // linkage search at benchmark scale.
  Matrix distances;
  const Matrix* cache = nullptr;
  if (m <= kDistanceCacheLimit) {
    distances.resize(m, m);
    for (int i = 0; i < m; ++i) {
      distances(i, i) = 0.0;
      for (int j = i + 1; j < m; ++j) {
        const double d = euclidean(dataset.points.row(i), dataset.points.row(j));
        distances(i, j) = d;
        distances(j, i) = d;
      }
    }
    cache = &distances;
  }
  const AmocScorer score{dataset, options, cache};

  AmocResult out;
  int step = 0;
  auto trace = [&](const char* action, int k, double value) {
    out.trace.push_back(AmocTraceEntry{step++, action, k, value});
  };
  auto seed = [&](int k) {
    return options.seeding == Seeding::kRandom ? seed_random(dataset, k, rng)
                                               : seed_kmeanspp(dataset, k, rng);
  };

  ClusteringResult current =
      lloyd(dataset, seed(k_max), options.lloyd_max_iterations);
  double current_score = score(current);
  trace("lloyd", current.k, current_score);

  for (;;) {
    const int k_at_entry = current.k;

    // Merge phase: visit clusters in ascending probability (ties by index);
    // restart the visit whenever a merge is accepted.
    bool pass_done = current.k <= 2;
    while (!pass_done) {
      const auto prob = cluster_probabilities(current, m);
      std::vector<int> order(current.k);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return prob[a] < prob[b]; });

      const auto members = members_by_cluster(current.assignments, current.k);
      bool accepted = false;
      for (int visit : order) {
        int closest = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int other = 0; other < current.k; ++other) {
          if (other == visit) continue;
          const double link = mean_cross_distance(dataset.points, members[visit],
                                                  members[other], cache);
          if (link < best) {  // strict: ties keep the lower index
            best = link;
            closest = other;
          }
        }
        ClusteringResult candidate =
            merge_clusters(dataset, current, visit, closest);
        const double candidate_score = score(candidate);
        if (candidate_score > current_score) {
          current = std::move(candidate);
          current_score = candidate_score;
          trace("merge_accept", current.k, current_score);
          accepted = true;
          break;  // restart the visit over the new partition
        }
        trace("merge_reject", current.k, candidate_score);
      }
      if (!accepted || current.k <= 2) pass_done = true;
    }

    if (current.k == k_at_entry) break;  // no change in k: stop

    const Matrix init = options.restart == RestartMode::kMergedCentroids
                            ? current.centroids
                            : seed(current.k);
    current = lloyd(dataset, init, options.lloyd_max_iterations);
    current_score = score(current);
    trace("lloyd", current.k, current_score);
  }

  out.clustering = std::move(current);
  out.score = current_score;
  return out;
}

}  // namespace amoc
