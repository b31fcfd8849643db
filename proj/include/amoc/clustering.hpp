#pragma once

#include "amoc/core.hpp"
#include "amoc/dataset.hpp"

#include <optional>
#include <string>
#include <vector>

namespace amoc {

/// A finalized hard clustering: no empty clusters, sse consistent with
/// assignments and centroids.
struct ClusteringResult {
  std::vector<int> assignments;  // size m, values 0..k-1
  Matrix centroids;              // k x n
  int k = 0;
  double sse = 0.0;
  int iterations = 0;
  std::vector<double> sse_per_iteration;  // end-of-iteration objective values
};

/// Fuzzy c-means output. `hardened` is the argmax partition with centroids
/// recomputed as crisp member means (empty clusters compacted away).
struct FuzzyResult {
  Matrix membership;  // m x k, rows sum to 1
  Matrix centroids;   // fuzzy centroids, k x n
  double fuzzifier = 2.0;
  ClusteringResult hardened;
};

enum class Seeding { kRandom, kKMeansPP };

/// What a candidate merge is scored against: the Rand index to a supplied
/// reference partition, or the mean silhouette of the candidate itself.
enum class MergeCriterion { kReferenceRand, kInternalSilhouette };

/// How the k-means rerun after a round of accepted merges is initialized.
enum class RestartMode { kMergedCentroids, kRandomRestart };

/// k distinct dataset points chosen uniformly without replacement.
Matrix seed_random(const Dataset& dataset, int k, RandomSource& rng);

/// k-means++ seeding: first centroid uniform, then proportional to squared
/// distance to the nearest chosen centroid. When all remaining mass is zero
/// (duplicate points), falls back to uniform over unchosen indices.
Matrix seed_kmeanspp(const Dataset& dataset, int k, RandomSource& rng);

/// Lloyd's algorithm from the given initial centroids. Assignment ties go to
/// the lowest centroid index. An empty cluster is repaired (at most one per
/// iteration) by moving the point farthest from its assigned centroid.
ClusteringResult lloyd(const Dataset& dataset, const Matrix& initial_centroids,
                       int max_iterations = 300);

/// Standard fuzzy c-means. Converges when the largest membership change
/// drops below `tolerance`. A point coincident with centroids gets its
/// membership concentrated there.
FuzzyResult fuzzy_cmeans(const Dataset& dataset, int k, double fuzzifier,
                         RandomSource& rng, double tolerance = 1e-5,
                         int max_iterations = 300);

/// Relative cluster sizes |C_i| / m; sums to 1.
std::vector<double> cluster_probabilities(const ClusteringResult& result, int m);

/// Mean Euclidean distance over all cross pairs of clusters i and j.
double average_linkage(const Dataset& dataset, const ClusteringResult& result,
                       int i, int j);

/// Reassign all of `src` into `dst`, recompute every centroid as its member
/// mean, compact cluster indices to 0..k-2, recompute sse.
ClusteringResult merge_clusters(const Dataset& dataset,
                                const ClusteringResult& result, int src, int dst);

struct AmocTraceEntry {
  int step = 0;
  std::string action;  // "lloyd", "merge_accept", "merge_reject"
  int k = 0;
  double score = 0.0;  // incumbent after the step; candidate score on reject
};

struct AmocOptions {
  std::optional<int> k_max;  // default round(sqrt(m))
  Seeding seeding = Seeding::kKMeansPP;
  MergeCriterion criterion = MergeCriterion::kReferenceRand;
  std::optional<std::vector<int>> reference;  // required for kReferenceRand
  RestartMode restart = RestartMode::kMergedCentroids;
  int lloyd_max_iterations = 300;
};

struct AmocResult {
  ClusteringResult clustering;
  double score = 0.0;
  std::vector<AmocTraceEntry> trace;
};

/// Two-phase automatic clustering: over-cluster with k-means at k_max, then
/// repeatedly merge the lowest-probability cluster into its average-linkage
/// nearest neighbor, keeping a merge only when it strictly improves the
/// criterion score. After any round that changed k, k-means is rerun
/// (seeded per `restart`) and the merge phase repeats. Never goes below k=2.
AmocResult amoc(const Dataset& dataset, const AmocOptions& options,
                RandomSource& rng);

}  // namespace amoc
