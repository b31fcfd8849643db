#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace amoc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Thrown when a symmetric matrix fails the Cholesky positive-definiteness
/// test; carries the index of the failing pivot.
class NotPositiveDefiniteError : public std::runtime_error {
 public:
  NotPositiveDefiniteError(int pivot, double pivot_value);
  int pivot() const { return pivot_; }

 private:
  int pivot_;
};

/// Squared Euclidean distance between two equal-length vector expressions.
/// Accepts any mix of row/column vector expressions of the same length.
template <typename DerivedA, typename DerivedB>
double squared_euclidean(const Eigen::MatrixBase<DerivedA>& a,
                         const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("squared_euclidean: dimension mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double d = a(i) - b(i);
    sum += d * d;
  }
  return sum;
}

template <typename DerivedA, typename DerivedB>
double euclidean(const Eigen::MatrixBase<DerivedA>& a,
                 const Eigen::MatrixBase<DerivedB>& b) {
  return std::sqrt(squared_euclidean(a, b));
}

/// Coordinate-wise mean of a nonempty set of points (one point per row).
RowVector mean_point(const Matrix& points);

/// Coordinate-wise mean of the rows selected by `members` (nonempty).
RowVector mean_point(const Matrix& points, const std::vector<int>& members);

/// Lower-triangular Cholesky factor of a covariance matrix: L·Lᵀ = Σ.
struct CholeskyFactor {
  Matrix lower;
  int dim() const { return static_cast<int>(lower.rows()); }
};

/// Cholesky factorization, also serving as the positive-definiteness test.
/// Requires symmetry within 1e-9 absolute. No jitter, no eigenvalue repair:
/// a non-PD input throws NotPositiveDefiniteError naming the failing pivot.
CholeskyFactor cholesky(const Matrix& sigma);

/// Mirror the upper triangle of `upper` into a full symmetric matrix.
Matrix symmetric_from_upper(const Matrix& upper);

class RandomSource;

/// mu + L·z for a given standard-normal vector z (deterministic kernel
/// behind sample_mvn, exposed for testing with pinned draws).
Vector mvn_from_normals(const Vector& mu, const CholeskyFactor& factor,
                        const Vector& z);

/// One draw from N(mu, L·Lᵀ).
Vector sample_mvn(const Vector& mu, const CholeskyFactor& factor,
                  RandomSource& rng);

/// Deterministic 64-bit random source. Engine is std::mt19937_64; child
/// streams are derived by hashing (master seed, stream, substream) through
/// SplitMix64, so (seed, call sequence) fixes every draw and independent
/// streams never share state. Single-owner: one instance per logical task.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  /// Child stream for (master seed, stream index, substream index).
  static RandomSource derive(std::uint64_t master, std::uint64_t stream,
                             std::uint64_t substream = 0);

  std::uint64_t next_u64();

  /// Uniform real in [0, 1) with 53-bit resolution.
  double uniform01();

  /// Unbiased uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);

  /// Standard normal variate (Marsaglia polar method, spare cached).
  double normal();

  /// k distinct indices drawn uniformly without replacement from [0, population).
  std::vector<int> choose_distinct(int population, int k);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace amoc
