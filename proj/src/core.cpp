#include "amoc/core.hpp"

#include <cmath>

namespace amoc {

namespace {

std::string pd_message(int pivot, double value) {
  return "matrix is not positive definite: pivot " + std::to_string(pivot) +
         " has non-positive value " + std::to_string(value);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

NotPositiveDefiniteError::NotPositiveDefiniteError(int pivot, double pivot_value)
    : std::runtime_error(pd_message(pivot, pivot_value)), pivot_(pivot) {}

RowVector mean_point(const Matrix& points) {
  if (points.rows() == 0) {
    throw std::invalid_argument("mean_point: empty point set");
  }
  return points.colwise().mean();
}

RowVector mean_point(const Matrix& points, const std::vector<int>& members) {
  if (members.empty()) {
    throw std::invalid_argument("mean_point: empty member list");
  }
  RowVector sum = RowVector::Zero(points.cols());
  for (int idx : members) {
    sum += points.row(idx);
  }
  return sum / static_cast<double>(members.size());
}

CholeskyFactor cholesky(const Matrix& sigma) {
  const Eigen::Index n = sigma.rows();
  if (n == 0 || sigma.cols() != n) {
    throw std::invalid_argument("cholesky: matrix must be square and nonempty");
  }
  const double asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9) {
    throw std::invalid_argument("cholesky: matrix not symmetric (max |Σ-Σᵀ| = " +
                                std::to_string(asym) + ")");
  }
  Matrix lower = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double diag = sigma(j, j);
    for (Eigen::Index k = 0; k < j; ++k) {
      diag -= lower(j, k) * lower(j, k);
    }
    if (diag <= 0.0 || !std::isfinite(diag)) {
      throw NotPositiveDefiniteError(static_cast<int>(j), diag);
    }
    lower(j, j) = std::sqrt(diag);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double sum = sigma(i, j);
      for (Eigen::Index k = 0; k < j; ++k) {
        sum -= lower(i, k) * lower(j, k);
      }
      lower(i, j) = sum / lower(j, j);
    }
  }
  return CholeskyFactor{std::move(lower)};
}

Matrix symmetric_from_upper(const Matrix& upper) {
  if (upper.rows() != upper.cols()) {
    throw std::invalid_argument("symmetric_from_upper: matrix must be square");
  }
  Matrix full = upper;
  for (Eigen::Index i = 0; i < full.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      full(i, j) = full(j, i);
    }
  }
  return full;
}

Vector mvn_from_normals(const Vector& mu, const CholeskyFactor& factor,
                        const Vector& z) {
  if (mu.size() != factor.lower.rows() || z.size() != mu.size()) {
    throw std::invalid_argument("mvn_from_normals: dimension mismatch");
  }
  return mu + factor.lower * z;
}

Vector sample_mvn(const Vector& mu, const CholeskyFactor& factor,
                  RandomSource& rng) {
  if (mu.size() != factor.lower.rows()) {
    throw std::invalid_argument("sample_mvn: dimension mismatch");
  }
  Vector z(mu.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    z(i) = rng.normal();
  }
  return mvn_from_normals(mu, factor, z);
}

RandomSource::RandomSource(std::uint64_t seed) : engine_(seed) {}

RandomSource RandomSource::derive(std::uint64_t master, std::uint64_t stream,
                                  std::uint64_t substream) {
  std::uint64_t s = splitmix64(master);
  s = splitmix64(s ^ (0x9e3779b97f4a7c15ull * (stream + 1)));
  s = splitmix64(s ^ (0xd1b54a32d192ed03ull * (substream + 1)));
  return RandomSource(s);
}

std::uint64_t RandomSource::next_u64() { return engine_(); }

double RandomSource::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomSource::below(std::uint64_t n) {
  if (n == 0) {
    throw std::invalid_argument("RandomSource::below: n must be positive");
  }
  // Rejection sampling over the largest multiple of n that fits in 64 bits.
  const std::uint64_t limit =
      static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) / n * n);
  std::uint64_t r;
  do {
    r = next_u64();
  } while (limit != 0 && r >= limit);
  return r % n;
}

double RandomSource::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * scale;
  has_spare_ = true;
  return u * scale;
}

std::vector<int> RandomSource::choose_distinct(int population, int k) {
  if (k < 0 || k > population) {
    throw std::invalid_argument("choose_distinct: need 0 <= k <= population");
  }
  std::vector<int> pool(population);
  for (int i = 0; i < population; ++i) pool[i] = i;
  // Partial Fisher-Yates: the first k slots are the sample, in draw order.
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(below(static_cast<std::uint64_t>(population - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace amoc
