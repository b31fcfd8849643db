#pragma once

#include "amoc/core.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace amoc {

/// A set of m points of dimension n with optional ground-truth class labels.
/// Immutable after construction; labels, when present, are re-encoded to
/// {0..K-1}.
struct Dataset {
  std::string name;
  Matrix points;  // m x n, one point per row
  std::optional<std::vector<int>> labels;

  int m() const { return static_cast<int>(points.rows()); }
  int n() const { return static_cast<int>(points.cols()); }

  /// Number of ground-truth classes; 0 when unlabeled.
  int num_classes() const;
};

/// One Gaussian mixture component: N(mu, sigma) with `count` points.
struct GaussianSpec {
  Vector mu;
  Matrix sigma;
  int count = 0;
};

/// Recipe for a synthetic Gaussian-mixture dataset. Component index doubles
/// as the ground-truth class label.
struct SyntheticSpec {
  std::string name;
  std::vector<GaussianSpec> components;

  int dim() const;
  int total_count() const;
};

/// The five built-in synthetic benchmark recipes (id in 1..5). Totals are
/// split equally across components, remainder going to the lowest-index
/// components. Recipe 2 is two-dimensional: its printed mean/covariance
/// literals are 2-d even though the accompanying text says n=3.
SyntheticSpec builtin_spec(int id);

/// Draw the dataset described by `spec`: points appear component by
/// component in spec order (no shuffle), labels are component indices.
Dataset generate(const SyntheticSpec& spec, RandomSource& rng);

/// Selects the label column of a CSV file either by header name or by
/// 0-based column index.
using LabelColumn = std::variant<int, std::string>;

/// "3" -> index 3, anything non-numeric -> name.
LabelColumn parse_label_column(const std::string& text);

/// Load a comma-delimited numeric table. A header row is auto-detected
/// (first row with a non-numeric cell in any feature column). Label values
/// are re-encoded to 0..K-1 in first-appearance order.
Dataset load_csv(const std::string& path,
                 const std::optional<LabelColumn>& label = std::nullopt);

/// Inverse of load_csv for round-trip testing and the `generate` subcommand:
/// header f0..f{n-1} plus a final "label" column when labels are present.
/// Reals are printed with full round-trip precision.
void write_csv(const Dataset& dataset, const std::string& path);

/// Per-feature standardization to mean 0, sample standard deviation 1
/// (denominator m-1). Zero-variance features stay 0 after centering.
Dataset zscore(const Dataset& dataset);

}  // namespace amoc
