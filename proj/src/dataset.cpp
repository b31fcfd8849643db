#include "amoc/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace amoc {

namespace {

// Equal split of `total` over `k` components, remainder to the lowest indices.
std::vector<int> equal_split(int total, int k) {
  std::vector<int> counts(k, total / k);
  for (int i = 0; i < total % k; ++i) counts[i] += 1;
  return counts;
}

GaussianSpec component(std::vector<double> mu, const Matrix& sigma_upper, int count) {
  GaussianSpec g;
  g.mu = Eigen::Map<const Vector>(mu.data(), static_cast<Eigen::Index>(mu.size()));
  g.sigma = symmetric_from_upper(sigma_upper);
  g.count = count;
  return g;
}

Matrix diag2(double v) {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 0) = v;
  s(1, 1) = v;
  return s;
}

bool parse_real(const std::string& cell, double& out) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(*begin))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(end[-1]))) --end;
  if (begin == end) return false;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

int Dataset::num_classes() const {
  if (!labels) return 0;
  int k = 0;
  for (int label : *labels) k = std::max(k, label + 1);
  return k;
}

int SyntheticSpec::dim() const {
  return components.empty() ? 0 : static_cast<int>(components.front().mu.size());
}

int SyntheticSpec::total_count() const {
  int total = 0;
  for (const auto& c : components) total += c.count;
  return total;
}

SyntheticSpec builtin_spec(int id) {
  SyntheticSpec spec;
  spec.name = "synthetic" + std::to_string(id);
  switch (id) {
    case 1: {
      // m=350, n=3, k=2
      auto counts = equal_split(350, 2);
      Matrix s1(3, 3);
      s1 << 1, 0.50, 0.3333,
            0, 1, 0.6667,
            0, 0, 1;
      Matrix s2(3, 3);
      s2 << 1, 1, 1,
            0, 2, 2,
            0, 0, 3;
      spec.components.push_back(component({2, 3, 4}, s1, counts[0]));
      spec.components.push_back(component({7, 6, 9}, s2, counts[1]));
      break;
    }
    case 2: {
      // m=400, k=4; printed literals are 2-d
      auto counts = equal_split(400, 4);
      Matrix s2(2, 2);
      s2 << 1, 0.7,
            0, 1;
      spec.components.push_back(component({-1, -1}, diag2(0.65), counts[0]));
      spec.components.push_back(component({2, 2}, s2, counts[1]));
      spec.components.push_back(component({-3, 3}, diag2(0.78), counts[2]));
      spec.components.push_back(component({-6, 4}, diag2(0.50), counts[3]));
      break;
    }
    case 3: {
      // m=300, n=2, k=3
      auto counts = equal_split(300, 3);
      spec.components.push_back(component({-1, -1}, diag2(1.0), counts[0]));
      spec.components.push_back(component({2, 2}, diag2(1.0), counts[1]));
      spec.components.push_back(component({-3, 3}, diag2(0.7), counts[2]));
      break;
    }
    case 4: {
      // m=800, n=2, k=6
      auto counts = equal_split(800, 6);
      Matrix s2(2, 2);
      s2 << 1, 0.7,
            0, 1;
      spec.components.push_back(component({-1, -1}, diag2(0.65), counts[0]));
      spec.components.push_back(component({-8, -6}, s2, counts[1]));
      spec.components.push_back(component({-3, 6}, diag2(0.2), counts[2]));
      spec.components.push_back(component({-8, 14}, diag2(0.5), counts[3]));
      spec.components.push_back(component({10, 12}, diag2(0.3), counts[4]));
      spec.components.push_back(component({14, -14}, diag2(0.1), counts[5]));
      break;
    }
    case 5: {
      // m=180, n=8, k=3
      auto counts = equal_split(180, 3);
      Matrix s1(8, 8);
      s1 << 1, 0.5, 0.3333, 0.25, 0.2, 0.1667, 0.1429, 0.125,
            0, 1, 0.667, 0.5, 0.4, 0.3333, 0.2857, 0.25,
            0, 0, 1, 0.75, 0.6, 0.5, 0.4286, 0.375,
            0, 0, 0, 1, 0.8, 0.6667, 0.5714, 0.5,
            0, 0, 0, 0, 1, 0.8333, 0.7143, 0.625,
            0, 0, 0, 0, 0, 1, 0.8571, 0.75,
            0, 0, 0, 0, 0, 0, 1, 0.875,
            0, 0, 0, 0, 0, 0, 0, 1;
      Matrix s2 = Matrix::Zero(8, 8);
      for (int i = 0; i < 8; ++i)
        for (int j = i; j < 8; ++j) s2(i, j) = i + 1;
      Matrix s3(8, 8);
      s3 << 1, -1, -1, -1, -1, -1, -1, -1,
            0, 2, 0, 0, 0, 0, 0, 0,
            0, 0, 3, 1, 1, 1, 1, 1,
            0, 0, 0, 4, 2, 2, 2, 2,
            0, 0, 0, 0, 5, 3, 3, 3,
            0, 0, 0, 0, 0, 6, 4, 4,
            0, 0, 0, 0, 0, 0, 7, 5,
            0, 0, 0, 0, 0, 0, 0, 8;
      spec.components.push_back(component({1, 1, 2, 1, 0.5, 2, 1, 0.5}, s1, counts[0]));
      spec.components.push_back(component({1, 1, 1, 1, 1, 1, 1, 1}, s2, counts[1]));
      spec.components.push_back(component({1, -2, 0, -1, 0, -1, -2, -2}, s3, counts[2]));
      break;
    }
    default:
      throw std::invalid_argument("builtin_spec: id must be in 1..5, got " +
                                  std::to_string(id));
  }
  return spec;
}

Dataset generate(const SyntheticSpec& spec, RandomSource& rng) {
  if (spec.components.empty()) {
    throw std::invalid_argument("generate: spec has no components");
  }
  const int n = spec.dim();
  const int m = spec.total_count();
  if (m < 2) {
    throw std::invalid_argument("generate: total point count must be >= 2");
  }
  Dataset ds;
  ds.name = spec.name;
  ds.points.resize(m, n);
  std::vector<int> labels;
  labels.reserve(m);
  int row = 0;
  for (size_t c = 0; c < spec.components.size(); ++c) {
    const auto& comp = spec.components[c];
    if (comp.mu.size() != n) {
      throw std::invalid_argument("generate: component dimensions disagree");
    }
    const CholeskyFactor factor = cholesky(comp.sigma);
    for (int i = 0; i < comp.count; ++i) {
      ds.points.row(row++) = sample_mvn(comp.mu, factor, rng).transpose();
      labels.push_back(static_cast<int>(c));
    }
  }
  ds.labels = std::move(labels);
  return ds;
}

LabelColumn parse_label_column(const std::string& text) {
  const std::string t = trim(text);
  if (!t.empty() && std::all_of(t.begin(), t.end(), [](unsigned char c) {
        return std::isdigit(c);
      })) {
    return LabelColumn(std::stoi(t));
  }
  return LabelColumn(t);
}

Dataset load_csv(const std::string& path,
                 const std::optional<LabelColumn>& label) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_csv: cannot open '" + path + "'");
  }
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    rows.push_back(split_row(line));
  }
  if (rows.empty()) {
    throw std::runtime_error("load_csv: '" + path + "' has no data rows");
  }
  const int cols = static_cast<int>(rows.front().size());
  for (size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != cols) {
      throw std::runtime_error("load_csv: row " + std::to_string(r + 1) +
                               " has " + std::to_string(rows[r].size()) +
                               " cells, expected " + std::to_string(cols));
    }
  }

  // Resolve the label column index; -1 means unlabeled.
  int label_index = -1;
  bool label_by_name = false;
  std::string label_name;
  if (label) {
    if (std::holds_alternative<int>(*label)) {
      label_index = std::get<int>(*label);
      if (label_index < 0 || label_index >= cols) {
        throw std::runtime_error("load_csv: label column index " +
                                 std::to_string(label_index) +
                                 " out of range for " + std::to_string(cols) +
                                 " columns");
      }
    } else {
      label_by_name = true;
      label_name = std::get<std::string>(*label);
    }
  }

  // Header detection: the first row is a header iff any feature-column cell
  // fails to parse as a number. A by-name label column requires a header.
  bool has_header = false;
  {
    double ignored;
    for (int c = 0; c < cols; ++c) {
      if (!label_by_name && c == label_index) continue;
      if (!parse_real(rows[0][c], ignored)) {
        has_header = true;
        break;
      }
    }
  }
  if (label_by_name) {
    if (!has_header) {
      throw std::runtime_error(
          "load_csv: label column '" + label_name +
          "' requested by name but the file has no header row");
    }
    for (int c = 0; c < cols; ++c) {
      if (trim(rows[0][c]) == label_name) {
        label_index = c;
        break;
      }
    }
    if (label_index < 0) {
      throw std::runtime_error("load_csv: label column '" + label_name +
                               "' not found in header");
    }
  }

  const size_t first_data = has_header ? 1 : 0;
  const int m = static_cast<int>(rows.size() - first_data);
  if (m < 2) {
    throw std::runtime_error("load_csv: '" + path +
                             "' must contain at least 2 data rows");
  }
  const int n = label_index >= 0 ? cols - 1 : cols;
  if (n < 1) {
    throw std::runtime_error("load_csv: no feature columns left");
  }

  Dataset ds;
  std::filesystem::path p(path);
  ds.name = p.stem().string();
  ds.points.resize(m, n);
  std::vector<int> labels;
  std::map<std::string, int> label_codes;
  if (label_index >= 0) labels.reserve(m);

  for (int r = 0; r < m; ++r) {
    const auto& cells = rows[first_data + r];
    int feature = 0;
    for (int c = 0; c < cols; ++c) {
      if (c == label_index) {
        const std::string key = trim(cells[c]);
        auto [it, inserted] =
            label_codes.try_emplace(key, static_cast<int>(label_codes.size()));
        labels.push_back(it->second);
        continue;
      }
      double value;
      if (!parse_real(cells[c], value) || !std::isfinite(value)) {
        throw std::runtime_error("load_csv: non-numeric feature cell at row " +
                                 std::to_string(first_data + r + 1) +
                                 ", column " + std::to_string(c + 1) + " ('" +
                                 trim(cells[c]) + "')");
      }
      ds.points(r, feature++) = value;
    }
  }
  if (label_index >= 0) ds.labels = std::move(labels);
  return ds;
}

void write_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("write_csv: cannot open '" + path + "' for writing");
  }
  const int n = dataset.n();
  for (int c = 0; c < n; ++c) {
    out << 'f' << c;
    if (c + 1 < n || dataset.labels) out << ',';
  }
  if (dataset.labels) out << "label";
  out << '\n';
  char buf[40];
  for (int r = 0; r < dataset.m(); ++r) {
    for (int c = 0; c < n; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", dataset.points(r, c));
      out << buf;
      if (c + 1 < n || dataset.labels) out << ',';
    }
    if (dataset.labels) out << (*dataset.labels)[r];
    out << '\n';
  }
  if (!out) {
    throw std::runtime_error("write_csv: failed writing '" + path + "'");
  }
}

Dataset zscore(const Dataset& dataset) {
  const int m = dataset.m();
  if (m < 2) {
    throw std::invalid_argument("zscore: need at least 2 points");
  }
  Dataset out = dataset;
  const RowVector mean = dataset.points.colwise().mean();
  out.points = dataset.points.rowwise() - mean;
  for (int c = 0; c < dataset.n(); ++c) {
    const double var = out.points.col(c).squaredNorm() / (m - 1);
    const double sd = std::sqrt(var);
    if (sd > 0.0) {
      out.points.col(c) /= sd;
    } else {
      out.points.col(c).setZero();
    }
  }
  return out;
}

}  // namespace amoc
