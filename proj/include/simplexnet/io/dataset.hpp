#pragma once

// Dataset ingestion with column-wise min-max scaling to [0, 1], plus the two
// datasets that ship with the project: the 4x3 collinear example and a seeded
// synthetic regression generator.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "simplexnet/elastic_net.hpp"
#include "simplexnet/error.hpp"
#include "simplexnet/io/csv.hpp"
#include "simplexnet/random.hpp"

namespace simplexnet::io {

/// Path "builtin:example1" selects the bundled 4x3 example.
inline constexpr const char* kBuiltinExample1 = "builtin:example1";

struct DatasetSpec {
  std::string path;
  /// Column names (or 0-based indices written as digits). Empty means every
  /// column except the response.
  std::vector<std::string> predictor_columns;
  /// Name or 0-based index; empty means the last column.
  std::string response_column;
  char delimiter = ',';
  bool has_header = true;
  bool normalize = true;
  /// Display name; defaults to the file stem.
  std::string name;

  std::string display_name() const {
    if (!name.empty()) return name;
    if (path == kBuiltinExample1) return "example1";
    return std::filesystem::path(path).stem().string();
  }
};

struct ColumnScale {
  double min = 0.0;
  double max = 1.0;
  bool constant = false;

  double apply(double v) const { return constant ? 0.0 : (v - min) / (max - min); }
  double invert(double s) const { return constant ? min : min + s * (max - min); }
};

struct Dataset {
  std::string name;
  std::vector<std::string> predictor_names;
  std::string response_name;
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<ColumnScale> predictor_scales;
  ColumnScale response_scale;
  std::vector<std::string> warnings;

  ElasticNetProblem problem(double epsilon) const { return {X, y, epsilon}; }
};

/// Min-max scales a column in place and returns its scale.
inline ColumnScale normalize_column(Eigen::Ref<Eigen::VectorXd> column) {
  ColumnScale s{column.minCoeff(), column.maxCoeff(), false};
  if (s.max == s.min) {
    s.constant = true;
    column.setZero();
    return s;
  }
  // Already unit-range columns are left bit-identical.
  if (s.min == 0.0 && s.max == 1.0) return s;
  for (Eigen::Index r = 0; r < column.size(); ++r) column[r] = s.apply(column[r]);
  return s;
}

inline Dataset example1_dataset() {
  Dataset d;
  d.name = "example1";
  d.predictor_names = {"x1", "x2", "x3"};
  d.response_name = "y";
  d.X.resize(4, 3);
  d.X << 1, 2, 3, 6, 5, 4, 7, 8, 9, 12, 11, 10;
  d.y.resize(4);
  d.y << 1, 2, 3, 4;
  d.predictor_scales.assign(3, ColumnScale{});
  return d;
}

namespace detail {

inline std::size_t resolve_column(const std::vector<std::string>& header, std::size_t width,
                                  const std::string& key) {
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == key) return c;
  if (!key.empty() && std::all_of(key.begin(), key.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
    const std::size_t idx = std::stoul(key);
    if (idx < width) return idx;
  }
  throw InputError("column '" + key + "' not found");
}

}  // namespace detail

inline Dataset dataset_from_table(const CsvTable& table, const DatasetSpec& spec) {
  const std::size_t width = table.rows.front().size();
  std::vector<std::string> names = table.header;
  if (names.empty())
    for (std::size_t c = 0; c < width; ++c) names.push_back("col" + std::to_string(c));

  const std::size_t response =
      spec.response_column.empty() ? width - 1 : detail::resolve_column(table.header, width, spec.response_column);
  std::vector<std::size_t> predictors;
  if (spec.predictor_columns.empty()) {
    for (std::size_t c = 0; c < width; ++c)
      if (c != response) predictors.push_back(c);
  } else {
    for (const auto& key : spec.predictor_columns) {
      const std::size_t c = detail::resolve_column(table.header, width, key);
      if (c == response) throw InputError("column '" + key + "' is both predictor and response");
      if (std::find(predictors.begin(), predictors.end(), c) != predictors.end())
        throw InputError("predictor column '" + key + "' listed twice");
      predictors.push_back(c);
    }
  }
  if (predictors.empty()) throw InputError("no predictor columns");

  Dataset d;
  d.name = spec.display_name();
  d.response_name = names[response];
  for (std::size_t c : predictors) d.predictor_names.push_back(names[c]);
  const auto rows = static_cast<Eigen::Index>(table.rows.size());
  d.X.resize(rows, static_cast<Eigen::Index>(predictors.size()));
  d.y.resize(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    for (std::size_t k = 0; k < predictors.size(); ++k)
      d.X(r, static_cast<Eigen::Index>(k)) = parse_number(row[predictors[k]], line, predictors[k] + 1);
    d.y[r] = parse_number(row[response], line, response + 1);
  }

  if (spec.normalize) {
    for (Eigen::Index c = 0; c < d.X.cols(); ++c) {
      d.predictor_scales.push_back(normalize_column(d.X.col(c)));
      if (d.predictor_scales.back().constant)
        d.warnings.push_back("predictor '" + d.predictor_names[c] + "' is constant; scaled to 0");
    }
    d.response_scale = normalize_column(d.y);
    if (d.response_scale.constant)
      d.warnings.push_back("response '" + d.response_name + "' is constant; scaled to 0");
  } else {
    d.predictor_scales.assign(predictors.size(), ColumnScale{});
  }
  return d;
}

inline Dataset load_dataset(const DatasetSpec& spec) {
  // The builtin example is always served exactly as printed.
  if (spec.path == kBuiltinExample1) return example1_dataset();
  const CsvTable table = read_csv(spec.path, spec.delimiter, spec.has_header);
  try {
    return dataset_from_table(table, spec);
  } catch (const InputError& e) {
    throw InputError(spec.path + ": " + e.what(), e.row(), e.column());
  }
}

/// Seeded synthetic regression data: predictors share a common factor so the
/// lasso and ridge paths differ visibly; half of the true coefficients are 0.
struct SyntheticOptions {
  int predictors = 6;
  int observations = 500;
  double noise = 0.1;
  std::uint64_t seed = 1;
};

inline Dataset synthetic_dataset(const SyntheticOptions& opt) {
  if (opt.predictors < 1 || opt.observations < 1) throw DomainError("synthetic sizes must be positive");
  SplitMix64 rng(opt.seed);
  Eigen::VectorXd beta(opt.predictors);
  for (int j = 0; j < opt.predictors; ++j) beta[j] = (j % 2 == 0) ? 1.0 + rng.uniform() : 0.0;
  Dataset d;
  d.name = "synthetic";
  d.response_name = "y";
  for (int j = 0; j < opt.predictors; ++j) d.predictor_names.push_back("x" + std::to_string(j + 1));
  d.X.resize(opt.observations, opt.predictors);
  d.y.resize(opt.observations);
  for (int r = 0; r < opt.observations; ++r) {
    const double shared = rng.uniform();
    for (int j = 0; j < opt.predictors; ++j) d.X(r, j) = 0.5 * shared + 0.5 * rng.uniform();
    // Box-Muller on (0, 1] x [0, 1).
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    const double gauss = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    d.y[r] = d.X.row(r).dot(beta) + opt.noise * gauss;
  }
  for (Eigen::Index c = 0; c < d.X.cols(); ++c) d.predictor_scales.push_back(normalize_column(d.X.col(c)));
  d.response_scale = normalize_column(d.y);
  return d;
}

inline void write_dataset_csv(const Dataset& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  for (const auto& name : d.predictor_names) out << name << ',';
  out << d.response_name << '\n';
  for (Eigen::Index r = 0; r < d.X.rows(); ++r) {
    for (Eigen::Index c = 0; c < d.X.cols(); ++c) out << format_double(d.X(r, c)) << ',';
    out << format_double(d.y[r]) << '\n';
  }
  if (!out) throw InputError("failed writing " + path);
}

}  // namespace simplexnet::io
