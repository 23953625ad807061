#pragma once

// ParetoSample on disk: a CSV with header w1,w2,w3,theta_1..theta_n,f1,f2,f3
// (17 significant digits) and a JSON sidecar "<csv path>.json" carrying the
// metadata. The f columns hold the perturbed losses f~.

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "simplexnet/error.hpp"
#include "simplexnet/io/csv.hpp"
#include "simplexnet/io/dataset.hpp"
#include "simplexnet/pareto.hpp"

namespace simplexnet::io {

inline constexpr double kLossConsistencyTolerance = 1e-10;

inline std::string sidecar_path(const std::string& csv_path) { return csv_path + ".json"; }

inline nlohmann::json to_json(const DatasetSpec& s) {
  return {{"path", s.path},
          {"predictor_columns", s.predictor_columns},
          {"response_column", s.response_column},
          {"delimiter", std::string(1, s.delimiter)},
          {"has_header", s.has_header},
          {"normalize", s.normalize},
          {"name", s.name}};
}

inline DatasetSpec dataset_spec_from_json(const nlohmann::json& j) {
  DatasetSpec s;
  s.path = j.at("path").get<std::string>();
  s.predictor_columns = j.value("predictor_columns", std::vector<std::string>{});
  s.response_column = j.value("response_column", std::string{});
  const auto delim = j.value("delimiter", std::string(","));
  s.delimiter = delim.empty() ? ',' : delim.front();
  s.has_header = j.value("has_header", true);
  s.normalize = j.value("normalize", true);
  s.name = j.value("name", std::string{});
  return s;
}

inline nlohmann::json to_json(const SolverConfig& c) {
  return {{"tolerance", c.tolerance},
          {"max_iterations", c.max_iterations},
          {"start", c.start == SolverConfig::Start::zero ? "zero" : "random"},
          {"seed", c.seed}};
}

inline SolverConfig solver_config_from_json(const nlohmann::json& j) {
  SolverConfig c;
  c.tolerance = j.at("tolerance").get<double>();
  c.max_iterations = j.at("max_iterations").get<int>();
  c.start = j.value("start", std::string("zero")) == "random" ? SolverConfig::Start::random
                                                              : SolverConfig::Start::zero;
  c.seed = j.value("seed", std::uint64_t{0});
  return c;
}

inline nlohmann::json meta_to_json(const ParetoSample& sample) {
  nlohmann::json j = {{"dataset", sample.meta.dataset},
                      {"epsilon", sample.meta.epsilon},
                      {"resolution", sample.meta.resolution},
                      {"solver", to_json(sample.meta.solver)},
                      {"seed", sample.meta.seed},
                      {"n", sample.predictors()},
                      {"records", sample.size()}};
  j["source"] = sample.meta.source ? to_json(*sample.meta.source) : nlohmann::json(nullptr);
  auto failures = nlohmann::json::array();
  for (const auto& f : sample.failures)
    failures.push_back({{"grid_index", f.grid_index}, {"w", f.w}, {"message", f.message}});
  j["failures"] = failures;
  return j;
}

inline void save_sample(const ParetoSample& sample, const std::string& path) {
  if (sample.records.empty()) throw ValidationError("refusing to save an empty sample");
  const Eigen::Index n = sample.predictors();
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << "w1,w2,w3";
    for (Eigen::Index j = 1; j <= n; ++j) out << ",theta_" << j;
    out << ",f1,f2,f3\n";
    for (const auto& r : sample.records) {
      out << format_double(r.w[0]) << ',' << format_double(r.w[1]) << ',' << format_double(r.w[2]);
      for (Eigen::Index j = 0; j < n; ++j) out << ',' << format_double(r.theta[j]);
      for (double f : r.losses) out << ',' << format_double(f);
      out << '\n';
    }
    if (!out) throw InputError("failed writing " + path);
  }
  std::ofstream meta(sidecar_path(path), std::ios::binary);
  if (!meta) throw InputError("cannot write " + sidecar_path(path));
  meta << meta_to_json(sample).dump(2) << '\n';
}

/// Loads a sample. With `validate` the loss columns are re-checked against
/// theta (f~1 only when `problem` is given); weights, finiteness and the
/// schema are always checked.
inline ParetoSample load_sample(const std::string& path, const ElasticNetProblem* problem = nullptr,
                                bool validate = true) {
  ParetoSample sample;

  const std::string meta_path = sidecar_path(path);
  std::ifstream meta_in(meta_path);
  if (!meta_in) throw InputError("missing sample metadata " + meta_path);
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(meta_in);
    sample.meta.dataset = meta.value("dataset", std::string{});
    sample.meta.epsilon = meta.at("epsilon").get<double>();
    sample.meta.resolution = meta.value("resolution", 0);
    if (meta.contains("solver")) sample.meta.solver = solver_config_from_json(meta.at("solver"));
    sample.meta.seed = meta.value("seed", std::uint64_t{0});
    if (meta.contains("source") && !meta.at("source").is_null())
      sample.meta.source = dataset_spec_from_json(meta.at("source"));
    for (const auto& f : meta.value("failures", nlohmann::json::array()))
      sample.failures.push_back({f.at("grid_index").get<std::size_t>(), f.at("w").get<std::vector<double>>(),
                                 f.value("message", std::string{})});
  } catch (const nlohmann::json::exception& e) {
    throw InputError(meta_path + ": malformed metadata: " + e.what());
  }
  if (!(sample.meta.epsilon > 0.0)) throw ValidationError(meta_path + ": epsilon must be positive");

  const CsvTable table = read_csv(path, ',', true);
  const auto& h = table.header;
  if (h.size() < 7 || h[0] != "w1" || h[1] != "w2" || h[2] != "w3" || h[h.size() - 3] != "f1" ||
      h[h.size() - 2] != "f2" || h[h.size() - 1] != "f3")
    throw ValidationError(path + ": header does not match w1,w2,w3,theta_1..theta_n,f1,f2,f3");
  const std::size_t n = h.size() - 6;
  for (std::size_t j = 0; j < n; ++j)
    if (h[3 + j] != "theta_" + std::to_string(j + 1))
      throw ValidationError(path + ": unexpected column '" + h[3 + j] + "'");
  if (meta.contains("n") && meta.at("n").get<std::size_t>() != n)
    throw ValidationError(path + ": column count disagrees with metadata n");

  std::set<std::vector<double>> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.line_numbers[r];
    std::vector<double> values(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) values[c] = parse_number(row[c], line, c + 1);
    std::vector<double> w(values.begin(), values.begin() + 3);
    if (!seen.insert(w).second) throw ValidationError(path + ": duplicate weight at line " + std::to_string(line));
    ParetoRecord rec;
    try {
      rec.w = WeightVector(w);
    } catch (const DomainError& e) {
      throw ValidationError(path + ": line " + std::to_string(line) + ": " + e.what());
    }
    rec.theta = Eigen::Map<const Eigen::VectorXd>(values.data() + 3, static_cast<Eigen::Index>(n));
    rec.losses = {values[3 + n], values[4 + n], values[5 + n]};
    sample.records.push_back(std::move(rec));
  }

  if (problem != nullptr && problem->predictors() != static_cast<Eigen::Index>(n))
    throw ValidationError(path + ": sample has " + std::to_string(n) + " coefficients, problem has " +
                          std::to_string(problem->predictors()));
  if (!validate) return sample;
  const auto bad = check_loss_consistency(sample, kLossConsistencyTolerance, problem);
  if (!bad.empty())
    throw ValidationError(path + ": losses inconsistent with theta at data row " + std::to_string(bad.front() + 1));
  return sample;
}

/// Rebuilds the problem a sample was computed from, using its recorded source.
inline ElasticNetProblem problem_for_sample(const ParetoSample& sample) {
  if (!sample.meta.source) throw InputError("sample metadata does not record its dataset");
  return load_dataset(*sample.meta.source).problem(sample.meta.epsilon);
}

}  // namespace simplexnet::io
