#pragma once

// JSON forms of BezierSimplexModel and the FitReport CSV.
//
//   {"m": 3, "d": 4, "out_dim": 9, "index_order": "revlex",
//    "control_points": [[...], ...], "meta": {...}}
//
// Numbers are written by nlohmann::json with the shortest representation that
// round-trips (at most 17 significant digits).

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "simplexnet/bezier.hpp"
#include "simplexnet/error.hpp"
#include "simplexnet/fit.hpp"
#include "simplexnet/io/csv.hpp"

namespace simplexnet::io {

inline nlohmann::json model_to_json(const BezierSimplexModel& model, const nlohmann::json& meta = nlohmann::json::object()) {
  auto points = nlohmann::json::array();
  for (Eigen::Index r = 0; r < model.control_points().rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(model.out_dim()));
    for (Eigen::Index c = 0; c < model.out_dim(); ++c) row[static_cast<std::size_t>(c)] = model.control_points()(r, c);
    points.push_back(row);
  }
  return {{"m", model.dimension()},     {"d", model.degree()},    {"out_dim", model.out_dim()},
          {"index_order", "revlex"},    {"control_points", points}, {"meta", meta}};
}

inline BezierSimplexModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.value("index_order", std::string("revlex")) != "revlex")
      throw ValidationError("unsupported index_order '" + j.at("index_order").get<std::string>() + "'");
    const auto m = j.at("m").get<std::size_t>();
    const auto d = j.at("d").get<int>();
    const auto out_dim = j.at("out_dim").get<Eigen::Index>();
    const auto& points = j.at("control_points");
    if (m < 1 || d < 0 || out_dim < 1) throw ValidationError("invalid model dimensions");
    Eigen::MatrixXd P(static_cast<Eigen::Index>(points.size()), out_dim);
    for (std::size_t r = 0; r < points.size(); ++r) {
      if (points[r].size() != static_cast<std::size_t>(out_dim))
        throw ValidationError("control point " + std::to_string(r) + " has wrong length");
      for (Eigen::Index c = 0; c < out_dim; ++c) {
        const auto& v = points[r][static_cast<std::size_t>(c)];
        if (!v.is_number()) throw ValidationError("control point entries must be numbers");
        P(static_cast<Eigen::Index>(r), c) = v.get<double>();
      }
    }
    return {m, d, std::move(P)};
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model JSON: ") + e.what());
  } catch (const DomainError& e) {
    throw ValidationError(std::string("invalid model: ") + e.what());
  }
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("failed writing " + path);
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void save_model(const BezierSimplexModel& model, const std::string& path,
                       const nlohmann::json& meta = nlohmann::json::object()) {
  write_text(path, model_to_json(model, meta).dump(2) + "\n");
}

inline BezierSimplexModel load_model(const std::string& path) {
  try {
    return model_from_json(nlohmann::json::parse(read_text(path)));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline nlohmann::json report_to_json(const FitReport& r) {
  nlohmann::json j = {{"train_mse", r.train_mse},
                      {"test_mse", r.test_mse},
                      {"degree", r.degree},
                      {"split", {r.train_count, r.test_count}},
                      {"seed", r.seed},
                      {"trial", r.trial},
                      {"condition_diagnostic", r.condition_diagnostic},
                      {"rank_deficient", r.rank_deficient},
                      {"basis_size", r.basis_size},
                      {"rank", r.rank},
                      {"mse_convention", FitReport::kMseConvention}};
  if (r.error) j["error"] = *r.error;
  return j;
}

inline std::string sweep_cells_csv(const SweepResult& sweep) {
  std::string out = "split,degree,trial,train_mse,test_mse\n";
  for (const auto& c : sweep.cells)
    out += std::to_string(c.train_count) + ',' + std::to_string(c.degree) + ',' + std::to_string(c.trial) + ',' +
           format_double(c.train_mse) + ',' + format_double(c.test_mse) + '\n';
  return out;
}

inline std::string sweep_summary_csv(const SweepResult& sweep) {
  std::string out = "split,degree,trials,train_mse_mean,train_mse_std,test_mse_mean,test_mse_std,optimal\n";
  for (const auto& s : sweep.summary) {
    const auto it = sweep.best_degree.find(s.train_count);
    const bool optimal = it != sweep.best_degree.end() && it->second == s.degree;
    out += std::to_string(s.train_count) + ',' + std::to_string(s.degree) + ',' + std::to_string(s.trials_ok) + ',' +
           format_double(s.train_mean) + ',' + format_double(s.train_std) + ',' + format_double(s.test_mean) + ',' +
           format_double(s.test_std) + ',' + (optimal ? "1" : "0") + '\n';
  }
  return out;
}

}  // namespace simplexnet::io
