#pragma once

// Static bundle consumed by the browser explorer:
//   model.json     the fitted model
//   manifest.json  {dataset, epsilon, n, resolution, created_at, tool_version, ...}
//   edges.json     model evaluations along the three edges of the weight triangle

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "simplexnet/bezier.hpp"
#include "simplexnet/error.hpp"
#include "simplexnet/io/model_io.hpp"
#include "simplexnet/random.hpp"
#include "simplexnet/version.hpp"

namespace simplexnet::io {

inline constexpr int kEdgePoints = 201;

struct BundleInfo {
  std::string dataset;
  double epsilon = 0.0;
  int resolution = 0;
  /// ISO-8601 timestamp written verbatim into the manifest.
  std::string created_at;
  std::vector<std::string> predictor_names;
};

struct Edge {
  const char* name;
  std::size_t from;  // 0-based vertex at t = 0
  std::size_t to;    // 0-based vertex at t = 1
};

/// Lasso path Delta_{1,2}, ridge path Delta_{1,3}, and the pure-regularizer edge Delta_{2,3}.
inline constexpr Edge kEdges[] = {{"lasso", 0, 1}, {"ridge", 0, 2}, {"regularizers", 1, 2}};

inline nlohmann::json edge_traces(const BezierSimplexModel& model, int points = kEdgePoints) {
  if (model.dimension() != 3) throw DomainError("edge traces need a model over the 2-simplex");
  auto edges = nlohmann::json::array();
  for (const auto& e : kEdges) {
    auto ws = nlohmann::json::array();
    auto values = nlohmann::json::array();
    for (int k = 0; k < points; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(points - 1);
      std::vector<double> w(3, 0.0);
      w[e.from] = 1.0 - t;
      w[e.to] = t;
      const Eigen::VectorXd v = model.evaluate(w);
      ws.push_back(w);
      values.push_back(std::vector<double>(v.data(), v.data() + v.size()));
    }
    edges.push_back({{"name", e.name}, {"face", {e.from + 1, e.to + 1}}, {"w", ws}, {"values", values}});
  }
  return {{"points_per_edge", points}, {"edges", edges}};
}

inline nlohmann::json manifest_json(const BezierSimplexModel& model, const BundleInfo& info) {
  const Eigen::Index n = model.out_dim() - 3;
  std::vector<std::string> theta_labels = info.predictor_names;
  if (static_cast<Eigen::Index>(theta_labels.size()) != n) {
    theta_labels.clear();
    for (Eigen::Index j = 1; j <= n; ++j) theta_labels.push_back("theta_" + std::to_string(j));
  }
  return {{"dataset", info.dataset},
          {"epsilon", info.epsilon},
          {"n", n},
          {"out_dim", model.out_dim()},
          {"m", model.dimension()},
          {"d", model.degree()},
          {"resolution", info.resolution},
          {"created_at", info.created_at},
          {"tool_version", kToolVersion},
          {"theta_labels", theta_labels},
          {"loss_labels", {"f1", "f2", "f3"}}};
}

/// Writes the bundle into `dir` (created if needed) and returns its path.
inline std::filesystem::path export_model_bundle(const BezierSimplexModel& model, const BundleInfo& info,
                                                 const std::filesystem::path& dir) {
  if (model.dimension() != 3 || model.out_dim() < 4)
    throw DomainError("bundle export needs an elastic-net model (m = 3, out_dim = n + 3)");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create bundle directory " + dir.string() + ": " + ec.message());
  save_model(model, (dir / "model.json").string(), {{"dataset", info.dataset}, {"epsilon", info.epsilon}});
  write_text((dir / "manifest.json").string(), manifest_json(model, info).dump(2) + "\n");
  write_text((dir / "edges.json").string(), edge_traces(model).dump() + "\n");
  return dir;
}

/// Reference evaluations for cross-implementation checks: the vertices, the
/// centroid, then seeded uniform points on the simplex.
inline nlohmann::json model_fixtures(const BezierSimplexModel& model, int count, std::uint64_t seed) {
  const std::size_t m = model.dimension();
  std::vector<std::vector<double>> ws;
  for (std::size_t k = 0; k < m && static_cast<int>(ws.size()) < count; ++k) {
    std::vector<double> w(m, 0.0);
    w[k] = 1.0;
    ws.push_back(w);
  }
  if (static_cast<int>(ws.size()) < count) ws.emplace_back(m, 1.0 / static_cast<double>(m));
  SplitMix64 rng(seed);
  while (static_cast<int>(ws.size()) < count) {
    // Normalized exponentials are uniform on the simplex.
    std::vector<double> w(m);
    double s = 0.0;
    for (auto& x : w) s += (x = -std::log(1.0 - rng.uniform()));
    for (auto& x : w) x /= s;
    ws.push_back(w);
  }
  auto out = nlohmann::json::array();
  for (const auto& w : ws) {
    const Eigen::VectorXd v = model.evaluate(w);
    out.push_back({{"w", w}, {"value", std::vector<double>(v.data(), v.data() + v.size())}});
  }
  return out;
}

}  // namespace simplexnet::io
