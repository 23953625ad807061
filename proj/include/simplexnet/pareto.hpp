#pragma once

// Sampling the solution mapping w -> (theta*(w), f~(theta*(w))) over a weight
// grid, and the numerical checks run against such samples.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <span>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "simplexnet/elastic_net.hpp"
#include "simplexnet/error.hpp"
#include "simplexnet/io/dataset.hpp"
#include "simplexnet/parallel.hpp"
#include "simplexnet/simplex.hpp"
#include "simplexnet/solver.hpp"

namespace simplexnet {

struct ParetoRecord {
  WeightVector w;
  Eigen::VectorXd theta;
  Losses losses;  // f~1, f~2, f~3 at theta
};

struct SampleFailure {
  std::size_t grid_index;
  std::vector<double> w;
  std::string message;
};

struct SampleMeta {
  std::string dataset;
  double epsilon = 0.0;
  int resolution = 0;
  SolverConfig solver;
  std::uint64_t seed = 0;
  /// How to reload the problem the sample was computed from.
  std::optional<io::DatasetSpec> source;
};

struct ParetoSample {
  std::vector<ParetoRecord> records;
  SampleMeta meta;
  std::vector<SampleFailure> failures;

  std::size_t size() const { return records.size(); }
  Eigen::Index predictors() const { return records.empty() ? 0 : records.front().theta.size(); }
};

struct SampleOptions {
  enum class OnFailure { abort, skip };

  /// Warm start each solve from its predecessor in the same w1-row of the grid.
  bool warm_start = true;
  OnFailure on_failure = OnFailure::abort;
  unsigned threads = 1;
};

struct SampleStats {
  long total_sweeps = 0;
  int max_sweeps = 0;
  double max_final_delta = 0.0;
  std::vector<Eigen::Index> zero_columns;
};

/// Solves every grid point. Warm-start chains are the maximal runs of
/// consecutive grid points with equal w1, so the chain structure (and hence
/// every output bit) does not depend on the thread count.
inline ParetoSample sample_pareto(const ElasticNetProblem& problem, const std::vector<WeightVector>& grid,
                                  const SolverConfig& config, const SampleOptions& options = {},
                                  SampleStats* stats = nullptr) {
  config.validate();
  for (const auto& w : grid)
    if (w.size() != 3) throw DomainError("elastic net grid points must have 3 components");

  std::vector<std::pair<std::size_t, std::size_t>> chains;
  for (std::size_t begin = 0; begin < grid.size();) {
    std::size_t end = begin + 1;
    if (options.warm_start)
      while (end < grid.size() && grid[end][0] == grid[begin][0]) ++end;
    chains.emplace_back(begin, end);
    begin = end;
  }

  struct Slot {
    std::optional<SolveResult> result;
    std::optional<SampleFailure> failure;
    std::exception_ptr error;
  };
  std::vector<Slot> slots(grid.size());

  parallel_for(chains.size(), options.threads, [&](std::size_t c) {
    const auto [begin, end] = chains[c];
    std::optional<Eigen::VectorXd> previous;
    for (std::size_t i = begin; i < end; ++i) {
      try {
        slots[i].result = solve_scalarized(problem, grid[i], config, previous ? &*previous : nullptr);
        previous = slots[i].result->theta;
      } catch (const ConvergenceError& e) {
        slots[i].failure = SampleFailure{i, grid[i].to_vector(), e.what()};
        slots[i].error = std::current_exception();
        previous.reset();
      }
    }
  });

  ParetoSample sample;
  sample.meta.epsilon = problem.epsilon();
  sample.meta.solver = config;
  sample.meta.seed = config.seed;
  sample.records.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto& slot = slots[i];
    if (slot.failure) {
      if (options.on_failure == SampleOptions::OnFailure::abort) std::rethrow_exception(slot.error);
      sample.failures.push_back(*slot.failure);
      continue;
    }
    auto& r = *slot.result;
    if (stats != nullptr) {
      stats->total_sweeps += r.sweeps;
      stats->max_sweeps = std::max(stats->max_sweeps, r.sweeps);
      stats->max_final_delta = std::max(stats->max_final_delta, r.final_delta);
      if (stats->zero_columns.empty()) stats->zero_columns = r.zero_columns;
    }
    Losses f = perturbed_objectives(problem, r.theta);
    sample.records.push_back({grid[i], std::move(r.theta), f});
  }
  return sample;
}

struct DominancePair {
  std::size_t dominated;
  std::size_t dominating;
};

/// Pairs (r, s) where record s beats record r by more than tol in every loss.
inline std::vector<DominancePair> check_weak_dominance(const ParetoSample& sample, double tol) {
  std::vector<DominancePair> out;
  const auto& rec = sample.records;
  for (std::size_t r = 0; r < rec.size(); ++r) {
    for (std::size_t s = 0; s < rec.size(); ++s) {
      if (r == s) continue;
      bool strictly_better = true;
      for (int i = 0; i < 3 && strictly_better; ++i)
        strictly_better = rec[s].losses[i] < rec[r].losses[i] - tol;
      if (strictly_better) out.push_back({r, s});
    }
  }
  return out;
}

struct CertificateViolation {
  std::size_t record;
  double violation;
};

/// Records whose theta fails the subgradient optimality conditions by more than tol.
inline std::vector<CertificateViolation> check_certificates(const ElasticNetProblem& problem,
                                                            const ParetoSample& sample, double tol) {
  std::vector<CertificateViolation> out;
  for (std::size_t r = 0; r < sample.records.size(); ++r) {
    const double v = optimality_violation(problem, sample.records[r].w, sample.records[r].theta);
    if (!(v <= tol)) out.push_back({r, v});
  }
  return out;
}

/// Records whose stored losses disagree with the losses recomputed from theta.
/// f~2 and f~3 depend on theta alone; f~1 is checked only when the problem is given.
inline std::vector<std::size_t> check_loss_consistency(const ParetoSample& sample, double tol,
                                                       const ElasticNetProblem* problem = nullptr) {
  std::vector<std::size_t> bad;
  const double eps = sample.meta.epsilon;
  for (std::size_t r = 0; r < sample.records.size(); ++r) {
    const auto& rec = sample.records[r];
    Losses expected;
    if (problem != nullptr) {
      expected = perturbed_objectives(*problem, rec.theta);
    } else {
      const double f3 = 0.5 * rec.theta.squaredNorm();
      expected = {rec.losses[0], rec.theta.lpNorm<1>() + eps * f3, (1.0 + eps) * f3};
    }
    for (int i = 0; i < 3; ++i) {
      if (!(std::abs(expected[i] - rec.losses[i]) <= tol * std::max(1.0, std::abs(expected[i])))) {
        bad.push_back(r);
        break;
      }
    }
  }
  return bad;
}

// ---------------------------------------------------------------------------
// Hoelder-type continuity bound |x*(w) - x*(w')| <= sqrt(K0/alpha0 * |w - w'|_1).

struct PathPoint {
  std::vector<double> w;
  Eigen::VectorXd x;
};

struct HoelderReport {
  double max_violation = 0.0;  // max over pairs of lhs - rhs
  std::size_t worst_first = 0;
  std::size_t worst_second = 0;
  double worst_lhs = 0.0;
  double worst_rhs = 0.0;
  std::size_t pairs = 0;
};

inline double hoelder_rhs(std::span<const double> w, std::span<const double> v, double alpha0, double K0) {
  double l1 = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) l1 += std::abs(w[k] - v[k]);
  return std::sqrt(K0 / alpha0 * l1);
}

inline HoelderReport check_hoelder_bound(const std::vector<PathPoint>& points, double alpha0, double K0) {
  if (points.size() < 2) throw DomainError("Hoelder check needs at least two points");
  if (!(alpha0 > 0.0) || !(K0 > 0.0)) throw DomainError("alpha0 and K0 must be positive");
  HoelderReport rep;
  rep.max_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      if (points[i].w.size() != points[j].w.size() || points[i].x.size() != points[j].x.size())
        throw DomainError("path points have inconsistent dimensions");
      const double lhs = (points[i].x - points[j].x).norm();
      const double rhs = hoelder_rhs(points[i].w, points[j].w, alpha0, K0);
      ++rep.pairs;
      if (lhs - rhs > rep.max_violation) {
        rep.max_violation = lhs - rhs;
        rep.worst_first = i;
        rep.worst_second = j;
        rep.worst_lhs = lhs;
        rep.worst_rhs = rhs;
      }
    }
  }
  return rep;
}

inline std::vector<PathPoint> sample_path_points(const ParetoSample& sample) {
  std::vector<PathPoint> out;
  out.reserve(sample.size());
  for (const auto& r : sample.records) out.push_back({r.w.to_vector(), r.theta});
  return out;
}

/// Constants for the bound on a sample: alpha0 = eps (the convexity parameter
/// of f~2, the smallest of the three) and K0 = the largest observed range of a
/// perturbed loss, which can only underestimate the true K0.
inline std::pair<double, double> sample_hoelder_constants(const ParetoSample& sample) {
  double K0 = 0.0;
  for (int i = 0; i < 3; ++i) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& r : sample.records) {
      lo = std::min(lo, r.losses[i]);
      hi = std::max(hi, r.losses[i]);
    }
    if (!sample.records.empty()) K0 = std::max(K0, hi - lo);
  }
  return {sample.meta.epsilon, K0};
}

// ---------------------------------------------------------------------------
// Two-objective scalar example with a non-injective solution map:
//   f1(x) = x^2 + |x|,  f2(x) = (x-1)^2 + |x-1|.

inline double remark_objective(double w1, double x) {
  const double f1 = x * x + std::abs(x);
  const double f2 = (x - 1.0) * (x - 1.0) + std::abs(x - 1.0);
  return w1 * f1 + (1.0 - w1) * f2;
}

/// Minimizer of w1 f1 + (1 - w1) f2.
inline double remark_solution_path(double w1) {
  if (!(w1 >= 0.0 && w1 <= 1.0)) throw DomainError("w1 must lie in [0, 1]");
  if (w1 < 0.25) return 1.0;
  if (w1 <= 0.75) return (3.0 - 4.0 * w1) / 2.0;
  return 0.0;
}

inline std::vector<PathPoint> remark_path_points(const std::vector<double>& w1s) {
  std::vector<PathPoint> out;
  out.reserve(w1s.size());
  for (double w1 : w1s) {
    Eigen::VectorXd x(1);
    x[0] = remark_solution_path(w1);
    out.push_back({{w1, 1.0 - w1}, std::move(x)});
  }
  return out;
}

/// Constants for the example: both objectives are a convex function plus
/// 2 * (x^2 / 2), and each varies by at most 2 over the Pareto set [0, 1].
inline constexpr double kRemarkAlpha0 = 2.0;
inline constexpr double kRemarkK0 = 2.0;

}  // namespace simplexnet
