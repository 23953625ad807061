#pragma once

// Minimizer of the weighted sum h_w = a f1 + b f2 + c f3 with a = w1,
// b = w2, c = w3 + eps. Cyclic coordinate descent with exact soft-threshold
// updates, plus a Newton step restricted to the current sign pattern
// (feature-sign search) whenever the sweeps stall or the pattern settles.
//
// The Newton step is what makes the solver usable near the w3 = 0 edge: with
// collinear predictors the Hessian's smallest eigenvalue is eps, and plain
// coordinate descent stops on the max-delta rule long before it gets there.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "simplexnet/elastic_net.hpp"
#include "simplexnet/error.hpp"
#include "simplexnet/random.hpp"
#include "simplexnet/simplex.hpp"

namespace simplexnet {

struct SolverConfig {
  enum class Start { zero, random };

  double tolerance = 1e-8;
  int max_iterations = 100000;
  Start start = Start::zero;
  std::uint64_t seed = 0;
  /// Record h_w after every sweep into SolveResult::objective_trace.
  bool record_trace = false;

  void validate() const {
    if (!(tolerance > 0.0)) throw DomainError("solver tolerance must be positive");
    if (max_iterations < 1) throw DomainError("solver max_iterations must be at least 1");
  }
};

struct SolveResult {
  Eigen::VectorXd theta;
  int sweeps = 0;
  double final_delta = 0.0;
  int newton_steps = 0;
  /// Predictors with an all-zero column; their coefficient is pinned to 0.
  std::vector<Eigen::Index> zero_columns;
  std::vector<double> objective_trace;
};

inline double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

namespace detail {

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

/// h_w at theta with the `active` coordinates replaced by t. Evaluated from
/// the residual; the Gram form cancels badly far from the data.
inline double restricted_objective(const ElasticNetProblem& p, const ScalarizedCoefficients& k,
                                   const std::vector<Eigen::Index>& active, const Eigen::VectorXd& theta,
                                   const Eigen::VectorXd& t) {
  Eigen::VectorXd full = theta;
  for (std::size_t u = 0; u < active.size(); ++u) full[active[u]] = t[static_cast<Eigen::Index>(u)];
  const double m = static_cast<double>(p.observations());
  return k.a * (p.X() * full - p.y()).squaredNorm() / (2.0 * m) + k.b * full.lpNorm<1>() +
         0.5 * k.c * full.squaredNorm();
}

/// One feature-sign step: minimize the smooth model on the orthant of the
/// current sign pattern, then take the best point among the Newton point and
/// the zero crossings on the segment towards it. Returns the max abs change.
inline double newton_step(const ElasticNetProblem& p, const ScalarizedCoefficients& k,
                          Eigen::VectorXd& theta) {
  std::vector<Eigen::Index> active;
  for (Eigen::Index j = 0; j < theta.size(); ++j)
    if (theta[j] != 0.0) active.push_back(j);
  if (active.empty()) return 0.0;

  const auto na = static_cast<Eigen::Index>(active.size());
  Eigen::MatrixXd H(na, na);
  Eigen::VectorXd rhs(na), current(na);
  for (Eigen::Index u = 0; u < na; ++u) {
    for (Eigen::Index v = 0; v < na; ++v) H(u, v) = k.a * p.gram()(active[u], active[v]);
    H(u, u) += k.c;
    rhs[u] = k.a * p.xty()[active[u]] - k.b * sign_of(theta[active[u]]);
    current[u] = theta[active[u]];
  }
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
  if (ldlt.info() != Eigen::Success) return 0.0;
  const Eigen::VectorXd target = ldlt.solve(rhs);
  if (!target.allFinite()) return 0.0;

  double best_value = restricted_objective(p, k, active, theta, current);
  Eigen::VectorXd best = current;
  auto consider = [&](const Eigen::VectorXd& cand) {
    const double v = restricted_objective(p, k, active, theta, cand);
    if (v < best_value) {
      best_value = v;
      best = cand;
    }
  };
  consider(target);
  const Eigen::VectorXd dir = target - current;
  for (Eigen::Index u = 0; u < na; ++u) {
    if (sign_of(target[u]) == sign_of(current[u])) continue;
    const double tau = current[u] / (current[u] - target[u]);
    Eigen::VectorXd cand = current + tau * dir;
    cand[u] = 0.0;
    consider(cand);
  }

  double change = 0.0;
  for (Eigen::Index u = 0; u < na; ++u) {
    change = std::max(change, std::abs(best[u] - current[u]));
    theta[active[u]] = best[u];
  }
  return change;
}

}  // namespace detail

/// theta*(w). `start`, when given, overrides config.start (warm start).
inline SolveResult solve_scalarized(const ElasticNetProblem& problem, const WeightVector& w,
                                    const SolverConfig& config,
                                    const Eigen::VectorXd* start = nullptr) {
  config.validate();
  const auto k = scalarized_coefficients(w, problem.epsilon());
  const Eigen::Index n = problem.predictors();
  const double m = static_cast<double>(problem.observations());
  const auto& X = problem.X();
  const auto& col_sq = problem.column_squared_norms();

  SolveResult result;
  for (Eigen::Index j = 0; j < n; ++j)
    if (col_sq[j] == 0.0) result.zero_columns.push_back(j);

  // On Delta_{2,3} the objective is b|theta|_1 + c|theta|^2/2 with c > 0.
  if (k.a == 0.0) {
    result.theta = Eigen::VectorXd::Zero(n);
    return result;
  }

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(n);
  if (start != nullptr) {
    check_theta(problem, *start);
    theta = *start;
  } else if (config.start == SolverConfig::Start::random) {
    SplitMix64 rng(config.seed);
    for (Eigen::Index j = 0; j < n; ++j) theta[j] = 2.0 * rng.uniform() - 1.0;
  }
  for (Eigen::Index j : result.zero_columns) theta[j] = 0.0;

  Eigen::VectorXd diag(n);
  for (Eigen::Index j = 0; j < n; ++j) diag[j] = k.a * col_sq[j] / m + k.c;

  Eigen::VectorXd residual = problem.y() - X * theta;
  std::vector<int> pattern(n), previous_pattern, newton_pattern;
  // Sweeps to wait before repeating a Newton step on an unchanged pattern;
  // doubles on each repeat.
  int newton_gap = 1, last_newton = 0;

  for (int sweep = 1; sweep <= config.max_iterations; ++sweep) {
    double delta = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (col_sq[j] == 0.0) continue;
      const double old = theta[j];
      const double z = k.a * X.col(j).dot(residual) / m + k.a * col_sq[j] / m * old;
      const double updated = soft_threshold(z, k.b) / diag[j];
      if (updated != old) {
        residual.noalias() -= (updated - old) * X.col(j);
        theta[j] = updated;
        delta = std::max(delta, std::abs(updated - old));
      }
    }
    result.sweeps = sweep;
    result.final_delta = delta;

    for (Eigen::Index j = 0; j < n; ++j) pattern[j] = detail::sign_of(theta[j]);
    const bool stalled = delta < config.tolerance;
    const bool stable = pattern == previous_pattern;
    if (stable && pattern != newton_pattern) newton_gap = 1;
    if (stalled || (stable && sweep - last_newton >= newton_gap)) {
      const double step = detail::newton_step(problem, k, theta);
      ++result.newton_steps;
      if (pattern == newton_pattern) newton_gap *= 2;
      newton_pattern = pattern;
      last_newton = sweep;
      if (step > 0.0) residual = problem.y() - X * theta;
      if (config.record_trace) result.objective_trace.push_back(scalarized_objective(problem, w, theta));
      if (stalled && step < config.tolerance) {
        result.theta = std::move(theta);
        return result;
      }
    } else if (config.record_trace) {
      result.objective_trace.push_back(scalarized_objective(problem, w, theta));
    }
    previous_pattern = pattern;
  }

  std::vector<double> last(theta.data(), theta.data() + theta.size());
  throw ConvergenceError("coordinate descent did not converge within " +
                             std::to_string(config.max_iterations) + " sweeps",
                         std::move(last), result.final_delta, w.to_vector());
}

/// Largest violation of the subgradient optimality conditions of h_w at theta:
///   theta_j = 0:  |g_j| <= b,   theta_j != 0:  g_j = -b sign(theta_j),
/// where g_j = a X_j^T (X theta - y) / m + c theta_j.
inline double optimality_violation(const ElasticNetProblem& problem, const WeightVector& w,
                                   const Eigen::VectorXd& theta) {
  check_theta(problem, theta);
  const auto k = scalarized_coefficients(w, problem.epsilon());
  const double m = static_cast<double>(problem.observations());
  const Eigen::VectorXd grad =
      k.a * (problem.X().transpose() * (problem.X() * theta - problem.y())) / m + k.c * theta;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    const double v = theta[j] == 0.0 ? std::max(0.0, std::abs(grad[j]) - k.b)
                                     : std::abs(grad[j] + k.b * detail::sign_of(theta[j]));
    worst = std::max(worst, v);
  }
  return worst;
}

}  // namespace simplexnet
