#pragma once

// Three-objective reformulation of the elastic net:
//   f1 = |X theta - y|^2 / (2 m_obs),  f2 = |theta|_1,  f3 = |theta|^2 / 2,
// each perturbed by epsilon * f3 so that every objective is strongly convex.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "simplexnet/error.hpp"
#include "simplexnet/simplex.hpp"

namespace simplexnet {

class ElasticNetProblem {
 public:
  ElasticNetProblem(Eigen::MatrixXd X, Eigen::VectorXd y, double epsilon)
      : X_(std::move(X)), y_(std::move(y)), epsilon_(epsilon) {
    if (X_.rows() < 1 || X_.cols() < 1) throw DomainError("design matrix must be non-empty");
    if (X_.rows() != y_.size())
      throw DomainError("design matrix has " + std::to_string(X_.rows()) + " rows but response has " +
                        std::to_string(y_.size()));
    if (!(epsilon_ > 0.0) || !std::isfinite(epsilon_))
      throw DomainError("perturbation epsilon must be positive");
    if (!X_.allFinite() || !y_.allFinite()) throw DomainError("data must be finite");
    const double inv_m = 1.0 / static_cast<double>(X_.rows());
    gram_ = X_.transpose() * X_ * inv_m;
    xty_ = X_.transpose() * y_ * inv_m;
    col_sq_norms_ = X_.colwise().squaredNorm().transpose();
  }

  const Eigen::MatrixXd& X() const { return X_; }
  const Eigen::VectorXd& y() const { return y_; }
  double epsilon() const { return epsilon_; }
  Eigen::Index observations() const { return X_.rows(); }
  Eigen::Index predictors() const { return X_.cols(); }

  /// X^T X / m_obs and X^T y / m_obs.
  const Eigen::MatrixXd& gram() const { return gram_; }
  const Eigen::VectorXd& xty() const { return xty_; }
  const Eigen::VectorXd& column_squared_norms() const { return col_sq_norms_; }

  ElasticNetProblem with_epsilon(double epsilon) const { return {X_, y_, epsilon}; }

 private:
  Eigen::MatrixXd X_;
  Eigen::VectorXd y_;
  double epsilon_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd xty_;
  Eigen::VectorXd col_sq_norms_;
};

struct Hyperparams {
  double mu = 0.0;
  double lambda = 0.0;
};

using Losses = std::array<double, 3>;

inline void check_theta(const ElasticNetProblem& problem, const Eigen::VectorXd& theta) {
  if (theta.size() != problem.predictors())
    throw DomainError("theta has length " + std::to_string(theta.size()) + ", expected " +
                      std::to_string(problem.predictors()));
}

inline Losses objectives(const ElasticNetProblem& problem, const Eigen::VectorXd& theta) {
  check_theta(problem, theta);
  const double m = static_cast<double>(problem.observations());
  const double f1 = (problem.X() * theta - problem.y()).squaredNorm() / (2.0 * m);
  return {f1, theta.lpNorm<1>(), 0.5 * theta.squaredNorm()};
}

inline Losses perturb(const Losses& f, double epsilon) {
  return {f[0] + epsilon * f[2], f[1] + epsilon * f[2], f[2] + epsilon * f[2]};
}

inline Losses perturbed_objectives(const ElasticNetProblem& problem, const Eigen::VectorXd& theta) {
  return perturb(objectives(problem, theta), problem.epsilon());
}

/// Coefficients (a, b, c) of h_w = a f1 + b f2 + c f3 = sum_i w_i f~_i.
struct ScalarizedCoefficients {
  double a;
  double b;
  double c;
};

inline ScalarizedCoefficients scalarized_coefficients(const WeightVector& w, double epsilon) {
  if (w.size() != 3) throw DomainError("elastic net weights must have 3 components");
  return {w[0], w[1], w[2] + epsilon};
}

/// h_w(theta) evaluated directly from the perturbed objectives.
inline double scalarized_objective(const ElasticNetProblem& problem, const WeightVector& w,
                                   const Eigen::VectorXd& theta) {
  const auto [a, b, c] = scalarized_coefficients(w, problem.epsilon());
  const auto f = objectives(problem, theta);
  return a * f[0] + b * f[1] + c * f[2];
}

/// mu = w2/w1, lambda = (w3 + eps)/w1. Undefined on the face w1 = 0.
inline Hyperparams weight_to_hyperparams(const WeightVector& w, double epsilon) {
  if (w.size() != 3) throw DomainError("elastic net weights must have 3 components");
  if (!(epsilon >= 0.0)) throw DomainError("epsilon must be non-negative");
  if (w[0] == 0.0)
    throw DomainError("weight lies on face Delta_{2,3} (w1 = 0): (mu, lambda) undefined");
  // lambda = (w3 + eps)/w1 rewritten with w1 + w2 + w3 = 1 as
  // eps (mu + 1) + (1 + eps) w3/w1, so the rounded result never leaves the
  // validity region and sits exactly on its boundary when w3 = 0.
  const double mu = w[1] / w[0];
  return {mu, epsilon * (mu + 1.0) + (1.0 + epsilon) * (w[2] / w[0])};
}

/// True when 0 <= mu <= (lambda - eps)/eps, written as eps*mu <= lambda - eps so
/// that the boundary mu = (lambda - eps)/eps is tested without a division. `slack`
/// is a relative allowance for rounding in the inputs.
inline bool in_validity_region(const Hyperparams& h, double epsilon, double slack = 0.0) {
  if (!(h.mu >= 0.0) || !(h.lambda >= 0.0)) return false;
  const double lhs = epsilon * (h.mu + 1.0);
  return lhs <= h.lambda + slack * std::max(lhs, h.lambda);
}

inline WeightVector hyperparams_to_weight(const Hyperparams& h, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  if (!in_validity_region(h, epsilon, 4 * std::numeric_limits<double>::epsilon()))
    throw DomainError("(mu, lambda) outside validity region 0 <= mu <= (lambda - eps)/eps");
  const double denom = h.lambda + h.mu + 1.0;
  double w1 = (1.0 + epsilon) / denom;
  double w2 = (1.0 + epsilon) * h.mu / denom;
  double w3 = (h.lambda - epsilon * (h.mu + 1.0)) / denom;
  // Rounding at the boundary can push w3 a few ulps negative.
  w3 = std::max(w3, 0.0);
  // Renormalize to absorb rounding; the exact values already sum to one.
  const double s = w1 + w2 + w3;
  w1 /= s;
  w2 /= s;
  w3 /= s;
  return WeightVector({w1, w2, w3});
}

}  // namespace simplexnet
