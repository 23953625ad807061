#pragma once

// Bezier simplex b(w) = sum_{i in N^m_d} C(d,i) w^i p_i. Control points are
// the rows of a matrix, in reverse-lexicographic multi-index order.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "simplexnet/error.hpp"
#include "simplexnet/simplex.hpp"

namespace simplexnet {

/// Position of `index` in enumerate_multi_indices(index.size(), index.degree()).
inline std::size_t multi_index_rank(const MultiIndex& index) {
  const std::size_t m = index.size();
  std::size_t rank = 0;
  int remaining = index.degree();
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const std::size_t rest = m - k - 1;  // coordinates after k
    // Indices sharing the prefix but with a larger k-th exponent come first.
    for (int e = remaining; e > index[k]; --e)
      rank += binomial(static_cast<std::uint64_t>(remaining - e) + rest - 1, rest - 1);
    remaining -= index[k];
  }
  return rank;
}

class BezierSimplexModel {
 public:
  BezierSimplexModel(std::size_t m, int d, Eigen::MatrixXd control_points)
      : basis_(m, d), control_points_(std::move(control_points)) {
    if (static_cast<std::size_t>(control_points_.rows()) != basis_.size())
      throw DomainError("expected " + std::to_string(basis_.size()) + " control points, got " +
                        std::to_string(control_points_.rows()));
    if (control_points_.cols() < 1) throw DomainError("control points must have positive dimension");
    if (!control_points_.allFinite()) throw DomainError("control points must be finite");
  }

  std::size_t dimension() const { return basis_.dimension(); }
  int degree() const { return basis_.degree(); }
  Eigen::Index out_dim() const { return control_points_.cols(); }
  std::size_t size() const { return basis_.size(); }
  const BernsteinBasis& basis() const { return basis_; }
  const Eigen::MatrixXd& control_points() const { return control_points_; }
  const std::vector<MultiIndex>& indices() const { return basis_.indices(); }

  Eigen::VectorXd control_point(const MultiIndex& index) const {
    if (index.size() != dimension() || index.degree() != degree())
      throw DomainError("multi-index does not belong to this model");
    return control_points_.row(static_cast<Eigen::Index>(multi_index_rank(index))).transpose();
  }

  Eigen::VectorXd evaluate(std::span<const double> w) const {
    std::vector<double> b(basis_.size());
    basis_.evaluate(w, b);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(out_dim());
    for (std::size_t t = 0; t < b.size(); ++t)
      out += b[t] * control_points_.row(static_cast<Eigen::Index>(t)).transpose();
    return out;
  }

  Eigen::VectorXd evaluate(const WeightVector& w) const {
    if (w.size() != dimension()) throw DomainError("weight dimension does not match model");
    return evaluate(w.components());
  }

 private:
  BernsteinBasis basis_;
  Eigen::MatrixXd control_points_;
};

/// The model restricted to Delta_I, re-indexed over N^{|I|}_d.
inline BezierSimplexModel restrict_to_face(const BezierSimplexModel& model, const FaceIndex& face) {
  if (face.dimension() != model.dimension()) throw DomainError("face dimension does not match model");
  const auto sub_indices = enumerate_multi_indices(face.size(), model.degree());
  Eigen::MatrixXd points(static_cast<Eigen::Index>(sub_indices.size()), model.out_dim());
  std::vector<int> full(model.dimension(), 0);
  for (std::size_t t = 0; t < sub_indices.size(); ++t) {
    std::fill(full.begin(), full.end(), 0);
    for (std::size_t k = 0; k < face.size(); ++k) full[face.members()[k]] = sub_indices[t][k];
    points.row(static_cast<Eigen::Index>(t)) = model.control_point(MultiIndex(full)).transpose();
  }
  return {face.size(), model.degree(), std::move(points)};
}

}  // namespace simplexnet
