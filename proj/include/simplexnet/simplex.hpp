#pragma once

// Simplex combinatorics: barycentric weights, faces, multi-indices and the
// multinomial Bernstein basis.
//
// Multi-indices of N^m_d are always enumerated in reverse-lexicographic
// order: (d,0,..,0) first, (0,..,0,d) last. Serialized models depend on it.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "simplexnet/error.hpp"

namespace simplexnet {

inline constexpr double kSimplexSumTolerance = 1e-12;

/// A point of the standard simplex: non-negative components summing to one.
class WeightVector {
 public:
  WeightVector() = default;

  explicit WeightVector(std::vector<double> components) : components_(std::move(components)) {
    if (components_.empty()) throw DomainError("weight vector must have at least one component");
    double sum = 0.0;
    for (double c : components_) {
      if (!std::isfinite(c) || c < 0.0)
        throw DomainError("weight vector components must be finite and non-negative");
      sum += c;
    }
    if (std::abs(sum - 1.0) > kSimplexSumTolerance)
      throw DomainError("weight vector components must sum to 1 (got " + std::to_string(sum) + ")");
  }

  WeightVector(std::initializer_list<double> components)
      : WeightVector(std::vector<double>(components)) {}

  std::size_t size() const { return components_.size(); }
  double operator[](std::size_t k) const { return components_[k]; }
  std::span<const double> components() const { return components_; }
  const std::vector<double>& to_vector() const { return components_; }

  bool operator==(const WeightVector&) const = default;

 private:
  std::vector<double> components_;
};

/// Non-empty face Delta_I of Delta^{m-1}. Members are 0-based, strictly increasing.
class FaceIndex {
 public:
  FaceIndex(std::size_t dimension, std::vector<std::size_t> members)
      : dimension_(dimension), members_(std::move(members)) {
    if (members_.empty()) throw DomainError("face index must be non-empty");
    for (std::size_t k = 0; k < members_.size(); ++k) {
      if (members_[k] >= dimension_) throw DomainError("face member out of range");
      if (k > 0 && members_[k] <= members_[k - 1])
        throw DomainError("face members must be strictly increasing");
    }
  }

  /// The full simplex as a face of itself.
  static FaceIndex full(std::size_t dimension) {
    std::vector<std::size_t> all(dimension);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return FaceIndex(dimension, std::move(all));
  }

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return members_.size(); }
  const std::vector<std::size_t>& members() const { return members_; }

  bool contains(std::size_t k) const {
    return std::binary_search(members_.begin(), members_.end(), k);
  }

 private:
  std::size_t dimension_;
  std::vector<std::size_t> members_;
};

/// Element of N^m_d.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> exponents) : exponents_(std::move(exponents)) {
    for (int e : exponents_)
      if (e < 0) throw DomainError("multi-index exponents must be non-negative");
    degree_ = std::accumulate(exponents_.begin(), exponents_.end(), 0);
  }
  MultiIndex(std::initializer_list<int> exponents) : MultiIndex(std::vector<int>(exponents)) {}

  std::size_t size() const { return exponents_.size(); }
  int degree() const { return degree_; }
  int operator[](std::size_t k) const { return exponents_[k]; }
  const std::vector<int>& exponents() const { return exponents_; }

  bool operator==(const MultiIndex& other) const { return exponents_ == other.exponents_; }
  auto operator<=>(const MultiIndex& other) const { return exponents_ <=> other.exponents_; }

 private:
  std::vector<int> exponents_;
  int degree_ = 0;
};

namespace detail {

inline void enumerate_rec(std::vector<int>& current, std::size_t pos, int remaining,
                          std::vector<MultiIndex>& out) {
  if (pos + 1 == current.size()) {
    current[pos] = remaining;
    out.emplace_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[pos] = e;
    enumerate_rec(current, pos + 1, remaining - e, out);
  }
}

}  // namespace detail

/// Exact C(n, k); throws when the value does not fit in 64 bits.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // r * (n - k + i) / i is exact: it is C(n - k + i, i).
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max())
      throw Error("binomial coefficient C(" + std::to_string(n) + "," + std::to_string(k) +
                  ") overflows 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

/// All of N^m_d in reverse-lexicographic order. Count is C(d+m-1, m-1).
inline std::vector<MultiIndex> enumerate_multi_indices(std::size_t m, int d) {
  if (m == 0) throw DomainError("multi-index dimension must be positive");
  if (d < 0) throw DomainError("degree must be non-negative");
  std::vector<MultiIndex> out;
  out.reserve(binomial(static_cast<std::uint64_t>(d) + m - 1, m - 1));
  std::vector<int> current(m, 0);
  detail::enumerate_rec(current, 0, d, out);
  return out;
}

/// d! / (i_1! ... i_m!) as a product of binomials C(i_1+..+i_k, i_k).
inline std::uint64_t multinomial_coefficient(const MultiIndex& index) {
  unsigned __int128 acc = 1;
  std::uint64_t partial = 0;
  for (int e : index.exponents()) {
    partial += static_cast<std::uint64_t>(e);
    acc *= binomial(partial, static_cast<std::uint64_t>(e));
    if (acc > std::numeric_limits<std::uint64_t>::max())
      throw Error("multinomial coefficient overflows 64 bits");
  }
  return static_cast<std::uint64_t>(acc);
}

inline std::uint64_t multinomial_coefficient(int d, const MultiIndex& index) {
  if (index.degree() != d) throw DomainError("multi-index does not sum to the degree");
  return multinomial_coefficient(index);
}

/// Integer power with 0^0 = 1.
inline double int_pow(double base, int exponent) {
  double r = 1.0;
  for (int k = 0; k < exponent; ++k) r *= base;
  return r;
}

/// C(d,i) w^i.
inline double bernstein_value(int d, const MultiIndex& index, const WeightVector& w) {
  if (index.degree() != d) throw DomainError("multi-index does not sum to the degree");
  if (index.size() != w.size()) throw DomainError("multi-index and weight dimensions differ");
  double term = static_cast<double>(multinomial_coefficient(index));
  for (std::size_t k = 0; k < w.size(); ++k) term *= int_pow(w[k], index[k]);
  return term;
}

/// Precomputed basis of N^m_d for repeated evaluation.
class BernsteinBasis {
 public:
  BernsteinBasis(std::size_t m, int d) : m_(m), d_(d), indices_(enumerate_multi_indices(m, d)) {
    coefficients_.reserve(indices_.size());
    for (const auto& i : indices_)
      coefficients_.push_back(static_cast<double>(multinomial_coefficient(i)));
  }

  std::size_t dimension() const { return m_; }
  int degree() const { return d_; }
  std::size_t size() const { return indices_.size(); }
  const std::vector<MultiIndex>& indices() const { return indices_; }

  /// Writes all basis values at w into out (size() entries).
  void evaluate(std::span<const double> w, std::span<double> out) const {
    if (w.size() != m_) throw DomainError("weight dimension does not match basis");
    if (out.size() != indices_.size()) throw DomainError("output span has wrong size");
    const std::size_t stride = static_cast<std::size_t>(d_) + 1;
    std::vector<double> powers(m_ * stride);
    for (std::size_t k = 0; k < m_; ++k) {
      powers[k * stride] = 1.0;
      for (int e = 1; e <= d_; ++e) powers[k * stride + e] = powers[k * stride + e - 1] * w[k];
    }
    for (std::size_t t = 0; t < indices_.size(); ++t) {
      double term = coefficients_[t];
      const auto& ex = indices_[t].exponents();
      for (std::size_t k = 0; k < m_; ++k) term *= powers[k * stride + ex[k]];
      out[t] = term;
    }
  }

  std::vector<double> evaluate(const WeightVector& w) const {
    std::vector<double> out(indices_.size());
    evaluate(w.components(), out);
    return out;
  }

 private:
  std::size_t m_;
  int d_;
  std::vector<MultiIndex> indices_;
  std::vector<double> coefficients_;
};

/// Grid (n_1..n_m)/resolution over N^m_resolution, in multi-index order.
inline std::vector<WeightVector> grid_points(std::size_t m, int resolution) {
  if (resolution < 1) throw DomainError("grid resolution must be at least 1");
  std::vector<WeightVector> out;
  for (const auto& n : enumerate_multi_indices(m, resolution)) {
    std::vector<double> w(m);
    for (std::size_t k = 0; k < m; ++k)
      w[k] = static_cast<double>(n[k]) / static_cast<double>(resolution);
    out.emplace_back(std::move(w));
  }
  return out;
}

/// Point of Delta_I whose I-components are w_face, zero elsewhere.
inline WeightVector embed_face(const FaceIndex& face, const WeightVector& w_face) {
  if (w_face.size() != face.size())
    throw DomainError("face weight has " + std::to_string(w_face.size()) +
                      " components, face has " + std::to_string(face.size()));
  std::vector<double> w(face.dimension(), 0.0);
  for (std::size_t k = 0; k < face.size(); ++k) w[face.members()[k]] = w_face[k];
  return WeightVector(std::move(w));
}

/// Inverse of embed_face on Delta_I; rejects points with mass outside I.
inline WeightVector project_face(const FaceIndex& face, const WeightVector& w) {
  if (w.size() != face.dimension()) throw DomainError("weight dimension does not match face");
  std::vector<double> out;
  out.reserve(face.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (face.contains(k))
      out.push_back(w[k]);
    else if (w[k] != 0.0)
      throw DomainError("weight does not lie on the face");
  }
  return WeightVector(std::move(out));
}

}  // namespace simplexnet
