#pragma once

// Reference computations used only by the tests. Each one takes a different
// route from the library code it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;  // row-major

/// Gaussian elimination with partial pivoting.
inline Vec gauss_solve(Mat A, Vec b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (A[piv][col] == 0.0) throw std::runtime_error("singular system");
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = A[r][col] / A[col][col];
      for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= A[i][c] * x[c];
    x[i] = s / A[i][i];
  }
  return x;
}

/// Ridge solution (X^T X / m + eps I)^{-1} X^T y / m.
inline Vec ridge(const Mat& X, const Vec& y, double eps) {
  const std::size_t m = X.size(), n = X.front().size();
  Mat A(n, Vec(n, 0.0));
  Vec b(n, 0.0);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t i = 0; i < n; ++i) {
      b[i] += X[r][i] * y[r] / static_cast<double>(m);
      for (std::size_t j = 0; j < n; ++j) A[i][j] += X[r][i] * X[r][j] / static_cast<double>(m);
    }
  for (std::size_t i = 0; i < n; ++i) A[i][i] += eps;
  return gauss_solve(A, b);
}

/// h(theta) = a ||X theta - y||^2 / (2m) + b ||theta||_1 + c ||theta||^2 / 2.
inline double elastic_objective(const Mat& X, const Vec& y, double a, double b, double c, const Vec& t) {
  const std::size_t m = X.size();
  double rss = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    double e = -y[r];
    for (std::size_t j = 0; j < t.size(); ++j) e += X[r][j] * t[j];
    rss += e * e;
  }
  double l1 = 0.0, l2 = 0.0;
  for (double v : t) {
    l1 += std::abs(v);
    l2 += v * v;
  }
  return a * rss / (2.0 * static_cast<double>(m)) + b * l1 + c * l2 / 2.0;
}

/// FISTA on the elastic-net objective, stopped when an iterate moves less
/// than `tol` in max norm.
inline Vec prox_gradient(const Mat& X, const Vec& y, double a, double b, double c, Vec start, double tol,
                         long max_iter = 50'000'000) {
  const std::size_t m = X.size(), n = start.size();
  // Lipschitz bound from the Frobenius norm of X.
  double fro = 0.0;
  for (const auto& row : X)
    for (double v : row) fro += v * v;
  const double L = a * fro / static_cast<double>(m) + c;
  const double step = 1.0 / L;
  Vec x = start, z = start, prev = start, r(m), g(n);
  double t = 1.0;
  for (long it = 0; it < max_iter; ++it) {
    for (std::size_t i = 0; i < m; ++i) {
      double e = -y[i];
      for (std::size_t j = 0; j < n; ++j) e += X[i][j] * z[j];
      r[i] = e;
    }
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) s += X[i][j] * r[i];
      g[j] = a * s / static_cast<double>(m) + c * z[j];
    }
    double change = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double u = z[j] - step * g[j];
      const double mag = std::max(std::abs(u) - step * b, 0.0);
      x[j] = u < 0 ? -mag : mag;
      change = std::max(change, std::abs(x[j] - prev[j]));
    }
    if (change < tol && it > 0) return x;
    const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    for (std::size_t j = 0; j < n; ++j) z[j] = x[j] + (t - 1.0) / t_next * (x[j] - prev[j]);
    t = t_next;
    prev = x;
  }
  throw std::runtime_error("prox-gradient oracle did not converge");
}

/// Minimizer of w1 f1 + (1 - w1) f2 over an equispaced grid on [lo, hi].
inline double remark_brute_force(double w1, int points = 1'000'000, double lo = -1.0, double hi = 2.0) {
  double best_x = lo, best = INFINITY;
  for (int k = 0; k < points; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    const double f1 = x * x + std::abs(x);
    const double f2 = (x - 1.0) * (x - 1.0) + std::abs(x - 1.0);
    const double v = w1 * f1 + (1.0 - w1) * f2;
    if (v < best) {
      best = v;
      best_x = x;
    }
  }
  return best_x;
}

/// Binomial coefficient from Pascal's triangle.
inline std::uint64_t pascal(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::vector<std::uint64_t> row(static_cast<std::size_t>(n) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j > 0; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j) - 1];
  return row[static_cast<std::size_t>(k)];
}

/// Number of distinct words with the given letter counts, by the recursion
/// M(i) = sum_k M(i - e_k).
inline std::uint64_t multinomial_paths(const std::vector<int>& i) {
  static std::map<std::vector<int>, std::uint64_t> memo;
  int total = 0;
  for (int e : i) total += e;
  if (total == 0) return 1;
  if (auto it = memo.find(i); it != memo.end()) return it->second;
  std::uint64_t s = 0;
  for (std::size_t k = 0; k < i.size(); ++k) {
    if (i[k] == 0) continue;
    auto j = i;
    --j[k];
    s += multinomial_paths(j);
  }
  memo[i] = s;
  return s;
}

/// De Casteljau evaluation of a Bezier simplex given as index -> point.
inline Vec de_casteljau(const std::map<std::vector<int>, Vec>& points, int d, const Vec& w) {
  std::map<std::vector<int>, Vec> level = points;
  const std::size_t m = w.size();
  for (int r = d; r > 0; --r) {
    std::map<std::vector<int>, Vec> next;
    for (const auto& [idx, p] : level) {
      // Each lower index i receives sum_k w_k p_{i + e_k}.
      for (std::size_t k = 0; k < m; ++k) {
        if (idx[k] == 0) continue;
        auto lower = idx;
        --lower[k];
        auto& acc = next[lower];
        if (acc.empty()) acc.assign(p.size(), 0.0);
        for (std::size_t c = 0; c < p.size(); ++c) acc[c] += w[k] * p[c];
      }
    }
    level = std::move(next);
  }
  return level.begin()->second;
}

}  // namespace oracle
