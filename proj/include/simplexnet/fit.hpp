#pragma once

// All-at-once least-squares fitting of a Bezier simplex, MSE scoring, seeded
// train/test splits and the degree-by-split sweep.
//
// b(w) is linear in the control points, so the fit is the linear least squares
// problem min |B P - T|_F with B the Bernstein design matrix. It is solved by a
// thin SVD; singular values below max(rows, cols) * machine-eps * sigma_max are
// dropped, which gives the minimum-norm solution on rank deficiency.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "simplexnet/bezier.hpp"
#include "simplexnet/error.hpp"
#include "simplexnet/parallel.hpp"
#include "simplexnet/pareto.hpp"
#include "simplexnet/random.hpp"
#include "simplexnet/simplex.hpp"

namespace simplexnet {

/// Inputs w_s with target rows t_s.
struct FitSample {
  std::vector<WeightVector> w;
  Eigen::MatrixXd targets;

  std::size_t size() const { return w.size(); }

  FitSample subset(const std::vector<std::size_t>& rows) const {
    FitSample out;
    out.w.reserve(rows.size());
    out.targets.resize(static_cast<Eigen::Index>(rows.size()), targets.cols());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      out.w.push_back(w[rows[k]]);
      out.targets.row(static_cast<Eigen::Index>(k)) = targets.row(static_cast<Eigen::Index>(rows[k]));
    }
    return out;
  }
};

/// Targets are the concatenation (theta, f~1, f~2, f~3), i.e. out_dim = n + 3.
inline FitSample to_fit_sample(const ParetoSample& sample) {
  FitSample out;
  const Eigen::Index n = sample.predictors();
  out.targets.resize(static_cast<Eigen::Index>(sample.size()), n + 3);
  for (std::size_t r = 0; r < sample.size(); ++r) {
    const auto& rec = sample.records[r];
    out.w.push_back(rec.w);
    const auto row = static_cast<Eigen::Index>(r);
    out.targets.row(row).head(n) = rec.theta.transpose();
    for (int i = 0; i < 3; ++i) out.targets(row, n + i) = rec.losses[i];
  }
  return out;
}

struct FitDiagnostics {
  std::size_t basis_size = 0;
  std::size_t rank = 0;
  /// sigma_max / smallest retained sigma.
  double condition = 0.0;
  /// Some singular directions were dropped.
  bool truncated = false;
  /// Fewer samples than basis functions.
  bool underdetermined = false;
};

struct FitResult {
  BezierSimplexModel model;
  FitDiagnostics diagnostics;
};

inline Eigen::MatrixXd bernstein_design_matrix(const BernsteinBasis& basis, const std::vector<WeightVector>& w) {
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> B(
      static_cast<Eigen::Index>(w.size()), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t s = 0; s < w.size(); ++s) {
    if (w[s].size() != basis.dimension()) throw DomainError("sample weight dimension does not match m");
    basis.evaluate(w[s].components(), std::span<double>(B.row(static_cast<Eigen::Index>(s)).data(), basis.size()));
  }
  return B;
}

inline FitResult fit_all_at_once(const FitSample& sample, std::size_t m, int d) {
  if (sample.size() == 0) throw DomainError("cannot fit an empty sample");
  if (static_cast<std::size_t>(sample.targets.rows()) != sample.size())
    throw DomainError("targets and weights have different row counts");
  if (sample.targets.cols() < 1) throw DomainError("targets must have positive dimension");
  const BernsteinBasis basis(m, d);
  const Eigen::MatrixXd B = bernstein_design_matrix(basis, sample.w);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double threshold = static_cast<double>(std::max(B.rows(), B.cols())) *
                           std::numeric_limits<double>::epsilon();
  svd.setThreshold(threshold);
  Eigen::MatrixXd P = svd.solve(sample.targets);

  FitDiagnostics diag;
  diag.basis_size = basis.size();
  diag.rank = static_cast<std::size_t>(svd.rank());
  diag.underdetermined = sample.size() < basis.size();
  diag.truncated = diag.rank < basis.size();
  const auto& sv = svd.singularValues();
  diag.condition = diag.rank > 0 ? sv[0] / sv[static_cast<Eigen::Index>(diag.rank) - 1]
                                 : std::numeric_limits<double>::infinity();
  return {BezierSimplexModel(m, d, std::move(P)), diag};
}

/// Mean over samples of |b(w_s) - t_s|^2 / out_dim.
inline double mse(const BezierSimplexModel& model, const FitSample& sample) {
  if (sample.size() == 0) throw DomainError("cannot score an empty sample");
  if (sample.targets.cols() != model.out_dim()) throw DomainError("target dimension does not match model");
  double total = 0.0;
  for (std::size_t s = 0; s < sample.size(); ++s) {
    const Eigen::VectorXd r =
        model.evaluate(sample.w[s]) - sample.targets.row(static_cast<Eigen::Index>(s)).transpose();
    total += r.squaredNorm();
  }
  return total / (static_cast<double>(sample.size()) * static_cast<double>(model.out_dim()));
}

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Uniform partition without replacement: a partial Fisher-Yates shuffle of
/// 0..size-1 driven by SplitMix64(seed), index i swapped with i + below(size - i)
/// for i < train_count. Both halves are returned in ascending order.
inline SplitIndices train_test_split(std::size_t size, std::size_t train_count, std::uint64_t seed) {
  if (train_count < 1 || train_count >= size)
    throw DomainError("train count must satisfy 1 <= k < sample size (k=" + std::to_string(train_count) +
                      ", size=" + std::to_string(size) + ")");
  std::vector<std::size_t> perm(size);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < train_count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(size - i));
    std::swap(perm[i], perm[j]);
  }
  SplitIndices out;
  out.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(train_count));
  out.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(train_count), perm.end());
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

struct FitReport {
  double train_mse = 0.0;
  double test_mse = 0.0;
  int degree = 0;
  std::size_t train_count = 0;
  std::size_t test_count = 0;
  std::uint64_t seed = 0;
  int trial = 0;
  double condition_diagnostic = 0.0;
  bool rank_deficient = false;
  std::size_t basis_size = 0;
  std::size_t rank = 0;
  /// MSE is the per-coordinate mean: divided by out_dim as well as sample count.
  static constexpr const char* kMseConvention = "per-coordinate";
  /// Set when the cell failed; the MSE fields are NaN then.
  std::optional<std::string> error;
};

/// Split, fit on the train part, score both parts.
inline std::pair<FitResult, FitReport> fit_and_score(const FitSample& sample, std::size_t m, int d,
                                                     std::size_t train_count, std::uint64_t seed) {
  const auto split = train_test_split(sample.size(), train_count, seed);
  const FitSample train = sample.subset(split.train);
  const FitSample test = sample.subset(split.test);
  FitResult fit = fit_all_at_once(train, m, d);
  FitReport rep;
  rep.train_mse = mse(fit.model, train);
  rep.test_mse = mse(fit.model, test);
  rep.degree = d;
  rep.train_count = split.train.size();
  rep.test_count = split.test.size();
  rep.seed = seed;
  rep.condition_diagnostic = fit.diagnostics.condition;
  rep.rank_deficient = fit.diagnostics.truncated || fit.diagnostics.underdetermined;
  rep.basis_size = fit.diagnostics.basis_size;
  rep.rank = fit.diagnostics.rank;
  return {std::move(fit), rep};
}

/// Seed of the split used by trial `trial` at `train_count`. It does not depend
/// on the degree, so every degree of a trial is fitted to the same training set.
inline std::uint64_t split_seed(std::uint64_t base_seed, std::size_t train_count, int trial) {
  const std::uint64_t cell = (static_cast<std::uint64_t>(train_count) << 20) ^ static_cast<std::uint64_t>(trial);
  return splitmix64_mix(base_seed ^ splitmix64_mix(cell));
}

struct SweepSummary {
  std::size_t train_count = 0;
  int degree = 0;
  int trials_ok = 0;
  double train_mean = 0.0, train_std = 0.0;
  double test_mean = 0.0, test_std = 0.0;
};

struct SweepResult {
  std::vector<FitReport> cells;  // ordered by (train_count, degree, trial) as given
  std::vector<SweepSummary> summary;
  /// Degree minimizing the mean test MSE per train count (ties go to the first listed degree).
  std::map<std::size_t, int> best_degree;
};

inline std::pair<double, double> mean_and_std(const std::vector<double>& v) {
  if (v.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

inline SweepResult degree_sweep(const FitSample& sample, std::size_t m, const std::vector<int>& degrees,
                                const std::vector<std::size_t>& train_counts, int trials,
                                std::uint64_t base_seed, unsigned threads = 1) {
  if (degrees.empty() || train_counts.empty() || trials < 1)
    throw DomainError("sweep needs at least one degree, one train count and one trial");
  for (int d : degrees)
    if (d < 0) throw DomainError("degrees must be non-negative");
  for (std::size_t k : train_counts)
    if (k < 1 || k >= sample.size()) throw DomainError("train count out of range: " + std::to_string(k));

  const std::size_t cells = train_counts.size() * degrees.size() * static_cast<std::size_t>(trials);
  SweepResult result;
  result.cells.resize(cells);
  parallel_for(cells, threads, [&](std::size_t c) {
    const int trial = static_cast<int>(c % static_cast<std::size_t>(trials));
    const std::size_t di = (c / static_cast<std::size_t>(trials)) % degrees.size();
    const std::size_t si = c / (static_cast<std::size_t>(trials) * degrees.size());
    const std::uint64_t seed = split_seed(base_seed, train_counts[si], trial);
    FitReport rep;
    try {
      rep = fit_and_score(sample, m, degrees[di], train_counts[si], seed).second;
    } catch (const std::exception& e) {
      rep.train_mse = rep.test_mse = std::numeric_limits<double>::quiet_NaN();
      rep.degree = degrees[di];
      rep.train_count = train_counts[si];
      rep.test_count = sample.size() - train_counts[si];
      rep.seed = seed;
      rep.error = e.what();
    }
    rep.trial = trial;
    result.cells[c] = std::move(rep);
  });

  std::size_t c = 0;
  for (std::size_t k : train_counts) {
    double best = std::numeric_limits<double>::infinity();
    for (int d : degrees) {
      std::vector<double> train, test;
      for (int t = 0; t < trials; ++t, ++c) {
        if (result.cells[c].error) continue;
        train.push_back(result.cells[c].train_mse);
        test.push_back(result.cells[c].test_mse);
      }
      SweepSummary s;
      s.train_count = k;
      s.degree = d;
      s.trials_ok = static_cast<int>(train.size());
      std::tie(s.train_mean, s.train_std) = mean_and_std(train);
      std::tie(s.test_mean, s.test_std) = mean_and_std(test);
      if (s.trials_ok > 0 && s.test_mean < best) {
        best = s.test_mean;
        result.best_degree[k] = d;
      }
      result.summary.push_back(s);
    }
  }
  return result;
}

}  // namespace simplexnet
