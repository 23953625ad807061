#include <gtest/gtest.h>

#include "support.hpp"

using namespace simplexnet;
using testing_support::example1;

namespace {

ParetoSample example1_sample(int resolution, const SampleOptions& options = {}) {
  return sample_pareto(example1(), grid_points(3, resolution), SolverConfig{}, options);
}

bool bitwise_equal(const ParetoSample& a, const ParetoSample& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t r = 0; r < a.size(); ++r) {
    if (!(a.records[r].w == b.records[r].w)) return false;
    if (a.records[r].theta != b.records[r].theta) return false;
    if (a.records[r].losses != b.records[r].losses) return false;
  }
  return true;
}

}  // namespace

TEST(SamplePareto, FullGridSize) {
  EXPECT_EQ(example1_sample(100).size(), 5151u);
}

TEST(SamplePareto, SingleRecordEqualsDirectSolve) {
  const auto p = example1();
  const auto s = sample_pareto(p, {WeightVector{1.0, 0.0, 0.0}}, {});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.records[0].theta, solve_scalarized(p, {1.0, 0.0, 0.0}, {}).theta);
}

TEST(SamplePareto, PreservesGridOrderAndRecomputesLosses) {
  const auto p = example1();
  const auto grid = grid_points(3, 7);
  const auto s = sample_pareto(p, grid, {});
  ASSERT_EQ(s.size(), grid.size());
  for (std::size_t r = 0; r < grid.size(); ++r) {
    EXPECT_EQ(s.records[r].w, grid[r]);
    EXPECT_EQ(s.records[r].losses, perturbed_objectives(p, s.records[r].theta));
  }
  EXPECT_EQ(s.meta.epsilon, p.epsilon());
  EXPECT_TRUE(check_loss_consistency(s, 1e-10, &p).empty());
}

TEST(SamplePareto, VertexOneSolutionIsUniqueAcrossRuns) {
  const auto p = example1();
  const auto reference = solve_scalarized(p, {1.0, 0.0, 0.0}, {}).theta;
  for (int R : {1, 4, 10, 20}) {
    for (bool warm : {true, false}) {
      SampleOptions opt;
      opt.warm_start = warm;
      const auto s = sample_pareto(p, grid_points(3, R), {}, opt);
      for (const auto& r : s.records) {
        if (r.w[1] == 0.0 && r.w[2] == 0.0) {
          EXPECT_LE((r.theta - reference).lpNorm<Eigen::Infinity>(), 1e-8);
        }
      }
    }
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SolverConfig c;
    c.start = SolverConfig::Start::random;
    c.seed = seed;
    EXPECT_LE((solve_scalarized(p, {1.0, 0.0, 0.0}, c).theta - reference).lpNorm<Eigen::Infinity>(), 1e-6);
  }
}

TEST(SamplePareto, ThreadCountDoesNotChangeOutput) {
  SampleOptions one, four;
  four.threads = 4;
  EXPECT_TRUE(bitwise_equal(example1_sample(30, one), example1_sample(30, four)));
}

TEST(SamplePareto, WarmAndColdStartsAgree) {
  SampleOptions cold;
  cold.warm_start = false;
  const auto a = example1_sample(15);
  const auto b = example1_sample(15, cold);
  for (std::size_t r = 0; r < a.size(); ++r)
    EXPECT_LE((a.records[r].theta - b.records[r].theta).lpNorm<Eigen::Infinity>(), 1e-6);
}

TEST(SamplePareto, FailurePolicies) {
  const auto p = example1();
  SolverConfig config;
  config.max_iterations = 1;
  const auto grid = grid_points(3, 4);
  try {
    sample_pareto(p, grid, config);
    FAIL() << "expected abort";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.weight().size(), 3u);
  }
  SampleOptions skip;
  skip.on_failure = SampleOptions::OnFailure::skip;
  const auto s = sample_pareto(p, grid, config, skip);
  EXPECT_FALSE(s.failures.empty());
  EXPECT_EQ(s.size() + s.failures.size(), grid.size());
  for (const auto& f : s.failures) EXPECT_EQ(f.w, grid[f.grid_index].to_vector());
}

TEST(WeakDominance, SingleRecordIsClean) {
  const auto p = example1();
  const auto s = sample_pareto(p, {WeightVector{0.3, 0.3, 0.4}}, {});
  EXPECT_TRUE(check_weak_dominance(s, 0.0).empty());
}

TEST(WeakDominance, CorruptedRecordIsFlagged) {
  auto s = example1_sample(10);
  const std::size_t victim = 17;
  for (auto& f : s.records[victim].losses) f += 1.0;
  const auto pairs = check_weak_dominance(s, 1e-7);
  ASSERT_FALSE(pairs.empty());
  for (const auto& d : pairs) EXPECT_EQ(d.dominated, victim);
}

TEST(WeakDominance, ConvergedSampleIsClean) {
  EXPECT_TRUE(check_weak_dominance(example1_sample(20), 1e-7).empty());
}

TEST(Certificates, ConvergedSamplePasses) {
  const auto p = example1();
  const auto s = sample_pareto(p, grid_points(3, 20), {});
  EXPECT_TRUE(check_certificates(p, s, 1e-7).empty());
  auto tampered = s;
  tampered.records[5].theta[0] += 1e-3;
  const auto bad = check_certificates(p, tampered, 1e-7);
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_EQ(bad[0].record, 5u);
}

TEST(LossConsistency, DetectsTampering) {
  const auto p = example1();
  auto s = sample_pareto(p, grid_points(3, 5), {});
  EXPECT_TRUE(check_loss_consistency(s, 1e-10).empty());
  s.records[3].losses[0] += 1e-6;
  EXPECT_TRUE(check_loss_consistency(s, 1e-10).empty());  // f~1 needs the data
  const auto bad = check_loss_consistency(s, 1e-10, &p);
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_EQ(bad[0], 3u);
  s.records[4].losses[2] *= 1.01;
  EXPECT_EQ(check_loss_consistency(s, 1e-10).size(), 1u);
}

TEST(RemarkPath, ClosedFormValues) {
  EXPECT_EQ(remark_solution_path(0.0), 1.0);
  EXPECT_EQ(remark_solution_path(0.5), 0.5);
  EXPECT_EQ(remark_solution_path(0.9), 0.0);
  EXPECT_EQ(remark_solution_path(0.25), 1.0);
  EXPECT_EQ(remark_solution_path(0.75), 0.0);
  EXPECT_THROW(remark_solution_path(-0.1), DomainError);
  EXPECT_THROW(remark_solution_path(1.5), DomainError);
}

TEST(RemarkPath, MatchesBruteForceMinimizer) {
  for (int k = 0; k <= 10; ++k) {
    const double w1 = k / 10.0;
    EXPECT_NEAR(oracle::remark_brute_force(w1), remark_solution_path(w1), 2e-6) << w1;
  }
}

TEST(Hoelder, EqualityAtQuarterAndThreeQuarters) {
  const auto rep = check_hoelder_bound(remark_path_points({0.25, 0.75}), kRemarkAlpha0, kRemarkK0);
  EXPECT_EQ(rep.worst_lhs, 1.0);
  EXPECT_EQ(rep.worst_rhs, 1.0);
  EXPECT_EQ(rep.max_violation, 0.0);
}

TEST(Hoelder, IdenticalWeights) {
  const auto rep = check_hoelder_bound(remark_path_points({0.4, 0.4}), kRemarkAlpha0, kRemarkK0);
  EXPECT_EQ(rep.worst_lhs, 0.0);
  EXPECT_EQ(rep.worst_rhs, 0.0);
  EXPECT_EQ(rep.max_violation, 0.0);
}

TEST(Hoelder, DenseGridHolds) {
  std::vector<double> w1s;
  for (int k = 0; k <= 200; ++k) w1s.push_back(k / 200.0);
  const auto rep = check_hoelder_bound(remark_path_points(w1s), kRemarkAlpha0, kRemarkK0);
  EXPECT_EQ(rep.pairs, 201u * 200u / 2u);
  EXPECT_LE(rep.max_violation, 1e-12);
}

TEST(Hoelder, TooSmallConstantsAreReported) {
  std::vector<double> w1s;
  for (int k = 0; k <= 20; ++k) w1s.push_back(k / 20.0);
  const auto rep = check_hoelder_bound(remark_path_points(w1s), kRemarkAlpha0, 0.5);
  EXPECT_GT(rep.max_violation, 0.0);
  EXPECT_LT(rep.worst_first, rep.worst_second);
}

TEST(Hoelder, NeedsTwoPoints) {
  EXPECT_THROW(check_hoelder_bound(remark_path_points({0.5}), 2.0, 2.0), DomainError);
  EXPECT_THROW(check_hoelder_bound(remark_path_points({0.1, 0.5}), 0.0, 2.0), DomainError);
}

TEST(Hoelder, ContinuityProxyOnGridNeighbours) {
  const int R = 100;
  const auto s = example1_sample(R);
  auto [alpha0, K0] = sample_hoelder_constants(s);
  EXPECT_EQ(alpha0, 1e-6);
  K0 *= 2.0;
  std::map<std::pair<int, int>, std::size_t> at;
  for (std::size_t r = 0; r < s.size(); ++r)
    at[{static_cast<int>(std::lround(s.records[r].w[0] * R)), static_cast<int>(std::lround(s.records[r].w[1] * R))}] = r;
  std::size_t checked = 0;
  for (const auto& [key, r] : at) {
    // Neighbours along the three edge directions of the grid.
    for (auto [di, dj] : {std::pair{1, -1}, std::pair{1, 0}, std::pair{0, 1}}) {
      const auto it = at.find({key.first + di, key.second + dj});
      if (it == at.end()) continue;
      const auto& a = s.records[r];
      const auto& b = s.records[it->second];
      const double lhs = (a.theta - b.theta).norm();
      ASSERT_LE(lhs, hoelder_rhs(a.w.components(), b.w.components(), alpha0, K0));
      ++checked;
    }
  }
  EXPECT_EQ(checked, 3u * 100u * 101u / 2u);
}
