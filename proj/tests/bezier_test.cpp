#include <gtest/gtest.h>

#include "support.hpp"

using namespace simplexnet;
using testing_support::random_matrix;
using testing_support::random_weight;

namespace {

BezierSimplexModel random_model(SplitMix64& rng, std::size_t m, int d, Eigen::Index out_dim) {
  const auto count = static_cast<Eigen::Index>(enumerate_multi_indices(m, d).size());
  return {m, d, random_matrix(rng, count, out_dim, -2.0, 2.0)};
}

std::map<std::vector<int>, oracle::Vec> as_map(const BezierSimplexModel& model) {
  std::map<std::vector<int>, oracle::Vec> out;
  for (std::size_t t = 0; t < model.size(); ++t) {
    const Eigen::VectorXd row = model.control_points().row(static_cast<Eigen::Index>(t)).transpose();
    out[model.indices()[t].exponents()] = oracle::Vec(row.data(), row.data() + row.size());
  }
  return out;
}

}  // namespace

TEST(Model, ValidatesControlPoints) {
  EXPECT_THROW(BezierSimplexModel(3, 2, Eigen::MatrixXd::Zero(5, 2)), DomainError);
  EXPECT_THROW(BezierSimplexModel(3, 2, Eigen::MatrixXd::Zero(6, 0)), DomainError);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(6, 2);
  bad(3, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(BezierSimplexModel(3, 2, bad), DomainError);
  const BezierSimplexModel ok(3, 30, Eigen::MatrixXd::Zero(496, 1));
  EXPECT_EQ(ok.size(), 496u);
}

TEST(Model, RankMatchesEnumerationPosition) {
  for (std::size_t m = 1; m <= 4; ++m)
    for (int d : {0, 1, 4, 9}) {
      const auto idx = enumerate_multi_indices(m, d);
      for (std::size_t t = 0; t < idx.size(); ++t) ASSERT_EQ(multi_index_rank(idx[t]), t);
    }
}

TEST(Evaluate, DegreeOneIsAffineInterpolation) {
  SplitMix64 rng(1);
  const auto model = random_model(rng, 3, 1, 4);
  for (int t = 0; t < 20; ++t) {
    const auto w = random_weight(rng, 3);
    Eigen::VectorXd expected = Eigen::VectorXd::Zero(4);
    for (std::size_t k = 0; k < 3; ++k) {
      std::vector<int> e(3, 0);
      e[k] = 1;
      expected += w[k] * model.control_point(MultiIndex(e));
    }
    EXPECT_LE((model.evaluate(w) - expected).lpNorm<Eigen::Infinity>(), 1e-14);
  }
}

TEST(Evaluate, CornersInterpolateExactly) {
  SplitMix64 rng(2);
  for (int d : {0, 1, 3, 12, 30}) {
    const auto model = random_model(rng, 3, d, 3);
    for (std::size_t k = 0; k < 3; ++k) {
      std::vector<double> w(3, 0.0);
      w[k] = 1.0;
      std::vector<int> corner(3, 0);
      corner[k] = d;
      EXPECT_EQ(model.evaluate(WeightVector(w)), model.control_point(MultiIndex(corner)));
    }
  }
}

TEST(Evaluate, QuadraticOnTheSegment) {
  Eigen::MatrixXd P(3, 1);
  P << 0.0, 1.0, 0.0;  // indices (2,0), (1,1), (0,2)
  const BezierSimplexModel model(2, 2, P);
  EXPECT_DOUBLE_EQ(model.evaluate(WeightVector{0.5, 0.5})[0], 0.5);
  for (double t : {0.0, 0.1, 0.37, 0.8, 1.0})
    EXPECT_NEAR(model.evaluate(WeightVector{t, 1.0 - t})[0], 2.0 * t * (1.0 - t), 1e-15);
}

TEST(Evaluate, MatchesDeCasteljau) {
  SplitMix64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 1 + rng.below(4);
    const int d = static_cast<int>(rng.below(9));
    const auto model = random_model(rng, m, d, 2);
    const auto w = random_weight(rng, m);
    const auto ref = oracle::de_casteljau(as_map(model), d, w.to_vector());
    const auto got = model.evaluate(w);
    for (int c = 0; c < 2; ++c) EXPECT_NEAR(got[c], ref[static_cast<std::size_t>(c)], 1e-12);
  }
}

TEST(Evaluate, RejectsWrongDimension) {
  SplitMix64 rng(4);
  const auto model = random_model(rng, 3, 2, 1);
  EXPECT_THROW(model.evaluate(WeightVector{0.5, 0.5}), DomainError);
}

TEST(Evaluate, AffineInvariance) {
  SplitMix64 rng(5);
  const auto model = random_model(rng, 3, 6, 3);
  const Eigen::Vector3d shift(1.5, -0.25, 10.0);
  Eigen::MatrixXd shifted = model.control_points();
  shifted.rowwise() += shift.transpose();
  const BezierSimplexModel moved(3, 6, shifted);
  for (int t = 0; t < 30; ++t) {
    const auto w = random_weight(rng, 3);
    EXPECT_LE((moved.evaluate(w) - (model.evaluate(w) + shift)).lpNorm<Eigen::Infinity>(), 1e-12);
  }
}

TEST(Evaluate, ConvexHull) {
  SplitMix64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto model = random_model(rng, 3, 1 + static_cast<int>(rng.below(10)), 4);
    const Eigen::RowVectorXd lo = model.control_points().colwise().minCoeff();
    const Eigen::RowVectorXd hi = model.control_points().colwise().maxCoeff();
    for (int t = 0; t < 50; ++t) {
      const auto v = model.evaluate(random_weight(rng, 3));
      for (int c = 0; c < 4; ++c) {
        EXPECT_GE(v[c], lo[c] - 1e-12);
        EXPECT_LE(v[c], hi[c] + 1e-12);
      }
    }
  }
}

TEST(RestrictToFace, FullFaceIsIdentity) {
  SplitMix64 rng(7);
  const auto model = random_model(rng, 3, 5, 2);
  const auto same = restrict_to_face(model, FaceIndex::full(3));
  EXPECT_EQ(same.degree(), 5);
  EXPECT_EQ(same.control_points(), model.control_points());
}

TEST(RestrictToFace, VertexIsConstant) {
  SplitMix64 rng(8);
  const auto model = random_model(rng, 3, 4, 2);
  const auto vertex = restrict_to_face(model, FaceIndex(3, {1}));
  ASSERT_EQ(vertex.size(), 1u);
  EXPECT_EQ(vertex.evaluate(WeightVector{1.0}), model.control_point({0, 4, 0}));
}

TEST(RestrictToFace, CommutesWithEvaluation) {
  SplitMix64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + rng.below(3);
    const auto model = random_model(rng, m, static_cast<int>(rng.below(12)), 3);
    std::vector<std::size_t> members;
    for (std::size_t k = 0; k < m; ++k)
      if (rng.below(2) == 1) members.push_back(k);
    if (members.empty()) members.push_back(rng.below(m));
    const FaceIndex face(m, members);
    const auto sub = restrict_to_face(model, face);
    const auto w_face = random_weight(rng, face.size());
    EXPECT_EQ(sub.evaluate(w_face), model.evaluate(embed_face(face, w_face)));
  }
}
