#pragma once

#include <atomic>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "simplexnet/simplexnet.hpp"
#include "oracles.hpp"

namespace testing_support {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("simplexnet-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline simplexnet::ElasticNetProblem example1(double epsilon = 1e-6) {
  return simplexnet::io::example1_dataset().problem(epsilon);
}

inline oracle::Mat to_rows(const Eigen::MatrixXd& X) {
  oracle::Mat out(static_cast<std::size_t>(X.rows()), oracle::Vec(static_cast<std::size_t>(X.cols())));
  for (Eigen::Index r = 0; r < X.rows(); ++r)
    for (Eigen::Index c = 0; c < X.cols(); ++c) out[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = X(r, c);
  return out;
}

inline oracle::Vec to_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

/// Uniform point on the simplex (normalized exponentials).
inline simplexnet::WeightVector random_weight(simplexnet::SplitMix64& rng, std::size_t m) {
  std::vector<double> w(m);
  double s = 0.0;
  for (auto& x : w) s += (x = -std::log(1.0 - rng.uniform()));
  for (auto& x : w) x /= s;
  // Absorb rounding in the last component so the sum check is tight.
  double head = 0.0;
  for (std::size_t k = 0; k + 1 < m; ++k) head += w[k];
  w[m - 1] = std::max(0.0, 1.0 - head);
  return simplexnet::WeightVector(std::move(w));
}

inline Eigen::MatrixXd random_matrix(simplexnet::SplitMix64& rng, Eigen::Index rows, Eigen::Index cols,
                                     double lo = -1.0, double hi = 1.0) {
  Eigen::MatrixXd M(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) M(r, c) = lo + (hi - lo) * rng.uniform();
  return M;
}

}  // namespace testing_support
