#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace simplexnet {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Violated precondition on a numeric argument (point off the simplex,
/// hyper-parameters outside the convertible region, mismatched sizes).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed external input. Row and column are 1-based when known.
class InputError : public Error {
 public:
  InputError(const std::string& what, std::optional<std::size_t> row = std::nullopt,
             std::optional<std::size_t> column = std::nullopt)
      : Error(what), row_(row), column_(column) {}

  std::optional<std::size_t> row() const { return row_; }
  std::optional<std::size_t> column() const { return column_; }

 private:
  std::optional<std::size_t> row_;
  std::optional<std::size_t> column_;
};

/// A persisted object failed its invariants on reload.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Coordinate descent hit its iteration cap.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate, double last_delta,
                   std::vector<double> weight = {})
      : Error(what),
        last_iterate_(std::move(last_iterate)),
        last_delta_(last_delta),
        weight_(std::move(weight)) {}

  const std::vector<double>& last_iterate() const { return last_iterate_; }
  double last_delta() const { return last_delta_; }
  /// Weight at which the solve failed; empty when not attached.
  const std::vector<double>& weight() const { return weight_; }

 private:
  std::vector<double> last_iterate_;
  double last_delta_;
  std::vector<double> weight_;
};

}  // namespace simplexnet
