#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <utility>

namespace patchrank {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Failure inside an iterative numeric routine. Carries the iteration
/// index and the variable being updated when the failure was detected.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, int iteration = -1, std::string variable = "")
      : std::runtime_error(what), iteration(iteration), variable(std::move(variable)) {}

  int iteration;
  std::string variable;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

inline void check_finite(const Matrix& m, const std::string& name, int iteration = -1) {
  if (!m.allFinite()) throw NumericError("non-finite value in " + name, iteration, name);
}

inline void check_finite(const Vector& v, const std::string& name, int iteration = -1) {
  if (!v.allFinite()) throw NumericError("non-finite value in " + name, iteration, name);
}

}  // namespace patchrank
