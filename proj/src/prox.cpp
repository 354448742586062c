#include "patchrank/prox.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace patchrank {

namespace {

void check_tau(double tau) {
  require(std::isfinite(tau) && tau >= 0.0, "shrinkage threshold must be finite and >= 0");
}

}  // namespace

Matrix soft_threshold(const Matrix& M, double tau) {
  check_tau(tau);
  return M.unaryExpr([tau](double x) {
    double m = std::abs(x) - tau;
    return m > 0.0 ? (x > 0.0 ? m : -m) : 0.0;
  });
}

Matrix svt(const Matrix& M, double tau) {
  check_tau(tau);
  Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericError("SVD did not converge", -1, "svt");
  Vector s = svd.singularValues();
  for (int i = 0; i < s.size(); ++i) s[i] = std::max(s[i] - tau, 0.0);
  return svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
}

Matrix l21_shrink(const Matrix& M, double tau, GroupAxis axis) {
  check_tau(tau);
  if (axis == GroupAxis::Cols) return l21_shrink(M.transpose(), tau, GroupAxis::Rows).transpose();
  Matrix out = Matrix::Zero(M.rows(), M.cols());
  for (int i = 0; i < M.rows(); ++i) {
    double nrm = M.row(i).norm();
    if (nrm > tau) out.row(i) = (1.0 - tau / nrm) * M.row(i);
  }
  return out;
}

Matrix nonneg_project(const Matrix& M) { return M.cwiseMax(0.0); }

double l1_norm(const Matrix& M) { return M.cwiseAbs().sum(); }

double nuclear_norm(const Matrix& M) {
  Eigen::BDCSVD<Matrix> svd(M);
  return svd.singularValues().sum();
}

double l21_norm(const Matrix& M, GroupAxis axis) {
  if (axis == GroupAxis::Cols) return l21_norm(M.transpose(), GroupAxis::Rows);
  double total = 0.0;
  for (int i = 0; i < M.rows(); ++i) total += M.row(i).norm();
  return total;
}

}  // namespace patchrank
