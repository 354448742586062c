#include "patchrank/graph.hpp"

#include <cmath>
#include <cstdlib>

namespace patchrank {

Matrix grid_gaussian_adjacency(const std::vector<GridCoord>& coords, const Matrix& features) {
  const int n = static_cast<int>(coords.size());
  require(n > 0, "adjacency needs at least one cell");
  require(features.cols() == n, "one feature column per cell required");

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      int dr = std::abs(coords[i].row - coords[j].row);
      int dc = std::abs(coords[i].col - coords[j].col);
      if (dr <= 1 && dc <= 1) pairs.emplace_back(i, j);
    }

  double sigma = 0.0;
  for (const auto& [i, j] : pairs) sigma += (features.col(i) - features.col(j)).norm();
  if (!pairs.empty()) sigma /= static_cast<double>(pairs.size());
  if (sigma <= 0.0) sigma = 1.0;

  Matrix W = Matrix::Zero(n, n);
  for (const auto& [i, j] : pairs) {
    double d2 = (features.col(i) - features.col(j)).squaredNorm();
    double w = std::exp(-d2 / (2.0 * sigma * sigma));
    W(i, j) = w;
    W(j, i) = w;
  }
  return W;
}

PatchAdjacency build_prior_graph(int rows, int cols, const Matrix& features) {
  require(rows > 0 && cols > 0, "grid dimensions must be positive");
  require(features.cols() == static_cast<Eigen::Index>(rows) * cols,
          "one feature column per grid cell required");
  std::vector<GridCoord> coords;
  coords.reserve(static_cast<std::size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) coords.push_back({r, c});
  PatchAdjacency adj;
  adj.grid_rows = rows;
  adj.grid_cols = cols;
  adj.weights = grid_gaussian_adjacency(coords, features);
  return adj;
}

Matrix degree(const Matrix& Z) {
  require(Z.rows() == Z.cols(), "degree needs a square matrix");
  return Matrix(Z.rowwise().sum().asDiagonal());
}

Matrix pairwise_sq(const Vector& v) {
  const int n = static_cast<int>(v.size());
  Matrix R(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double d = v[i] - v[j];
      R(i, j) = d * d;
    }
  return R;
}

double smoothness(const Matrix& Z, const Vector& v) {
  require(Z.rows() == Z.cols() && Z.rows() == v.size(), "Z and v dimensions must agree");
  double total = 0.0;
  for (int i = 0; i < Z.rows(); ++i)
    for (int j = 0; j < Z.cols(); ++j) {
      double d = v[i] - v[j];
      total += Z(i, j) * d * d;
    }
  return 0.5 * total;
}

}  // namespace patchrank
