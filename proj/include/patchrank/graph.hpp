#pragma once

#include <vector>

#include "patchrank/types.hpp"

namespace patchrank {

struct GridCoord {
  int row = 0;
  int col = 0;
};

/// Prior affinity over patches arranged on a grid. `weights` is symmetric
/// with a zero diagonal; entry (i, j) is nonzero only for 8-neighbor pairs.
struct PatchAdjacency {
  int grid_rows = 0;
  int grid_cols = 0;
  Matrix weights;
};

/// Gaussian affinity between 8-neighbor cells of a rows x cols grid.
/// `features` holds one column per cell in row-major cell order. The kernel
/// width is the mean feature distance over neighbor pairs; if that mean is
/// zero (all neighbor features identical) it falls back to 1, which makes
/// every neighbor weight exactly 1.
PatchAdjacency build_prior_graph(int rows, int cols, const Matrix& features);

/// Same affinity for an explicit subset of grid cells (used when the patch
/// set is a grid with holes, e.g. a clipped surround ring). `features`
/// column k describes the cell at coords[k].
Matrix grid_gaussian_adjacency(const std::vector<GridCoord>& coords, const Matrix& features);

/// Diagonal degree matrix with D_ii = sum_j Z_ij.
Matrix degree(const Matrix& Z);

/// R_ij = (v_i - v_j)^2.
Matrix pairwise_sq(const Vector& v);

/// 1/2 * sum_ij Z_ij (v_i - v_j)^2, evaluated directly from the definition.
double smoothness(const Matrix& Z, const Vector& v);

}  // namespace patchrank
