#pragma once

#include "patchrank/types.hpp"

namespace patchrank {

enum class GroupAxis { Rows, Cols };

/// Entrywise shrinkage: argmin_U tau*|U|_1 + 1/2*||U - M||_F^2.
Matrix soft_threshold(const Matrix& M, double tau);

/// Singular value thresholding: argmin_B tau*||B||_* + 1/2*||B - M||_F^2.
/// Computed from a full (non-randomized) SVD.
Matrix svt(const Matrix& M, double tau);

/// Group shrinkage: argmin_E tau*||E||_{2,1} + 1/2*||E - M||_F^2 where the
/// groups are rows (default) or columns of E.
Matrix l21_shrink(const Matrix& M, double tau, GroupAxis axis = GroupAxis::Rows);

/// Projection onto the nonnegative orthant.
Matrix nonneg_project(const Matrix& M);

double l1_norm(const Matrix& M);
double nuclear_norm(const Matrix& M);
double l21_norm(const Matrix& M, GroupAxis axis = GroupAxis::Rows);

}  // namespace patchrank
