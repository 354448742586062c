#pragma once

#include <vector>

#include "patchrank/graph.hpp"
#include "patchrank/image.hpp"
#include "patchrank/types.hpp"

namespace patchrank {

struct BoundingBox {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  double cx() const { return x + w / 2.0; }
  double cy() const { return y + h / 2.0; }
  bool inside(int frame_w, int frame_h) const {
    return x >= 0 && y >= 0 && w >= 1 && h >= 1 && x + w <= frame_w && y + h <= frame_h;
  }
};

double iou(const BoundingBox& a, const BoundingBox& b);

/// Intersects the box with the frame. Throws if nothing remains.
BoundingBox clamp_to_frame(const BoundingBox& box, int frame_w, int frame_h);

inline constexpr int kGridRows = 8;
inline constexpr int kGridCols = 8;
inline constexpr int kPatchCount = kGridRows * kGridCols;
inline constexpr int kFeatureDim = 32;  // 24 color bins + 8 orientation bins

struct PatchGrid {
  BoundingBox box;
  int rows = kGridRows;
  int cols = kGridCols;
  std::vector<BoundingBox> rects;  // one per patch, row-major
  Matrix features;                 // kFeatureDim x kPatchCount, L2-normalized columns
};

/// Tiles the box into an 8x8 grid of non-overlapping patches (remainder
/// pixels go to the last row/column) and extracts per-patch features.
PatchGrid partition(const Frame& frame, const BoundingBox& box);

/// 32-dim descriptor of one rectangle: 8 bins per RGB channel plus an 8-bin
/// magnitude-weighted unsigned gradient-orientation histogram over [0, pi),
/// L2-normalized (an all-zero histogram stays zero).
Vector extract_feature(const Frame& frame, const BoundingBox& rect);

/// Foreground query indicator: patch centers inside the box scaled by
/// `shrink` about its own center.
Vector foreground_queries(const PatchGrid& grid, double shrink);

/// The background ranking problem lives on the box grid extended by a ring
/// of equally sized cells out to the box scaled by `expand`. Ring cells are
/// clipped to the frame and dropped when empty; the surviving ring cells are
/// the queries. Node order: the 64 box patches first (same order as the
/// grid), then ring cells.
struct BackgroundProblem {
  bool available = false;          // false when no ring cell survived clipping
  std::vector<GridCoord> coords;   // extended-grid coordinates per node
  Matrix features;                 // kFeatureDim x node count
  Vector queries;                  // 1 on ring nodes
  int ring_count = 0;
};

BackgroundProblem background_problem(const Frame& frame, const PatchGrid& grid,
                                     double expand);

/// w_i = 1 / (1 + exp(-eps * (v_i - u_i))).
Vector fuse_weights(const Vector& v, const Vector& u, double eps);

/// Column i scaled by w_i.
Matrix weighted_descriptor(const Matrix& Xc, const Vector& w);

}  // namespace patchrank
