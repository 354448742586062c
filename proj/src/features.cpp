#include "patchrank/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace patchrank {

double iou(const BoundingBox& a, const BoundingBox& b) {
  int ix = std::max(a.x, b.x);
  int iy = std::max(a.y, b.y);
  int ix2 = std::min(a.x + a.w, b.x + b.w);
  int iy2 = std::min(a.y + a.h, b.y + b.h);
  double inter = static_cast<double>(std::max(0, ix2 - ix)) * std::max(0, iy2 - iy);
  double uni = static_cast<double>(a.w) * a.h + static_cast<double>(b.w) * b.h - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

BoundingBox clamp_to_frame(const BoundingBox& box, int frame_w, int frame_h) {
  int x0 = std::max(box.x, 0);
  int y0 = std::max(box.y, 0);
  int x1 = std::min(box.x + box.w, frame_w);
  int y1 = std::min(box.y + box.h, frame_h);
  require(x1 > x0 && y1 > y0, "box does not intersect the frame");
  return {x0, y0, x1 - x0, y1 - y0};
}

Vector extract_feature(const Frame& frame, const BoundingBox& rect) {
  require(rect.w >= 1 && rect.h >= 1, "patch must contain at least one pixel");
  require(rect.inside(frame.width, frame.height), "patch must lie inside the frame");

  Vector f = Vector::Zero(kFeatureDim);
  for (int y = rect.y; y < rect.y + rect.h; ++y)
    for (int x = rect.x; x < rect.x + rect.w; ++x) {
      f[frame.at(x, y, 0) >> 5] += 1.0;
      f[8 + (frame.at(x, y, 1) >> 5)] += 1.0;
      f[16 + (frame.at(x, y, 2) >> 5)] += 1.0;
    }

  // Orientation histogram from central differences on patch-interior pixels;
  // 1-px-thin patches simply contribute no gradient mass.
  auto gray = [&frame](int x, int y) {
    return 0.299 * frame.at(x, y, 0) + 0.587 * frame.at(x, y, 1) +
           0.114 * frame.at(x, y, 2);
  };
  for (int y = rect.y + 1; y < rect.y + rect.h - 1; ++y)
    for (int x = rect.x + 1; x < rect.x + rect.w - 1; ++x) {
      double gx = 0.5 * (gray(x + 1, y) - gray(x - 1, y));
      double gy = 0.5 * (gray(x, y + 1) - gray(x, y - 1));
      double mag = std::hypot(gx, gy);
      if (mag <= 0.0) continue;
      double theta = std::atan2(gy, gx);
      if (theta < 0.0) theta += std::numbers::pi;
      if (theta >= std::numbers::pi) theta -= std::numbers::pi;
      int bin = std::min(7, static_cast<int>(theta / std::numbers::pi * 8.0));
      f[24 + bin] += mag;
    }

  double norm = f.norm();
  if (norm > 0.0) f /= norm;
  return f;
}

PatchGrid partition(const Frame& frame, const BoundingBox& box) {
  BoundingBox clamped = clamp_to_frame(box, frame.width, frame.height);
  require(clamped.w >= kGridCols && clamped.h >= kGridRows,
          "box must be at least 8x8 px after clamping");

  const int base_w = clamped.w / kGridCols;
  const int base_h = clamped.h / kGridRows;
  PatchGrid grid;
  grid.box = clamped;
  grid.rects.reserve(kPatchCount);
  grid.features.resize(kFeatureDim, kPatchCount);
  for (int r = 0; r < kGridRows; ++r) {
    int y = clamped.y + r * base_h;
    int h = (r == kGridRows - 1) ? clamped.h - (kGridRows - 1) * base_h : base_h;
    for (int c = 0; c < kGridCols; ++c) {
      int x = clamped.x + c * base_w;
      int w = (c == kGridCols - 1) ? clamped.w - (kGridCols - 1) * base_w : base_w;
      BoundingBox rect{x, y, w, h};
      grid.features.col(r * kGridCols + c) = extract_feature(frame, rect);
      grid.rects.push_back(rect);
    }
  }
  return grid;
}

Vector foreground_queries(const PatchGrid& grid, double shrink) {
  require(shrink > 0.0 && shrink < 1.0, "shrink ratio must be in (0, 1)");
  const double half_w = shrink * grid.box.w / 2.0;
  const double half_h = shrink * grid.box.h / 2.0;
  const double cx = grid.box.cx();
  const double cy = grid.box.cy();
  Vector y = Vector::Zero(kPatchCount);
  for (int i = 0; i < kPatchCount; ++i) {
    const BoundingBox& r = grid.rects[i];
    if (std::abs(r.cx() - cx) <= half_w && std::abs(r.cy() - cy) <= half_h) y[i] = 1.0;
  }
  return y;
}

BackgroundProblem background_problem(const Frame& frame, const PatchGrid& grid,
                                     double expand) {
  require(expand > 1.0, "expand ratio must exceed 1");
  const BoundingBox& box = grid.box;
  const int base_w = box.w / kGridCols;
  const int base_h = box.h / kGridRows;
  // Ring thickness in cells covering the extra margin on each side.
  const int ring = std::max(
      1, static_cast<int>(std::ceil((expand - 1.0) / 2.0 * kGridCols)));

  BackgroundProblem bg;
  std::vector<BoundingBox> rects;

  // Box patches first, in grid order, at ring-shifted coordinates.
  for (int r = 0; r < kGridRows; ++r)
    for (int c = 0; c < kGridCols; ++c) {
      bg.coords.push_back({r + ring, c + ring});
      rects.push_back(grid.rects[static_cast<std::size_t>(r) * kGridCols + c]);
    }

  const int ext = kGridCols + 2 * ring;
  auto cell_x = [&](int C) {
    if (C < ring) return box.x - (ring - C) * base_w;
    if (C >= ring + kGridCols) return box.x + box.w + (C - ring - kGridCols) * base_w;
    return grid.rects[static_cast<std::size_t>(C) - ring].x;
  };
  auto cell_y = [&](int R) {
    if (R < ring) return box.y - (ring - R) * base_h;
    if (R >= ring + kGridRows) return box.y + box.h + (R - ring - kGridRows) * base_h;
    return grid.rects[(static_cast<std::size_t>(R) - ring) * kGridCols].y;
  };
  auto cell_w = [&](int C) {
    if (C < ring || C >= ring + kGridCols) return base_w;
    return grid.rects[static_cast<std::size_t>(C) - ring].w;
  };
  auto cell_h = [&](int R) {
    if (R < ring || R >= ring + kGridRows) return base_h;
    return grid.rects[(static_cast<std::size_t>(R) - ring) * kGridCols].h;
  };

  for (int R = 0; R < ext; ++R)
    for (int C = 0; C < ext; ++C) {
      bool is_ring = R < ring || R >= ring + kGridRows || C < ring || C >= ring + kGridCols;
      if (!is_ring) continue;
      BoundingBox rect{cell_x(C), cell_y(R), cell_w(C), cell_h(R)};
      int x0 = std::max(rect.x, 0);
      int y0 = std::max(rect.y, 0);
      int x1 = std::min(rect.x + rect.w, frame.width);
      int y1 = std::min(rect.y + rect.h, frame.height);
      if (x1 <= x0 || y1 <= y0) continue;  // fully off-frame, dropped
      bg.coords.push_back({R, C});
      rects.push_back({x0, y0, x1 - x0, y1 - y0});
      ++bg.ring_count;
    }

  bg.available = bg.ring_count > 0;
  const int total = static_cast<int>(rects.size());
  bg.features.resize(kFeatureDim, total);
  for (int i = 0; i < total; ++i) bg.features.col(i) = extract_feature(frame, rects[i]);
  bg.queries = Vector::Zero(total);
  for (int i = kPatchCount; i < total; ++i) bg.queries[i] = 1.0;
  return bg;
}

Vector fuse_weights(const Vector& v, const Vector& u, double eps) {
  require(v.size() == u.size(), "weight vectors must have equal length");
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out[i] = 1.0 / (1.0 + std::exp(-eps * (v[i] - u[i])));
  return out;
}

Matrix weighted_descriptor(const Matrix& Xc, const Vector& w) {
  require(Xc.cols() == w.size(), "one weight per descriptor column required");
  return Xc * w.asDiagonal();
}

}  // namespace patchrank
