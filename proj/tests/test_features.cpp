#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "patchrank/features.hpp"
#include "patchrank/rng.hpp"

using namespace patchrank;

namespace {

Frame noise_frame(int w, int h, std::uint64_t seed) {
  Frame f = make_frame(w, h);
  SplitMix64 rng(seed);
  for (auto& byte : f.pixels) byte = static_cast<std::uint8_t>(rng.below(256));
  return f;
}

Frame solid_frame(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  Frame f = make_frame(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      f.at(x, y, 0) = r;
      f.at(x, y, 1) = g;
      f.at(x, y, 2) = b;
    }
  return f;
}

}  // namespace

TEST_CASE("overlap ratio on hand boxes") {
  BoundingBox a{0, 0, 10, 10};
  CHECK(iou(a, a) == 1.0);
  CHECK(iou(a, {20, 20, 5, 5}) == 0.0);
  CHECK(iou(a, {5, 0, 10, 10}) == doctest::Approx(50.0 / 150.0).epsilon(1e-15));
}

TEST_CASE("clamping keeps the intersection and rejects disjoint boxes") {
  BoundingBox in{-5, -5, 20, 20};
  BoundingBox out = clamp_to_frame(in, 100, 100);
  CHECK(out.x == 0);
  CHECK(out.y == 0);
  CHECK(out.w == 15);
  CHECK(out.h == 15);
  CHECK_THROWS_AS(clamp_to_frame({200, 200, 10, 10}, 100, 100), std::invalid_argument);
}

TEST_CASE("an evenly divisible box tiles into equal patches") {
  Frame f = noise_frame(100, 100, 1);
  PatchGrid grid = partition(f, {0, 0, 64, 64});
  REQUIRE(grid.rects.size() == 64);
  for (const auto& r : grid.rects) {
    CHECK(r.w == 8);
    CHECK(r.h == 8);
  }
  CHECK(grid.rects[0].x == 0);
  CHECK(grid.rects[63].x == 56);
  CHECK(grid.rects[63].y == 56);
}

TEST_CASE("remainder pixels go to the last row and column") {
  Frame f = noise_frame(100, 100, 2);
  PatchGrid grid = partition(f, {0, 0, 67, 65});
  CHECK(grid.rects[7].w == 67 - 7 * 8);   // 11
  CHECK(grid.rects[0].w == 8);
  CHECK(grid.rects[56].h == 65 - 7 * 8);  // 9
  CHECK(grid.rects[0].h == 8);
  CHECK_THROWS_AS(partition(f, {0, 0, 7, 40}), std::invalid_argument);
}

TEST_CASE("a solid red patch fills exactly three histogram bins") {
  Frame f = solid_frame(32, 32, 255, 0, 0);
  Vector feat = extract_feature(f, {0, 0, 16, 16});
  double third = 1.0 / std::sqrt(3.0);
  CHECK(feat[7] == doctest::Approx(third).epsilon(1e-12));    // red -> top bin
  CHECK(feat[8] == doctest::Approx(third).epsilon(1e-12));    // green channel zero bin
  CHECK(feat[16] == doctest::Approx(third).epsilon(1e-12));   // blue channel zero bin
  CHECK(feat.segment(24, 8).cwiseAbs().maxCoeff() == 0.0);    // flat image, no gradients
  CHECK(feat.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a vertical edge concentrates orientation mass in the first bin") {
  Frame f = make_frame(32, 32);
  for (int y = 0; y < 32; ++y)
    for (int x = 0; x < 32; ++x)
      for (int ch = 0; ch < 3; ++ch) f.at(x, y, ch) = x < 16 ? 0 : 255;
  Vector feat = extract_feature(f, {8, 8, 16, 16});
  Vector orient = feat.segment(24, 8);
  CHECK(orient[0] > 0.0);
  CHECK(orient.tail(7).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("color bins ignore pixel order inside the patch") {
  Frame f = noise_frame(40, 40, 3);
  BoundingBox rect{4, 4, 16, 16};
  Vector before = extract_feature(f, rect);

  // Shuffle the pixels inside the rectangle.
  std::vector<std::array<std::uint8_t, 3>> pixels;
  for (int y = rect.y; y < rect.y + rect.h; ++y)
    for (int x = rect.x; x < rect.x + rect.w; ++x)
      pixels.push_back({f.at(x, y, 0), f.at(x, y, 1), f.at(x, y, 2)});
  SplitMix64 rng(99);
  for (std::size_t i = pixels.size(); i > 1; --i)
    std::swap(pixels[i - 1], pixels[rng.below(i)]);
  std::size_t k = 0;
  for (int y = rect.y; y < rect.y + rect.h; ++y)
    for (int x = rect.x; x < rect.x + rect.w; ++x, ++k)
      for (int ch = 0; ch < 3; ++ch) f.at(x, y, ch) = pixels[k][ch];

  Vector after = extract_feature(f, rect);
  // Raw counts are permutation invariant; normalization couples the color
  // block to the gradient mass, so compare the unnormalized ratio instead.
  Vector cb = before.segment(0, 24), ca = after.segment(0, 24);
  CHECK((cb / cb.norm() - ca / ca.norm()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("shrink keeps the middle patch block as foreground queries") {
  Frame f = noise_frame(120, 120, 4);
  PatchGrid grid = partition(f, {0, 0, 80, 80});
  Vector y = foreground_queries(grid, 0.6);
  CHECK(y.sum() == 16.0);  // the centered 4x4 block of the 8x8 grid
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) {
      bool inside = r >= 2 && r <= 5 && c >= 2 && c <= 5;
      CHECK(y[r * 8 + c] == (inside ? 1.0 : 0.0));
    }
}

TEST_CASE("an interior box grows a full two-cell background ring") {
  Frame f = noise_frame(400, 300, 5);
  PatchGrid grid = partition(f, {100, 100, 80, 80});
  BackgroundProblem bg = background_problem(f, grid, 1.4);
  CHECK(bg.available);
  CHECK(bg.coords.size() == 144);        // 12x12 extended grid survives intact
  CHECK(bg.ring_count == 144 - 64);
  CHECK(bg.queries.sum() == doctest::Approx(80.0));
  CHECK(bg.queries.head(64).cwiseAbs().maxCoeff() == 0.0);
  // Box patches come first, at ring-shifted coordinates.
  CHECK(bg.coords[0].row == 2);
  CHECK(bg.coords[0].col == 2);
  CHECK(bg.features.col(0) == grid.features.col(0));
}

TEST_CASE("ring cells outside the frame are dropped or clipped") {
  Frame f = noise_frame(400, 300, 6);
  PatchGrid grid = partition(f, {0, 0, 80, 80});  // corner box: no left or top ring
  BackgroundProblem bg = background_problem(f, grid, 1.4);
  CHECK(bg.available);
  CHECK(bg.ring_count < 80);
  for (const auto& coord : bg.coords) {
    CHECK(coord.row >= 2 - 0);  // nothing above or left of the box survives
    CHECK(coord.col >= 2 - 0);
  }
}

TEST_CASE("no surviving ring disables the background problem") {
  Frame f = noise_frame(80, 80, 7);
  PatchGrid grid = partition(f, {0, 0, 80, 80});
  BackgroundProblem bg = background_problem(f, grid, 1.4);
  CHECK_FALSE(bg.available);
  CHECK(bg.ring_count == 0);
}

TEST_CASE("weight fusion is 1/2 at equality and follows the logistic curve") {
  Vector v(3), u(3);
  v << 0.2, 0.5, 0.9;
  u << 0.2, 0.4, 1.0;
  Vector f = fuse_weights(v, u, 43.0);
  CHECK(f[0] == 0.5);
  CHECK(f[1] == doctest::Approx(0.9866130821723351).epsilon(1e-15));
  CHECK(f[2] == doctest::Approx(1.0 / (1.0 + std::exp(4.3))).epsilon(1e-12));
  // Monotone in the gap v - u.
  CHECK(f[2] < f[0]);
  CHECK(f[0] < f[1]);
}

TEST_CASE("unit weights leave the descriptor bit-identical") {
  SplitMix64 rng(8);
  Matrix Xc = rng.normal_matrix(32, 64);
  CHECK(weighted_descriptor(Xc, Vector::Ones(64)) == Xc);
  Vector w = Vector::Zero(64);
  w[3] = 2.0;
  Matrix scaled = weighted_descriptor(Xc, w);
  CHECK(scaled.col(3) == 2.0 * Xc.col(3));
  CHECK(scaled.col(0).cwiseAbs().maxCoeff() == 0.0);
}
