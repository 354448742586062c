#include <doctest.h>

#include "oracles.hpp"
#include "patchrank/graph.hpp"
#include "patchrank/rng.hpp"
#include "test_util.hpp"

using namespace patchrank;

TEST_CASE("identical features give unit weights on every 8-neighbor pair") {
  Matrix features = Matrix::Ones(32, 64);
  PatchAdjacency adj = build_prior_graph(8, 8, features);
  CHECK(adj.grid_rows == 8);
  CHECK(adj.grid_cols == 8);
  // Each neighbor pair contributes weight 1 twice (symmetric storage).
  int pairs = oracle::count_grid_neighbor_pairs(8, 8);
  CHECK(pairs == 210);
  CHECK(adj.weights.sum() == doctest::Approx(2.0 * pairs).epsilon(1e-12));
  // Corner cell 0 touches 3 cells, an interior cell touches 8.
  CHECK(adj.weights.row(0).sum() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(adj.weights.row(9).sum() == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("a two-cell grid gets the fixed kernel value") {
  // With one pair, sigma equals that pair's distance, so the weight is
  // exp(-1/2) regardless of the distance itself.
  for (double d : {0.3, 1.0, 7.5}) {
    Matrix features(1, 2);
    features << 0.0, d;
    PatchAdjacency adj = build_prior_graph(1, 2, features);
    CHECK(adj.weights(0, 1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(adj.weights(1, 0) == adj.weights(0, 1));
  }
}

TEST_CASE("prior graph is symmetric, nonnegative, zero on the diagonal") {
  SplitMix64 rng(5);
  Matrix features = testutil::randn(rng, 6, 12);
  PatchAdjacency adj = build_prior_graph(3, 4, features);
  CHECK((adj.weights - adj.weights.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(adj.weights.minCoeff() >= 0.0);
  CHECK(adj.weights.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cells two steps apart stay unconnected") {
  SplitMix64 rng(6);
  Matrix features = testutil::randn(rng, 4, 64);
  PatchAdjacency adj = build_prior_graph(8, 8, features);
  CHECK(adj.weights(0, 2) == 0.0);    // same row, two columns apart
  CHECK(adj.weights(0, 16) == 0.0);   // same column, two rows apart
  CHECK(adj.weights(0, 9) > 0.0);     // diagonal neighbor
}

TEST_CASE("subset adjacency respects the hole pattern") {
  std::vector<GridCoord> coords = {{0, 0}, {0, 1}, {5, 5}};
  SplitMix64 rng(8);
  Matrix features = testutil::randn(rng, 4, 3);
  Matrix W = grid_gaussian_adjacency(coords, features);
  CHECK(W(0, 1) > 0.0);
  CHECK(W(0, 2) == 0.0);
  CHECK(W(1, 2) == 0.0);
}

TEST_CASE("degree is the diagonal of row sums") {
  Matrix Z(2, 2);
  Z << 1.0, 2.0, 3.0, 4.0;
  Matrix D = degree(Z);
  CHECK(D(0, 0) == 3.0);
  CHECK(D(1, 1) == 7.0);
  CHECK(D(0, 1) == 0.0);
}

TEST_CASE("pairwise gaps on a hand vector") {
  Vector v(3);
  v << 0.0, 1.0, 3.0;
  Matrix R = pairwise_sq(v);
  CHECK(R(0, 0) == 0.0);
  CHECK(R(0, 1) == 1.0);
  CHECK(R(0, 2) == 9.0);
  CHECK(R(1, 2) == 4.0);
  CHECK((R - R.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("smoothness matches the Laplacian quadratic form") {
  SplitMix64 rng(13);
  Matrix Z = testutil::randn(rng, 7, 7);  // deliberately asymmetric
  Vector v = rng.normal_vector(7);
  Matrix Dr = Z.rowwise().sum().asDiagonal();
  Matrix Dc = Z.colwise().sum().asDiagonal();
  double quad = v.dot(0.5 * (Dr + Dc - Z - Z.transpose()) * v);
  CHECK(smoothness(Z, v) == doctest::Approx(quad).epsilon(1e-12));
  CHECK(smoothness(Z, Vector::Ones(7)) == doctest::Approx(0.0));
}

TEST_CASE("smoothness hand value") {
  Matrix Z(2, 2);
  Z << 0.0, 1.0, 1.0, 0.0;
  Vector v(2);
  v << 0.0, 2.0;
  CHECK(smoothness(Z, v) == doctest::Approx(4.0).epsilon(1e-15));
}
