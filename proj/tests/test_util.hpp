#pragma once

// Seeded builders shared by the unit and acceptance suites.

#include <cstdint>

#include "patchrank/model.hpp"
#include "patchrank/rng.hpp"
#include "patchrank/solver.hpp"

namespace testutil {

using patchrank::Matrix;
using patchrank::RankingInstance;
using patchrank::SolverState;
using patchrank::SplitMix64;
using patchrank::Vector;

inline Matrix randn(SplitMix64& rng, int rows, int cols, double scale = 1.0) {
  return scale * rng.normal_matrix(rows, cols);
}

// Symmetric, zero-diagonal, entries in [0, 1): a generic affinity matrix.
inline Matrix random_affinity(SplitMix64& rng, int n) {
  Matrix S = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double w = rng.uniform();
      S(i, j) = w;
      S(j, i) = w;
    }
  return S;
}

inline RankingInstance random_instance(std::uint64_t seed, int n, int p, int mem_frames) {
  SplitMix64 rng(seed);
  RankingInstance inst;
  inst.X = randn(rng, p, n);
  inst.y = Vector::Zero(n);
  int queries = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  for (int q = 0; q < queries; ++q)
    inst.y[static_cast<int>(rng.below(static_cast<std::uint64_t>(n)))] = 1.0;
  inst.S.weights = random_affinity(rng, n);
  for (int k = 0; k < mem_frames; ++k) {
    patchrank::MemoryFrame m;
    m.X = randn(rng, p, n);
    m.v = rng.normal_vector(n);
    m.delta = 0.1 + 0.4 * rng.uniform();
    inst.memory.push_back(std::move(m));
  }
  inst.validate();
  return inst;
}

// A generic mid-solve state: every block nonzero, mu away from both ends of
// its schedule.
inline SolverState random_state(SplitMix64& rng, int p, int n) {
  SolverState s = SolverState::zeros(p, n, 1e-6);
  s.Z = randn(rng, n, n);
  s.U = randn(rng, n, n);
  s.B = randn(rng, n, n);
  s.A = randn(rng, n, n).cwiseAbs();
  s.E = randn(rng, p, n);
  s.v = rng.normal_vector(n);
  s.w = rng.normal_vector(p);
  s.b = rng.normal();
  s.Y1 = randn(rng, p, n);
  s.Y2 = randn(rng, n, n);
  s.Y3 = randn(rng, n, n);
  s.Y4 = randn(rng, n, n);
  s.mu = 0.5 + 4.5 * rng.uniform();
  s.iter = 1;
  return s;
}

}  // namespace testutil
