#pragma once

#include <array>
#include <string>
#include <vector>

#include "patchrank/graph.hpp"
#include "patchrank/types.hpp"

namespace patchrank {

struct Params {
  double alpha = 0.2;    // l1 weight on the learned graph
  double gamma = 0.08;   // nuclear-norm weight
  double beta1 = 20.0;   // anchor to the prior graph
  double beta2 = 0.9;    // smoothness weight
  double delta = 0.3;    // current-frame prediction weight
  double lambda = 1.0;   // query-fit weight
  double delta_prev = 0.3;
  double delta_first = 0.3;
  double rho = 1.3;
  double mu0 = 1e-6;
  double mu_max = 1e10;
  double eps_conv = 1e-6;
  int max_iter = 50;

  void validate() const;

  /// Sets a field by name ("alpha", "mu0", ...) for CLI overrides.
  /// Returns false if the name is unknown.
  bool set(const std::string& name, double value);
};

struct MemoryFrame {
  Matrix X;  // p x n features of the remembered frame
  Vector v;  // its patch weights
  double delta = 0.3;
};

struct RankingInstance {
  Matrix X;  // p x n, one feature column per patch
  Vector y;  // n, query indicator in {0, 1}
  PatchAdjacency S;
  std::vector<MemoryFrame> memory;
  Params params;

  int n() const { return static_cast<int>(X.cols()); }
  int p() const { return static_cast<int>(X.rows()); }
  void validate() const;
};

struct SolverState {
  Matrix Z, U, B, A;      // n x n
  Matrix E;               // p x n
  Vector v;               // n
  Vector w;               // p
  double b = 0.0;
  Matrix Y1;              // p x n
  Matrix Y2, Y3, Y4;      // n x n
  double mu = 1e-6;
  int iter = 0;

  static SolverState zeros(int p, int n, double mu0);
};

/// Value of the convex ranking objective at (Z, E, v, w, b). The auxiliary
/// variables U, B, A play no role here; constraint violations are reported
/// by residuals() instead.
double objective(const SolverState& state, const RankingInstance& inst);

/// Max-abs-entry norms of the four constraint gaps:
/// (X - XZ - E, Z - U, Z - B, Z - A).
std::array<double, 4> residuals(const SolverState& state, const RankingInstance& inst);

/// JSON round-trip. Values are preserved to full double precision.
std::string instance_to_json(const RankingInstance& inst);
RankingInstance instance_from_json(const std::string& text);
void save_instance(const RankingInstance& inst, const std::string& path);
RankingInstance load_instance(const std::string& path);

}  // namespace patchrank
