#pragma once

#include <string>
#include <vector>

#include "patchrank/model.hpp"
#include "patchrank/types.hpp"

namespace patchrank {

enum class SolveMode {
  Full,        // everything on
  NoTemporal,  // memory terms dropped (delta_k = 0)
  NoGraph,     // Z frozen to the prior S; only (v, w, b) iterate
};

SolveMode parse_mode(const std::string& name);  // "full" | "noT" | "noG"

struct IterationTrace {
  int iter = 0;
  double mu = 0.0;
  double objective = 0.0;
  double r1 = 0.0, r2 = 0.0, r3 = 0.0, r4 = 0.0;
  double max_delta = 0.0;
};

struct RankingResult {
  Vector v;
  Vector w;
  double b = 0.0;
  Matrix Z;
  int iterations = 0;
  bool converged = false;
  std::vector<IterationTrace> trace;
  SolverState state;  // final state, useful for diagnostics
};

/// Ridge added to the w-update normal matrix so it stays invertible when
/// the effective sample count is below the feature dimension.
inline constexpr double kRidge = 1e-8;

// Block updates. Each is the exact minimizer of its own subproblem with all
// other blocks held at the values in `state`.
Matrix update_U(const SolverState& state, const Params& params);
Matrix update_B(const SolverState& state, const Params& params);
Matrix update_A(const SolverState& state, const Params& params, const Matrix& R);
Matrix update_E(const SolverState& state, const RankingInstance& inst);
Matrix update_Z(const SolverState& state, const RankingInstance& inst);
Vector update_v(const SolverState& state, const RankingInstance& inst);
Vector update_w(const SolverState& state, const RankingInstance& inst);
double update_b(const SolverState& state, const RankingInstance& inst);

/// Dual ascent: Y_i += mu * (constraint gap), then mu <- min(mu_max, rho*mu).
void step_multipliers(SolverState& state, const RankingInstance& inst);

RankingResult solve(const RankingInstance& inst, SolveMode mode = SolveMode::Full);

void write_trace_csv(const std::vector<IterationTrace>& trace, const std::string& path);

// Per-block subproblem objectives, evaluated at a candidate value for that
// block with every other block taken from `state`. These define what the
// update functions minimize; tests and debug builds check the minimizer
// property against them.
namespace subproblem {
double U_obj(const Matrix& U, const SolverState& state, const Params& params);
double B_obj(const Matrix& B, const SolverState& state, const Params& params);
double A_obj(const Matrix& A, const SolverState& state, const Params& params, const Matrix& R);
double E_obj(const Matrix& E, const SolverState& state, const RankingInstance& inst);
double Z_obj(const Matrix& Z, const SolverState& state, const RankingInstance& inst);
double v_obj(const Vector& v, const SolverState& state, const RankingInstance& inst);
double wb_obj(const Vector& w, double b, const SolverState& state, const RankingInstance& inst);
}  // namespace subproblem

}  // namespace patchrank
