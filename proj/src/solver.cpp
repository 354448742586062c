#include "patchrank/solver.hpp"

#include <Eigen/Cholesky>
#include <cassert>
#include <cmath>
#include <fstream>

#include "patchrank/prox.hpp"

namespace patchrank {

namespace {

Vector ones_like(const Vector& v) { return Vector::Ones(v.size()); }

double inf_norm(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

Matrix symmetrized(const Matrix& Z) { return 0.5 * (Z + Z.transpose()); }

}  // namespace

SolveMode parse_mode(const std::string& name) {
  if (name == "full") return SolveMode::Full;
  if (name == "noT") return SolveMode::NoTemporal;
  if (name == "noG") return SolveMode::NoGraph;
  throw std::invalid_argument("unknown mode '" + name + "' (expected full, noT or noG)");
}

Matrix update_U(const SolverState& state, const Params& params) {
  return soft_threshold(state.Z + state.Y2 / state.mu, params.alpha / state.mu);
}

Matrix update_B(const SolverState& state, const Params& params) {
  // The shrinkage target is the consensus point Z + Y3/mu; thresholding the
  // reconstruction residual instead would not minimize this subproblem.
  return svt(state.Z + state.Y3 / state.mu, params.gamma / state.mu);
}

Matrix update_A(const SolverState& state, const Params& params, const Matrix& R) {
  // Stationarity over A >= 0 of (beta2/2)*sum A_ij R_ij + (mu/2)||Z - A + Y4/mu||^2
  // gives the halved coefficient beta2/(2 mu) on R.
  return nonneg_project(state.Z + state.Y4 / state.mu -
                        (params.beta2 / (2.0 * state.mu)) * R);
}

Matrix update_E(const SolverState& state, const RankingInstance& inst) {
  return l21_shrink(inst.X - inst.X * state.Z + state.Y1 / state.mu, 1.0 / state.mu);
}

Matrix update_Z(const SolverState& state, const RankingInstance& inst) {
  const auto& P = inst.params;
  const double mu = state.mu;
  const int n = inst.n();
  Matrix XtX = inst.X.transpose() * inst.X;
  Matrix lhs = XtX + (3.0 + 2.0 * P.beta1 / mu) * Matrix::Identity(n, n);
  Matrix rhs = XtX - inst.X.transpose() * state.E + state.B + state.A + state.U +
               (2.0 * P.beta1 / mu) * inst.S.weights +
               (inst.X.transpose() * state.Y1 - state.Y2 - state.Y3 - state.Y4) / mu;
  Eigen::LLT<Matrix> llt(lhs);
  if (llt.info() != Eigen::Success)
    throw NumericError("Z-update linear solve failed", state.iter, "Z");
  return llt.solve(rhs);
}

Vector update_v(const SolverState& state, const RankingInstance& inst) {
  const auto& P = inst.params;
  const int n = inst.n();
  // The closed form is exact for a symmetric graph, so the Laplacian is
  // built from (Z + Z^T)/2; the raw Z still serves the reconstruction
  // constraint elsewhere.
  Matrix Zs = symmetrized(state.Z);
  Matrix lhs = (P.delta + P.lambda) * Matrix::Identity(n, n) +
               P.beta2 * (Matrix(Zs.rowwise().sum().asDiagonal()) - Zs);
  Vector rhs = P.lambda * inst.y +
               P.delta * (inst.X.transpose() * state.w + ones_like(inst.y) * state.b);
  Eigen::LDLT<Matrix> ldlt(lhs);
  if (ldlt.info() != Eigen::Success)
    throw NumericError("v-update linear solve failed", state.iter, "v");
  Vector v = ldlt.solve(rhs);
  check_finite(v, "v", state.iter);
  return v;
}

Vector update_w(const SolverState& state, const RankingInstance& inst) {
  const auto& P = inst.params;
  const int p = inst.p();
  Matrix G = P.delta * (inst.X * inst.X.transpose()) + kRidge * Matrix::Identity(p, p);
  // Sign note: the residual being fit is X^T w + 1b - v, so the linear term
  // carries (v - 1b), not (1b - v).
  Vector rhs = P.delta * (inst.X * (state.v.array() - state.b).matrix());
  for (const auto& m : inst.memory) {
    G += m.delta * (m.X * m.X.transpose());
    rhs += m.delta * (m.X * (m.v.array() - state.b).matrix());
  }
  Eigen::LLT<Matrix> llt(G);
  if (llt.info() != Eigen::Success)
    throw NumericError("w-update linear solve failed", state.iter, "w");
  Vector w = llt.solve(rhs);
  check_finite(w, "w", state.iter);
  return w;
}

double update_b(const SolverState& state, const RankingInstance& inst) {
  const auto& P = inst.params;
  const double n = static_cast<double>(inst.n());
  double num = (inst.X.transpose() * state.w - state.v).sum() * P.delta;
  double den = P.delta;
  for (const auto& m : inst.memory) {
    num += (m.X.transpose() * state.w - m.v).sum() * m.delta;
    den += m.delta;
  }
  // 1^T 1 = n in the normal equation, so the denominator scales with n.
  double b = -num / (n * den);
  if (!std::isfinite(b)) throw NumericError("non-finite value in b", state.iter, "b");
  return b;
}

void step_multipliers(SolverState& state, const RankingInstance& inst) {
  const auto& P = inst.params;
  state.Y1 += state.mu * (inst.X - inst.X * state.Z - state.E);
  state.Y2 += state.mu * (state.Z - state.U);
  state.Y3 += state.mu * (state.Z - state.B);
  state.Y4 += state.mu * (state.Z - state.A);
  state.mu = std::min(P.mu_max, P.rho * state.mu);
}

namespace subproblem {

double U_obj(const Matrix& U, const SolverState& state, const Params& params) {
  return params.alpha * l1_norm(U) +
         0.5 * state.mu * (state.Z - U + state.Y2 / state.mu).squaredNorm();
}

double B_obj(const Matrix& B, const SolverState& state, const Params& params) {
  return params.gamma * nuclear_norm(B) +
         0.5 * state.mu * (state.Z - B + state.Y3 / state.mu).squaredNorm();
}

double A_obj(const Matrix& A, const SolverState& state, const Params& params,
             const Matrix& R) {
  return 0.5 * params.beta2 * A.cwiseProduct(R).sum() +
         0.5 * state.mu * (state.Z - A + state.Y4 / state.mu).squaredNorm();
}

double E_obj(const Matrix& E, const SolverState& state, const RankingInstance& inst) {
  return l21_norm(E) +
         0.5 * state.mu *
             (inst.X - inst.X * state.Z - E + state.Y1 / state.mu).squaredNorm();
}

double Z_obj(const Matrix& Z, const SolverState& state, const RankingInstance& inst) {
  const auto& P = inst.params;
  Matrix gap1 = inst.X - inst.X * Z - state.E;
  double val = P.beta1 * (Z - inst.S.weights).squaredNorm();
  val += (state.Y1.cwiseProduct(gap1)).sum();
  val += (state.Y2.cwiseProduct(Z - state.U)).sum();
  val += (state.Y3.cwiseProduct(Z - state.B)).sum();
  val += (state.Y4.cwiseProduct(Z - state.A)).sum();
  val += 0.5 * state.mu *
         (gap1.squaredNorm() + (Z - state.U).squaredNorm() + (Z - state.B).squaredNorm() +
          (Z - state.A).squaredNorm());
  return val;
}

double v_obj(const Vector& v, const SolverState& state, const RankingInstance& inst) {
  const auto& P = inst.params;
  Matrix Zs = symmetrized(state.Z);
  return P.beta2 * smoothness(Zs, v) +
         P.delta *
             (inst.X.transpose() * state.w + ones_like(v) * state.b - v).squaredNorm() +
         P.lambda * (v - inst.y).squaredNorm();
}

double wb_obj(const Vector& w, double b, const SolverState& state,
              const RankingInstance& inst) {
  const auto& P = inst.params;
  Vector ones = Vector::Ones(inst.n());
  double val = P.delta * (inst.X.transpose() * w + ones * b - state.v).squaredNorm() +
               kRidge * w.squaredNorm();
  for (const auto& m : inst.memory)
    val += m.delta * (m.X.transpose() * w + ones * b - m.v).squaredNorm();
  return val;
}

}  // namespace subproblem

namespace {

#ifndef NDEBUG
void assert_descent(double after, double before) {
  assert(after <= before + 1e-9 * (1.0 + std::abs(before)));
}
#endif

}  // namespace

RankingResult solve(const RankingInstance& given, SolveMode mode) {
  given.validate();
  RankingInstance stripped;
  const RankingInstance* inst = &given;
  if (mode == SolveMode::NoTemporal) {
    stripped = given;
    stripped.memory.clear();
    inst = &stripped;
  }
  const auto& P = inst->params;
  const int n = inst->n();
  const int p = inst->p();

  SolverState s = SolverState::zeros(p, n, P.mu0);
  if (mode == SolveMode::NoGraph) {
    // Fixed graph: Z pinned to the prior, reconstruction split made exact,
    // auxiliaries aligned so all four residuals are identically zero.
    s.Z = inst->S.weights;
    s.U = s.Z;
    s.B = s.Z;
    s.A = s.Z;
    s.E = inst->X - inst->X * s.Z;
  }

  RankingResult res;
  res.trace.reserve(P.max_iter);
  bool stopped_by_tolerance = false;

  for (int it = 1; it <= P.max_iter; ++it) {
    s.iter = it;
    const double mu_used = s.mu;
    double max_delta = 0.0;
    auto bump = [&max_delta](double d) { max_delta = std::max(max_delta, d); };

    if (mode != SolveMode::NoGraph) {
      Matrix R = pairwise_sq(s.v);

      Matrix U = update_U(s, P);
#ifndef NDEBUG
      assert_descent(subproblem::U_obj(U, s, P), subproblem::U_obj(s.U, s, P));
#endif
      check_finite(U, "U", it);
      bump(inf_norm(U - s.U));

      Matrix B = update_B(s, P);
#ifndef NDEBUG
      assert_descent(subproblem::B_obj(B, s, P), subproblem::B_obj(s.B, s, P));
#endif
      check_finite(B, "B", it);
      bump(inf_norm(B - s.B));

      Matrix A = update_A(s, P, R);
#ifndef NDEBUG
      assert_descent(subproblem::A_obj(A, s, P, R), subproblem::A_obj(s.A, s, P, R));
#endif
      check_finite(A, "A", it);
      bump(inf_norm(A - s.A));

      Matrix E = update_E(s, *inst);
#ifndef NDEBUG
      assert_descent(subproblem::E_obj(E, s, *inst), subproblem::E_obj(s.E, s, *inst));
#endif
      check_finite(E, "E", it);
      bump(inf_norm(E - s.E));

      s.U = std::move(U);
      s.B = std::move(B);
      s.A = std::move(A);
      s.E = std::move(E);

      Matrix Z = update_Z(s, *inst);
#ifndef NDEBUG
      assert_descent(subproblem::Z_obj(Z, s, *inst), subproblem::Z_obj(s.Z, s, *inst));
#endif
      check_finite(Z, "Z", it);
      bump(inf_norm(Z - s.Z));
      s.Z = std::move(Z);
    }

    Vector v = update_v(s, *inst);
#ifndef NDEBUG
    assert_descent(subproblem::v_obj(v, s, *inst), subproblem::v_obj(s.v, s, *inst));
#endif
    bump((v - s.v).cwiseAbs().maxCoeff());
    s.v = std::move(v);

    Vector w = update_w(s, *inst);
#ifndef NDEBUG
    assert_descent(subproblem::wb_obj(w, s.b, s, *inst),
                   subproblem::wb_obj(s.w, s.b, s, *inst));
#endif
    check_finite(w, "w", it);
    bump((w - s.w).cwiseAbs().maxCoeff());
    s.w = std::move(w);

    double b = update_b(s, *inst);
#ifndef NDEBUG
    assert_descent(subproblem::wb_obj(s.w, b, s, *inst),
                   subproblem::wb_obj(s.w, s.b, s, *inst));
#endif
    bump(std::abs(b - s.b));
    s.b = b;

    auto r = residuals(s, *inst);
    IterationTrace row;
    row.iter = it;
    row.mu = mu_used;
    row.objective = objective(s, *inst);
    row.r1 = r[0];
    row.r2 = r[1];
    row.r3 = r[2];
    row.r4 = r[3];
    row.max_delta = max_delta;
    res.trace.push_back(row);

    if (mode != SolveMode::NoGraph) step_multipliers(s, *inst);

    if (max_delta <= P.eps_conv) {
      stopped_by_tolerance = true;
      break;
    }
  }

  const auto& last = res.trace.back();
  res.v = s.v;
  res.w = s.w;
  res.b = s.b;
  res.Z = s.Z;
  res.iterations = static_cast<int>(res.trace.size());
  res.converged = stopped_by_tolerance &&
                  std::max(std::max(last.r1, last.r2), std::max(last.r3, last.r4)) <=
                      P.eps_conv;
  res.state = std::move(s);
  return res;
}

void write_trace_csv(const std::vector<IterationTrace>& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot open " + path + " for writing");
  out << "iter,mu,objective,r1,r2,r3,r4,max_delta\n";
  out.precision(17);
  for (const auto& row : trace) {
    out << row.iter << ',' << row.mu << ',' << row.objective << ',' << row.r1 << ','
        << row.r2 << ',' << row.r3 << ',' << row.r4 << ',' << row.max_delta << "\n";
  }
  require(out.good(), "write failed for " + path);
}

}  // namespace patchrank
