#include "patchrank/model.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "patchrank/prox.hpp"

namespace patchrank {

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  // Row-major flattening, one flat array; dimensions travel separately.
  json arr = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) arr.push_back(m(r, c));
  return arr;
}

Matrix matrix_from_json(const json& arr, Eigen::Index rows, Eigen::Index cols,
                        const std::string& name) {
  require(arr.is_array() && static_cast<Eigen::Index>(arr.size()) == rows * cols,
          name + " must hold " + std::to_string(rows * cols) + " values");
  Matrix m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = arr[k++].get<double>();
  return m;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const json& arr, Eigen::Index size, const std::string& name) {
  require(arr.is_array() && static_cast<Eigen::Index>(arr.size()) == size,
          name + " must hold " + std::to_string(size) + " values");
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = arr[i].get<double>();
  return v;
}

}  // namespace

void Params::validate() const {
  require(alpha > 0 && gamma >= 0 && beta1 > 0 && beta2 > 0 && delta > 0 && lambda > 0,
          "penalty weights must be positive");
  require(delta_prev >= 0 && delta_first >= 0, "memory weights must be nonnegative");
  require(rho > 1.0, "rho must exceed 1");
  require(mu0 > 0 && mu_max >= mu0, "mu schedule must satisfy 0 < mu0 <= mu_max");
  require(eps_conv > 0, "eps_conv must be positive");
  require(max_iter >= 1, "max_iter must be at least 1");
}

bool Params::set(const std::string& name, double value) {
  static const std::map<std::string, double Params::*> fields = {
      {"alpha", &Params::alpha},       {"gamma", &Params::gamma},
      {"beta1", &Params::beta1},       {"beta2", &Params::beta2},
      {"delta", &Params::delta},       {"lambda", &Params::lambda},
      {"delta_prev", &Params::delta_prev}, {"delta_first", &Params::delta_first},
      {"rho", &Params::rho},           {"mu0", &Params::mu0},
      {"mu_max", &Params::mu_max},     {"eps_conv", &Params::eps_conv},
  };
  if (name == "max_iter") {
    max_iter = static_cast<int>(value);
    return true;
  }
  auto it = fields.find(name);
  if (it == fields.end()) return false;
  this->*(it->second) = value;
  return true;
}

void RankingInstance::validate() const {
  require(X.rows() > 0 && X.cols() > 0, "X must be nonempty");
  require(X.allFinite(), "X must be finite");
  require(y.size() == X.cols(), "y length must equal patch count");
  double ones = 0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    require(y[i] == 0.0 || y[i] == 1.0, "y entries must be 0 or 1");
    ones += y[i];
  }
  require(ones >= 1.0, "at least one query patch required");
  require(S.weights.rows() == X.cols() && S.weights.cols() == X.cols(),
          "prior graph size must match patch count");
  require(S.weights.allFinite(), "prior graph must be finite");
  for (const auto& m : memory) {
    require(m.X.rows() == X.rows() && m.X.cols() == X.cols(),
            "memory frame dimensions must match X");
    require(m.X.allFinite() && m.v.allFinite(), "memory frames must be finite");
    require(m.v.size() == X.cols(), "memory weight length must equal patch count");
    require(m.delta >= 0, "memory weight must be nonnegative");
  }
  params.validate();
}

SolverState SolverState::zeros(int p, int n, double mu0) {
  SolverState s;
  s.Z = Matrix::Zero(n, n);
  s.U = Matrix::Zero(n, n);
  s.B = Matrix::Zero(n, n);
  s.A = Matrix::Zero(n, n);
  s.E = Matrix::Zero(p, n);
  s.v = Vector::Zero(n);
  s.w = Vector::Zero(p);
  s.b = 0.0;
  s.Y1 = Matrix::Zero(p, n);
  s.Y2 = Matrix::Zero(n, n);
  s.Y3 = Matrix::Zero(n, n);
  s.Y4 = Matrix::Zero(n, n);
  s.mu = mu0;
  s.iter = 0;
  return s;
}

double objective(const SolverState& state, const RankingInstance& inst) {
  const auto& P = inst.params;
  const int n = inst.n();
  require(state.Z.rows() == n && state.Z.cols() == n, "Z size must match instance");
  require(state.E.rows() == inst.p() && state.E.cols() == n, "E size must match instance");
  require(state.v.size() == n && state.w.size() == inst.p(), "v/w size must match instance");

  Vector ones = Vector::Ones(n);
  double total = l21_norm(state.E) + P.alpha * l1_norm(state.Z) +
                 P.gamma * nuclear_norm(state.Z) +
                 P.beta1 * (state.Z - inst.S.weights).squaredNorm() +
                 P.beta2 * smoothness(state.Z, state.v);
  total += P.delta * (inst.X.transpose() * state.w + ones * state.b - state.v).squaredNorm();
  total += P.lambda * (state.v - inst.y).squaredNorm();
  for (const auto& m : inst.memory)
    total += m.delta * (m.X.transpose() * state.w + ones * state.b - m.v).squaredNorm();
  return total;
}

std::array<double, 4> residuals(const SolverState& state, const RankingInstance& inst) {
  auto inf = [](const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); };
  return {inf(inst.X - inst.X * state.Z - state.E), inf(state.Z - state.U),
          inf(state.Z - state.B), inf(state.Z - state.A)};
}

std::string instance_to_json(const RankingInstance& inst) {
  json doc;
  doc["p"] = inst.p();
  doc["n"] = inst.n();
  doc["X"] = matrix_to_json(inst.X);
  doc["y"] = vector_to_json(inst.y);
  doc["S"] = matrix_to_json(inst.S.weights);
  json mem = json::array();
  for (const auto& m : inst.memory) {
    json entry;
    entry["X"] = matrix_to_json(m.X);
    entry["v"] = vector_to_json(m.v);
    entry["delta"] = m.delta;
    mem.push_back(entry);
  }
  doc["memory"] = mem;
  const Params& P = inst.params;
  doc["params"] = {{"alpha", P.alpha},   {"gamma", P.gamma},
                   {"beta1", P.beta1},   {"beta2", P.beta2},
                   {"delta", P.delta},   {"lambda", P.lambda},
                   {"delta_prev", P.delta_prev}, {"delta_first", P.delta_first},
                   {"rho", P.rho},       {"mu0", P.mu0},
                   {"mu_max", P.mu_max}, {"eps_conv", P.eps_conv},
                   {"max_iter", P.max_iter}};
  return doc.dump(2);
}

RankingInstance instance_from_json(const std::string& text) {
  json doc = json::parse(text);
  RankingInstance inst;
  const auto p = doc.at("p").get<Eigen::Index>();
  const auto n = doc.at("n").get<Eigen::Index>();
  require(p > 0 && n > 0, "p and n must be positive");
  inst.X = matrix_from_json(doc.at("X"), p, n, "X");
  inst.y = vector_from_json(doc.at("y"), n, "y");
  inst.S.weights = matrix_from_json(doc.at("S"), n, n, "S");
  if (doc.contains("memory")) {
    for (const auto& entry : doc.at("memory")) {
      MemoryFrame m;
      m.X = matrix_from_json(entry.at("X"), p, n, "memory X");
      m.v = vector_from_json(entry.at("v"), n, "memory v");
      m.delta = entry.at("delta").get<double>();
      inst.memory.push_back(std::move(m));
    }
  }
  if (doc.contains("params")) {
    const auto& jp = doc.at("params");
    Params& P = inst.params;
    for (auto it = jp.begin(); it != jp.end(); ++it) {
      require(P.set(it.key(), it.value().get<double>()), "unknown parameter " + it.key());
    }
  }
  inst.validate();
  return inst;
}

void save_instance(const RankingInstance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), "cannot open " + path + " for writing");
  out << instance_to_json(inst) << "\n";
  require(out.good(), "write failed for " + path);
}

RankingInstance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

}  // namespace patchrank
