#include <doctest.h>

#include <filesystem>
#include <limits>
#include <stdexcept>

#include "patchrank/model.hpp"
#include "patchrank/rng.hpp"
#include "test_util.hpp"

using namespace patchrank;

TEST_CASE("default parameters validate and can be overridden by name") {
  Params P;
  P.validate();
  CHECK(P.set("alpha", 0.5));
  CHECK(P.alpha == 0.5);
  CHECK(P.set("max_iter", 80.0));
  CHECK(P.max_iter == 80);
  CHECK_FALSE(P.set("bogus", 1.0));
}

TEST_CASE("bad parameter values are rejected") {
  Params P;
  P.alpha = -1.0;
  CHECK_THROWS_AS(P.validate(), std::invalid_argument);
  P = Params{};
  P.rho = 1.0;
  CHECK_THROWS_AS(P.validate(), std::invalid_argument);
  P = Params{};
  P.mu_max = P.mu0 / 2.0;
  CHECK_THROWS_AS(P.validate(), std::invalid_argument);
  P = Params{};
  P.max_iter = 0;
  CHECK_THROWS_AS(P.validate(), std::invalid_argument);
}

TEST_CASE("instance validation catches malformed inputs") {
  RankingInstance inst = testutil::random_instance(1, 6, 3, 1);
  inst.validate();

  RankingInstance bad = inst;
  bad.y[0] = 0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = inst;
  bad.y.setZero();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = inst;
  bad.S.weights = Matrix::Zero(5, 5);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = inst;
  bad.memory[0].v = Vector::Zero(3);
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = inst;
  bad.X(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("objective at the all-zero state reduces to its constant terms") {
  RankingInstance inst = testutil::random_instance(2, 5, 3, 2);
  SolverState s = SolverState::zeros(inst.p(), inst.n(), inst.params.mu0);
  double expected = inst.params.beta1 * inst.S.weights.squaredNorm() +
                    inst.params.lambda * inst.y.squaredNorm();
  for (const auto& m : inst.memory) expected += m.delta * m.v.squaredNorm();
  CHECK(objective(s, inst) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("objective is nonnegative whenever the learned graph is nonnegative") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RankingInstance inst = testutil::random_instance(300 + seed, 6, 4, 1);
    SplitMix64 rng(seed);
    SolverState s = testutil::random_state(rng, inst.p(), inst.n());
    s.Z = s.Z.cwiseAbs();
    CHECK(objective(s, inst) >= 0.0);
  }
}

TEST_CASE("residuals report the four constraint gaps in max norm") {
  RankingInstance inst = testutil::random_instance(3, 4, 2, 0);
  SplitMix64 rng(9);
  SolverState s = testutil::random_state(rng, inst.p(), inst.n());
  auto r = residuals(s, inst);
  CHECK(r[0] ==
        doctest::Approx((inst.X - inst.X * s.Z - s.E).cwiseAbs().maxCoeff()).epsilon(1e-15));
  CHECK(r[1] == doctest::Approx((s.Z - s.U).cwiseAbs().maxCoeff()).epsilon(1e-15));
  CHECK(r[2] == doctest::Approx((s.Z - s.B).cwiseAbs().maxCoeff()).epsilon(1e-15));
  CHECK(r[3] == doctest::Approx((s.Z - s.A).cwiseAbs().maxCoeff()).epsilon(1e-15));

  // Aligned auxiliaries zero their gaps exactly.
  s.U = s.Z;
  s.B = s.Z;
  s.A = s.Z;
  s.E = inst.X - inst.X * s.Z;
  r = residuals(s, inst);
  CHECK(r[0] == 0.0);
  CHECK(r[1] == 0.0);
  CHECK(r[2] == 0.0);
  CHECK(r[3] == 0.0);
}

TEST_CASE("JSON round trip preserves every value bit for bit") {
  RankingInstance inst = testutil::random_instance(4, 7, 3, 2);
  inst.params.alpha = 0.1 + 1e-17;  // forces full-precision serialization
  inst.params.max_iter = 33;
  RankingInstance back = instance_from_json(instance_to_json(inst));
  CHECK(back.X == inst.X);
  CHECK(back.y == inst.y);
  CHECK(back.S.weights == inst.S.weights);
  REQUIRE(back.memory.size() == inst.memory.size());
  for (std::size_t k = 0; k < inst.memory.size(); ++k) {
    CHECK(back.memory[k].X == inst.memory[k].X);
    CHECK(back.memory[k].v == inst.memory[k].v);
    CHECK(back.memory[k].delta == inst.memory[k].delta);
  }
  CHECK(back.params.alpha == inst.params.alpha);
  CHECK(back.params.max_iter == 33);
}

TEST_CASE("file round trip and malformed documents") {
  namespace fs = std::filesystem;
  RankingInstance inst = testutil::random_instance(5, 4, 2, 1);
  fs::path path = fs::temp_directory_path() / "patchrank_model_test.json";
  save_instance(inst, path.string());
  RankingInstance back = load_instance(path.string());
  CHECK(back.X == inst.X);
  fs::remove(path);

  CHECK_THROWS(instance_from_json("{\"p\": 1, \"n\": 1}"));                // missing X
  CHECK_THROWS(instance_from_json(
      "{\"p\": 1, \"n\": 1, \"X\": [1.0], \"y\": [1.0], \"S\": [0.0],"
      " \"params\": {\"nope\": 2.0}}"));                                   // unknown knob
}
