// Copyright 2026 The pgt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ordinal.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "criteria.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "finite_oracle.hpp"
#include "game.hpp"
#include "potential.hpp"
#include "test_util.hpp"

namespace pgt {
namespace {

using testing::DataPath;
using testing::LoadData;
using testing::RandomFiniteGame;
using testing::Scalars;

CheckOptions Budget(std::int64_t budget) {
  CheckOptions o;
  o.budget = budget;
  return o;
}

Json ReadJson(const std::string& name) {
  std::ifstream in(DataPath(name));
  std::stringstream ss;
  ss << in.rdbuf();
  return Json::parse(ss.str());
}

OrdinalCandidate Candidate(const GameSpec& g, const char* text) {
  return CandidateFromJson(g, Json::parse(text));
}

const TestReport* Sub(const TestReport& r, const std::string& method) {
  for (const auto& s : r.sub) {
    if (s.method == method) return &s;
  }
  return nullptr;
}

TEST_CASE("the sign condition on pairs of deviations") {
  TestReport unit =
      CheckPairSignCondition(LoadData("power_sum_unit.json"), Budget(2000));
  CHECK(unit.passed());
  CHECK_FALSE(unit.exhaustive);

  TestReport pennies =
      CheckPairSignCondition(LoadData("pennies.json"), Budget(2000));
  CHECK(pennies.failed());
  CHECK(pennies.exhaustive);
  REQUIRE(pennies.witness.has_value());
  const Json& w = *pennies.witness;
  CHECK((w["df_i"].get<double>() < 0) != (w["df_j"].get<double>() < 0));

  GameSpec same = LoadGameSpec(R"json({"players": 2, "costs": {"kind": "table",
      "tables": [[[3, -1], [2, 5]], [[3, -1], [2, 5]]]}})json");
  CHECK(CheckPairSignCondition(same, Budget(2000)).passed());
}

TEST_CASE("the sign condition implies each cost is an ordinal potential") {
  GameSpec g = LoadData("power_sum_unit.json");
  REQUIRE(CheckPairSignCondition(g, Budget(1000)).passed());
  for (int i = 0; i < 2; ++i) {
    PotentialFn fi = ExprPotential(g, g.expr_costs().exprs[i], "user");
    CHECK(VerifyOrdinalPotential(g, fi, Budget(1000), OrdinalMode::kOrdinal)
              .passed());
  }
}

TEST_CASE("cross-partial signs") {
  CHECK(CheckCrossPartialSigns(LoadData("power_sum_unit.json"), Budget(500),
                               CrossSignMode::kGlobal)
            .passed());
  GameSpec opposed = LoadGameSpec(R"json({"players": 2, "spaces": [
      {"kind": "box", "lo": [-1], "hi": [1]}, {"kind": "box", "lo": [-1], "hi": [1]}],
      "costs": {"kind": "expr", "exprs": ["x[1][1]*x[2][1]", "-x[1][1]*x[2][1]"]}})json");
  TestReport r =
      CheckCrossPartialSigns(opposed, Budget(500), CrossSignMode::kGlobal);
  CHECK(r.failed());
  CHECK(r.witness.has_value());
  GameSpec separable = LoadGameSpec(R"json({"players": 2, "spaces": [
      {"kind": "box", "lo": [-1], "hi": [1]}, {"kind": "box", "lo": [-1], "hi": [1]}],
      "costs": {"kind": "expr", "exprs": ["pow(x[1][1], 2)", "x[2][1]"]}})json");
  CHECK(CheckCrossPartialSigns(separable, Budget(500), CrossSignMode::kGlobal)
            .passed());
  CHECK(CheckCrossPartialSigns(LoadData("pennies.json"), Budget(500),
                               CrossSignMode::kGlobal)
            .verdict == Verdict::kInapplicable);
}

TEST_CASE("cross-partial signs at a critical point") {
  GameSpec g = LoadData("quadratic_coupled.json");
  // The only critical point is 0, where both cross-partials equal 1.
  TestReport r =
      CheckCrossPartialSigns(g, Budget(200), CrossSignMode::kCritical);
  CHECK(r.passed());
}

TEST_CASE("ordinal and generalized ordinal verification") {
  GameSpec unit = LoadData("power_sum_unit.json");
  PotentialFn p_unit =
      PotentialFromJson(unit, ReadJson("ordinal_power_sum.json"));
  CHECK(
      VerifyOrdinalPotential(unit, p_unit, Budget(1000), OrdinalMode::kOrdinal)
          .passed());

  GameSpec wide = LoadData("power_sum_wide.json");
  PotentialFn p_wide = PotentialFromJson(
      wide, Json::parse(R"json({"phi": "2*pow(x[1][1] + x[2][1], 0.4)"})json"));
  CHECK(VerifyOrdinalPotential(wide, p_wide, Budget(1000),
                               OrdinalMode::kGeneralized)
            .passed());

  GameSpec pennies = LoadData("pennies.json");
  PotentialFn flat = TablePotential(pennies, {0, 0, 0, 0}, "user", "none");
  TestReport r = VerifyOrdinalPotential(pennies, flat, Budget(100),
                                        OrdinalMode::kGeneralized);
  CHECK(r.failed());
  CHECK(r.exhaustive);
}

TEST_CASE("exact potentials are ordinal and generalized ordinal") {
  std::mt19937_64 rng(404);
  for (int n = 0; n < 30; ++n) {
    GameSpec g = RandomFiniteGame(rng, true);
    OracleResult oracle = OracleFinitePotential(g, 0.0);
    REQUIRE(oracle.report.passed());
    PotentialFn phi = TablePotential(g, *oracle.table, "oracle", "none");
    TestReport ord =
        VerifyOrdinalPotential(g, phi, Budget(100000), OrdinalMode::kOrdinal);
    TestReport gen = VerifyOrdinalPotential(g, phi, Budget(100000),
                                            OrdinalMode::kGeneralized);
    CHECK(ord.passed());
    CHECK(ord.exhaustive);
    CHECK(gen.passed());
    CHECK(gen.exhaustive);
  }
}

TEST_CASE("strong convexity condition on the coupled quadratic") {
  GameSpec g = LoadData("quadratic_coupled.json");
  OrdinalCandidate cand =
      CandidateFromJson(g, ReadJson("candidate_quadratic.json"));
  ConvexityCertificate cert;
  cert.eta = {2.0, 2.0};
  cert.lipschitz = 2.0;
  TestReport r = CheckStrongConvexityCondition(g, cand, cert, Budget(500));
  const TestReport* sc = Sub(r, "strong-convexity");
  const TestReport* lip = Sub(r, "lipschitz-gradient");
  const TestReport* cond = Sub(r, "gradient-condition");
  REQUIRE(sc);
  REQUIRE(lip);
  REQUIRE(cond);
  CHECK(sc->passed());
  CHECK(cond->passed());
  // The Hessian of phi has eigenvalues 1 and 3, so L = 2 is not a valid
  // Lipschitz constant for its gradient.
  CHECK(lip->failed());
  CHECK(r.failed());
  REQUIRE(lip->witness.has_value());
  CHECK((*lip->witness)["quadratic_bound_excess"].get<double>() > 1e-9);

  cert.lipschitz = 3.0;
  TestReport r3 = CheckStrongConvexityCondition(g, cand, cert, Budget(500));
  CHECK(Sub(r3, "lipschitz-gradient")->passed());
  CHECK(Sub(r3, "gradient-condition")->failed());

  ConvexityCertificate loose;
  loose.eta = {1.0, 1.0};
  loose.lipschitz = 3.0;
  TestReport rl = CheckStrongConvexityCondition(g, cand, loose, Budget(500));
  REQUIRE(rl.witness.has_value());
  CHECK((*rl.witness)["condition"] == "gradient-condition");
  CHECK(rl.failed());
}

TEST_CASE("strong convexity condition collapses for a single player") {
  GameSpec g = LoadGameSpec(R"json({"players": 1,
      "spaces": [{"kind": "box", "lo": [-1], "hi": [1]}],
      "costs": {"kind": "expr", "exprs": ["pow(x[1][1], 2)"]}})json");
  OrdinalCandidate cand = Candidate(g, R"json({"phi": "pow(x[1][1], 2)"})json");
  ConvexityCertificate cert;
  cert.eta = {2.0};
  cert.lipschitz = 2.0;
  TestReport r = CheckStrongConvexityCondition(g, cand, cert, Budget(500));
  CHECK(r.passed());

  ConvexityCertificate est = EstimateConstants(g, cand, Budget(500));
  CHECK(est.source == "sampled-estimate");
  REQUIRE(est.lipschitz.has_value());
  CHECK(*est.lipschitz == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(est.eta[0] == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("subgradient condition on the sum-of-roots candidate") {
  GameSpec g = LoadData("power_sum_unit.json");
  OrdinalCandidate big =
      CandidateFromJson(g, ReadJson("candidate_sqrt_sum.json"));
  TestReport pass = CheckSubgradientCondition(g, big, false, Budget(500));
  CHECK(pass.passed());
  for (const auto& s : pass.sub) {
    INFO(s.method);
    CHECK(s.passed());
  }

  OrdinalCandidate small =
      CandidateFromJson(g, ReadJson("candidate_sqrt_sum_small.json"));
  TestReport fail = CheckSubgradientCondition(g, small, false, Budget(500));
  CHECK(fail.failed());
  const TestReport* cond = Sub(fail, "subgradient-condition");
  REQUIRE(cond);
  CHECK(cond->failed());
  REQUIRE(cond->witness.has_value());
  const Json& w = *cond->witness;
  JointStrategy x = StrategyFromJson(w["x"], g);
  CHECK(x == Scalars({1, 1}));
  int i = w["player"].get<int>() - 1;
  double d = w["y_i"][0].get<double>() - x[i][0];
  // Replay with hand-written derivatives: s_1 = a / (2 sqrt(x_1)) with a = 1,
  // and d f_1 / d x_1 = 2 (x_1 + x_2).
  REQUIRE(i == 0);
  double s_dot = 0.5 / std::sqrt(x[0][0]) * d;
  double g_dot = 2 * (x[0][0] + x[1][0]) * d;
  CHECK(s_dot == doctest::Approx(w["subgradient_dot"].get<double>()));
  CHECK(g_dot == doctest::Approx(w["scaled_gradient_dot"].get<double>()));
  CHECK(g_dot < -1e-9);
  CHECK(s_dot > g_dot);
}

TEST_CASE("scaled subgradient condition with positive multipliers") {
  GameSpec g = LoadData("power_sum_wide.json");
  OrdinalCandidate cand =
      CandidateFromJson(g, ReadJson("candidate_scaled_power.json"));
  TestReport r = CheckSubgradientCondition(g, cand, true, Budget(500));
  CHECK(r.passed());
  const TestReport* alpha = Sub(r, "alpha-positive");
  REQUIRE(alpha);
  CHECK(alpha->passed());

  PotentialFn phi = ExprPotential(g, cand.phi, "user");
  CHECK(VerifyOrdinalPotential(g, phi, Budget(500), OrdinalMode::kGeneralized)
            .passed());

  OrdinalCandidate negative = Candidate(g, R"json({
      "phi": "2*pow(x[1][1] + x[2][1], 0.4)",
      "alphas": ["-1", "1"]})json");
  TestReport neg = CheckSubgradientCondition(g, negative, true, Budget(200));
  CHECK(neg.failed());
  CHECK(Sub(neg, "alpha-positive")->failed());
}

TEST_CASE("candidate schema errors") {
  GameSpec g = LoadData("power_sum_unit.json");
  CHECK_THROWS_AS(Candidate(g, R"json({"params": {}})json"), SchemaError);
  CHECK_THROWS_AS(Candidate(g, R"json({"phi": "q*x[1][1]"})json"), SchemaError);
  CHECK_THROWS_AS(
      Candidate(g, R"json({"phi": "x[1][1]", "alphas": ["1"]})json"),
      SchemaError);
}

}  // namespace
}  // namespace pgt
