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

#include "potential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "criteria.hpp"
#include "doctest.h"
#include "errors.hpp"
#include "expr.hpp"
#include "finite_oracle.hpp"
#include "game.hpp"
#include "paths.hpp"
#include "test_util.hpp"

namespace pgt {
namespace {

using testing::BruteForcePotential;
using testing::LoadData;
using testing::RandomFiniteGame;
using testing::Scalars;

CheckOptions Budget(std::int64_t budget) {
  CheckOptions o;
  o.budget = budget;
  return o;
}

// Explicit Cournot potential: sum_i (a - b(x_1 + ... + x_i)) x_i - c x_i.
double CournotPotential(const std::vector<double>& x) {
  const double a = 10, b = 1, c = 2;
  double prefix = 0, phi = 0;
  for (double xi : x) {
    prefix += xi;
    phi += (a - b * prefix) * xi - c * xi;
  }
  return phi;
}

// Max minus min of f - g over the given points.
template <typename F, typename G>
double OffsetSpread(const std::vector<JointStrategy>& pts, F f, G g) {
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& x : pts) {
    double d = f(x) - g(x);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return hi - lo;
}

TEST_CASE("reverse-path construction on Cournot") {
  GameSpec g = LoadData("cournot3.json");
  PotentialFn phi = ConstructByReversePath(g);
  CHECK(phi.method == "theorem5");
  CHECK(phi(Scalars({0, 0, 0})) == 0.0);
  CHECK(phi(Scalars({1, 2, 3})) == doctest::Approx(23.0).epsilon(1e-14));
  CHECK(HPath(g, g.ZeroStrategy(), Scalars({1, 2, 3})) ==
        doctest::Approx(23.0).epsilon(1e-14));
  JointStrategy z = Scalars({4, -2, 1});
  CHECK(phi(z) - phi(z) == 0.0);
  CHECK(VerifyExactPotential(g, phi, Budget(500)).passed());
}

TEST_CASE("pairwise construction reproduces the explicit Cournot potential") {
  GameSpec g = LoadData("cournot4.json");
  PotentialFn phi = ConstructByPairs(g);
  CHECK(phi.method == "theorem8");
  REQUIRE(phi.expr.has_value());
  CHECK(phi(g.ZeroStrategy()) == 0.0);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-10, 10), v(-1, 1);
  for (int n = 0; n < 1000; ++n) {
    std::vector<double> x{u(rng), u(rng), u(rng), u(rng)};
    JointStrategy js = Scalars(x);
    CHECK(std::abs(phi(js) - CournotPotential(x)) <= 1e-9);
    CHECK(std::abs(Evaluate(*phi.expr, js, g.params()) - CournotPotential(x)) <=
          1e-9);

    double y1 = v(rng) * (10 - std::abs(x[0]));
    std::vector<double> moved = x;
    moved[0] += y1;
    const double a = 10, b = 1, c = 2;
    double xbar = x[0] + x[1] + x[2] + x[3];
    double closed_form =
        (a - b * xbar) * y1 - b * x[0] * y1 - b * y1 * y1 - c * y1;
    CHECK(std::abs(phi(Scalars(moved)) - phi(js) - closed_form) <= 1e-9);
  }
  CHECK(VerifyExactPotential(g, phi, Budget(500)).passed());
  CHECK(VerifyGradientMatch(g, *phi.expr, Budget(500)).passed());
}

TEST_CASE("both constructions differ by a constant") {
  for (const char* name : {"cournot3.json", "cournot4.json"}) {
    GameSpec g = LoadData(name);
    PotentialFn p5 = ConstructByReversePath(g);
    PotentialFn p8 = ConstructByPairs(g);
    auto pts = SampleStrategies(g, {500, 3, 10.0});
    CHECK(OffsetSpread(pts, p5, p8) <= 1e-9);
  }
}

TEST_CASE("single player: phi is the cost shifted to vanish at 0") {
  GameSpec g = LoadGameSpec(R"json({"players": 1,
      "spaces": [{"kind": "box", "lo": [-2], "hi": [2]}],
      "costs": {"kind": "expr", "exprs": ["pow(x[1][1] - 1, 2)"]}})json");
  PotentialFn phi = ConstructByPairs(g);
  CHECK(phi(Scalars({0})) == 0.0);
  CHECK(phi(Scalars({1})) == -1.0);
  CHECK(phi(Scalars({2})) == 0.0);
  CHECK(VerifyExactPotential(g, phi, Budget(100)).passed());
}

TEST_CASE("two players: pairwise construction is the two-step prefix") {
  GameSpec g = LoadGameSpec(R"json({"players": 2,
      "spaces": [{"kind": "box", "lo": [-2], "hi": [2]},
                 {"kind": "box", "lo": [-2], "hi": [2]}],
      "costs": {"kind": "expr", "exprs": ["x[1][1]*x[2][1] + pow(x[1][1], 2)",
                                           "x[1][1]*x[2][1] - x[2][1]"]}})json");
  PotentialFn phi = ConstructByPairs(g);
  for (const auto& x : SampleStrategies(g, {100, 1, 10.0})) {
    double x1 = x[0][0], x2 = x[1][0];
    CHECK(phi(x) == doctest::Approx(x1 * x1 + x1 * x2 - x2).epsilon(1e-12));
  }
}

TEST_CASE("constructions agree with the oracle on centred finite games") {
  std::mt19937_64 rng(31);
  int checked = 0;
  while (checked < 25) {
    GameSpec raw = RandomFiniteGame(rng, true);
    bool all_three = true;
    for (const auto& s : raw.spaces()) all_three &= s.size() == 3;
    if (!all_three) continue;
    Json j = GameSpecToJson(raw);
    for (auto& s : j["spaces"]) {
      s["points"] = Json::parse("[[-1], [0], [1]]");
    }
    GameSpec g = LoadGameSpec(j.dump());
    OracleResult oracle = OracleFinitePotential(g, 0.0);
    REQUIRE(oracle.report.passed());
    std::vector<JointStrategy> all;
    for (std::uint64_t p = 0; p < g.NumProfiles(); ++p) {
      all.push_back(g.ProfileAt(p));
    }
    auto table = [&](const JointStrategy& x) {
      return (*oracle.table)[g.ProfileIndex(g.ActionIndices(x))];
    };
    PotentialFn p5 = ConstructByReversePath(g);
    PotentialFn p8 = ConstructByPairs(g);
    CHECK(OffsetSpread(all, p5, table) == 0.0);
    CHECK(OffsetSpread(all, p8, table) == 0.0);
    TestReport v5 = VerifyExactPotential(g, p5, Budget(100000));
    CHECK(v5.passed());
    CHECK(v5.exhaustive);
    CHECK(VerifyExactPotential(g, p8, Budget(100000)).passed());
    for (const auto& z : all) {
      for (const auto& w : all) {
        auto [dphi, h] = PotentialDifferenceAlongPath(g, p8, z, w - z);
        CHECK(dphi == h);
      }
    }
    ++checked;
  }
}

TEST_CASE("Rosenthal potential values") {
  GameSpec g = LoadData("congestion2.json");
  PotentialFn phi = ConstructRosenthal(g, false);
  CHECK(phi(Scalars({1, 1})) == 3.0);
  CHECK(phi(Scalars({1, 2})) == 2.0);
  CHECK(phi(Scalars({2, 2})) == 3.0);
  REQUIRE(phi.table.has_value());
  CHECK(phi.table->size() == 4);

  PotentialFn aug = ConstructRosenthal(g, true);
  CHECK(aug(Scalars({0, 0})) == 0.0);
  CHECK_THROWS_AS(ConstructRosenthal(LoadData("pennies.json"), false), Error);
}

TEST_CASE("Rosenthal matches the oracle up to a constant") {
  for (const char* name : {"congestion2.json", "congestion3.json"}) {
    GameSpec spec = LoadData(name);
    for (bool augment : {false, true}) {
      INFO(name, " augmented=", augment);
      GameSpec g = ExpandCongestionGame(spec, augment);
      PotentialFn phi = ConstructRosenthal(spec, augment);
      OracleResult oracle = OracleFinitePotential(g, 1e-9);
      REQUIRE(oracle.report.passed());
      auto ref = BruteForcePotential(g);
      REQUIRE(ref.has_value());
      std::vector<JointStrategy> all;
      for (std::uint64_t p = 0; p < g.NumProfiles(); ++p) {
        all.push_back(g.ProfileAt(p));
      }
      auto table = [&](const JointStrategy& x) {
        return (*oracle.table)[g.ProfileIndex(g.ActionIndices(x))];
      };
      auto brute = [&](const JointStrategy& x) {
        return (*ref)[g.ProfileIndex(g.ActionIndices(x))];
      };
      CHECK(OffsetSpread(all, phi, table) <= 1e-12);
      CHECK(OffsetSpread(all, phi, brute) == 0.0);
      TestReport v = VerifyExactPotential(g, phi, Budget(100000));
      CHECK(v.passed());
      CHECK(v.exhaustive);
    }
  }
}

TEST_CASE("verification rejects wrong potentials") {
  GameSpec pennies = LoadData("pennies.json");
  PotentialFn zero = TablePotential(pennies, {0, 0, 0, 0}, "user", "none");
  TestReport r = VerifyExactPotential(pennies, zero, Budget(100));
  CHECK(r.failed());
  CHECK(r.exhaustive);
  CHECK(r.witness.has_value());

  GameSpec g = LoadData("cournot4.json");
  Expr phi = *ConstructByPairs(g).expr;
  Expr cubic = Sum(phi, ParseExpression("pow(x[1][1], 3)", g.dims()));
  TestReport bad = VerifyGradientMatch(g, cubic, Budget(200));
  CHECK(bad.failed());
  REQUIRE(bad.witness.has_value());
  Expr shifted = Sum(phi, Expr::Number(42));
  CHECK(VerifyGradientMatch(g, shifted, Budget(200)).passed());
  CHECK(VerifyExactPotential(g, ExprPotential(g, shifted, "user"), Budget(200))
            .passed());
  CHECK(VerifyExactPotential(g, ExprPotential(g, cubic, "user"), Budget(200))
            .failed());
}

TEST_CASE("y = 0 gives a zero potential difference and zero h_P") {
  GameSpec g = LoadData("cournot3.json");
  PotentialFn phi = ConstructByPairs(g);
  JointStrategy z = Scalars({1, -3, 2});
  auto [dphi, h] = PotentialDifferenceAlongPath(g, phi, z, z.Zero());
  CHECK(dphi == 0.0);
  CHECK(h == 0.0);
}

TEST_CASE("potential JSON round trip") {
  GameSpec g = LoadData("cournot4.json");
  PotentialFn phi = ConstructByPairs(g);
  Json j = PotentialToJson(g, phi);
  PotentialFn back = PotentialFromJson(g, j);
  for (const auto& x : SampleStrategies(g, {50, 2, 10.0})) {
    CHECK(back(x) == phi(x));
  }
  CHECK(PotentialToJson(g, back) == j);

  GameSpec pennies = LoadData("pennies.json");
  PotentialFn t = TablePotential(pennies, {0, 1, 2, 3}, "user", "none");
  PotentialFn tb = PotentialFromJson(pennies, PotentialToJson(pennies, t));
  for (std::uint64_t p = 0; p < 4; ++p) {
    CHECK(tb(pennies.ProfileAt(p)) == static_cast<double>(p));
  }

  PotentialFn bare = PotentialFromJson(
      g, Json::parse(R"json({"phi": "a*x[1][1]", "params": {"a": 2}})json"));
  CHECK(bare(Scalars({3, 0, 0, 0})) == 6.0);
}

}  // namespace
}  // namespace pgt
