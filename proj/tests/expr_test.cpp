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

#include "expr.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "errors.hpp"
#include "random_expr.hpp"
#include "test_util.hpp"

namespace pgt {
namespace {

using testing::Scalars;

const std::vector<int> kThreeScalars = {1, 1, 1};

ParamEnv CournotParams() { return {{"a", 10.0}, {"b", 1.0}, {"c", 2.0}}; }

TEST_CASE("parses and evaluates the Cournot cost") {
  Expr f1 = ParseExpression(
      "(a - b*(x[1][1]+x[2][1]+x[3][1]))*x[1][1] - c*x[1][1]", kThreeScalars);
  CHECK(Evaluate(f1, Scalars({1, 2, 3}), CournotParams()) == 2.0);
  Expr agg =
      ParseExpression("(a - b*xbar[1])*x[1][1] - c*x[1][1]", kThreeScalars);
  CHECK(Evaluate(agg, Scalars({1, 2, 3}), CournotParams()) == 2.0);
}

TEST_CASE("trivial expressions") {
  Expr v = ParseExpression("x[1][1]", kThreeScalars);
  CHECK(v.kind() == Expr::Kind::kVar);
  CHECK(v.player() == 0);
  CHECK(v.coord() == 0);
  CHECK(Evaluate(ParseExpression("7", kThreeScalars), Scalars({4, 5, 6}), {}) ==
        7.0);
  CHECK(Evaluate(ParseExpression("x[1][1]*0", kThreeScalars),
                 Scalars({5, 0, 0}), {}) == 0.0);
  Expr p = ParseExpression("pow(x[1][1]+x[2][1], 0.4)", kThreeScalars);
  CHECK(p.kind() == Expr::Kind::kPow);
  CHECK(p.exponent() == doctest::Approx(0.4));
}

TEST_CASE("precedence") {
  JointStrategy x = Scalars({2, 3, 0});
  CHECK(Evaluate(ParseExpression("1 + x[1][1]*x[2][1]", kThreeScalars), x,
                 {}) == 7.0);
  CHECK(Evaluate(ParseExpression("-x[1][1]*x[2][1]", kThreeScalars), x, {}) ==
        -6.0);
  CHECK(Evaluate(ParseExpression("x[2][1] - x[1][1] - 1", kThreeScalars), x,
                 {}) == 0.0);
  CHECK(Evaluate(ParseExpression("12 / x[1][1] / x[2][1]", kThreeScalars), x,
                 {}) == 2.0);
}

TEST_CASE("syntax errors carry a byte offset") {
  try {
    ParseExpression("x[1][1] + * 2", kThreeScalars);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 10);
  }
  CHECK_THROWS_AS(ParseExpression("pow(x[1][1], x[2][1])", kThreeScalars),
                  ParseError);
  CHECK_THROWS_AS(ParseExpression("(x[1][1]", kThreeScalars), ParseError);
}

TEST_CASE("out-of-range variables are rejected") {
  try {
    ParseExpression("x[4][1]", kThreeScalars);
    FAIL("expected an unknown-variable error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kUnknownVariable);
  }
  CHECK_THROWS_AS(ParseExpression("x[1][2]", kThreeScalars), Error);
  CHECK_THROWS_AS(ParseExpression("xbar[2]", kThreeScalars), Error);
}

TEST_CASE("evaluation errors") {
  auto kind_of = [](const char* src, const JointStrategy& x,
                    const ParamEnv& env) {
    try {
      Evaluate(ParseExpression(src, kThreeScalars), x, env);
    } catch (const Error& e) {
      return static_cast<int>(e.kind());
    }
    return -1;
  };
  JointStrategy neg = Scalars({-1, 0, 0});
  CHECK(kind_of("sqrt(x[1][1])", neg, {}) ==
        static_cast<int>(ErrorKind::kDomain));
  CHECK(kind_of("pow(x[1][1], 0.5)", neg, {}) ==
        static_cast<int>(ErrorKind::kDomain));
  CHECK(kind_of("1 / x[2][1]", neg, {}) ==
        static_cast<int>(ErrorKind::kDivisionByZero));
  CHECK(kind_of("pow(x[2][1], -1)", neg, {}) ==
        static_cast<int>(ErrorKind::kDivisionByZero));
  CHECK(kind_of("q * x[1][1]", neg, {}) ==
        static_cast<int>(ErrorKind::kInvalidArgument));
  CHECK(Evaluate(ParseExpression("pow(x[1][1], 3)", kThreeScalars), neg, {}) ==
        -1.0);
}

TEST_CASE("symbolic derivatives on hand-checked cases") {
  Expr sq = ParseExpression("pow(x[1][1],2)", kThreeScalars);
  Expr d = Differentiate(sq, 0, 0);
  CHECK(Evaluate(d, Scalars({3, 0, 0}), {}) == 6.0);
  CHECK(Evaluate(d, Scalars({-1.5, 0, 0}), {}) == -3.0);

  Expr f1 = ParseExpression(
      "(a - b*(x[1][1]+x[2][1]+x[3][1]))*x[1][1] - c*x[1][1]", kThreeScalars);
  CHECK(Evaluate(Differentiate(f1, 0, 0), Scalars({1, 2, 3}),
                 CournotParams()) == doctest::Approx(1.0).epsilon(1e-12));

  Expr x1 = ParseExpression("x[1][1]", kThreeScalars);
  CHECK(Differentiate(x1, 1, 0).IsNumber(0.0));

  Expr agg = ParseExpression("xbar[1]", kThreeScalars);
  for (int i = 0; i < 3; ++i) {
    CHECK(Differentiate(agg, i, 0).IsNumber(1.0));
  }
}

TEST_CASE("symbolic derivatives agree with central differences") {
  std::mt19937_64 rng(20260417);
  int checked = 0;
  int attempts = 0;
  while (checked < 200) {
    REQUIRE(++attempts < 20000);
    auto d = testing::SampleDerivative(rng);
    if (!d) continue;
    INFO("expr: ", d->expr.ToString(), "  at ", ToString(d->x), "  d/dx[",
         d->player + 1, "][", d->coord + 1, "]");
    CHECK(d->error() <= 1e-5 * (1.0 + std::abs(d->symbolic)));
    ++checked;
  }
}

TEST_CASE("printing then parsing gives back the same tree") {
  std::mt19937_64 rng(7);
  const std::vector<int> dims = {2, 2};
  for (int n = 0; n < 500; ++n) {
    Expr e = testing::RandomExpr(rng, 5);
    std::string text = e.ToString();
    INFO(text);
    CHECK(ParseExpression(text, dims) == e);
  }
  Expr with_params =
      ParseExpression("(a - b*xbar[1])*x[1][1] - c*x[1][1]", kThreeScalars);
  CHECK(ParseExpression(with_params.ToString(), kThreeScalars) == with_params);
}

TEST_CASE("zeroing players and structural queries") {
  Expr f = ParseExpression("x[1][1]*xbar[1] + x[3][1]", kThreeScalars);
  Expr z = ZeroPlayers(f, {false, true, true}, 3);
  CHECK(Evaluate(z, Scalars({2, 5, 7}), {}) == 4.0);
  CHECK(UsesOnlyOwnAndAggregate(
      ParseExpression("x[1][1]*xbar[1]", kThreeScalars), 0));
  CHECK_FALSE(UsesOnlyOwnAndAggregate(f, 0));
  CHECK(DependsOnPlayer(ParseExpression("xbar[1]", kThreeScalars), 2));
  CHECK_FALSE(DependsOnPlayer(ParseExpression("x[1][1]", kThreeScalars), 1));
  CHECK(FreeParams(ParseExpression("a*x[1][1] - b", kThreeScalars)) ==
        std::set<std::string>{"a", "b"});
}

}  // namespace
}  // namespace pgt
