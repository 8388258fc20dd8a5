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

#ifndef PGT_TESTS_RANDOM_EXPR_HPP_
#define PGT_TESTS_RANDOM_EXPR_HPP_

#include <cmath>
#include <optional>
#include <random>

#include "errors.hpp"
#include "expr.hpp"
#include "strategy.hpp"

namespace pgt::testing {

// Random expression over two players with two coordinates each.
Expr RandomExpr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
  std::uniform_int_distribution<int> idx(0, 1);
  std::uniform_real_distribution<double> num(-3.0, 3.0);
  switch (pick(rng)) {
    case 0:
      return Expr::Number(std::round(num(rng) * 4.0) / 4.0);
    case 1:
      return Expr::Var(idx(rng), idx(rng));
    case 2:
      return Expr::Aggregate(idx(rng));
    case 3:
      return Expr::Neg(RandomExpr(rng, depth - 1));
    case 4:
      return Expr::Binary(Expr::Kind::kAdd, RandomExpr(rng, depth - 1),
                          RandomExpr(rng, depth - 1));
    case 5:
      return Expr::Binary(Expr::Kind::kSub, RandomExpr(rng, depth - 1),
                          RandomExpr(rng, depth - 1));
    case 6:
      return Expr::Binary(Expr::Kind::kMul, RandomExpr(rng, depth - 1),
                          RandomExpr(rng, depth - 1));
    case 7:
      return Expr::Binary(Expr::Kind::kDiv, RandomExpr(rng, depth - 1),
                          RandomExpr(rng, depth - 1));
    case 8: {
      static const double kExps[] = {2.0, 3.0, -1.0, 0.5, 1.5, -2.0};
      std::uniform_int_distribution<int> e(0, 5);
      return Expr::Pow(RandomExpr(rng, depth - 1), kExps[e(rng)]);
    }
    default:
      return Expr::Sqrt(RandomExpr(rng, depth - 1));
  }
}

struct DerivativeSample {
  Expr expr;
  JointStrategy x;
  int player = 0;
  int coord = 0;
  double symbolic = 0.0;
  double finite_difference = 0.0;
  double error() const { return std::abs(symbolic - finite_difference); }
};

// Draws a random expression, point and coordinate and compares the symbolic
// partial with a central difference of step 1e-6 * (1 + |x|). Returns
// nullopt when evaluation fails or the difference quotient is unstable
// (poles, the kink of sqrt at 0); stability is judged from the function
// values alone.
inline std::optional<DerivativeSample> SampleDerivative(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::uniform_int_distribution<int> idx(0, 1);
  DerivativeSample d;
  d.expr = RandomExpr(rng, 4);
  d.x = JointStrategy({{coord(rng), coord(rng)}, {coord(rng), coord(rng)}});
  d.player = idx(rng);
  d.coord = idx(rng);
  const int i = d.player, k = d.coord;
  auto quotient = [&](double step) {
    JointStrategy xp = d.x, xm = d.x;
    xp[i][k] += step;
    xm[i][k] -= step;
    return (Evaluate(d.expr, xp, {}) - Evaluate(d.expr, xm, {})) / (2 * step);
  };
  const double h = 1e-6 * (1.0 + std::abs(d.x[i][k]));
  double value, wide;
  try {
    value = Evaluate(d.expr, d.x, {});
    d.finite_difference = quotient(h);
    wide = quotient(1e3 * h);
    d.symbolic = Evaluate(Differentiate(d.expr, i, k), d.x, {});
  } catch (const Error&) {
    return std::nullopt;
  }
  if (!std::isfinite(d.finite_difference) || !std::isfinite(d.symbolic) ||
      std::abs(value) > 1e4 || std::abs(d.finite_difference) > 1e4 ||
      std::abs(wide - d.finite_difference) >
          1e-2 * (1.0 + std::abs(d.finite_difference))) {
    return std::nullopt;
  }
  return d;
}

}  // namespace pgt::testing

#endif  // PGT_TESTS_RANDOM_EXPR_HPP_
