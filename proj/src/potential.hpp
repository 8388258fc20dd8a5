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

#ifndef PGT_POTENTIAL_HPP_
#define PGT_POTENTIAL_HPP_

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "criteria.hpp"
#include "expr.hpp"
#include "game.hpp"
#include "report.hpp"

namespace pgt {

// A candidate or constructed potential phi: K -> R. `expr` is set when phi
// has a closed form over the game's variables; `table` when it is tabulated
// over the profiles of a finite game (lexicographic order).
struct PotentialFn {
  std::function<double(const JointStrategy&)> evaluator;
  std::optional<Expr> expr;
  ParamEnv params;
  std::optional<std::vector<double>> table;
  std::string method;         // theorem5 | theorem8 | rosenthal | oracle | user
  std::string normalization;  // "phi(0)=0", "phi(lex-first)=0", ...

  double operator()(const JointStrategy& x) const { return evaluator(x); }
};

PotentialFn ExprPotential(const GameSpec& g, Expr phi, std::string method);
PotentialFn TablePotential(const GameSpec& g, std::vector<double> table,
                           std::string method, std::string normalization);

// phi(z) = -h_P(z, -z), so phi(0) = 0. Throws Error(kInapplicable) unless
// every space contains 0 and is symmetric.
PotentialFn ConstructByReversePath(const GameSpec& g);

// The prefix-plus-pairs formula: h_P3 (odd N) or h_P2 (even N) from 0, plus
// h_ij(0, 0, z_i, z_j; z-hat) over the remaining consecutive player pairs.
// phi(0) = 0; for N = 1, phi = f_1 - f_1(0).
PotentialFn ConstructByPairs(const GameSpec& g);

// Sum over edges of sum_{k <= v_e} C_e(k) for a congestion game. With
// `augmented`, phi lives on the augmented game (actions -m..m, see
// ExpandCongestionGame) and includes the constant -sum_k C_0(k), where C_0
// is the effective self-loop cost; otherwise on route indices 1..m.
PotentialFn ConstructRosenthal(const GameSpec& g, bool augmented);

// f_i(x_i', x_-i) - f_i(x) = phi(x_i', x_-i) - phi(x) on all (finite, within
// budget) or sampled unilateral deviations.
TestReport VerifyExactPotential(const GameSpec& g, const PotentialFn& phi,
                                const CheckOptions& opts);

// grad_{x_i} f_i = grad_{x_i} phi at sampled points, symbolically.
TestReport VerifyGradientMatch(const GameSpec& g, const Expr& phi,
                               const CheckOptions& opts);

// (phi(z + y) - phi(z), h_P(z, y)).
std::pair<double, double> PotentialDifferenceAlongPath(const GameSpec& g,
                                                       const PotentialFn& phi,
                                                       const JointStrategy& z,
                                                       const JointStrategy& y);

// Calls fn(i, x, x_prime) for every unilateral deviation of player i from x
// to x_prime = (x_i', x_-i), x_i' != x_i. Finite games are enumerated when
// the count fits the budget; otherwise sampled pairs (x, w) give the
// deviations x -> (w_i, x_-i). Returns true when enumeration was exhaustive.
bool ForEachDeviation(const GameSpec& g, const CheckOptions& opts,
                      const std::function<void(int, const JointStrategy&,
                                               const JointStrategy&)>& fn);

Json PotentialToJson(const GameSpec& g, const PotentialFn& phi);
// Accepts {"kind": "expr", "expr": ...}, {"kind": "table", "table": ...} or
// an ordinal candidate object carrying "phi".
PotentialFn PotentialFromJson(const GameSpec& g, const Json& j);

}  // namespace pgt

#endif  // PGT_POTENTIAL_HPP_
