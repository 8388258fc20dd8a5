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

#ifndef PGT_EXPR_HPP_
#define PGT_EXPR_HPP_

// A small expression language for cost functions and candidate potentials.
//
// Grammar (whitespace-insensitive):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | primary
//   primary := number | param | 'x' '[' int ']' '[' int ']'
//            | 'xbar' '[' int ']' | 'pow' '(' expr ',' ['-'] number ')'
//            | 'sqrt' '(' expr ')' | '(' expr ')'
//
// Variable indices in source text are 1-based (x[i][k] is coordinate k of
// player i); the AST stores them 0-based. xbar[k] is the k-th coordinate of
// the aggregate sum over all players. A '-' applied directly to a numeric
// literal yields a negative literal, so printing is an exact inverse of
// parsing.

#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "strategy.hpp"

namespace pgt {

using ParamEnv = std::map<std::string, double, std::less<>>;

class Expr {
 public:
  enum class Kind {
    kNumber,
    kParam,
    kVar,
    kAggregate,
    kNeg,
    kAdd,
    kSub,
    kMul,
    kDiv,
    kPow,
    kSqrt,
  };

  // Raw constructors; no folding.
  static Expr Number(double v);
  static Expr Param(std::string name);
  static Expr Var(int player, int coord);
  static Expr Aggregate(int coord);
  static Expr Neg(Expr e);
  static Expr Binary(Kind op, Expr lhs, Expr rhs);
  static Expr Pow(Expr base, double exponent);
  static Expr Sqrt(Expr e);

  Expr();  // the literal 0

  Kind kind() const;
  double number() const;
  const std::string& name() const;
  int player() const;
  int coord() const;
  double exponent() const;
  const Expr& lhs() const;  // also the operand of unary nodes
  const Expr& rhs() const;

  bool IsNumber(double v) const;

  // Structural equality.
  friend bool operator==(const Expr& a, const Expr& b);

  std::string ToString() const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Folding builders used by differentiation and substitution.
Expr Sum(const Expr& a, const Expr& b);
Expr Difference(const Expr& a, const Expr& b);
Expr Product(const Expr& a, const Expr& b);
Expr Quotient(const Expr& a, const Expr& b);
Expr Negate(const Expr& a);

// dims[i] is the action dimension of player i. Throws ParseError on syntax
// errors and Error(kUnknownVariable) for out-of-range indices.
Expr ParseExpression(std::string_view source, std::span<const int> dims);

// Throws Error(kDomain) / Error(kDivisionByZero) on invalid arithmetic and
// Error(kInvalidArgument) for unbound parameters.
double Evaluate(const Expr& e, const JointStrategy& x, const ParamEnv& env);

// Partial derivative with respect to x[player][coord] (0-based).
Expr Differentiate(const Expr& e, int player, int coord);

// Replaces every coordinate of each player with zeroed[i] by 0. xbar[k]
// becomes the explicit sum of the remaining players' k-th coordinates.
Expr ZeroPlayers(const Expr& e, const std::vector<bool>& zeroed,
                 int num_players);

std::set<std::string> FreeParams(const Expr& e);

// True iff every variable in e is either x[player][*] or xbar[*].
bool UsesOnlyOwnAndAggregate(const Expr& e, int player);

// True iff e mentions any coordinate of the given player (directly or
// through xbar).
bool DependsOnPlayer(const Expr& e, int player);

}  // namespace pgt

#endif  // PGT_EXPR_HPP_
