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

#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

#include "errors.hpp"

namespace pgt {

struct Expr::Node {
  Kind kind = Kind::kNumber;
  double value = 0.0;  // literal or pow exponent
  std::string name;
  int player = 0;
  int coord = 0;
  std::vector<Expr> children;
};

namespace {

bool IsBinary(Expr::Kind k) {
  return k == Expr::Kind::kAdd || k == Expr::Kind::kSub ||
         k == Expr::Kind::kMul || k == Expr::Kind::kDiv;
}

std::string FormatNumber(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

Expr::Expr() : Expr(Number(0.0)) {}

Expr Expr::Number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kNumber;
  n->value = v;
  return Expr(std::move(n));
}

Expr Expr::Param(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kParam;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::Var(int player, int coord) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kVar;
  n->player = player;
  n->coord = coord;
  return Expr(std::move(n));
}

Expr Expr::Aggregate(int coord) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kAggregate;
  n->coord = coord;
  return Expr(std::move(n));
}

Expr Expr::Neg(Expr e) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kNeg;
  n->children.push_back(std::move(e));
  return Expr(std::move(n));
}

Expr Expr::Binary(Kind op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = op;
  n->children.push_back(std::move(lhs));
  n->children.push_back(std::move(rhs));
  return Expr(std::move(n));
}

Expr Expr::Pow(Expr base, double exponent) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kPow;
  n->children.push_back(std::move(base));
  n->value = exponent;
  return Expr(std::move(n));
}

Expr Expr::Sqrt(Expr e) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kSqrt;
  n->children.push_back(std::move(e));
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::number() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
int Expr::player() const { return node_->player; }
int Expr::coord() const { return node_->coord; }
double Expr::exponent() const { return node_->value; }
const Expr& Expr::lhs() const { return node_->children.at(0); }
const Expr& Expr::rhs() const { return node_->children.at(1); }

bool Expr::IsNumber(double v) const {
  return kind() == Kind::kNumber && number() == v;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Expr::Kind::kNumber:
      return a.number() == b.number();
    case Expr::Kind::kParam:
      return a.name() == b.name();
    case Expr::Kind::kVar:
      return a.player() == b.player() && a.coord() == b.coord();
    case Expr::Kind::kAggregate:
      return a.coord() == b.coord();
    case Expr::Kind::kNeg:
    case Expr::Kind::kSqrt:
      return a.lhs() == b.lhs();
    case Expr::Kind::kPow:
      return a.exponent() == b.exponent() && a.lhs() == b.lhs();
    default:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

std::string Expr::ToString() const {
  switch (kind()) {
    case Kind::kNumber:
      return FormatNumber(number());
    case Kind::kParam:
      return name();
    case Kind::kVar:
      return "x[" + std::to_string(player() + 1) + "][" +
             std::to_string(coord() + 1) + "]";
    case Kind::kAggregate:
      return "xbar[" + std::to_string(coord() + 1) + "]";
    case Kind::kNeg:
      return "-(" + lhs().ToString() + ")";
    case Kind::kSqrt:
      return "sqrt(" + lhs().ToString() + ")";
    case Kind::kPow:
      return "pow(" + lhs().ToString() + ", " + FormatNumber(exponent()) + ")";
    case Kind::kAdd:
      return "(" + lhs().ToString() + " + " + rhs().ToString() + ")";
    case Kind::kSub:
      return "(" + lhs().ToString() + " - " + rhs().ToString() + ")";
    case Kind::kMul:
      return "(" + lhs().ToString() + " * " + rhs().ToString() + ")";
    case Kind::kDiv:
      return "(" + lhs().ToString() + " / " + rhs().ToString() + ")";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Folding builders.

Expr Negate(const Expr& a) {
  if (a.kind() == Expr::Kind::kNumber) return Expr::Number(-a.number());
  if (a.kind() == Expr::Kind::kNeg) return a.lhs();
  return Expr::Neg(a);
}

Expr Sum(const Expr& a, const Expr& b) {
  if (a.IsNumber(0.0)) return b;
  if (b.IsNumber(0.0)) return a;
  if (a.kind() == Expr::Kind::kNumber && b.kind() == Expr::Kind::kNumber) {
    return Expr::Number(a.number() + b.number());
  }
  return Expr::Binary(Expr::Kind::kAdd, a, b);
}

Expr Difference(const Expr& a, const Expr& b) {
  if (b.IsNumber(0.0)) return a;
  if (a.IsNumber(0.0)) return Negate(b);
  if (a.kind() == Expr::Kind::kNumber && b.kind() == Expr::Kind::kNumber) {
    return Expr::Number(a.number() - b.number());
  }
  return Expr::Binary(Expr::Kind::kSub, a, b);
}

Expr Product(const Expr& a, const Expr& b) {
  if (a.IsNumber(0.0) || b.IsNumber(0.0)) return Expr::Number(0.0);
  if (a.IsNumber(1.0)) return b;
  if (b.IsNumber(1.0)) return a;
  if (a.kind() == Expr::Kind::kNumber && b.kind() == Expr::Kind::kNumber) {
    return Expr::Number(a.number() * b.number());
  }
  return Expr::Binary(Expr::Kind::kMul, a, b);
}

Expr Quotient(const Expr& a, const Expr& b) {
  if (a.IsNumber(0.0) && !b.IsNumber(0.0)) return Expr::Number(0.0);
  if (b.IsNumber(1.0)) return a;
  if (a.kind() == Expr::Kind::kNumber && b.kind() == Expr::Kind::kNumber &&
      b.number() != 0.0) {
    return Expr::Number(a.number() / b.number());
  }
  return Expr::Binary(Expr::Kind::kDiv, a, b);
}

// ---------------------------------------------------------------------------
// Parser.

namespace {

class Parser {
 public:
  Parser(std::string_view src, std::span<const int> dims)
      : src_(src), dims_(dims) {}

  Expr ParseAll() {
    Expr e = ParseSum();
    SkipSpace();
    if (pos_ != src_.size()) Fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void Fail(const std::string& msg) const {
    throw ParseError(pos_, msg);
  }

  void SkipSpace() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
  }

  bool Peek(char c) {
    SkipSpace();
    return pos_ < src_.size() && src_[pos_] == c;
  }

  void Expect(char c) {
    if (!Peek(c)) Fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool AtNumber() {
    SkipSpace();
    if (pos_ >= src_.size()) return false;
    char c = src_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.';
  }

  double ParseNumberLiteral() {
    SkipSpace();
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isdigit(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '.')) {
      ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) {
        ++pos_;
      }
      if (pos_ >= src_.size() ||
          !std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        pos_ = save;
      } else {
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          ++pos_;
        }
      }
    }
    double v = 0.0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_) {
      pos_ = start;
      Fail("malformed number");
    }
    return v;
  }

  int ParseIndex() {
    Expect('[');
    SkipSpace();
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) Fail("expected integer index");
    int v = 0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc()) {
      pos_ = start;
      Fail("index out of range");
    }
    Expect(']');
    return v;
  }

  std::string ParseIdentifier() {
    SkipSpace();
    std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(src_.substr(start, pos_ - start));
  }

  Expr ParseSum() {
    Expr e = ParseProduct();
    for (;;) {
      if (Peek('+')) {
        ++pos_;
        e = Expr::Binary(Expr::Kind::kAdd, e, ParseProduct());
      } else if (Peek('-')) {
        ++pos_;
        e = Expr::Binary(Expr::Kind::kSub, e, ParseProduct());
      } else {
        return e;
      }
    }
  }

  Expr ParseProduct() {
    Expr e = ParseUnary();
    for (;;) {
      if (Peek('*')) {
        ++pos_;
        e = Expr::Binary(Expr::Kind::kMul, e, ParseUnary());
      } else if (Peek('/')) {
        ++pos_;
        e = Expr::Binary(Expr::Kind::kDiv, e, ParseUnary());
      } else {
        return e;
      }
    }
  }

  Expr ParseUnary() {
    if (Peek('-')) {
      ++pos_;
      if (AtNumber()) return Expr::Number(-ParseNumberLiteral());
      return Expr::Neg(ParseUnary());
    }
    return ParsePrimary();
  }

  Expr ParsePrimary() {
    SkipSpace();
    if (pos_ >= src_.size()) Fail("unexpected end of input");
    if (AtNumber()) return Expr::Number(ParseNumberLiteral());
    if (Peek('(')) {
      ++pos_;
      Expr e = ParseSum();
      Expect(')');
      return e;
    }
    char c = src_[pos_];
    if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) {
      Fail(std::string("unexpected character '") + c + "'");
    }
    std::size_t ident_pos = pos_;
    std::string id = ParseIdentifier();
    if (id == "x" && Peek('[')) {
      int i = ParseIndex();
      int k = ParseIndex();
      if (i < 1 || i > static_cast<int>(dims_.size())) {
        throw Error(ErrorKind::kUnknownVariable,
                    "unknown variable x[" + std::to_string(i) + "][" +
                        std::to_string(k) + "] at byte " +
                        std::to_string(ident_pos) + ": player out of range");
      }
      if (k < 1 || k > dims_[i - 1]) {
        throw Error(ErrorKind::kUnknownVariable,
                    "unknown variable x[" + std::to_string(i) + "][" +
                        std::to_string(k) + "] at byte " +
                        std::to_string(ident_pos) +
                        ": coordinate out of range");
      }
      return Expr::Var(i - 1, k - 1);
    }
    if (id == "xbar" && Peek('[')) {
      int k = ParseIndex();
      for (int d : dims_) {
        if (d != dims_[0]) {
          throw Error(ErrorKind::kUnknownVariable,
                      "xbar used at byte " + std::to_string(ident_pos) +
                          " but players have different dimensions");
        }
      }
      if (dims_.empty() || k < 1 || k > dims_[0]) {
        throw Error(ErrorKind::kUnknownVariable,
                    "unknown variable xbar[" + std::to_string(k) +
                        "] at byte " + std::to_string(ident_pos));
      }
      return Expr::Aggregate(k - 1);
    }
    if (id == "pow" && Peek('(')) {
      ++pos_;
      Expr base = ParseSum();
      Expect(',');
      bool negative = false;
      if (Peek('-')) {
        ++pos_;
        negative = true;
      }
      if (!AtNumber()) Fail("pow exponent must be a numeric literal");
      double p = ParseNumberLiteral();
      Expect(')');
      return Expr::Pow(base, negative ? -p : p);
    }
    if (id == "sqrt" && Peek('(')) {
      ++pos_;
      Expr e = ParseSum();
      Expect(')');
      return Expr::Sqrt(e);
    }
    if (id == "x" || id == "xbar" || id == "pow" || id == "sqrt") {
      pos_ = ident_pos;
      Fail("reserved name '" + id + "' used as a parameter");
    }
    return Expr::Param(id);
  }

  std::string_view src_;
  std::span<const int> dims_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr ParseExpression(std::string_view source, std::span<const int> dims) {
  return Parser(source, dims).ParseAll();
}

// ---------------------------------------------------------------------------
// Evaluation.

double Evaluate(const Expr& e, const JointStrategy& x, const ParamEnv& env) {
  switch (e.kind()) {
    case Expr::Kind::kNumber:
      return e.number();
    case Expr::Kind::kParam: {
      auto it = env.find(e.name());
      if (it == env.end()) {
        throw Error(ErrorKind::kInvalidArgument,
                    "unbound parameter '" + e.name() + "'");
      }
      return it->second;
    }
    case Expr::Kind::kVar:
      return x.actions.at(e.player()).at(e.coord());
    case Expr::Kind::kAggregate: {
      double s = 0.0;
      for (const auto& a : x.actions) s += a.at(e.coord());
      return s;
    }
    case Expr::Kind::kNeg:
      return -Evaluate(e.lhs(), x, env);
    case Expr::Kind::kAdd:
      return Evaluate(e.lhs(), x, env) + Evaluate(e.rhs(), x, env);
    case Expr::Kind::kSub:
      return Evaluate(e.lhs(), x, env) - Evaluate(e.rhs(), x, env);
    case Expr::Kind::kMul:
      return Evaluate(e.lhs(), x, env) * Evaluate(e.rhs(), x, env);
    case Expr::Kind::kDiv: {
      double num = Evaluate(e.lhs(), x, env);
      double den = Evaluate(e.rhs(), x, env);
      if (den == 0.0) {
        throw Error(ErrorKind::kDivisionByZero,
                    "division by zero in " + e.ToString());
      }
      return num / den;
    }
    case Expr::Kind::kPow: {
      double b = Evaluate(e.lhs(), x, env);
      double p = e.exponent();
      if (b < 0.0 && p != std::floor(p)) {
        throw Error(
            ErrorKind::kDomain,
            "negative base with fractional exponent in " + e.ToString());
      }
      if (b == 0.0 && p < 0.0) {
        throw Error(ErrorKind::kDivisionByZero,
                    "zero base with negative exponent in " + e.ToString());
      }
      return std::pow(b, p);
    }
    case Expr::Kind::kSqrt: {
      double v = Evaluate(e.lhs(), x, env);
      if (v < 0.0) {
        throw Error(ErrorKind::kDomain,
                    "sqrt of negative value in " + e.ToString());
      }
      return std::sqrt(v);
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Symbolic differentiation.

Expr Differentiate(const Expr& e, int player, int coord) {
  switch (e.kind()) {
    case Expr::Kind::kNumber:
    case Expr::Kind::kParam:
      return Expr::Number(0.0);
    case Expr::Kind::kVar:
      return Expr::Number(e.player() == player && e.coord() == coord ? 1.0
                                                                     : 0.0);
    case Expr::Kind::kAggregate:
      return Expr::Number(e.coord() == coord ? 1.0 : 0.0);
    case Expr::Kind::kNeg:
      return Negate(Differentiate(e.lhs(), player, coord));
    case Expr::Kind::kAdd:
      return Sum(Differentiate(e.lhs(), player, coord),
                 Differentiate(e.rhs(), player, coord));
    case Expr::Kind::kSub:
      return Difference(Differentiate(e.lhs(), player, coord),
                        Differentiate(e.rhs(), player, coord));
    case Expr::Kind::kMul: {
      Expr dl = Differentiate(e.lhs(), player, coord);
      Expr dr = Differentiate(e.rhs(), player, coord);
      return Sum(Product(dl, e.rhs()), Product(e.lhs(), dr));
    }
    case Expr::Kind::kDiv: {
      Expr dl = Differentiate(e.lhs(), player, coord);
      Expr dr = Differentiate(e.rhs(), player, coord);
      if (dr.IsNumber(0.0)) return Quotient(dl, e.rhs());
      return Quotient(Difference(Product(dl, e.rhs()), Product(e.lhs(), dr)),
                      Product(e.rhs(), e.rhs()));
    }
    case Expr::Kind::kPow: {
      double p = e.exponent();
      if (p == 0.0) return Expr::Number(0.0);
      Expr db = Differentiate(e.lhs(), player, coord);
      if (db.IsNumber(0.0)) return Expr::Number(0.0);
      return Product(Product(Expr::Number(p), Expr::Pow(e.lhs(), p - 1.0)), db);
    }
    case Expr::Kind::kSqrt: {
      Expr du = Differentiate(e.lhs(), player, coord);
      if (du.IsNumber(0.0)) return Expr::Number(0.0);
      return Quotient(du, Product(Expr::Number(2.0), e));
    }
  }
  return Expr::Number(0.0);
}

// ---------------------------------------------------------------------------
// Structural utilities.

Expr ZeroPlayers(const Expr& e, const std::vector<bool>& zeroed,
                 int num_players) {
  switch (e.kind()) {
    case Expr::Kind::kNumber:
    case Expr::Kind::kParam:
      return e;
    case Expr::Kind::kVar:
      return zeroed.at(e.player()) ? Expr::Number(0.0) : e;
    case Expr::Kind::kAggregate: {
      bool any_zeroed = false;
      for (int j = 0; j < num_players; ++j) any_zeroed |= zeroed.at(j);
      if (!any_zeroed) return e;
      Expr s = Expr::Number(0.0);
      for (int j = 0; j < num_players; ++j) {
        if (!zeroed[j]) s = Sum(s, Expr::Var(j, e.coord()));
      }
      return s;
    }
    case Expr::Kind::kNeg:
      return Negate(ZeroPlayers(e.lhs(), zeroed, num_players));
    case Expr::Kind::kAdd:
      return Sum(ZeroPlayers(e.lhs(), zeroed, num_players),
                 ZeroPlayers(e.rhs(), zeroed, num_players));
    case Expr::Kind::kSub:
      return Difference(ZeroPlayers(e.lhs(), zeroed, num_players),
                        ZeroPlayers(e.rhs(), zeroed, num_players));
    case Expr::Kind::kMul:
      return Product(ZeroPlayers(e.lhs(), zeroed, num_players),
                     ZeroPlayers(e.rhs(), zeroed, num_players));
    case Expr::Kind::kDiv:
      return Quotient(ZeroPlayers(e.lhs(), zeroed, num_players),
                      ZeroPlayers(e.rhs(), zeroed, num_players));
    case Expr::Kind::kPow:
      return Expr::Pow(ZeroPlayers(e.lhs(), zeroed, num_players), e.exponent());
    case Expr::Kind::kSqrt:
      return Expr::Sqrt(ZeroPlayers(e.lhs(), zeroed, num_players));
  }
  return e;
}

namespace {

template <typename Fn>
void Visit(const Expr& e, Fn&& fn) {
  fn(e);
  switch (e.kind()) {
    case Expr::Kind::kNeg:
    case Expr::Kind::kSqrt:
    case Expr::Kind::kPow:
      Visit(e.lhs(), fn);
      break;
    default:
      if (IsBinary(e.kind())) {
        Visit(e.lhs(), fn);
        Visit(e.rhs(), fn);
      }
  }
}

}  // namespace

std::set<std::string> FreeParams(const Expr& e) {
  std::set<std::string> out;
  Visit(e, [&](const Expr& n) {
    if (n.kind() == Expr::Kind::kParam) out.insert(n.name());
  });
  return out;
}

bool UsesOnlyOwnAndAggregate(const Expr& e, int player) {
  bool ok = true;
  Visit(e, [&](const Expr& n) {
    if (n.kind() == Expr::Kind::kVar && n.player() != player) ok = false;
  });
  return ok;
}

bool DependsOnPlayer(const Expr& e, int player) {
  bool dep = false;
  Visit(e, [&](const Expr& n) {
    if (n.kind() == Expr::Kind::kAggregate) dep = true;
    if (n.kind() == Expr::Kind::kVar && n.player() == player) dep = true;
  });
  return dep;
}

}  // namespace pgt
