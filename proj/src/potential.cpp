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
#include <chrono>
#include <cmath>
#include <memory>

#include "errors.hpp"
#include "paths.hpp"
#include "tolerance.hpp"

namespace pgt {

namespace {

using Clock = std::chrono::steady_clock;

double ElapsedMs(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

void RequireZeroSymmetric(const GameSpec& g, const char* method) {
  for (int i = 0; i < g.num_players(); ++i) {
    if (!g.space(i).contains_zero() || !g.space(i).symmetric()) {
      throw Error(ErrorKind::kInapplicable,
                  std::string(method) + " requires 0 in K and symmetric K; K_" +
                      std::to_string(i + 1) + " is not");
    }
  }
}

// f with every player in [from, to) replaced by 0.
Expr ZeroRange(const Expr& f, int from, int to, int n) {
  std::vector<bool> zeroed(n, false);
  for (int p = std::max(from, 0); p < std::min(to, n); ++p) zeroed[p] = true;
  return ZeroPlayers(f, zeroed, n);
}

// f_p(z_{<keep}, 0, ...,0): players keep..N-1 set to 0.
Expr KeepPrefix(const Expr& f, int keep, int n) {
  return ZeroRange(f, keep, n, n);
}

std::vector<double> Tabulate(
    const GameSpec& g, const std::function<double(const JointStrategy&)>& phi) {
  const std::uint64_t total = g.NumProfiles();
  if (total > 1000000) {
    throw Error(ErrorKind::kSizeGuard, "too many profiles to tabulate");
  }
  std::vector<double> t(total);
  for (std::uint64_t k = 0; k < total; ++k) t[k] = phi(g.ProfileAt(k));
  return t;
}

// Attaches a table when the game is finite and small.
void MaybeTabulate(const GameSpec& g, PotentialFn& phi) {
  if (!g.is_finite() || g.NumProfiles() > 1000000) return;
  phi.table = Tabulate(g, phi.evaluator);
}

Json NestTable(const std::vector<double>& flat,
               const std::vector<std::size_t>& shape, std::size_t depth,
               std::size_t& offset) {
  if (depth == shape.size()) return flat[offset++];
  Json j = Json::array();
  for (std::size_t k = 0; k < shape[depth]; ++k) {
    j.push_back(NestTable(flat, shape, depth + 1, offset));
  }
  return j;
}

void FlattenTable(const Json& j, const std::vector<std::size_t>& shape,
                  std::size_t depth, const std::string& path,
                  std::vector<double>& out) {
  if (depth == shape.size()) {
    if (!j.is_number()) throw SchemaError(path, "expected a number");
    out.push_back(j.get<double>());
    return;
  }
  if (!j.is_array() || j.size() != shape[depth]) {
    throw SchemaError(
        path, "expected an array of length " + std::to_string(shape[depth]));
  }
  for (std::size_t k = 0; k < j.size(); ++k) {
    FlattenTable(j[k], shape, depth + 1, path + "/" + std::to_string(k), out);
  }
}

}  // namespace

PotentialFn ExprPotential(const GameSpec& g, Expr phi, std::string method) {
  PotentialFn p;
  p.params = g.params();
  p.expr = phi;
  p.method = std::move(method);
  p.normalization = "none";
  ParamEnv env = p.params;
  p.evaluator = [phi, env](const JointStrategy& x) {
    return Evaluate(phi, x, env);
  };
  return p;
}

PotentialFn TablePotential(const GameSpec& g, std::vector<double> table,
                           std::string method, std::string normalization) {
  if (table.size() != g.NumProfiles()) {
    throw Error(ErrorKind::kDimension, "potential table size mismatch");
  }
  PotentialFn p;
  p.method = std::move(method);
  p.normalization = std::move(normalization);
  auto game = std::make_shared<const GameSpec>(g);
  auto data = std::make_shared<const std::vector<double>>(table);
  p.evaluator = [game, data](const JointStrategy& x) {
    return (*data)[game->ProfileIndex(game->ActionIndices(x))];
  };
  p.table = std::move(table);
  return p;
}

PotentialFn ConstructByReversePath(const GameSpec& g) {
  RequireZeroSymmetric(g, "theorem5");
  auto game = std::make_shared<const GameSpec>(g);
  PotentialFn p;
  p.method = "theorem5";
  p.normalization = "phi(0)=0";
  p.params = g.params();
  p.evaluator = [game](const JointStrategy& z) { return -HPath(*game, z, -z); };
  if (g.has_expr_costs()) {
    // -h_P(z,-z) = -sum_i [f_i(0_{<=i}, z_{>i}) - f_i(0_{<i}, z_{>=i})]
    const int n = g.num_players();
    const auto& f = g.expr_costs().exprs;
    Expr h = Expr::Number(0.0);
    for (int i = 0; i < n; ++i) {
      h = Sum(h, Difference(ZeroRange(f[i], 0, i + 1, n),
                            ZeroRange(f[i], 0, i, n)));
    }
    p.expr = Negate(h);
  }
  MaybeTabulate(g, p);
  return p;
}

PotentialFn ConstructByPairs(const GameSpec& g) {
  RequireZeroSymmetric(g, "theorem8");
  auto game = std::make_shared<const GameSpec>(g);
  const int n = g.num_players();
  PotentialFn p;
  p.method = "theorem8";
  p.normalization = "phi(0)=0";
  p.params = g.params();

  if (n == 1) {
    p.evaluator = [game](const JointStrategy& z) {
      return game->Cost(0, z) - game->Cost(0, game->ZeroStrategy());
    };
  } else {
    p.evaluator = [game, n](const JointStrategy& z) {
      const JointStrategy zero = game->ZeroStrategy();
      const int prefix = n % 2 == 1 ? 3 : 2;
      double phi = HPathPrefix(*game, zero, z, prefix);
      // Remaining players pair up as (prefix, prefix+1), (prefix+2, ...)
      // in 0-based indices, each evaluated at z-hat (earlier players at z,
      // later ones at 0).
      for (int i = prefix; i + 1 < n; i += 2) {
        PairDeviation d;
        d.i = i;
        d.j = i + 1;
        d.z_i = zero[i];
        d.z_j = zero[i + 1];
        d.y_i = z[i];
        d.y_j = z[i + 1];
        d.rest = zero;
        for (int k = 0; k < i; ++k) d.rest[k] = z[k];
        phi += HPair(*game, d);
      }
      return phi;
    };
  }

  if (g.has_expr_costs()) {
    const auto& f = g.expr_costs().exprs;
    Expr phi = Expr::Number(0.0);
    if (n == 1) {
      phi = Difference(f[0], ZeroRange(f[0], 0, 1, 1));
    } else {
      const int prefix = n % 2 == 1 ? 3 : 2;
      for (int p_idx = 0; p_idx < prefix; ++p_idx) {
        phi = Sum(phi, Difference(KeepPrefix(f[p_idx], p_idx + 1, n),
                                  KeepPrefix(f[p_idx], p_idx, n)));
      }
      for (int i = prefix; i + 1 < n; i += 2) {
        Expr pair =
            Sum(Difference(KeepPrefix(f[i], i + 1, n), KeepPrefix(f[i], i, n)),
                Difference(KeepPrefix(f[i + 1], i + 2, n),
                           KeepPrefix(f[i + 1], i + 1, n)));
        phi = Sum(phi, pair);
      }
    }
    p.expr = phi;
  }
  MaybeTabulate(g, p);
  return p;
}

PotentialFn ConstructRosenthal(const GameSpec& g, bool augmented) {
  if (!g.is_congestion()) {
    throw Error(ErrorKind::kInapplicable,
                "rosenthal requires a congestion game");
  }
  const int n = g.num_players();
  PotentialFn p;
  p.method = "rosenthal";
  if (augmented) {
    auto expanded =
        std::make_shared<const GameSpec>(ExpandCongestionGame(g, true));
    auto net = std::make_shared<const CongestionNetwork>(
        AugmentNetwork(g.network(), n));
    // Route m is the origin self-loop. Subtracting its load costs makes phi
    // vanish when every player sits on the loop.
    const CongestionEdge& loop =
        net->edges[net->routes[g.network().routes.size()][0]];
    double offset = 0.0;
    for (int k = 0; k < n; ++k) offset += loop.cost[k];
    p.normalization = "phi(all on origin loop)=0";
    p.evaluator = [expanded, net, offset](const JointStrategy& x) {
      auto idx = expanded->ActionIndices(x);
      std::vector<int> choice(idx.begin(), idx.end());
      return net->Rosenthal(choice) - offset;
    };
    p.table = Tabulate(*expanded, p.evaluator);
  } else {
    auto game = std::make_shared<const GameSpec>(g);
    p.normalization = "phi(no load)=0";
    p.evaluator = [game](const JointStrategy& x) {
      auto idx = game->ActionIndices(x);
      std::vector<int> choice(idx.begin(), idx.end());
      return game->network().Rosenthal(choice);
    };
    p.table = Tabulate(g, p.evaluator);
  }
  return p;
}

bool ForEachDeviation(const GameSpec& g, const CheckOptions& opts,
                      const std::function<void(int, const JointStrategy&,
                                               const JointStrategy&)>& fn) {
  const int n = g.num_players();
  if (g.is_finite()) {
    const std::uint64_t profiles = g.NumProfiles();
    std::uint64_t total = 0;
    for (int i = 0; i < n; ++i) total += profiles * (g.space(i).size() - 1);
    if (total <=
        static_cast<std::uint64_t>(std::max<std::int64_t>(opts.budget, 0))) {
      for (std::uint64_t k = 0; k < profiles; ++k) {
        JointStrategy x = g.ProfileAt(k);
        auto idx = g.ActionIndices(x);
        for (int i = 0; i < n; ++i) {
          for (std::size_t a = 0; a < g.space(i).size(); ++a) {
            if (a == idx[i]) continue;
            fn(i, x, x.With(i, g.space(i).points()[a]));
          }
        }
      }
      return true;
    }
  }
  for (const auto& [x, w] : SamplePairs(g, opts.sampling())) {
    for (int i = 0; i < n; ++i) {
      if (w[i] == x[i]) continue;
      fn(i, x, x.With(i, w[i]));
    }
  }
  return false;
}

TestReport VerifyExactPotential(const GameSpec& g, const PotentialFn& phi,
                                const CheckOptions& opts) {
  auto start = Clock::now();
  TestReport r;
  r.method = "verify-exact";
  const double tol = EffectiveTolerance(g, opts.tol);
  ResidualTracker tracker;
  bool exhaustive = ForEachDeviation(
      g, opts, [&](int i, const JointStrategy& x, const JointStrategy& x2) {
        try {
          Magnitude mag;
          double df = mag.Add(g.Cost(i, x2)) - mag.Add(g.Cost(i, x));
          double dphi = mag.Add(phi(x2)) - mag.Add(phi(x));
          double residual = std::abs(df - dphi);
          tracker.Offer(residual, residual > Band(tol, mag.value()), [&] {
            return Json{{"player", i + 1},
                        {"x", StrategyToJson(x)},
                        {"x_prime", StrategyToJson(x2)},
                        {"cost_difference", df},
                        {"phi_difference", dphi}};
          });
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::kDomain &&
              e.kind() != ErrorKind::kDivisionByZero) {
            throw;
          }
          ++r.abstentions;
        }
      });
  tracker.FillReport(r);
  r.exhaustive = exhaustive && r.abstentions == 0;
  r.extra["potential_method"] = phi.method;
  if (r.failed()) {
    r.conclusion = "phi is not an exact potential";
  } else {
    r.conclusion = r.exhaustive ? "phi is an exact potential"
                                : "phi is an exact potential on all samples";
  }
  r.timing_ms = ElapsedMs(start);
  return r;
}

TestReport VerifyGradientMatch(const GameSpec& g, const Expr& phi,
                               const CheckOptions& opts) {
  auto start = Clock::now();
  if (!g.has_expr_costs()) {
    return TestReport::Inapplicable("verify-gradient",
                                    "requires expression costs");
  }
  if (!g.all_convex()) {
    return TestReport::Inapplicable("verify-gradient",
                                    "requires box or unbounded action spaces");
  }
  TestReport r;
  r.method = "verify-gradient";
  const auto& f = g.expr_costs().exprs;
  struct Partial {
    int i, k;
    Expr df, dphi;
  };
  std::vector<Partial> partials;
  for (int i = 0; i < g.num_players(); ++i) {
    for (int k = 0; k < g.dims()[i]; ++k) {
      partials.push_back(
          {i, k, Differentiate(f[i], i, k), Differentiate(phi, i, k)});
    }
  }
  ResidualTracker tracker;
  for (const auto& x : SampleStrategies(g, opts.sampling())) {
    for (const auto& pd : partials) {
      try {
        double a = Evaluate(pd.df, x, g.params());
        double b = Evaluate(pd.dphi, x, g.params());
        double residual = std::abs(a - b);
        double scale = std::max(std::abs(a), std::abs(b));
        tracker.Offer(residual, residual > Band(opts.tol, scale), [&] {
          return Json{{"x", StrategyToJson(x)},
                      {"player", pd.i + 1},
                      {"coord", pd.k + 1},
                      {"df_i", a},
                      {"dphi", b}};
        });
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::kDomain &&
            e.kind() != ErrorKind::kDivisionByZero) {
          throw;
        }
        ++r.abstentions;
      }
    }
  }
  tracker.FillReport(r);
  r.exhaustive = false;
  r.conclusion = r.failed() ? "own-action gradients of f_i and phi differ"
                            : "own-action gradients of f_i and phi agree";
  r.timing_ms = ElapsedMs(start);
  return r;
}

std::pair<double, double> PotentialDifferenceAlongPath(const GameSpec& g,
                                                       const PotentialFn& phi,
                                                       const JointStrategy& z,
                                                       const JointStrategy& y) {
  double h = HPath(g, z, y);
  return {phi(z + y) - phi(z), h};
}

Json PotentialToJson(const GameSpec& g, const PotentialFn& phi) {
  Json j;
  j["method"] = phi.method;
  j["normalization"] = phi.normalization;
  if (phi.expr) {
    j["kind"] = "expr";
    j["expr"] = phi.expr->ToString();
    Json params = Json::object();
    for (const auto& name : FreeParams(*phi.expr)) {
      auto it = phi.params.find(name);
      if (it != phi.params.end()) params[name] = it->second;
    }
    j["params"] = params;
  } else if (phi.table) {
    j["kind"] = "table";
    std::vector<std::size_t> shape;
    // Rosenthal on the augmented game tabulates over 2m+1 actions.
    std::uint64_t count = 1;
    for (const auto& s : g.spaces()) {
      shape.push_back(s.size());
      count *= s.size();
    }
    if (count != phi.table->size() && g.is_congestion()) {
      std::size_t m = g.network().routes.size();
      std::fill(shape.begin(), shape.end(), 2 * m + 1);
      j["game"] = "augmented";
    }
    std::size_t offset = 0;
    j["table"] = NestTable(*phi.table, shape, 0, offset);
  } else {
    throw Error(ErrorKind::kInvalidArgument,
                "potential has neither an expression nor a table");
  }
  return j;
}

PotentialFn PotentialFromJson(const GameSpec& g, const Json& j) {
  if (!j.is_object()) throw SchemaError("", "expected an object");
  std::string text;
  if (j.contains("phi")) {
    if (!j["phi"].is_string()) throw SchemaError("/phi", "expected a string");
    text = j["phi"].get<std::string>();
  } else {
    std::string kind = j.value("kind", "");
    if (kind == "table") {
      if (!g.is_finite()) {
        throw SchemaError("/table", "table potential needs a finite game");
      }
      std::vector<std::size_t> shape;
      for (const auto& s : g.spaces()) shape.push_back(s.size());
      std::vector<double> flat;
      if (!j.contains("table")) throw SchemaError("/table", "missing key");
      FlattenTable(j["table"], shape, 0, "/table", flat);
      return TablePotential(g, std::move(flat), j.value("method", "user"),
                            j.value("normalization", "none"));
    }
    if (kind != "expr")
      throw SchemaError("/kind", "expected \"expr\" or \"table\"");
    if (!j.contains("expr") || !j["expr"].is_string()) {
      throw SchemaError("/expr", "expected a string");
    }
    text = j["expr"].get<std::string>();
  }
  Expr phi = ParseExpression(text, g.dims());
  PotentialFn p = ExprPotential(g, phi, j.value("method", "user"));
  if (j.contains("params")) {
    if (!j["params"].is_object())
      throw SchemaError("/params", "expected an object");
    for (auto it = j["params"].begin(); it != j["params"].end(); ++it) {
      if (!it.value().is_number()) {
        throw SchemaError("/params/" + it.key(), "expected a number");
      }
      p.params[it.key()] = it.value().get<double>();
    }
    ParamEnv env = p.params;
    p.evaluator = [phi, env](const JointStrategy& x) {
      return Evaluate(phi, x, env);
    };
  }
  for (const auto& name : FreeParams(phi)) {
    if (!p.params.count(name)) {
      throw SchemaError("/params", "unbound parameter '" + name + "'");
    }
  }
  p.normalization = j.value("normalization", "none");
  return p;
}

}  // namespace pgt
