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

#include "criteria.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>

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

bool IsEvaluationError(const Error& e) {
  return e.kind() == ErrorKind::kDomain ||
         e.kind() == ErrorKind::kDivisionByZero;
}

// Runs `body`, turning evaluation errors (domain, division by zero) at a
// sample into an abstention.
template <typename Fn>
void Guarded(TestReport& r, Fn&& body) {
  try {
    body();
  } catch (const Error& e) {
    if (!IsEvaluationError(e)) throw;
    if (r.abstentions++ == 0) {
      r.notes.push_back(
          std::string("skipped samples with evaluation errors: ") + e.what());
    }
  }
}

std::string GateFailure(const GameSpec& g) {
  for (int i = 0; i < g.num_players(); ++i) {
    const auto& s = g.space(i);
    if (!s.contains_zero()) {
      return "K_" + std::to_string(i + 1) + " does not contain 0";
    }
    if (!s.symmetric()) {
      return "K_" + std::to_string(i + 1) + " is not symmetric";
    }
  }
  return "";
}

void Conclude(TestReport& r, const char* pass_text, const char* fail_text) {
  if (r.verdict == Verdict::kFail) {
    r.conclusion = fail_text;
  } else if (r.verdict == Verdict::kPass) {
    r.conclusion = r.exhaustive ? std::string(pass_text)
                                : std::string(pass_text) + " (sampled)";
  }
}

}  // namespace

TestReport TestFourCycles(const GameSpec& g, const CheckOptions& opts) {
  auto start = Clock::now();
  TestReport r;
  r.method = "cycle4";
  const double tol = EffectiveTolerance(g, opts.tol);
  FourCycleSet set =
      EnumerateFourCycles(g, opts.budget, opts.seed, opts.radius);
  ResidualTracker tracker;
  for (const auto& q : set.cycles) {
    Guarded(r, [&] {
      Magnitude mag;
      double value = PathIntegral(g, q, &mag);
      double residual = std::abs(value);
      tracker.Offer(residual, residual > Band(tol, mag.value()), [&] {
        Json steps = Json::array();
        for (const auto& s : q.steps) steps.push_back(StrategyToJson(s));
        Json devs = Json::array();
        for (int d : q.deviators) devs.push_back(d + 1);
        return Json{{"cycle", steps}, {"deviators", devs}, {"I", value}};
      });
    });
  }
  tracker.FillReport(r);
  r.exhaustive = set.exhaustive && r.abstentions == 0;
  if (g.num_players() < 2) r.notes.push_back("no player pairs; vacuous");
  if (!set.exhaustive && g.is_finite()) {
    r.notes.push_back("sampled " + std::to_string(set.cycles.size()) + " of " +
                      std::to_string(set.total) + " cycles");
  }
  Conclude(r, "I(Q,f) = 0 on every 4-cycle",
           "a 4-cycle with I(Q,f) != 0 exists: not a potential game");
  r.timing_ms = ElapsedMs(start);
  return r;
}

TestReport TestPairwise(const GameSpec& g, const CheckOptions& opts) {
  auto start = Clock::now();
  std::string gate = GateFailure(g);
  if (!gate.empty()) {
    return TestReport::Inapplicable("pairwise",
                                    "requires 0 in K and symmetric K: " + gate);
  }
  TestReport r;
  r.method = "pairwise";
  const double tol = EffectiveTolerance(g, opts.tol);
  const int n = g.num_players();
  ResidualTracker tracker;

  auto check = [&](int i, int j, const JointStrategy& z, const Action& wi,
                   const Action& wj) {
    Guarded(r, [&] {
      PairDeviation d;
      d.i = i;
      d.j = j;
      d.z_i = z[i];
      d.z_j = z[j];
      d.y_i = wi - z[i];
      d.y_j = wj - z[j];
      d.rest = z;
      PairDeviation d_w = d, d_z = d;
      d_w.z_i = Action(z[i].size(), 0.0);
      d_w.z_j = Action(z[j].size(), 0.0);
      d_w.y_i = z[i] + d.y_i;
      d_w.y_j = z[j] + d.y_j;
      d_z.z_i = d_w.z_i;
      d_z.z_j = d_w.z_j;
      d_z.y_i = z[i];
      d_z.y_j = z[j];
      Magnitude mag;
      double lhs = HPair(g, d, &mag);
      double rhs = HPair(g, d_w, &mag) - HPair(g, d_z, &mag);
      double residual = std::abs(lhs - rhs);
      tracker.Offer(residual, residual > Band(tol, mag.value()), [&] {
        return Json{{"i", i + 1},
                    {"j", j + 1},
                    {"z", StrategyToJson(z)},
                    {"y_i", ActionToJson(d.y_i)},
                    {"y_j", ActionToJson(d.y_j)},
                    {"lhs", lhs},
                    {"rhs", rhs}};
      });
    });
  };

  bool exhaustive = false;
  if (g.is_finite()) {
    std::uint64_t total = 0;
    const std::uint64_t profiles = g.NumProfiles();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        total += profiles * g.space(i).size() * g.space(j).size();
      }
    }
    if (total <=
        static_cast<std::uint64_t>(std::max<std::int64_t>(opts.budget, 0))) {
      exhaustive = true;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          for (std::uint64_t k = 0; k < profiles; ++k) {
            JointStrategy z = g.ProfileAt(k);
            for (const auto& wi : g.space(i).points()) {
              for (const auto& wj : g.space(j).points()) check(i, j, z, wi, wj);
            }
          }
        }
      }
    }
  }
  if (!exhaustive && n >= 2) {
    for (const auto& [z, w] : SamplePairs(g, opts.sampling())) {
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) check(i, j, z, w[i], w[j]);
      }
    }
  }
  tracker.FillReport(r);
  r.exhaustive = (exhaustive || n < 2) && r.abstentions == 0;
  Conclude(r, "the pairwise identity holds",
           "the pairwise identity fails: not a potential game");
  r.timing_ms = ElapsedMs(start);
  return r;
}

TestReport TestHpDecomposition(const GameSpec& g, const CheckOptions& opts) {
  auto start = Clock::now();
  std::string gate = GateFailure(g);
  if (!gate.empty()) {
    return TestReport::Inapplicable("hp",
                                    "requires 0 in K and symmetric K: " + gate);
  }
  TestReport r;
  r.method = "hp";
  const double tol = EffectiveTolerance(g, opts.tol);
  const JointStrategy zero = g.ZeroStrategy();
  ResidualTracker tracker;

  auto check = [&](const JointStrategy& z, const JointStrategy& w) {
    Guarded(r, [&] {
      JointStrategy y = w - z;
      Magnitude mag;
      double lhs = HPath(g, z, y, &mag);
      double rhs = HPath(g, zero, z + y, &mag) - HPath(g, zero, z, &mag);
      double residual = std::abs(lhs - rhs);
      tracker.Offer(residual, residual > Band(tol, mag.value()), [&] {
        return Json{{"z", StrategyToJson(z)},
                    {"y", StrategyToJson(y)},
                    {"lhs", lhs},
                    {"rhs", rhs}};
      });
    });
  };

  bool exhaustive = false;
  if (g.is_finite()) {
    const std::uint64_t profiles = g.NumProfiles();
    if (profiles <= 0xffffffffULL &&
        profiles * profiles <= static_cast<std::uint64_t>(
                                   std::max<std::int64_t>(opts.budget, 0))) {
      exhaustive = true;
      for (std::uint64_t a = 0; a < profiles; ++a) {
        JointStrategy z = g.ProfileAt(a);
        for (std::uint64_t b = 0; b < profiles; ++b) check(z, g.ProfileAt(b));
      }
    }
  }
  if (!exhaustive) {
    for (const auto& [z, w] : SamplePairs(g, opts.sampling())) check(z, w);
  }
  tracker.FillReport(r);
  r.exhaustive = exhaustive && r.abstentions == 0;
  Conclude(r, "h_P(z,y) = h_P(0,z+y) - h_P(0,z) holds",
           "the h_P decomposition fails: not a potential game");
  r.timing_ms = ElapsedMs(start);
  return r;
}

TestReport TestCrossHessian(const GameSpec& g, const CheckOptions& opts) {
  auto start = Clock::now();
  if (!g.has_expr_costs()) {
    return TestReport::Inapplicable("hessian", "requires expression costs");
  }
  if (!g.all_convex()) {
    return TestReport::Inapplicable("hessian",
                                    "requires box or unbounded action spaces");
  }
  TestReport r;
  r.method = "hessian";
  const int n = g.num_players();
  const auto& f = g.expr_costs().exprs;

  struct Entry {
    int i, j, p, q;
    Expr lhs, rhs;  // d2 f_i/dx_jq dx_ip, d2 f_j/dx_ip dx_jq
  };
  std::vector<Entry> entries;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int p = 0; p < g.dims()[i]; ++p) {
        for (int q = 0; q < g.dims()[j]; ++q) {
          entries.push_back({i, j, p, q,
                             Differentiate(Differentiate(f[i], i, p), j, q),
                             Differentiate(Differentiate(f[j], j, q), i, p)});
        }
      }
    }
  }
  ResidualTracker tracker;
  for (const auto& x : SampleStrategies(g, opts.sampling())) {
    for (const auto& e : entries) {
      Guarded(r, [&] {
        double a = Evaluate(e.lhs, x, g.params());
        double b = Evaluate(e.rhs, x, g.params());
        double residual = std::abs(a - b);
        double scale = std::max(std::abs(a), std::abs(b));
        tracker.Offer(residual, residual > Band(opts.tol, scale), [&] {
          return Json{{"x", StrategyToJson(x)},
                      {"i", e.i + 1},
                      {"j", e.j + 1},
                      {"p", e.p + 1},
                      {"q", e.q + 1},
                      {"d2f_i", a},
                      {"d2f_j", b},
                      {"d2f_i_expr", e.lhs.ToString()},
                      {"d2f_j_expr", e.rhs.ToString()}};
        });
      });
    }
  }
  tracker.FillReport(r);
  r.exhaustive = false;
  Conclude(r, "cross second derivatives are symmetric",
           "cross second derivatives differ: not a potential game");
  r.timing_ms = ElapsedMs(start);
  return r;
}

OracleResult OracleFinitePotential(const GameSpec& g, double tol,
                                   std::uint64_t max_profiles) {
  auto start = Clock::now();
  OracleResult out;
  if (!g.is_finite()) {
    out.report = TestReport::Inapplicable("oracle", "requires a finite game");
    return out;
  }
  const std::uint64_t total = g.NumProfiles();
  if (total > max_profiles) {
    throw Error(ErrorKind::kSizeGuard,
                "joint action set has " + std::to_string(total) +
                    " profiles, above the oracle limit of " +
                    std::to_string(max_profiles));
  }
  const int n = g.num_players();
  std::vector<std::uint64_t> size(n), stride(n);
  std::uint64_t s = 1;
  for (int i = n - 1; i >= 0; --i) {
    size[i] = g.space(i).size();
    stride[i] = s;
    s *= size[i];
  }
  auto digit = [&](std::uint64_t k, int i) {
    return (k / stride[i]) % size[i];
  };

  std::vector<std::vector<double>> f(n, std::vector<double>(total));
  double fmax = 0.0;
  for (std::uint64_t k = 0; k < total; ++k) {
    JointStrategy x = g.ProfileAt(k);
    for (int i = 0; i < n; ++i) {
      f[i][k] = g.Cost(i, x);
      fmax = std::max(fmax, std::abs(f[i][k]));
    }
  }

  TestReport& r = out.report;
  r.method = "oracle";
  r.exhaustive = true;
  ResidualTracker tracker;
  auto witness = [&](int i, std::uint64_t a, std::uint64_t b, double df,
                     double dphi) {
    return Json{{"player", i + 1},
                {"x", StrategyToJson(g.ProfileAt(a))},
                {"x_prime", StrategyToJson(g.ProfileAt(b))},
                {"cost_difference", df},
                {"phi_difference", dphi}};
  };
  std::vector<double> phi(total, 0.0);

  if (g.integer_valued() && fmax <= 1e12) {
    // Exact route: propagate along a spanning tree, then check every
    // unilateral deviation against the anchor action 0.
    std::vector<long long> ph(total, 0);
    std::vector<std::vector<long long>> F(n, std::vector<long long>(total));
    for (int i = 0; i < n; ++i) {
      for (std::uint64_t k = 0; k < total; ++k) {
        F[i][k] = std::llround(f[i][k]);
      }
    }
    for (std::uint64_t k = 1; k < total; ++k) {
      int p = 0;
      while (digit(k, p) == 0) ++p;
      std::uint64_t pred = k - digit(k, p) * stride[p];
      ph[k] = ph[pred] + F[p][k] - F[p][pred];
    }
    for (std::uint64_t k = 0; k < total; ++k) {
      for (int i = 0; i < n; ++i) {
        std::uint64_t d = digit(k, i);
        if (d == 0) continue;
        std::uint64_t anchor = k - d * stride[i];
        long long df = F[i][k] - F[i][anchor];
        long long dphi = ph[k] - ph[anchor];
        double residual = static_cast<double>(std::llabs(df - dphi));
        tracker.Offer(residual, df != dphi, [&] {
          return witness(i, anchor, k, static_cast<double>(df),
                         static_cast<double>(dphi));
        });
      }
    }
    for (std::uint64_t k = 0; k < total; ++k)
      phi[k] = static_cast<double>(ph[k]);
    r.notes.push_back("integer costs: decided exactly");
  } else {
    // Least squares over all unordered unilateral deviations, phi(first) = 0
    // pinned by dropping unknown 0.
    using SpMat = Eigen::SparseMatrix<double>;
    const Eigen::Index m = static_cast<Eigen::Index>(total) - 1;
    std::vector<Eigen::Triplet<double>> trip;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(std::max<Eigen::Index>(m, 0));
    auto add = [&](std::uint64_t a, std::uint64_t b, double d) {
      // Equation phi[b] - phi[a] = d.
      if (a > 0) trip.emplace_back(a - 1, a - 1, 1.0);
      if (b > 0) trip.emplace_back(b - 1, b - 1, 1.0);
      if (a > 0 && b > 0) {
        trip.emplace_back(a - 1, b - 1, -1.0);
        trip.emplace_back(b - 1, a - 1, -1.0);
      }
      if (b > 0) rhs[b - 1] += d;
      if (a > 0) rhs[a - 1] -= d;
    };
    for (std::uint64_t k = 0; k < total; ++k) {
      for (int i = 0; i < n; ++i) {
        std::uint64_t d = digit(k, i);
        for (std::uint64_t e = d + 1; e < size[i]; ++e) {
          std::uint64_t k2 = k + (e - d) * stride[i];
          add(k, k2, f[i][k2] - f[i][k]);
        }
      }
    }
    if (m > 0) {
      SpMat L(m, m);
      L.setFromTriplets(trip.begin(), trip.end());
      Eigen::VectorXd sol;
      if (m <= 20000) {
        Eigen::SimplicialLDLT<SpMat> solver(L);
        sol = solver.solve(rhs);
      } else {
        Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> solver(L);
        solver.setTolerance(1e-15);
        solver.setMaxIterations(static_cast<Eigen::Index>(10 * m));
        sol = solver.solve(rhs);
      }
      for (Eigen::Index k = 0; k < m; ++k) phi[k + 1] = sol[k];
    }
    const double band = Band(tol, fmax);
    for (std::uint64_t k = 0; k < total; ++k) {
      for (int i = 0; i < n; ++i) {
        std::uint64_t d = digit(k, i);
        for (std::uint64_t e = d + 1; e < size[i]; ++e) {
          std::uint64_t k2 = k + (e - d) * stride[i];
          double df = f[i][k2] - f[i][k];
          double dphi = phi[k2] - phi[k];
          double residual = std::abs(df - dphi);
          tracker.Offer(residual, residual > band,
                        [&] { return witness(i, k, k2, df, dphi); });
        }
      }
    }
    r.notes.push_back("least-squares residual threshold tol*(1+max|f|)");
  }
  tracker.FillReport(r);
  r.exhaustive = true;
  r.extra["profiles"] = total;
  if (r.passed()) {
    r.conclusion = "an exact potential exists";
    out.table = std::move(phi);
  } else {
    r.conclusion = "no exact potential exists";
  }
  r.timing_ms = ElapsedMs(start);
  return out;
}

TestReport FindHpWitness(const GameSpec& g, const CheckOptions& opts) {
  auto start = Clock::now();
  if (!g.has_expr_costs() || !g.aggregative()) {
    return TestReport::Inapplicable(
        "hp-witness", "requires an aggregative game with expression costs");
  }
  for (int i = 0; i < g.num_players(); ++i) {
    if (!g.space(i).contains_zero()) {
      return TestReport::Inapplicable(
          "hp-witness", "K_" + std::to_string(i + 1) + " does not contain 0");
    }
  }
  TestReport abnormal = DetectAbnormal(g, opts.sampling(), opts.tol);
  if (abnormal.failed()) {
    return TestReport::Inapplicable(
        "hp-witness", "the game is abnormal: " + abnormal.conclusion);
  }
  TestReport r;
  r.method = "hp-witness";
  const JointStrategy zero = g.ZeroStrategy();
  double best = -1.0;
  Json best_witness;
  bool found = false;
  for (const auto& y : SampleStrategies(g, opts.sampling())) {
    Guarded(r, [&] {
      Magnitude mag;
      double h = HPath(g, zero, y, &mag);
      ++r.samples_used;
      if (std::abs(h) > best) {
        best = std::abs(h);
        best_witness = Json{{"y", StrategyToJson(y)}, {"h_P(0,y)", h}};
      }
      if (std::abs(h) > Band(opts.tol, mag.value())) found = true;
    });
    if (found) break;
  }
  r.residual_max = std::max(best, 0.0);
  r.witness = best_witness;
  r.verdict = found ? Verdict::kPass : Verdict::kFail;
  r.exhaustive = false;
  r.notes.push_back(
      "read as: h_P(0,.) is not identically zero on K (h_P(0,0) = 0 always)");
  r.conclusion = found ? "found y with h_P(0,y) != 0"
                       : "h_P(0,y) vanished on every sampled y";
  r.timing_ms = ElapsedMs(start);
  return r;
}

}  // namespace pgt
