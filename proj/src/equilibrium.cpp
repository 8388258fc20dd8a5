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

#include "equilibrium.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <map>

#include "errors.hpp"
#include "tolerance.hpp"

namespace pgt {

namespace {

using Clock = std::chrono::steady_clock;

double ElapsedMs(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

// Candidate actions of one player for grid search.
std::vector<Action> GridActions(const ActionSpace& s, int grid_points,
                                double radius) {
  if (s.is_finite()) return s.points();
  Action lo, hi;
  if (s.kind() == ActionSpace::Kind::kBox) {
    lo = s.SampleLo();
    hi = s.SampleHi();
  } else {
    lo.assign(s.dim(), -radius);
    hi.assign(s.dim(), radius);
  }
  const int per = std::max(grid_points, 2);
  std::vector<Action> out;
  std::uint64_t total = 1;
  for (int k = 0; k < s.dim(); ++k) total *= per;
  for (std::uint64_t t = 0; t < total; ++t) {
    Action a(s.dim());
    std::uint64_t rem = t;
    for (int k = s.dim() - 1; k >= 0; --k) {
      int step = static_cast<int>(rem % per);
      rem /= per;
      a[k] = lo[k] + (hi[k] - lo[k]) * step / (per - 1);
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace

Minimizer MinimizePotential(const GameSpec& g, const PotentialFn& phi,
                            int grid_points, double radius) {
  const int n = g.num_players();
  std::vector<std::vector<Action>> grid;
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) {
    grid.push_back(GridActions(g.space(i), grid_points, radius));
    if (grid.back().empty())
      throw Error(ErrorKind::kInvalidArgument, "empty grid");
    total *= grid.back().size();
    if (total > 10000000) {
      throw Error(ErrorKind::kSizeGuard, "minimization grid too large");
    }
  }
  Minimizer best;
  best.approximate = !g.is_finite();
  best.value = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(n, 0);
  for (std::uint64_t t = 0; t < total; ++t) {
    std::uint64_t rem = t;
    for (int i = n - 1; i >= 0; --i) {
      idx[i] = rem % grid[i].size();
      rem /= grid[i].size();
    }
    JointStrategy x;
    for (int i = 0; i < n; ++i) x.actions.push_back(grid[i][idx[i]]);
    double v = phi(x);
    if (v < best.value) {
      best.value = v;
      best.profile = std::move(x);
    }
  }
  return best;
}

TestReport VerifyNash(const GameSpec& g, const JointStrategy& x,
                      const CheckOptions& opts) {
  auto start = Clock::now();
  TestReport r;
  r.method = "nash";
  if (!g.Contains(x)) {
    throw Error(ErrorKind::kOutOfSpace,
                "profile " + ToString(x) + " is outside K");
  }
  const double tol = EffectiveTolerance(g, opts.tol);
  ResidualTracker tracker;
  std::mt19937_64 rng(opts.seed);
  for (int i = 0; i < g.num_players(); ++i) {
    const double base = g.Cost(i, x);
    std::vector<Action> alternatives;
    if (g.space(i).is_finite()) {
      alternatives = g.space(i).points();
    } else {
      alternatives = GridActions(g.space(i), 11, opts.radius);
      for (std::int64_t t = 0; t < opts.budget; ++t) {
        alternatives.push_back(g.space(i).Sample(rng, opts.radius));
      }
    }
    for (const auto& a : alternatives) {
      if (a == x[i]) continue;
      JointStrategy x2 = x.With(i, a);
      double c = g.Cost(i, x2);
      double gain = base - c;
      bool violates = gain > Band(tol, std::max(std::abs(base), std::abs(c)));
      tracker.Offer(std::max(gain, 0.0), violates, [&] {
        return Json{{"player", i + 1},
                    {"deviation", ActionToJson(a)},
                    {"cost", base},
                    {"deviation_cost", c},
                    {"gain", gain}};
      });
    }
  }
  tracker.FillReport(r);
  r.exhaustive = g.is_finite();
  if (r.failed()) {
    r.conclusion = "not a Nash equilibrium: a unilateral deviation gains";
  } else {
    r.conclusion =
        r.exhaustive ? "a pure Nash equilibrium" : "no sampled deviation gains";
  }
  r.extra["profile"] = StrategyToJson(x);
  r.timing_ms = ElapsedMs(start);
  return r;
}

const char* DynamicsOutcomeName(DynamicsOutcome o) {
  switch (o) {
    case DynamicsOutcome::kConverged:
      return "converged";
    case DynamicsOutcome::kCycleDetected:
      return "cycle_detected";
    case DynamicsOutcome::kBudgetExhausted:
      return "budget_exhausted";
  }
  return "?";
}

DynamicsResult BetterResponseDynamics(const GameSpec& g,
                                      const JointStrategy& start,
                                      std::int64_t max_steps, double tol,
                                      const PotentialFn* phi) {
  auto clock_start = Clock::now();
  if (!g.is_finite()) {
    throw Error(ErrorKind::kInapplicable, "dynamics require a finite game");
  }
  const double eff_tol = EffectiveTolerance(g, tol);
  DynamicsResult res;
  std::map<std::vector<std::size_t>, std::size_t> visited;
  JointStrategy x = g.ProfileFromIndices(g.ActionIndices(start));
  res.trajectory.push_back(x);
  visited[g.ActionIndices(x)] = 0;

  for (std::int64_t step = 0;; ++step) {
    bool moved = false;
    for (int i = 0; i < g.num_players() && !moved; ++i) {
      const double base = g.Cost(i, x);
      for (const auto& a : g.space(i).points()) {
        if (a == x[i]) continue;
        JointStrategy x2 = x.With(i, a);
        double c = g.Cost(i, x2);
        if (base - c > Band(eff_tol, std::max(std::abs(base), std::abs(c)))) {
          if (step >= max_steps) {
            res.outcome = DynamicsOutcome::kBudgetExhausted;
            goto done;
          }
          res.deviators.push_back(i);
          res.cost_deltas.push_back(c - base);
          if (phi) res.phi_deltas.push_back((*phi)(x2) - (*phi)(x));
          x = std::move(x2);
          res.trajectory.push_back(x);
          moved = true;
          break;
        }
      }
    }
    if (!moved) {
      res.outcome = DynamicsOutcome::kConverged;
      break;
    }
    auto key = g.ActionIndices(x);
    auto [it, inserted] = visited.emplace(key, res.trajectory.size() - 1);
    if (!inserted) {
      res.outcome = DynamicsOutcome::kCycleDetected;
      res.cycle_start = it->second;
      break;
    }
  }
done:
  TestReport& r = res.report;
  r.method = "dynamics";
  r.exhaustive = true;
  r.samples_used = static_cast<std::int64_t>(res.deviators.size());
  Json traj = Json::array();
  for (std::size_t k = 0; k < res.trajectory.size(); ++k) {
    Json step{{"profile", StrategyToJson(res.trajectory[k])}};
    if (k > 0) {
      step["deviator"] = res.deviators[k - 1] + 1;
      step["cost_delta"] = res.cost_deltas[k - 1];
      if (phi) step["phi_delta"] = res.phi_deltas[k - 1];
    }
    traj.push_back(step);
  }
  r.extra["outcome"] = DynamicsOutcomeName(res.outcome);
  r.extra["steps"] = res.deviators.size();
  r.extra["trajectory"] = traj;
  switch (res.outcome) {
    case DynamicsOutcome::kConverged:
      r.verdict = Verdict::kPass;
      r.conclusion = "converged to a pure Nash equilibrium after " +
                     std::to_string(res.deviators.size()) + " steps";
      break;
    case DynamicsOutcome::kCycleDetected: {
      r.verdict = Verdict::kFail;
      Json cycle = Json::array();
      for (std::size_t k = res.cycle_start; k < res.trajectory.size(); ++k) {
        cycle.push_back(StrategyToJson(res.trajectory[k]));
      }
      r.witness = Json{{"cycle", cycle},
                       {"length", res.trajectory.size() - 1 - res.cycle_start}};
      r.conclusion =
          "improvement cycle found: no generalized ordinal potential exists";
      break;
    }
    case DynamicsOutcome::kBudgetExhausted:
      r.verdict = Verdict::kInapplicable;
      r.conclusion = "step budget exhausted before convergence";
      break;
  }
  r.timing_ms = ElapsedMs(clock_start);
  return res;
}

}  // namespace pgt
