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

#ifndef PGT_GAME_HPP_
#define PGT_GAME_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "expr.hpp"
#include "report.hpp"
#include "strategy.hpp"

namespace pgt {

// A player's strategy set K_i. The contains_zero and symmetric flags are
// derived from the geometry, never supplied by the user.
class ActionSpace {
 public:
  enum class Kind { kFinite, kBox, kAll };

  static ActionSpace Finite(std::vector<Action> points);
  static ActionSpace Box(Action lo, Action hi, bool open_lo = false,
                         bool open_hi = false);
  static ActionSpace All(int dim);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool is_finite() const { return kind_ == Kind::kFinite; }
  bool contains_zero() const { return contains_zero_; }
  bool symmetric() const { return symmetric_; }

  const std::vector<Action>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const Action& lo() const { return lo_; }
  const Action& hi() const { return hi_; }
  bool open_lo() const { return open_lo_; }
  bool open_hi() const { return open_hi_; }

  // Finite points are matched up to a relative 1e-9 so that z + (w - z)
  // still finds w.
  std::optional<std::size_t> IndexOf(const Action& a) const;
  bool Contains(const Action& a) const;

  // Box bounds shrunk away from open faces by 1e-3 * (hi - lo).
  Action SampleLo() const;
  Action SampleHi() const;

  Action Sample(std::mt19937_64& rng, double radius) const;

 private:
  ActionSpace() = default;
  void ComputeFlags();

  Kind kind_ = Kind::kAll;
  int dim_ = 0;
  std::vector<Action> points_;
  Action lo_, hi_;
  bool open_lo_ = false;
  bool open_hi_ = false;
  bool contains_zero_ = false;
  bool symmetric_ = false;
};

struct CongestionEdge {
  std::string id;
  std::vector<double> cost;  // cost[k - 1] = C_e(k), k = 1..N
};

// Common origin-destination network: every player picks one of the routes.
struct CongestionNetwork {
  std::vector<CongestionEdge> edges;
  std::vector<std::vector<int>> routes;  // edge indices per route
  std::vector<double> origin_loop_cost;  // C_0(k), k = 1..N

  // Number of route users per edge when player i uses routes[choice[i]].
  std::vector<int> Loads(const std::vector<int>& choice) const;
  double PlayerCost(int player, const std::vector<int>& choice) const;
  // Sum over edges of sum_{k <= load} C_e(k).
  double Rosenthal(const std::vector<int>& choice) const;
  double MaxEdgeCost() const;
};

struct ExprCosts {
  std::vector<Expr> exprs;
};

// One flat row-major table per player, indexed by action indices in player
// order (player 1 most significant).
struct TableCosts {
  std::vector<std::vector<double>> tables;
};

// Action index t of every player selects network.routes[t].
struct CongestionCosts {
  CongestionNetwork network;
};

class GameSpec {
 public:
  using Costs = std::variant<ExprCosts, TableCosts, CongestionCosts>;

  GameSpec(std::vector<ActionSpace> spaces, Costs costs, ParamEnv params = {});

  int num_players() const { return static_cast<int>(spaces_.size()); }
  const std::vector<int>& dims() const { return dims_; }
  const std::vector<ActionSpace>& spaces() const { return spaces_; }
  const ActionSpace& space(int i) const { return spaces_[i]; }
  const Costs& costs() const { return costs_; }
  const ParamEnv& params() const { return params_; }
  bool aggregative() const { return aggregative_; }

  bool is_finite() const;
  bool has_expr_costs() const {
    return std::holds_alternative<ExprCosts>(costs_);
  }
  bool is_congestion() const {
    return std::holds_alternative<CongestionCosts>(costs_);
  }
  const ExprCosts& expr_costs() const { return std::get<ExprCosts>(costs_); }
  const CongestionNetwork& network() const {
    return std::get<CongestionCosts>(costs_).network;
  }
  // Integer-valued table or congestion costs; equality is then exact.
  bool integer_valued() const;
  bool all_convex() const;
  // Every space contains 0 and is symmetric, or every space is all of R^n.
  bool zero_symmetric_gate() const;
  bool all_space_gate() const;

  // f_i(x). Throws Error(kOutOfSpace) when x is not in K.
  double Cost(int player, const JointStrategy& x) const;

  // Lexicographic enumeration of finite joint action sets, player 1 most
  // significant.
  std::uint64_t NumProfiles() const;
  JointStrategy ProfileAt(std::uint64_t index) const;
  std::vector<std::size_t> ActionIndices(const JointStrategy& x) const;
  std::uint64_t ProfileIndex(const std::vector<std::size_t>& idx) const;
  JointStrategy ProfileFromIndices(const std::vector<std::size_t>& idx) const;

  bool Contains(const JointStrategy& x) const;
  JointStrategy ZeroStrategy() const;

 private:
  std::vector<int> dims_;
  std::vector<ActionSpace> spaces_;
  Costs costs_;
  ParamEnv params_;
  bool aggregative_ = false;
};

// Tolerance actually used for a game: exact for integer-valued tables.
double EffectiveTolerance(const GameSpec& g, double tol);

GameSpec LoadGameSpec(std::string_view json_text);
GameSpec LoadGameSpecFile(const std::string& path);
Json GameSpecToJson(const GameSpec& g);

// Strategies as JSON: one array of coordinates per player. Reading also
// accepts a bare number for a 1-dimensional player.
Json StrategyToJson(const JointStrategy& x);
Json ActionToJson(const Action& a);
JointStrategy StrategyFromJson(const Json& j, const GameSpec& g);

struct SamplingOptions {
  std::int64_t count = 500;
  std::uint64_t seed = 0;
  double radius = 10.0;
};

// Deterministic given the seed. Finite games are enumerated when |K| <=
// count; continuous games get 0, box corners (at most 1024) and the box
// midpoint ahead of uniform draws.
std::vector<JointStrategy> SampleStrategies(const GameSpec& g,
                                            const SamplingOptions& opts);

// Pairs (z, w) of sampled strategies, w drawn from an independent stream.
std::vector<std::pair<JointStrategy, JointStrategy>> SamplePairs(
    const GameSpec& g, const SamplingOptions& opts);

// Abnormality (some player's cost ignores its own action). verdict fail
// means abnormal, with the witness player.
TestReport DetectAbnormal(const GameSpec& g, const SamplingOptions& opts,
                          double tol);

// Normal-form expansion over route indices. With augment, each player's
// actions are -m..m: 0 is the origin self-loop, -j the artificial mirror
// of route j.
GameSpec ExpandCongestionGame(const GameSpec& g, bool augment);

// Network of the augmented game: artificial edges cost M at every load and
// the self-loop costs M + C_0(k), with M = 1 + N * max real edge cost.
// Routes are ordered to match actions -m..m.
CongestionNetwork AugmentNetwork(const CongestionNetwork& net, int num_players);
double AugmentationConstant(const CongestionNetwork& net, int num_players);

}  // namespace pgt

#endif  // PGT_GAME_HPP_
