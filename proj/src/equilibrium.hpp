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

#ifndef PGT_EQUILIBRIUM_HPP_
#define PGT_EQUILIBRIUM_HPP_

#include <optional>
#include <vector>

#include "criteria.hpp"
#include "game.hpp"
#include "potential.hpp"
#include "report.hpp"

namespace pgt {

struct Minimizer {
  JointStrategy profile;
  double value = 0.0;
  bool approximate = false;  // grid search over continuous spaces
};

// Lexicographically first global minimizer of phi over the joint action
// set; continuous spaces are replaced by a grid of `grid_points` per
// coordinate and the result is flagged approximate.
Minimizer MinimizePotential(const GameSpec& g, const PotentialFn& phi,
                            int grid_points = 21, double radius = 10.0);

// No unilateral deviation lowers a player's cost beyond the tolerance.
// Finite spaces are searched exhaustively, continuous ones by sampling.
TestReport VerifyNash(const GameSpec& g, const JointStrategy& x,
                      const CheckOptions& opts);

enum class DynamicsOutcome { kConverged, kCycleDetected, kBudgetExhausted };

const char* DynamicsOutcomeName(DynamicsOutcome o);

struct DynamicsResult {
  DynamicsOutcome outcome = DynamicsOutcome::kBudgetExhausted;
  std::vector<JointStrategy> trajectory;
  std::vector<int> deviators;
  std::vector<double> cost_deltas;
  std::vector<double> phi_deltas;  // empty without phi
  std::size_t cycle_start = 0;     // first index of the repeating segment
  TestReport report;
};

// Repeatedly applies the lexicographically first strictly improving
// unilateral deviation (players in order, then actions in order). A
// revisited profile is an improvement cycle. Finite games only.
DynamicsResult BetterResponseDynamics(const GameSpec& g,
                                      const JointStrategy& start,
                                      std::int64_t max_steps, double tol,
                                      const PotentialFn* phi = nullptr);

}  // namespace pgt

#endif  // PGT_EQUILIBRIUM_HPP_
