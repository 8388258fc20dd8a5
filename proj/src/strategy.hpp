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

#ifndef PGT_STRATEGY_HPP_
#define PGT_STRATEGY_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace pgt {

// One player's action: a point of R^{n_i}.
using Action = std::vector<double>;

// A joint action profile x = (x_1, ..., x_N).
struct JointStrategy {
  std::vector<Action> actions;

  JointStrategy() = default;
  explicit JointStrategy(std::vector<Action> a) : actions(std::move(a)) {}

  std::size_t num_players() const { return actions.size(); }
  const Action& operator[](std::size_t i) const { return actions[i]; }
  Action& operator[](std::size_t i) { return actions[i]; }

  // Same shape, every coordinate zero.
  JointStrategy Zero() const;
  // Returns a copy with player i's action replaced.
  JointStrategy With(std::size_t i, Action a) const;

  friend bool operator==(const JointStrategy&, const JointStrategy&) = default;
};

JointStrategy operator+(const JointStrategy& a, const JointStrategy& b);
JointStrategy operator-(const JointStrategy& a, const JointStrategy& b);
JointStrategy operator-(const JointStrategy& a);

Action operator+(const Action& a, const Action& b);
Action operator-(const Action& a, const Action& b);

double Dot(const Action& a, const Action& b);
double SquaredNorm(const Action& a);
bool IsZero(const Action& a);

// Flattened view of all coordinates, player-major.
std::vector<double> Flatten(const JointStrategy& x);

// "((1,2),(3))"-style rendering used in text reports.
std::string ToString(const JointStrategy& x);

}  // namespace pgt

#endif  // PGT_STRATEGY_HPP_
