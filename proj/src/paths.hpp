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

#ifndef PGT_PATHS_HPP_
#define PGT_PATHS_HPP_

#include <cstdint>
#include <vector>

#include "game.hpp"
#include "strategy.hpp"
#include "tolerance.hpp"

namespace pgt {

// A finite path x^1, ..., x^m in which consecutive strategies differ only in
// the action of deviators[e]. Degenerate steps (no change) are allowed.
struct DeviationPath {
  std::vector<JointStrategy> steps;
  std::vector<int> deviators;

  std::size_t length() const { return deviators.size(); }
  bool closed() const;
  // Interior strategies pairwise distinct (and distinct from the endpoints
  // for an open path).
  bool simple() const;
  DeviationPath Reversed() const;
  // Appends `tail`, which must start where this path ends.
  DeviationPath Concat(const DeviationPath& tail) const;
  // Throws Error(kInvalidArgument) if some step changes a player other than
  // its deviator.
  void Validate() const;
};

// Arguments of h_ij: players i < j, base actions z_i, z_j, increments y_i,
// y_j, and the remaining players' actions taken from `rest` (its entries for
// i and j are ignored).
struct PairDeviation {
  int i = 0;
  int j = 1;
  Action z_i, z_j, y_i, y_j;
  JointStrategy rest;

  JointStrategy Base() const;  // (z_i, z_j, rest)
};

// z -> (z_1+y_1, z_-1) -> ... -> z+y, one step per player in order.
// Throws Error(kOutOfSpace) naming the step when a profile leaves K.
DeviationPath CanonicalPath(const GameSpec& g, const JointStrategy& z,
                            const JointStrategy& y);

// I(Q, f): sum over steps of f_{i_e}(q^{e+1}) - f_{i_e}(q^e).
// When `mag` is given it records every cost term, for tolerance scaling.
double PathIntegral(const GameSpec& g, const DeviationPath& q,
                    Magnitude* mag = nullptr);

// h_P(z, y).
double HPath(const GameSpec& g, const JointStrategy& z, const JointStrategy& y,
             Magnitude* mag = nullptr);

// h_P restricted to the first `prefix` players of the canonical path
// (P_2, P_3 prefixes).
double HPathPrefix(const GameSpec& g, const JointStrategy& z,
                   const JointStrategy& y, int prefix,
                   Magnitude* mag = nullptr);

// h_ij(z_i, z_j, y_i, y_j; z_-{i,j}).
double HPair(const GameSpec& g, const PairDeviation& d,
             Magnitude* mag = nullptr);

struct FourCycleSet {
  std::vector<DeviationPath> cycles;
  bool exhaustive = false;
  std::uint64_t total = 0;  // size of the full index set (finite games)
};

// Closed simple 4-cycles z -> (z_i', z) -> (z_i', z_j', z) -> (z_i, z_j', z)
// -> z over player pairs i < j and unordered action pairs. Finite games are
// enumerated lexicographically when the count fits the budget, otherwise
// sampled; continuous games always use sampled actions.
FourCycleSet EnumerateFourCycles(const GameSpec& g, std::int64_t budget,
                                 std::uint64_t seed, double radius = 10.0);

}  // namespace pgt

#endif  // PGT_PATHS_HPP_
