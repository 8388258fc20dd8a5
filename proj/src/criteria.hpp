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

#ifndef PGT_CRITERIA_HPP_
#define PGT_CRITERIA_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "game.hpp"
#include "report.hpp"

namespace pgt {

struct CheckOptions {
  std::int64_t budget = 500;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  double radius = 10.0;

  SamplingOptions sampling() const { return {budget, seed, radius}; }
};

// Every closed simple 4-cycle has I(Q, f) = 0.
TestReport TestFourCycles(const GameSpec& g, const CheckOptions& opts);

// h_ij(z_i, z_j, y_i, y_j; .) = h_ij(0, 0, z_i + y_i, z_j + y_j; .) -
// h_ij(0, 0, z_i, z_j; .) for every pair i < j. Inapplicable unless every
// space contains 0 and is symmetric (or is all of R^n).
TestReport TestPairwise(const GameSpec& g, const CheckOptions& opts);

// h_P(z, y) = h_P(0, z + y) - h_P(0, z), same applicability as above.
TestReport TestHpDecomposition(const GameSpec& g, const CheckOptions& opts);

// d2 f_i / dx_jq dx_ip = d2 f_j / dx_ip dx_jq at sampled points, by symbolic
// differentiation. Expression costs on convex spaces only.
TestReport TestCrossHessian(const GameSpec& g, const CheckOptions& opts);

struct OracleResult {
  TestReport report;
  // phi over profiles in lexicographic order, phi(first profile) = 0.
  std::optional<std::vector<double>> table;
};

// Brute-force decision for finite games: solve the unilateral-deviation
// equations for phi. Integer-valued costs are decided exactly; otherwise a
// least-squares solve with residual threshold tol * (1 + max |f|).
OracleResult OracleFinitePotential(const GameSpec& g, double tol,
                                   std::uint64_t max_profiles = 1000000);

// Looks for y with h_P(0, y) != 0, which a non-abnormal aggregative
// potential game must admit. pass = witness found.
TestReport FindHpWitness(const GameSpec& g, const CheckOptions& opts);

}  // namespace pgt

#endif  // PGT_CRITERIA_HPP_
