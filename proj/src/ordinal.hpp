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

#ifndef PGT_ORDINAL_HPP_
#define PGT_ORDINAL_HPP_

#include <optional>
#include <string>
#include <vector>

#include "criteria.hpp"
#include "expr.hpp"
#include "game.hpp"
#include "potential.hpp"
#include "report.hpp"

namespace pgt {

struct ConvexityCertificate {
  std::vector<double> eta;          // per player; 0 = only strict convexity
  std::optional<double> lipschitz;  // for the candidate phi
  std::string source = "user-declared";  // or "sampled-estimate"
  Json evidence = Json::object();        // pairs achieving the estimates
};

// phi with optional subgradients s_i (flattened per (i, k)) and optional
// positive scalings alpha_i.
struct OrdinalCandidate {
  Expr phi;
  ParamEnv params;
  std::optional<std::vector<Expr>> subgradients;
  std::optional<std::vector<Expr>> alphas;
};

// {"phi": text, "subgradients": [text per (i,k)] | null,
//  "alphas": [text per i] | null, "params": {...}}. A potential export
// ({"kind": "expr", "expr": ...}) is accepted too.
OrdinalCandidate CandidateFromJson(const GameSpec& g, const Json& j);

// Sign agreement of f_i and f_j changes under joint deviations of i and j
// (including the one-sided ones). Changes within the tolerance band of 0
// are abstentions.
TestReport CheckPairSignCondition(const GameSpec& g, const CheckOptions& opts);

enum class CrossSignMode { kGlobal, kCritical };

// d2 f_i/dx_j dx_i < 0 <=> d2 f_j/dx_i dx_j < 0 at samples (global), or
// the product of the two is >= 0 at located critical points (critical).
// One-dimensional actions and expression costs only.
TestReport CheckCrossPartialSigns(const GameSpec& g, const CheckOptions& opts,
                                  CrossSignMode mode);

enum class OrdinalMode { kOrdinal, kGeneralized };

// f_i change < 0 <=> (ordinal) or => (generalized) phi change < 0 over
// unilateral deviations.
TestReport VerifyOrdinalPotential(const GameSpec& g, const PotentialFn& phi,
                                  const CheckOptions& opts, OrdinalMode mode);

// Sampled estimates: eta_i = min 2 (f(y) - f(x) - <grad f(x), y - x>) /
// |y - x|^2 over own-action deviations, L = max |grad phi(x) - grad phi(y)|
// / |x - y| over joint pairs.
ConvexityCertificate EstimateConstants(const GameSpec& g,
                                       const OrdinalCandidate& cand,
                                       const CheckOptions& opts);

// Strong convexity of each f_i with eta_i, Lipschitz gradient of phi with L,
// the gradient condition where f_i decreases to first order, and L <= min
// eta_i.
TestReport CheckStrongConvexityCondition(const GameSpec& g,
                                         const OrdinalCandidate& cand,
                                         const ConvexityCertificate& cert,
                                         const CheckOptions& opts);

// Strict convexity of each f_i, block concavity of phi with subgradients
// s_i (default: grad phi), alpha_i > 0 when `use_alphas`, and
// <s_i, y_i - x_i> <= <alpha_i grad f_i, y_i - x_i> where the right side is
// negative.
TestReport CheckSubgradientCondition(const GameSpec& g,
                                     const OrdinalCandidate& cand,
                                     bool use_alphas, const CheckOptions& opts);

}  // namespace pgt

#endif  // PGT_ORDINAL_HPP_
