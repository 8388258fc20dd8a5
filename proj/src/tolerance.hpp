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

#ifndef PGT_TOLERANCE_HPP_
#define PGT_TOLERANCE_HPP_

#include <algorithm>
#include <cmath>

namespace pgt {

// Width of the equality band for quantities of magnitude `scale`:
// |u - v| <= tol * (1 + scale).
inline double Band(double tol, double scale) {
  return tol * (1.0 + std::abs(scale));
}

inline bool ApproxEqual(double u, double v, double tol) {
  return std::abs(u - v) <= Band(tol, std::max(std::abs(u), std::abs(v)));
}

// Tracks the largest magnitude of a set of terms, used as the scale when a
// quantity is a signed sum of cost evaluations.
class Magnitude {
 public:
  double Add(double v) {
    max_ = std::max(max_, std::abs(v));
    return v;
  }
  double value() const { return max_; }

 private:
  double max_ = 0.0;
};

}  // namespace pgt

#endif  // PGT_TOLERANCE_HPP_
