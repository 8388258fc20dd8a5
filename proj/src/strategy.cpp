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

#include "strategy.hpp"

#include <cassert>
#include <charconv>

namespace pgt {

JointStrategy JointStrategy::Zero() const {
  JointStrategy z = *this;
  for (auto& a : z.actions) {
    for (auto& v : a) v = 0.0;
  }
  return z;
}

JointStrategy JointStrategy::With(std::size_t i, Action a) const {
  JointStrategy out = *this;
  out.actions[i] = std::move(a);
  return out;
}

Action operator+(const Action& a, const Action& b) {
  assert(a.size() == b.size());
  Action out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
  return out;
}

Action operator-(const Action& a, const Action& b) {
  assert(a.size() == b.size());
  Action out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

JointStrategy operator+(const JointStrategy& a, const JointStrategy& b) {
  assert(a.num_players() == b.num_players());
  JointStrategy out;
  out.actions.reserve(a.num_players());
  for (std::size_t i = 0; i < a.num_players(); ++i) {
    out.actions.push_back(a[i] + b[i]);
  }
  return out;
}

JointStrategy operator-(const JointStrategy& a, const JointStrategy& b) {
  assert(a.num_players() == b.num_players());
  JointStrategy out;
  out.actions.reserve(a.num_players());
  for (std::size_t i = 0; i < a.num_players(); ++i) {
    out.actions.push_back(a[i] - b[i]);
  }
  return out;
}

JointStrategy operator-(const JointStrategy& a) { return a.Zero() - a; }

double Dot(const Action& a, const Action& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double SquaredNorm(const Action& a) { return Dot(a, a); }

bool IsZero(const Action& a) {
  for (double v : a) {
    if (v != 0.0) return false;
  }
  return true;
}

std::vector<double> Flatten(const JointStrategy& x) {
  std::vector<double> out;
  for (const auto& a : x.actions) out.insert(out.end(), a.begin(), a.end());
  return out;
}

std::string ToString(const JointStrategy& x) {
  std::string s = "(";
  char buf[64];
  for (std::size_t i = 0; i < x.num_players(); ++i) {
    if (i) s += ",";
    if (x[i].size() != 1) s += "(";
    for (std::size_t k = 0; k < x[i].size(); ++k) {
      if (k) s += ",";
      auto res = std::to_chars(buf, buf + sizeof(buf), x[i][k]);
      s.append(buf, res.ptr);
    }
    if (x[i].size() != 1) s += ")";
  }
  return s + ")";
}

}  // namespace pgt
