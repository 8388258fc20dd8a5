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

#include "paths.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <set>
#include <unordered_set>

#include "errors.hpp"

namespace pgt {

namespace {

// Index of the single player whose action differs, -1 if none, -2 if more.
int ChangedPlayer(const JointStrategy& a, const JointStrategy& b) {
  int changed = -1;
  for (std::size_t p = 0; p < a.num_players(); ++p) {
    if (a[p] != b[p]) {
      if (changed != -1) return -2;
      changed = static_cast<int>(p);
    }
  }
  return changed;
}

std::uint64_t SaturatingMul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t SaturatingAdd(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a + b;
  return s < a ? std::numeric_limits<std::uint64_t>::max() : s;
}

// Unordered pair number k (lexicographic over a < b) among n items.
std::pair<std::size_t, std::size_t> DecodePair(std::uint64_t k, std::size_t n) {
  for (std::size_t a = 0; a + 1 < n; ++a) {
    std::uint64_t row = n - 1 - a;
    if (k < row) return {a, a + 1 + k};
    k -= row;
  }
  throw Error(ErrorKind::kInvalidArgument, "pair index out of range");
}

DeviationPath MakeCycle(const JointStrategy& z, int i, const Action& zi2, int j,
                        const Action& zj2) {
  DeviationPath q;
  JointStrategy a = z;
  JointStrategy b = a.With(i, zi2);
  JointStrategy c = b.With(j, zj2);
  JointStrategy d = c.With(i, z[i]);
  q.steps = {a, b, c, d, a};
  q.deviators = {i, j, i, j};
  return q;
}

}  // namespace

bool DeviationPath::closed() const {
  return !steps.empty() && steps.front() == steps.back();
}

bool DeviationPath::simple() const {
  if (steps.size() <= 2) return true;
  std::size_t end = closed() ? steps.size() - 1 : steps.size();
  for (std::size_t a = 0; a < end; ++a) {
    for (std::size_t b = a + 1; b < end; ++b) {
      if (steps[a] == steps[b]) return false;
    }
  }
  return true;
}

DeviationPath DeviationPath::Reversed() const {
  DeviationPath r;
  r.steps.assign(steps.rbegin(), steps.rend());
  r.deviators.assign(deviators.rbegin(), deviators.rend());
  return r;
}

DeviationPath DeviationPath::Concat(const DeviationPath& tail) const {
  if (steps.empty()) return tail;
  if (tail.steps.empty()) return *this;
  if (!(steps.back() == tail.steps.front())) {
    throw Error(ErrorKind::kInvalidArgument,
                "concatenated paths do not share an endpoint");
  }
  DeviationPath r = *this;
  r.steps.insert(r.steps.end(), tail.steps.begin() + 1, tail.steps.end());
  r.deviators.insert(r.deviators.end(), tail.deviators.begin(),
                     tail.deviators.end());
  return r;
}

void DeviationPath::Validate() const {
  if (steps.empty()) {
    if (!deviators.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "deviators without steps");
    }
    return;
  }
  if (deviators.size() + 1 != steps.size()) {
    throw Error(ErrorKind::kInvalidArgument,
                "a path of m strategies needs m-1 deviators");
  }
  for (std::size_t e = 0; e < deviators.size(); ++e) {
    int dev = deviators[e];
    if (dev < 0 || dev >= static_cast<int>(steps[e].num_players())) {
      throw Error(ErrorKind::kInvalidArgument, "deviator out of range");
    }
    int changed = ChangedPlayer(steps[e], steps[e + 1]);
    if (changed == -2 || (changed >= 0 && changed != dev)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "step " + std::to_string(e + 1) +
                      " changes a player other than its deviator");
    }
  }
}

JointStrategy PairDeviation::Base() const {
  JointStrategy b = rest;
  b[i] = z_i;
  b[j] = z_j;
  return b;
}

DeviationPath CanonicalPath(const GameSpec& g, const JointStrategy& z,
                            const JointStrategy& y) {
  const int n = g.num_players();
  if (static_cast<int>(z.num_players()) != n ||
      static_cast<int>(y.num_players()) != n) {
    throw Error(ErrorKind::kDimension, "strategy has wrong number of players");
  }
  DeviationPath q;
  JointStrategy cur = z;
  if (!g.Contains(cur)) {
    throw Error(ErrorKind::kOutOfSpace,
                "path start " + ToString(cur) + " is outside K");
  }
  q.steps.push_back(cur);
  for (int i = 0; i < n; ++i) {
    if (y[i].size() != z[i].size()) {
      throw Error(ErrorKind::kDimension, "increment has wrong dimension");
    }
    cur[i] = z[i] + y[i];
    if (!g.Contains(cur)) {
      throw Error(ErrorKind::kOutOfSpace, "step " + std::to_string(i + 1) +
                                              " of the path leaves K at " +
                                              ToString(cur));
    }
    q.steps.push_back(cur);
    q.deviators.push_back(i);
  }
  return q;
}

double PathIntegral(const GameSpec& g, const DeviationPath& q, Magnitude* mag) {
  Magnitude local;
  Magnitude& m = mag ? *mag : local;
  double total = 0.0;
  for (std::size_t e = 0; e < q.deviators.size(); ++e) {
    int dev = q.deviators[e];
    total +=
        m.Add(g.Cost(dev, q.steps[e + 1])) - m.Add(g.Cost(dev, q.steps[e]));
  }
  return total;
}

double HPath(const GameSpec& g, const JointStrategy& z, const JointStrategy& y,
             Magnitude* mag) {
  return PathIntegral(g, CanonicalPath(g, z, y), mag);
}

double HPathPrefix(const GameSpec& g, const JointStrategy& z,
                   const JointStrategy& y, int prefix, Magnitude* mag) {
  DeviationPath q = CanonicalPath(g, z, y);
  prefix = std::clamp(prefix, 0, static_cast<int>(q.length()));
  q.steps.resize(prefix + 1);
  q.deviators.resize(prefix);
  return PathIntegral(g, q, mag);
}

double HPair(const GameSpec& g, const PairDeviation& d, Magnitude* mag) {
  if (d.i == d.j)
    throw Error(ErrorKind::kInvalidArgument, "i must differ from j");
  JointStrategy base = d.Base();
  JointStrategy mid = base.With(d.i, d.z_i + d.y_i);
  JointStrategy end = mid.With(d.j, d.z_j + d.y_j);
  for (const JointStrategy* s : {&base, &mid, &end}) {
    if (!g.Contains(*s)) {
      throw Error(ErrorKind::kOutOfSpace,
                  "pair deviation leaves K at " + ToString(*s));
    }
  }
  // f_i(mid) - f_i(base) + f_j(end) - f_j(mid), in that order.
  Magnitude local;
  Magnitude& m = mag ? *mag : local;
  return (m.Add(g.Cost(d.i, mid)) - m.Add(g.Cost(d.i, base))) +
         (m.Add(g.Cost(d.j, end)) - m.Add(g.Cost(d.j, mid)));
}

FourCycleSet EnumerateFourCycles(const GameSpec& g, std::int64_t budget,
                                 std::uint64_t seed, double radius) {
  FourCycleSet out;
  const int n = g.num_players();
  if (budget <= 0 || n < 2) {
    out.exhaustive = n < 2;
    return out;
  }

  if (g.is_finite()) {
    struct Block {
      int i, j;
      std::uint64_t pairs_i, pairs_j, rest, count;
    };
    std::vector<Block> blocks;
    std::uint64_t total = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        std::uint64_t ni = g.space(i).size(), nj = g.space(j).size();
        Block b{i, j, ni * (ni - 1) / 2, nj * (nj - 1) / 2, 1, 0};
        for (int k = 0; k < n; ++k) {
          if (k != i && k != j)
            b.rest = SaturatingMul(b.rest, g.space(k).size());
        }
        b.count = SaturatingMul(SaturatingMul(b.pairs_i, b.pairs_j), b.rest);
        total = SaturatingAdd(total, b.count);
        blocks.push_back(b);
      }
    }
    out.total = total;
    std::vector<std::uint64_t> indices;
    if (total <= static_cast<std::uint64_t>(budget)) {
      out.exhaustive = true;
      indices.resize(total);
      for (std::uint64_t k = 0; k < total; ++k) indices[k] = k;
    } else {
      std::mt19937_64 rng(seed);
      std::unordered_set<std::uint64_t> chosen;
      for (std::uint64_t t = total - budget; t < total; ++t) {
        std::uniform_int_distribution<std::uint64_t> pick(0, t);
        std::uint64_t v = pick(rng);
        if (!chosen.insert(v).second) chosen.insert(t);
      }
      indices.assign(chosen.begin(), chosen.end());
      std::sort(indices.begin(), indices.end());
    }
    for (std::uint64_t k : indices) {
      std::size_t bi = 0;
      while (k >= blocks[bi].count) k -= blocks[bi++].count;
      const Block& b = blocks[bi];
      // Lexicographic in (action pair of i, action pair of j, rest index).
      std::uint64_t rest_idx = k % b.rest;
      k /= b.rest;
      auto [bj0, bj1] = DecodePair(k % b.pairs_j, g.space(b.j).size());
      auto [ai0, ai1] = DecodePair(k / b.pairs_j, g.space(b.i).size());
      std::vector<std::size_t> idx(n, 0);
      for (int p = n - 1; p >= 0; --p) {
        if (p == b.i || p == b.j) continue;
        idx[p] = rest_idx % g.space(p).size();
        rest_idx /= g.space(p).size();
      }
      idx[b.i] = ai0;
      idx[b.j] = bj0;
      JointStrategy z = g.ProfileFromIndices(idx);
      out.cycles.push_back(MakeCycle(z, b.i, g.space(b.i).points()[ai1], b.j,
                                     g.space(b.j).points()[bj1]));
    }
    return out;
  }

  // Continuous (or mixed) spaces: sampled base profiles and sampled
  // replacement actions, player pair drawn uniformly.
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      bool ok_i = !g.space(i).is_finite() || g.space(i).size() > 1;
      bool ok_j = !g.space(j).is_finite() || g.space(j).size() > 1;
      if (ok_i && ok_j) pairs.push_back({i, j});
    }
  }
  if (pairs.empty()) return out;
  SamplingOptions so;
  so.count = budget;
  so.seed = seed;
  so.radius = radius;
  std::vector<JointStrategy> bases = SampleStrategies(g, so);
  std::mt19937_64 rng(seed + 3);
  std::uniform_int_distribution<std::size_t> pick_pair(0, pairs.size() - 1);
  for (std::int64_t t = 0; t < budget; ++t) {
    const JointStrategy& z = bases[t % bases.size()];
    auto [i, j] = pairs[pick_pair(rng)];
    Action zi2, zj2;
    for (int tries = 0; tries < 64; ++tries) {
      zi2 = g.space(i).Sample(rng, radius);
      if (zi2 != z[i]) break;
    }
    for (int tries = 0; tries < 64; ++tries) {
      zj2 = g.space(j).Sample(rng, radius);
      if (zj2 != z[j]) break;
    }
    if (zi2 == z[i] || zj2 == z[j]) continue;
    out.cycles.push_back(MakeCycle(z, i, zi2, j, zj2));
  }
  return out;
}

}  // namespace pgt
