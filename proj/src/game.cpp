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

#include "game.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "errors.hpp"
#include "tolerance.hpp"

namespace pgt {

namespace {

constexpr double kPointMatchTol = 1e-9;

bool SameAction(const Action& a, const Action& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k] - b[k]) >
        kPointMatchTol * (1.0 + std::max(std::abs(a[k]), std::abs(b[k])))) {
      return false;
    }
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// ActionSpace

ActionSpace ActionSpace::Finite(std::vector<Action> points) {
  if (points.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "finite space has no points");
  }
  ActionSpace s;
  s.kind_ = Kind::kFinite;
  s.dim_ = static_cast<int>(points.front().size());
  for (std::size_t a = 0; a < points.size(); ++a) {
    if (static_cast<int>(points[a].size()) != s.dim_) {
      throw Error(ErrorKind::kDimension, "finite points of mixed dimension");
    }
    for (std::size_t b = 0; b < a; ++b) {
      if (SameAction(points[a], points[b])) {
        throw Error(ErrorKind::kInvalidArgument,
                    "finite space has duplicate points");
      }
    }
  }
  s.points_ = std::move(points);
  s.ComputeFlags();
  return s;
}

ActionSpace ActionSpace::Box(Action lo, Action hi, bool open_lo, bool open_hi) {
  if (lo.size() != hi.size() || lo.empty()) {
    throw Error(ErrorKind::kDimension, "box lo/hi dimension mismatch");
  }
  for (std::size_t k = 0; k < lo.size(); ++k) {
    if (!(lo[k] <= hi[k]) || !std::isfinite(lo[k]) || !std::isfinite(hi[k])) {
      throw Error(ErrorKind::kInvalidArgument, "box requires finite lo <= hi");
    }
  }
  ActionSpace s;
  s.kind_ = Kind::kBox;
  s.dim_ = static_cast<int>(lo.size());
  s.lo_ = std::move(lo);
  s.hi_ = std::move(hi);
  s.open_lo_ = open_lo;
  s.open_hi_ = open_hi;
  s.ComputeFlags();
  return s;
}

ActionSpace ActionSpace::All(int dim) {
  if (dim < 1) throw Error(ErrorKind::kDimension, "dimension must be >= 1");
  ActionSpace s;
  s.kind_ = Kind::kAll;
  s.dim_ = dim;
  s.ComputeFlags();
  return s;
}

void ActionSpace::ComputeFlags() {
  Action zero(dim_, 0.0);
  switch (kind_) {
    case Kind::kAll:
      contains_zero_ = true;
      symmetric_ = true;
      break;
    case Kind::kFinite: {
      contains_zero_ = IndexOf(zero).has_value();
      symmetric_ = true;
      for (const auto& p : points_) {
        Action neg(p.size());
        for (std::size_t k = 0; k < p.size(); ++k) neg[k] = -p[k];
        if (!IndexOf(neg)) {
          symmetric_ = false;
          break;
        }
      }
      break;
    }
    case Kind::kBox: {
      contains_zero_ = Contains(zero);
      // -x in K for every x in K: the interval must be mirrored and the
      // open/closed status of both faces must agree.
      symmetric_ = open_lo_ == open_hi_;
      for (int k = 0; k < dim_; ++k) {
        if (lo_[k] != -hi_[k]) symmetric_ = false;
      }
      break;
    }
  }
}

std::optional<std::size_t> ActionSpace::IndexOf(const Action& a) const {
  for (std::size_t t = 0; t < points_.size(); ++t) {
    if (SameAction(points_[t], a)) return t;
  }
  return std::nullopt;
}

bool ActionSpace::Contains(const Action& a) const {
  if (static_cast<int>(a.size()) != dim_) return false;
  switch (kind_) {
    case Kind::kAll:
      for (double v : a) {
        if (!std::isfinite(v)) return false;
      }
      return true;
    case Kind::kFinite:
      return IndexOf(a).has_value();
    case Kind::kBox:
      for (int k = 0; k < dim_; ++k) {
        double slack_lo = kPointMatchTol * (1.0 + std::abs(lo_[k]));
        double slack_hi = kPointMatchTol * (1.0 + std::abs(hi_[k]));
        if (open_lo_ ? !(a[k] > lo_[k]) : a[k] < lo_[k] - slack_lo) {
          return false;
        }
        if (open_hi_ ? !(a[k] < hi_[k]) : a[k] > hi_[k] + slack_hi) {
          return false;
        }
      }
      return true;
  }
  return false;
}

Action ActionSpace::SampleLo() const {
  Action lo = lo_;
  if (open_lo_) {
    for (int k = 0; k < dim_; ++k) lo[k] += 1e-3 * (hi_[k] - lo_[k]);
  }
  return lo;
}

Action ActionSpace::SampleHi() const {
  Action hi = hi_;
  if (open_hi_) {
    for (int k = 0; k < dim_; ++k) hi[k] -= 1e-3 * (hi_[k] - lo_[k]);
  }
  return hi;
}

Action ActionSpace::Sample(std::mt19937_64& rng, double radius) const {
  Action a(dim_);
  switch (kind_) {
    case Kind::kFinite: {
      std::uniform_int_distribution<std::size_t> pick(0, points_.size() - 1);
      return points_[pick(rng)];
    }
    case Kind::kBox: {
      Action lo = SampleLo(), hi = SampleHi();
      for (int k = 0; k < dim_; ++k) {
        std::uniform_real_distribution<double> u(lo[k], hi[k]);
        a[k] = lo[k] == hi[k] ? lo[k] : u(rng);
      }
      return a;
    }
    case Kind::kAll: {
      std::uniform_real_distribution<double> u(-radius, radius);
      for (int k = 0; k < dim_; ++k) a[k] = u(rng);
      return a;
    }
  }
  return a;
}

// ---------------------------------------------------------------------------
// CongestionNetwork

std::vector<int> CongestionNetwork::Loads(
    const std::vector<int>& choice) const {
  std::vector<int> load(edges.size(), 0);
  for (int r : choice) {
    for (int e : routes.at(r)) ++load[e];
  }
  return load;
}

double CongestionNetwork::PlayerCost(int player,
                                     const std::vector<int>& choice) const {
  std::vector<int> load = Loads(choice);
  double c = 0.0;
  for (int e : routes.at(choice.at(player))) c += edges[e].cost.at(load[e] - 1);
  return c;
}

double CongestionNetwork::Rosenthal(const std::vector<int>& choice) const {
  std::vector<int> load = Loads(choice);
  double phi = 0.0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    for (int k = 1; k <= load[e]; ++k) phi += edges[e].cost.at(k - 1);
  }
  return phi;
}

double CongestionNetwork::MaxEdgeCost() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& e : edges) {
    for (double c : e.cost) m = std::max(m, c);
  }
  return m;
}

// ---------------------------------------------------------------------------
// GameSpec

GameSpec::GameSpec(std::vector<ActionSpace> spaces, Costs costs,
                   ParamEnv params)
    : spaces_(std::move(spaces)),
      costs_(std::move(costs)),
      params_(std::move(params)) {
  if (spaces_.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "a game needs at least 1 player");
  }
  for (const auto& s : spaces_) dims_.push_back(s.dim());
  const int n = num_players();
  if (auto* ec = std::get_if<ExprCosts>(&costs_)) {
    if (static_cast<int>(ec->exprs.size()) != n) {
      throw Error(ErrorKind::kDimension, "need one cost expression per player");
    }
    aggregative_ = true;
    for (int i = 0; i < n; ++i) {
      for (const auto& p : FreeParams(ec->exprs[i])) {
        if (!params_.count(p)) {
          throw Error(ErrorKind::kInvalidArgument,
                      "cost of player " + std::to_string(i + 1) +
                          " uses unbound parameter '" + p + "'");
        }
      }
      if (!UsesOnlyOwnAndAggregate(ec->exprs[i], i)) aggregative_ = false;
    }
    // Aggregative games need a common action dimension.
    for (int d : dims_) {
      if (d != dims_[0]) aggregative_ = false;
    }
  } else if (auto* tc = std::get_if<TableCosts>(&costs_)) {
    if (!is_finite()) {
      throw Error(ErrorKind::kInvalidArgument,
                  "table costs require finite action spaces");
    }
    if (static_cast<int>(tc->tables.size()) != n) {
      throw Error(ErrorKind::kDimension, "need one cost table per player");
    }
    for (const auto& t : tc->tables) {
      if (t.size() != NumProfiles()) {
        throw Error(ErrorKind::kDimension,
                    "cost table size does not match action sets");
      }
      for (double v : t) {
        if (!std::isfinite(v)) {
          throw Error(ErrorKind::kInvalidArgument, "non-finite table entry");
        }
      }
    }
  } else {
    const auto& net = std::get<CongestionCosts>(costs_).network;
    if (net.routes.empty()) {
      throw Error(ErrorKind::kInvalidArgument, "congestion game has no routes");
    }
    for (const auto& s : spaces_) {
      if (!s.is_finite() || s.size() != net.routes.size()) {
        throw Error(ErrorKind::kDimension,
                    "congestion players need one action per route");
      }
    }
    for (const auto& e : net.edges) {
      if (static_cast<int>(e.cost.size()) != n) {
        throw Error(ErrorKind::kDimension,
                    "edge '" + e.id + "' needs one cost entry per load 1..N");
      }
      for (double v : e.cost) {
        if (!std::isfinite(v)) {
          throw Error(ErrorKind::kInvalidArgument, "non-finite edge cost");
        }
      }
    }
    for (const auto& r : net.routes) {
      if (r.empty()) {
        throw Error(ErrorKind::kInvalidArgument, "empty route");
      }
    }
    if (!net.origin_loop_cost.empty() &&
        static_cast<int>(net.origin_loop_cost.size()) != n) {
      throw Error(ErrorKind::kDimension,
                  "origin_loop_cost needs one entry per player");
    }
  }
}

bool GameSpec::is_finite() const {
  return std::all_of(spaces_.begin(), spaces_.end(),
                     [](const ActionSpace& s) { return s.is_finite(); });
}

bool GameSpec::integer_valued() const {
  auto integral = [](double v) {
    return std::floor(v) == v && std::abs(v) < 4.5e15;
  };
  if (auto* tc = std::get_if<TableCosts>(&costs_)) {
    for (const auto& t : tc->tables) {
      if (!std::all_of(t.begin(), t.end(), integral)) return false;
    }
    return true;
  }
  if (auto* cc = std::get_if<CongestionCosts>(&costs_)) {
    for (const auto& e : cc->network.edges) {
      if (!std::all_of(e.cost.begin(), e.cost.end(), integral)) return false;
    }
    return true;
  }
  return false;
}

bool GameSpec::all_convex() const {
  return std::none_of(spaces_.begin(), spaces_.end(),
                      [](const ActionSpace& s) { return s.is_finite(); });
}

bool GameSpec::zero_symmetric_gate() const {
  return std::all_of(spaces_.begin(), spaces_.end(), [](const ActionSpace& s) {
    return s.contains_zero() && s.symmetric();
  });
}

bool GameSpec::all_space_gate() const {
  return std::all_of(spaces_.begin(), spaces_.end(), [](const ActionSpace& s) {
    return s.kind() == ActionSpace::Kind::kAll;
  });
}

bool GameSpec::Contains(const JointStrategy& x) const {
  if (static_cast<int>(x.num_players()) != num_players()) return false;
  for (int i = 0; i < num_players(); ++i) {
    if (!spaces_[i].Contains(x[i])) return false;
  }
  return true;
}

JointStrategy GameSpec::ZeroStrategy() const {
  JointStrategy z;
  for (int d : dims_) z.actions.emplace_back(d, 0.0);
  return z;
}

double GameSpec::Cost(int player, const JointStrategy& x) const {
  if (player < 0 || player >= num_players()) {
    throw Error(ErrorKind::kInvalidArgument, "player index out of range");
  }
  if (static_cast<int>(x.num_players()) != num_players()) {
    throw Error(ErrorKind::kDimension, "strategy has wrong number of players");
  }
  if (auto* ec = std::get_if<ExprCosts>(&costs_)) {
    if (!Contains(x)) {
      throw Error(ErrorKind::kOutOfSpace,
                  "strategy " + ToString(x) + " is outside K");
    }
    return Evaluate(ec->exprs[player], x, params_);
  }
  std::vector<std::size_t> idx = ActionIndices(x);
  if (auto* tc = std::get_if<TableCosts>(&costs_)) {
    return tc->tables[player][ProfileIndex(idx)];
  }
  const auto& net = std::get<CongestionCosts>(costs_).network;
  std::vector<int> choice(idx.begin(), idx.end());
  return net.PlayerCost(player, choice);
}

std::uint64_t GameSpec::NumProfiles() const {
  std::uint64_t n = 1;
  for (const auto& s : spaces_) {
    if (!s.is_finite()) {
      throw Error(ErrorKind::kInvalidArgument, "game is not finite");
    }
    if (n > std::numeric_limits<std::uint64_t>::max() / s.size()) {
      throw Error(ErrorKind::kSizeGuard, "joint action set too large");
    }
    n *= s.size();
  }
  return n;
}

JointStrategy GameSpec::ProfileAt(std::uint64_t index) const {
  std::vector<std::size_t> idx(spaces_.size());
  for (int i = num_players() - 1; i >= 0; --i) {
    idx[i] = index % spaces_[i].size();
    index /= spaces_[i].size();
  }
  return ProfileFromIndices(idx);
}

JointStrategy GameSpec::ProfileFromIndices(
    const std::vector<std::size_t>& idx) const {
  JointStrategy x;
  for (int i = 0; i < num_players(); ++i) {
    x.actions.push_back(spaces_[i].points().at(idx[i]));
  }
  return x;
}

std::vector<std::size_t> GameSpec::ActionIndices(const JointStrategy& x) const {
  if (static_cast<int>(x.num_players()) != num_players()) {
    throw Error(ErrorKind::kDimension, "strategy has wrong number of players");
  }
  std::vector<std::size_t> idx(spaces_.size());
  for (int i = 0; i < num_players(); ++i) {
    auto t = spaces_[i].IndexOf(x[i]);
    if (!t) {
      throw Error(ErrorKind::kOutOfSpace,
                  "action of player " + std::to_string(i + 1) + " in " +
                      ToString(x) + " is not in K_" + std::to_string(i + 1));
    }
    idx[i] = *t;
  }
  return idx;
}

std::uint64_t GameSpec::ProfileIndex(
    const std::vector<std::size_t>& idx) const {
  std::uint64_t flat = 0;
  for (int i = 0; i < num_players(); ++i) {
    flat = flat * spaces_[i].size() + idx[i];
  }
  return flat;
}

double EffectiveTolerance(const GameSpec& g, double tol) {
  return g.integer_valued() ? 0.0 : tol;
}

// ---------------------------------------------------------------------------
// JSON loading

namespace {

const Json& Require(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "/" + key, "missing key");
  return *it;
}

double ReadNumber(const Json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(path, "expected a finite number");
  return v;
}

std::vector<double> ReadVector(const Json& j, const std::string& path) {
  if (j.is_number()) return {ReadNumber(j, path)};
  if (!j.is_array()) throw SchemaError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    out.push_back(ReadNumber(j[k], path + "/" + std::to_string(k)));
  }
  return out;
}

// Flattens an N-deep nested array with the given shape (row-major).
void ReadTable(const Json& j, const std::vector<std::size_t>& shape,
               std::size_t depth, const std::string& path,
               std::vector<double>& out) {
  if (depth == shape.size()) {
    out.push_back(ReadNumber(j, path));
    return;
  }
  if (!j.is_array() || j.size() != shape[depth]) {
    throw SchemaError(
        path, "expected an array of length " + std::to_string(shape[depth]));
  }
  for (std::size_t k = 0; k < j.size(); ++k) {
    ReadTable(j[k], shape, depth + 1, path + "/" + std::to_string(k), out);
  }
}

// Shape of a nested array along its first elements.
std::vector<std::size_t> NestedShape(const Json& j, std::size_t depth) {
  std::vector<std::size_t> shape;
  const Json* cur = &j;
  for (std::size_t d = 0; d < depth && cur->is_array() && !cur->empty(); ++d) {
    shape.push_back(cur->size());
    cur = &(*cur)[0];
  }
  return shape;
}

ActionSpace ReadSpace(const Json& j, int dim, const std::string& path) {
  const Json& kind = Require(j, "kind", path);
  if (!kind.is_string()) throw SchemaError(path + "/kind", "expected string");
  const std::string k = kind.get<std::string>();
  try {
    if (k == "finite") {
      const Json& pts = Require(j, "points", path);
      if (!pts.is_array() || pts.empty()) {
        throw SchemaError(path + "/points", "expected a non-empty array");
      }
      std::vector<Action> points;
      for (std::size_t t = 0; t < pts.size(); ++t) {
        points.push_back(
            ReadVector(pts[t], path + "/points/" + std::to_string(t)));
        if (static_cast<int>(points.back().size()) != dim) {
          throw SchemaError(path + "/points/" + std::to_string(t),
                            "point dimension does not match dims");
        }
      }
      return ActionSpace::Finite(std::move(points));
    }
    if (k == "box") {
      Action lo = ReadVector(Require(j, "lo", path), path + "/lo");
      Action hi = ReadVector(Require(j, "hi", path), path + "/hi");
      if (static_cast<int>(lo.size()) != dim ||
          static_cast<int>(hi.size()) != dim) {
        throw SchemaError(path, "box bounds do not match dims");
      }
      bool open_lo = j.value("open_lo", false);
      bool open_hi = j.value("open_hi", false);
      return ActionSpace::Box(std::move(lo), std::move(hi), open_lo, open_hi);
    }
    if (k == "all") return ActionSpace::All(dim);
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(path, e.what());
  }
  throw SchemaError(path + "/kind", "unknown space kind '" + k + "'");
}

}  // namespace

GameSpec LoadGameSpec(std::string_view json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw SchemaError("", "expected an object");

  const Json& players = Require(root, "players", "");
  if (!players.is_number_integer() || players.get<long long>() < 1) {
    throw SchemaError("/players", "expected a positive integer");
  }
  const int n = static_cast<int>(players.get<long long>());

  std::vector<int> dims(n, 1);
  if (root.contains("dims")) {
    const Json& jd = root["dims"];
    if (!jd.is_array() || static_cast<int>(jd.size()) != n) {
      throw SchemaError("/dims", "expected one positive integer per player");
    }
    for (int i = 0; i < n; ++i) {
      if (!jd[i].is_number_integer() || jd[i].get<long long>() < 1) {
        throw SchemaError("/dims/" + std::to_string(i),
                          "expected a positive integer");
      }
      dims[i] = static_cast<int>(jd[i].get<long long>());
    }
  }

  ParamEnv params;
  if (root.contains("params")) {
    const Json& jp = root["params"];
    if (!jp.is_object()) throw SchemaError("/params", "expected an object");
    for (auto it = jp.begin(); it != jp.end(); ++it) {
      params[it.key()] = ReadNumber(it.value(), "/params/" + it.key());
    }
  }

  const Json& jc = Require(root, "costs", "");
  const Json& ckind = Require(jc, "kind", "/costs");
  if (!ckind.is_string()) throw SchemaError("/costs/kind", "expected string");
  const std::string cost_kind = ckind.get<std::string>();

  std::vector<ActionSpace> spaces;
  if (root.contains("spaces")) {
    const Json& js = root["spaces"];
    if (!js.is_array() || static_cast<int>(js.size()) != n) {
      throw SchemaError("/spaces", "expected one space per player");
    }
    for (int i = 0; i < n; ++i) {
      spaces.push_back(
          ReadSpace(js[i], dims[i], "/spaces/" + std::to_string(i)));
    }
  }

  auto default_finite = [&](const std::vector<std::size_t>& sizes) {
    for (int i = 0; i < n; ++i) {
      if (dims[i] != 1) {
        throw SchemaError("/spaces", "spaces are required when dims != 1");
      }
      std::vector<Action> pts;
      for (std::size_t t = 1; t <= sizes[i]; ++t) {
        pts.push_back({static_cast<double>(t)});
      }
      spaces.push_back(ActionSpace::Finite(std::move(pts)));
    }
  };

  try {
    if (cost_kind == "expr") {
      const Json& je = Require(jc, "exprs", "/costs");
      if (!je.is_array() || static_cast<int>(je.size()) != n) {
        throw SchemaError("/costs/exprs", "expected " + std::to_string(n) +
                                              " expression strings");
      }
      if (spaces.empty()) throw SchemaError("/spaces", "missing key");
      ExprCosts ec;
      for (int i = 0; i < n; ++i) {
        const std::string path = "/costs/exprs/" + std::to_string(i);
        if (!je[i].is_string()) throw SchemaError(path, "expected a string");
        try {
          ec.exprs.push_back(ParseExpression(je[i].get<std::string>(), dims));
        } catch (const Error& e) {
          throw Error(e.kind(), path + ": " + e.what());
        }
      }
      return GameSpec(std::move(spaces), std::move(ec), std::move(params));
    }
    if (cost_kind == "table") {
      const Json& jt = Require(jc, "tables", "/costs");
      if (!jt.is_array() || static_cast<int>(jt.size()) != n) {
        throw SchemaError("/costs/tables",
                          "expected " + std::to_string(n) + " tables");
      }
      if (spaces.empty()) {
        std::vector<std::size_t> shape = NestedShape(jt[0], n);
        if (static_cast<int>(shape.size()) != n) {
          throw SchemaError(
              "/costs/tables/0",
              "expected an array nested " + std::to_string(n) + " levels deep");
        }
        default_finite(shape);
      }
      std::vector<std::size_t> shape;
      for (const auto& s : spaces) {
        if (!s.is_finite()) {
          throw SchemaError("/spaces", "table costs need finite spaces");
        }
        shape.push_back(s.size());
      }
      TableCosts tc;
      for (int i = 0; i < n; ++i) {
        std::vector<double> flat;
        ReadTable(jt[i], shape, 0, "/costs/tables/" + std::to_string(i), flat);
        tc.tables.push_back(std::move(flat));
      }
      return GameSpec(std::move(spaces), std::move(tc), std::move(params));
    }
    if (cost_kind == "congestion") {
      CongestionNetwork net;
      const Json& je = Require(jc, "edges", "/costs");
      if (!je.is_array()) throw SchemaError("/costs/edges", "expected array");
      std::map<std::string, int> edge_index;
      for (std::size_t e = 0; e < je.size(); ++e) {
        const std::string path = "/costs/edges/" + std::to_string(e);
        const Json& id = Require(je[e], "id", path);
        std::string sid = id.is_string() ? id.get<std::string>() : id.dump();
        if (edge_index.count(sid)) {
          throw SchemaError(path + "/id", "duplicate edge id '" + sid + "'");
        }
        std::vector<double> cost =
            ReadVector(Require(je[e], "cost", path), path + "/cost");
        if (static_cast<int>(cost.size()) != n) {
          throw SchemaError(path + "/cost",
                            "expected one entry per possible load 1..N");
        }
        edge_index[sid] = static_cast<int>(e);
        net.edges.push_back({sid, std::move(cost)});
      }
      const Json& jr = Require(jc, "routes", "/costs");
      if (!jr.is_array() || jr.empty()) {
        throw SchemaError("/costs/routes", "expected a non-empty array");
      }
      for (std::size_t r = 0; r < jr.size(); ++r) {
        const std::string path = "/costs/routes/" + std::to_string(r);
        if (!jr[r].is_array() || jr[r].empty()) {
          throw SchemaError(path, "expected a non-empty array of edge ids");
        }
        std::vector<int> route;
        for (std::size_t k = 0; k < jr[r].size(); ++k) {
          const Json& id = jr[r][k];
          std::string sid = id.is_string() ? id.get<std::string>() : id.dump();
          auto it = edge_index.find(sid);
          if (it == edge_index.end()) {
            throw SchemaError(path + "/" + std::to_string(k),
                              "unknown edge id '" + sid + "'");
          }
          if (std::find(route.begin(), route.end(), it->second) !=
              route.end()) {
            throw SchemaError(path + "/" + std::to_string(k),
                              "edge repeated within a route");
          }
          route.push_back(it->second);
        }
        net.routes.push_back(std::move(route));
      }
      if (jc.contains("origin_loop_cost")) {
        net.origin_loop_cost =
            ReadVector(jc["origin_loop_cost"], "/costs/origin_loop_cost");
        if (static_cast<int>(net.origin_loop_cost.size()) != n) {
          throw SchemaError("/costs/origin_loop_cost",
                            "expected one entry per player");
        }
      } else {
        net.origin_loop_cost.assign(n, 0.0);
      }
      if (spaces.empty()) {
        default_finite(std::vector<std::size_t>(n, net.routes.size()));
      }
      return GameSpec(std::move(spaces), CongestionCosts{std::move(net)},
                      std::move(params));
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kParse ||
        e.kind() == ErrorKind::kUnknownVariable) {
      throw;
    }
    throw Error(e.kind() == ErrorKind::kDimension ? ErrorKind::kDimension
                                                  : ErrorKind::kSchema,
                e.what());
  }
  throw SchemaError("/costs/kind", "unknown cost kind '" + cost_kind + "'");
}

GameSpec LoadGameSpecFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return LoadGameSpec(ss.str());
}

namespace {

Json ActionJson(const Action& a) {
  Json j = Json::array();
  for (double v : a) j.push_back(v);
  return j;
}

Json NestTable(const std::vector<double>& flat,
               const std::vector<std::size_t>& shape, std::size_t depth,
               std::size_t& offset) {
  if (depth == shape.size()) return flat[offset++];
  Json j = Json::array();
  for (std::size_t k = 0; k < shape[depth]; ++k) {
    j.push_back(NestTable(flat, shape, depth + 1, offset));
  }
  return j;
}

}  // namespace

Json GameSpecToJson(const GameSpec& g) {
  Json root;
  root["players"] = g.num_players();
  root["dims"] = g.dims();
  Json spaces = Json::array();
  for (const auto& s : g.spaces()) {
    Json js;
    switch (s.kind()) {
      case ActionSpace::Kind::kFinite: {
        js["kind"] = "finite";
        Json pts = Json::array();
        for (const auto& p : s.points()) pts.push_back(ActionJson(p));
        js["points"] = pts;
        break;
      }
      case ActionSpace::Kind::kBox:
        js["kind"] = "box";
        js["lo"] = ActionJson(s.lo());
        js["hi"] = ActionJson(s.hi());
        if (s.open_lo()) js["open_lo"] = true;
        if (s.open_hi()) js["open_hi"] = true;
        break;
      case ActionSpace::Kind::kAll:
        js["kind"] = "all";
        break;
    }
    spaces.push_back(js);
  }
  root["spaces"] = spaces;
  Json params = Json::object();
  for (const auto& [k, v] : g.params()) params[k] = v;
  root["params"] = params;
  Json costs;
  if (g.has_expr_costs()) {
    costs["kind"] = "expr";
    Json ex = Json::array();
    for (const auto& e : g.expr_costs().exprs) ex.push_back(e.ToString());
    costs["exprs"] = ex;
  } else if (const auto* tc = std::get_if<TableCosts>(&g.costs())) {
    costs["kind"] = "table";
    std::vector<std::size_t> shape;
    for (const auto& s : g.spaces()) shape.push_back(s.size());
    Json tables = Json::array();
    for (const auto& t : tc->tables) {
      std::size_t offset = 0;
      tables.push_back(NestTable(t, shape, 0, offset));
    }
    costs["tables"] = tables;
  } else {
    const auto& net = g.network();
    costs["kind"] = "congestion";
    Json edges = Json::array();
    for (const auto& e : net.edges) {
      edges.push_back({{"id", e.id}, {"cost", e.cost}});
    }
    costs["edges"] = edges;
    Json routes = Json::array();
    for (const auto& r : net.routes) {
      Json jr = Json::array();
      for (int e : r) jr.push_back(net.edges[e].id);
      routes.push_back(jr);
    }
    costs["routes"] = routes;
    costs["origin_loop_cost"] = net.origin_loop_cost;
  }
  root["costs"] = costs;
  return root;
}

Json ActionToJson(const Action& a) { return ActionJson(a); }

Json StrategyToJson(const JointStrategy& x) {
  Json j = Json::array();
  for (const auto& a : x.actions) j.push_back(ActionJson(a));
  return j;
}

JointStrategy StrategyFromJson(const Json& j, const GameSpec& g) {
  if (!j.is_array() || static_cast<int>(j.size()) != g.num_players()) {
    throw SchemaError("", "expected one action per player");
  }
  JointStrategy x;
  for (int i = 0; i < g.num_players(); ++i) {
    Action a = ReadVector(j[i], "/" + std::to_string(i));
    if (static_cast<int>(a.size()) != g.dims()[i]) {
      throw SchemaError("/" + std::to_string(i),
                        "action dimension does not match the game");
    }
    x.actions.push_back(std::move(a));
  }
  return x;
}

// ---------------------------------------------------------------------------
// Sampling

std::vector<JointStrategy> SampleStrategies(const GameSpec& g,
                                            const SamplingOptions& opts) {
  std::vector<JointStrategy> out;
  const std::int64_t count = std::max<std::int64_t>(opts.count, 1);
  std::mt19937_64 rng(opts.seed);

  if (g.is_finite()) {
    const std::uint64_t total = g.NumProfiles();
    if (total <= static_cast<std::uint64_t>(count)) {
      for (std::uint64_t k = 0; k < total; ++k) out.push_back(g.ProfileAt(k));
      return out;
    }
    // Floyd's algorithm: count distinct indices without replacement.
    std::unordered_set<std::uint64_t> chosen;
    std::vector<std::uint64_t> order;
    for (std::uint64_t j = total - count; j < total; ++j) {
      std::uniform_int_distribution<std::uint64_t> pick(0, j);
      std::uint64_t t = pick(rng);
      if (chosen.insert(t).second) {
        order.push_back(t);
      } else {
        chosen.insert(j);
        order.push_back(j);
      }
    }
    for (auto k : order) out.push_back(g.ProfileAt(k));
    return out;
  }

  const int n = g.num_players();
  if (g.all_convex()) {
    bool all_zero =
        std::all_of(g.spaces().begin(), g.spaces().end(),
                    [](const ActionSpace& s) { return s.contains_zero(); });
    if (all_zero) out.push_back(g.ZeroStrategy());

    // Coordinates that have a lo/hi pair.
    std::vector<std::pair<int, int>> box_coords;
    for (int i = 0; i < n; ++i) {
      if (g.space(i).kind() == ActionSpace::Kind::kBox) {
        for (int k = 0; k < g.space(i).dim(); ++k) box_coords.push_back({i, k});
      }
    }
    if (!box_coords.empty()) {
      JointStrategy base = g.ZeroStrategy();
      std::vector<Action> lo(n), hi(n);
      for (int i = 0; i < n; ++i) {
        if (g.space(i).kind() == ActionSpace::Kind::kBox) {
          lo[i] = g.space(i).SampleLo();
          hi[i] = g.space(i).SampleHi();
        }
      }
      const std::size_t bits = std::min<std::size_t>(box_coords.size(), 10);
      const std::uint64_t corners = std::uint64_t{1} << bits;
      for (std::uint64_t mask = 0; mask < corners; ++mask) {
        JointStrategy c = base;
        for (std::size_t b = 0; b < box_coords.size(); ++b) {
          auto [i, k] = box_coords[b];
          bool up = b < bits && ((mask >> b) & 1);
          c[i][k] = up ? hi[i][k] : lo[i][k];
        }
        out.push_back(std::move(c));
      }
      JointStrategy mid = base;
      for (auto [i, k] : box_coords) mid[i][k] = 0.5 * (lo[i][k] + hi[i][k]);
      out.push_back(std::move(mid));
    }
  }
  while (static_cast<std::int64_t>(out.size()) < count) {
    JointStrategy x;
    for (int i = 0; i < n; ++i) {
      x.actions.push_back(g.space(i).Sample(rng, opts.radius));
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<std::pair<JointStrategy, JointStrategy>> SamplePairs(
    const GameSpec& g, const SamplingOptions& opts) {
  std::vector<std::pair<JointStrategy, JointStrategy>> out;
  SamplingOptions first = opts;
  SamplingOptions second = opts;
  second.seed = opts.seed + 1;
  auto zs = SampleStrategies(g, first);
  auto ws = SampleStrategies(g, second);
  std::mt19937_64 rng(opts.seed + 2);
  std::shuffle(ws.begin(), ws.end(), rng);
  const std::size_t m = std::min(zs.size(), ws.size());
  for (std::size_t k = 0; k < m; ++k) out.emplace_back(zs[k], ws[k]);
  return out;
}

// ---------------------------------------------------------------------------
// Abnormality

TestReport DetectAbnormal(const GameSpec& g, const SamplingOptions& opts,
                          double tol) {
  TestReport r;
  r.method = "abnormal";
  const double eff_tol = EffectiveTolerance(g, tol);
  const int n = g.num_players();

  // Contexts x_{-i} come from joint samples; own actions from a separate
  // per-player draw (all points for finite spaces).
  SamplingOptions ctx_opts = opts;
  ctx_opts.count = std::max<std::int64_t>(1, opts.count / 10);
  auto contexts = SampleStrategies(g, ctx_opts);
  bool exhaustive = g.is_finite() && contexts.size() == g.NumProfiles();

  std::mt19937_64 rng(opts.seed + 7);
  Json per_player = Json::array();
  std::optional<int> abnormal_player;
  double max_spread_all = 0.0;
  for (int i = 0; i < n; ++i) {
    std::vector<Action> own;
    if (g.space(i).is_finite()) {
      own = g.space(i).points();
    } else {
      own.push_back(g.space(i).SampleLo());
      own.push_back(g.space(i).SampleHi());
      if (g.space(i).kind() == ActionSpace::Kind::kAll) {
        own = {Action(g.space(i).dim(), -opts.radius),
               Action(g.space(i).dim(), opts.radius)};
      }
      if (g.space(i).contains_zero()) own.emplace_back(g.space(i).dim(), 0.0);
      for (int t = 0; t < 8; ++t)
        own.push_back(g.space(i).Sample(rng, opts.radius));
    }
    double best_spread = -1.0;
    Json best;
    for (const auto& ctx : contexts) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      std::size_t arg_lo = 0, arg_hi = 0;
      for (std::size_t t = 0; t < own.size(); ++t) {
        double c = g.Cost(i, ctx.With(i, own[t]));
        ++r.samples_used;
        if (c < lo) lo = c, arg_lo = t;
        if (c > hi) hi = c, arg_hi = t;
      }
      double spread = hi - lo;
      if (spread > best_spread) {
        best_spread = spread;
        best = {{"player", i + 1},
                {"x_i", own[arg_lo]},
                {"x_i_prime", own[arg_hi]},
                {"context", ToString(ctx)},
                {"spread", spread},
                {"scale", std::max(std::abs(lo), std::abs(hi))}};
      }
    }
    max_spread_all = std::max(max_spread_all, best_spread);
    bool varies = best_spread > Band(eff_tol, best.value("scale", 0.0));
    best["varies"] = varies;
    per_player.push_back(best);
    if (!varies && !abnormal_player) abnormal_player = i;
  }
  r.exhaustive = exhaustive;
  r.residual_max = max_spread_all;
  r.extra["players"] = per_player;
  if (abnormal_player) {
    r.verdict = Verdict::kFail;
    r.witness = Json{{"player", *abnormal_player + 1}};
    r.conclusion = "abnormal: the cost of player " +
                   std::to_string(*abnormal_player + 1) +
                   " does not vary with its own action at any sampled context";
  } else {
    r.verdict = Verdict::kPass;
    r.conclusion = exhaustive ? "not abnormal" : "not abnormal (sampled)";
  }
  return r;
}

// ---------------------------------------------------------------------------
// Congestion expansion

double AugmentationConstant(const CongestionNetwork& net, int num_players) {
  return 1.0 + num_players * net.MaxEdgeCost();
}

CongestionNetwork AugmentNetwork(const CongestionNetwork& net,
                                 int num_players) {
  const double big = AugmentationConstant(net, num_players);
  const int m = static_cast<int>(net.routes.size());
  CongestionNetwork aug;
  aug.edges = net.edges;
  aug.origin_loop_cost = net.origin_loop_cost;
  std::vector<int> artificial(m);
  for (int r = 0; r < m; ++r) {
    artificial[r] = static_cast<int>(aug.edges.size());
    aug.edges.push_back({"artificial_" + std::to_string(r + 1),
                         std::vector<double>(num_players, big)});
  }
  const int loop = static_cast<int>(aug.edges.size());
  std::vector<double> loop_cost(num_players, big);
  for (int k = 0; k < num_players; ++k) {
    if (k < static_cast<int>(net.origin_loop_cost.size())) {
      loop_cost[k] += net.origin_loop_cost[k];
    }
  }
  aug.edges.push_back({"origin_loop", loop_cost});
  // Actions -m..-1, 0, 1..m.
  for (int r = m - 1; r >= 0; --r) aug.routes.push_back({artificial[r]});
  aug.routes.push_back({loop});
  for (const auto& route : net.routes) aug.routes.push_back(route);
  return aug;
}

GameSpec ExpandCongestionGame(const GameSpec& g, bool augment) {
  if (!g.is_congestion()) {
    throw Error(ErrorKind::kInvalidArgument, "not a congestion game");
  }
  const int n = g.num_players();
  const CongestionNetwork& base = g.network();
  const int m = static_cast<int>(base.routes.size());
  if (m == 0) throw Error(ErrorKind::kInvalidArgument, "no routes");
  CongestionNetwork net = augment ? AugmentNetwork(base, n) : base;

  std::vector<Action> points;
  if (augment) {
    for (int a = -m; a <= m; ++a) points.push_back({static_cast<double>(a)});
  } else {
    for (int a = 1; a <= m; ++a) points.push_back({static_cast<double>(a)});
  }
  std::vector<ActionSpace> spaces(n, ActionSpace::Finite(points));

  const std::size_t per = points.size();
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= per;
  TableCosts tc;
  tc.tables.assign(n, std::vector<double>(total, 0.0));
  std::vector<int> choice(n, 0);
  for (std::uint64_t k = 0; k < total; ++k) {
    std::uint64_t rem = k;
    for (int i = n - 1; i >= 0; --i) {
      choice[i] = static_cast<int>(rem % per);
      rem /= per;
    }
    std::vector<int> loads = net.Loads(choice);
    for (int i = 0; i < n; ++i) {
      double c = 0.0;
      for (int e : net.routes[choice[i]]) c += net.edges[e].cost[loads[e] - 1];
      tc.tables[i][k] = c;
    }
  }
  return GameSpec(std::move(spaces), std::move(tc), g.params());
}

}  // namespace pgt
