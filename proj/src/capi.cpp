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

#include <cstdlib>
#include <cstring>
#include <memory>
#include <optional>
#include <string>

#include "criteria.hpp"
#include "equilibrium.hpp"
#include "errors.hpp"
#include "game.hpp"
#include "ordinal.hpp"
#include "pgt/pgt.h"
#include "potential.hpp"
#include "report.hpp"

struct pgt_game {
  pgt::GameSpec spec;
  // Original congestion game when `spec` is its augmented normal form.
  std::optional<pgt::GameSpec> congestion_source;
};

struct pgt_potential {
  pgt::PotentialFn fn;
  pgt::GameSpec game;  // game the potential is defined on
};

struct pgt_report {
  pgt::TestReport report;
};

namespace {

thread_local std::string last_error;

pgt_status StatusFor(pgt::ErrorKind kind) {
  using pgt::ErrorKind;
  switch (kind) {
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kDimension:
    case ErrorKind::kOutOfSpace:
      return PGT_ERR_INVALID_ARGUMENT;
    case ErrorKind::kSchema:
      return PGT_ERR_SCHEMA;
    case ErrorKind::kParse:
    case ErrorKind::kUnknownVariable:
      return PGT_ERR_PARSE;
    case ErrorKind::kDomain:
    case ErrorKind::kDivisionByZero:
      return PGT_ERR_DOMAIN;
    case ErrorKind::kInapplicable:
      return PGT_ERR_INAPPLICABLE;
    case ErrorKind::kSizeGuard:
      return PGT_ERR_SIZE_GUARD;
    case ErrorKind::kIo:
      return PGT_ERR_IO;
  }
  return PGT_ERR_INTERNAL;
}

pgt_status Fail(pgt_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs body, translating exceptions into status codes.
template <typename Fn>
pgt_status Guard(Fn&& body) {
  try {
    last_error.clear();
    body();
    return PGT_OK;
  } catch (const pgt::Error& e) {
    return Fail(StatusFor(e.kind()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return Fail(PGT_ERR_SCHEMA, std::string("invalid JSON: ") + e.what());
  } catch (const std::bad_alloc&) {
    return Fail(PGT_ERR_SIZE_GUARD, "out of memory");
  } catch (const std::exception& e) {
    return Fail(PGT_ERR_INTERNAL, e.what());
  }
}

pgt_status NullArgument(const char* name) {
  return Fail(PGT_ERR_INVALID_ARGUMENT,
              std::string(name) + " must not be NULL");
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

pgt::CheckOptions ToOptions(const pgt_options* opts) {
  pgt::CheckOptions o;
  if (opts) {
    o.tol = opts->tol;
    o.budget = opts->samples;
    o.seed = opts->seed;
    o.radius = opts->radius;
  }
  if (!(o.tol >= 0.0)) {
    throw pgt::Error(pgt::ErrorKind::kInvalidArgument, "tol must be >= 0");
  }
  if (o.budget < 0) {
    throw pgt::Error(pgt::ErrorKind::kInvalidArgument, "samples must be >= 0");
  }
  if (!(o.radius > 0.0)) {
    throw pgt::Error(pgt::ErrorKind::kInvalidArgument, "radius must be > 0");
  }
  return o;
}

pgt::JointStrategy ParseProfile(const pgt::GameSpec& g, const char* json) {
  pgt::Json j;
  try {
    j = pgt::Json::parse(json);
  } catch (const pgt::Json::parse_error& e) {
    throw pgt::SchemaError("",
                           std::string("invalid profile JSON: ") + e.what());
  }
  pgt::JointStrategy x = pgt::StrategyFromJson(j, g);
  if (!g.Contains(x)) {
    throw pgt::Error(pgt::ErrorKind::kOutOfSpace,
                     "profile " + pgt::ToString(x) + " is outside K");
  }
  return x;
}

pgt::Json ParseJson(const char* text, const char* what) {
  try {
    return pgt::Json::parse(text);
  } catch (const pgt::Json::parse_error& e) {
    throw pgt::SchemaError(
        "", std::string("invalid ") + what + " JSON: " + e.what());
  }
}

void Emit(pgt::TestReport r, pgt_report** out) {
  *out = new pgt_report{std::move(r)};
}

}  // namespace

extern "C" {

void pgt_options_init(pgt_options* opts) {
  if (!opts) return;
  opts->tol = 1e-9;
  opts->samples = 500;
  opts->seed = 0;
  opts->radius = 10.0;
}

const char* pgt_last_error(void) { return last_error.c_str(); }

const char* pgt_status_name(pgt_status status) {
  switch (status) {
    case PGT_OK:
      return "ok";
    case PGT_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case PGT_ERR_SCHEMA:
      return "schema error";
    case PGT_ERR_PARSE:
      return "parse error";
    case PGT_ERR_DOMAIN:
      return "domain error";
    case PGT_ERR_INAPPLICABLE:
      return "inapplicable";
    case PGT_ERR_SIZE_GUARD:
      return "size guard exceeded";
    case PGT_ERR_IO:
      return "I/O error";
    case PGT_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

void pgt_string_free(char* s) { std::free(s); }

pgt_status pgt_game_load_file(const char* path, pgt_game** out) {
  if (!path) return NullArgument("path");
  if (!out) return NullArgument("out");
  return Guard([&] { *out = new pgt_game{pgt::LoadGameSpecFile(path), {}}; });
}

pgt_status pgt_game_load_json(const char* json, pgt_game** out) {
  if (!json) return NullArgument("json");
  if (!out) return NullArgument("out");
  return Guard([&] { *out = new pgt_game{pgt::LoadGameSpec(json), {}}; });
}

pgt_status pgt_game_augment(const pgt_game* game, pgt_game** out) {
  if (!game) return NullArgument("game");
  if (!out) return NullArgument("out");
  return Guard([&] {
    if (!game->spec.is_congestion()) {
      throw pgt::Error(pgt::ErrorKind::kInapplicable,
                       "augmentation applies to congestion games only");
    }
    *out =
        new pgt_game{pgt::ExpandCongestionGame(game->spec, true), game->spec};
  });
}

pgt_status pgt_game_to_json(const pgt_game* game, char** out) {
  if (!game) return NullArgument("game");
  if (!out) return NullArgument("out");
  return Guard(
      [&] { *out = CopyString(pgt::GameSpecToJson(game->spec).dump(2)); });
}

int pgt_game_num_players(const pgt_game* game) {
  return game ? game->spec.num_players() : 0;
}

void pgt_game_free(pgt_game* game) { delete game; }

pgt_status pgt_check(const pgt_game* game, const char* method,
                     const pgt_options* opts, pgt_report** out) {
  if (!game) return NullArgument("game");
  if (!method) return NullArgument("method");
  if (!out) return NullArgument("out");
  return Guard([&] {
    const pgt::GameSpec& g = game->spec;
    pgt::CheckOptions o = ToOptions(opts);
    const std::string m = method;
    if (m == "cycle4") return Emit(pgt::TestFourCycles(g, o), out);
    if (m == "pairwise") return Emit(pgt::TestPairwise(g, o), out);
    if (m == "hp") return Emit(pgt::TestHpDecomposition(g, o), out);
    if (m == "hessian") return Emit(pgt::TestCrossHessian(g, o), out);
    if (m == "hp-witness") return Emit(pgt::FindHpWitness(g, o), out);
    if (m == "oracle") {
      pgt::OracleResult res = pgt::OracleFinitePotential(g, o.tol);
      if (res.table && res.table->size() <= 4096) {
        pgt::Json table = pgt::Json::array();
        for (std::uint64_t k = 0; k < res.table->size(); ++k) {
          table.push_back({{"profile", pgt::StrategyToJson(g.ProfileAt(k))},
                           {"phi", (*res.table)[k]}});
        }
        res.report.extra["potential"] = table;
      }
      return Emit(std::move(res.report), out);
    }
    throw pgt::Error(pgt::ErrorKind::kInvalidArgument,
                     "unknown check method '" + m + "'");
  });
}

pgt_status pgt_construct(const pgt_game* game, const char* method,
                         pgt_potential** out) {
  if (!game) return NullArgument("game");
  if (!method) return NullArgument("method");
  if (!out) return NullArgument("out");
  return Guard([&] {
    const std::string m = method;
    const pgt::GameSpec& g = game->spec;
    if (m == "theorem5") {
      *out = new pgt_potential{pgt::ConstructByReversePath(g), g};
    } else if (m == "theorem8") {
      *out = new pgt_potential{pgt::ConstructByPairs(g), g};
    } else if (m == "rosenthal") {
      if (game->congestion_source) {
        *out = new pgt_potential{
            pgt::ConstructRosenthal(*game->congestion_source, true), g};
      } else {
        *out = new pgt_potential{pgt::ConstructRosenthal(g, false), g};
      }
    } else {
      throw pgt::Error(pgt::ErrorKind::kInvalidArgument,
                       "unknown construction method '" + m + "'");
    }
  });
}

pgt_status pgt_potential_load_json(const pgt_game* game, const char* json,
                                   pgt_potential** out) {
  if (!game) return NullArgument("game");
  if (!json) return NullArgument("json");
  if (!out) return NullArgument("out");
  return Guard([&] {
    pgt::Json j = ParseJson(json, "potential");
    *out = new pgt_potential{pgt::PotentialFromJson(game->spec, j), game->spec};
  });
}

pgt_status pgt_potential_to_json(const pgt_potential* phi, char** out) {
  if (!phi) return NullArgument("phi");
  if (!out) return NullArgument("out");
  return Guard([&] {
    *out = CopyString(pgt::PotentialToJson(phi->game, phi->fn).dump(2));
  });
}

pgt_status pgt_potential_eval(const pgt_potential* phi,
                              const char* profile_json, double* out) {
  if (!phi) return NullArgument("phi");
  if (!profile_json) return NullArgument("profile_json");
  if (!out) return NullArgument("out");
  return Guard([&] { *out = phi->fn(ParseProfile(phi->game, profile_json)); });
}

void pgt_potential_free(pgt_potential* phi) { delete phi; }

pgt_status pgt_verify(const pgt_game* game, const pgt_potential* phi,
                      const char* mode, const pgt_options* opts,
                      pgt_report** out) {
  if (!game) return NullArgument("game");
  if (!phi) return NullArgument("phi");
  if (!mode) return NullArgument("mode");
  if (!out) return NullArgument("out");
  return Guard([&] {
    const pgt::GameSpec& g = game->spec;
    pgt::CheckOptions o = ToOptions(opts);
    const std::string m = mode;
    if (m == "exact")
      return Emit(pgt::VerifyExactPotential(g, phi->fn, o), out);
    if (m == "ordinal") {
      return Emit(pgt::VerifyOrdinalPotential(g, phi->fn, o,
                                              pgt::OrdinalMode::kOrdinal),
                  out);
    }
    if (m == "generalized") {
      return Emit(pgt::VerifyOrdinalPotential(g, phi->fn, o,
                                              pgt::OrdinalMode::kGeneralized),
                  out);
    }
    if (m == "gradient") {
      if (!phi->fn.expr) {
        return Emit(pgt::TestReport::Inapplicable(
                        "verify-gradient", "requires an expression potential"),
                    out);
      }
      return Emit(pgt::VerifyGradientMatch(g, *phi->fn.expr, o), out);
    }
    throw pgt::Error(pgt::ErrorKind::kInvalidArgument,
                     "unknown verification mode '" + m + "'");
  });
}

pgt_status pgt_ordinal(const pgt_game* game, const char* check,
                       const char* candidate_json, const double* etas,
                       size_t n_etas, const double* lipschitz,
                       const pgt_options* opts, pgt_report** out) {
  if (!game) return NullArgument("game");
  if (!check) return NullArgument("check");
  if (!out) return NullArgument("out");
  return Guard([&] {
    const pgt::GameSpec& g = game->spec;
    pgt::CheckOptions o = ToOptions(opts);
    const std::string c = check;
    if (c == "assumption1") return Emit(pgt::CheckPairSignCondition(g, o), out);
    if (c == "crosssign") {
      return Emit(
          pgt::CheckCrossPartialSigns(g, o, pgt::CrossSignMode::kGlobal), out);
    }
    if (c == "crosssign-critical") {
      return Emit(
          pgt::CheckCrossPartialSigns(g, o, pgt::CrossSignMode::kCritical),
          out);
    }
    if (c != "theorem10" && c != "theorem11" && c != "theorem12") {
      throw pgt::Error(pgt::ErrorKind::kInvalidArgument,
                       "unknown ordinal check '" + c + "'");
    }
    if (!candidate_json) {
      throw pgt::Error(pgt::ErrorKind::kInvalidArgument,
                       "check '" + c + "' needs a candidate");
    }
    if (!g.has_expr_costs()) {
      return Emit(pgt::TestReport::Inapplicable(c, "requires expression costs"),
                  out);
    }
    pgt::OrdinalCandidate cand =
        pgt::CandidateFromJson(g, ParseJson(candidate_json, "candidate"));
    if (c == "theorem11") {
      return Emit(pgt::CheckSubgradientCondition(g, cand, false, o), out);
    }
    if (c == "theorem12") {
      return Emit(pgt::CheckSubgradientCondition(g, cand, true, o), out);
    }
    pgt::ConvexityCertificate cert;
    bool need_estimate = !etas || !lipschitz;
    if (need_estimate) cert = pgt::EstimateConstants(g, cand, o);
    if (etas) {
      if (n_etas == 1) {
        cert.eta.assign(g.num_players(), etas[0]);
      } else if (static_cast<int>(n_etas) == g.num_players()) {
        cert.eta.assign(etas, etas + n_etas);
      } else {
        throw pgt::Error(pgt::ErrorKind::kInvalidArgument,
                         "need one eta or one per player");
      }
    }
    if (lipschitz) cert.lipschitz = *lipschitz;
    cert.source = need_estimate
                      ? (etas || lipschitz ? "mixed" : "sampled-estimate")
                      : "user-declared";
    return Emit(pgt::CheckStrongConvexityCondition(g, cand, cert, o), out);
  });
}

pgt_status pgt_nash(const pgt_game* game, const char* profile_json,
                    const pgt_potential* phi, const pgt_options* opts,
                    pgt_report** out) {
  if (!game) return NullArgument("game");
  if (!out) return NullArgument("out");
  return Guard([&] {
    const pgt::GameSpec& g = game->spec;
    pgt::CheckOptions o = ToOptions(opts);
    if (profile_json) {
      return Emit(pgt::VerifyNash(g, ParseProfile(g, profile_json), o), out);
    }
    pgt::Minimizer best;
    std::string source;
    if (phi) {
      best = pgt::MinimizePotential(g, phi->fn, 21, o.radius);
      source = phi->fn.method;
    } else {
      if (!g.is_finite()) {
        throw pgt::Error(pgt::ErrorKind::kInvalidArgument,
                         "nash on a continuous game needs --profile or "
                         "--potential");
      }
      pgt::OracleResult res = pgt::OracleFinitePotential(g, o.tol);
      if (!res.table) {
        pgt::TestReport r = pgt::TestReport::Inapplicable(
            "nash", "no exact potential to minimize; pass --profile");
        r.sub.push_back(res.report);
        return Emit(std::move(r), out);
      }
      pgt::PotentialFn table =
          pgt::TablePotential(g, *res.table, "oracle", "phi(lex-first)=0");
      best = pgt::MinimizePotential(g, table);
      source = "oracle";
    }
    pgt::TestReport r = pgt::VerifyNash(g, best.profile, o);
    r.extra["minimized"] = source;
    r.extra["phi_min"] = best.value;
    if (best.approximate) {
      r.notes.push_back("minimizer taken over a grid; approximate");
    }
    Emit(std::move(r), out);
  });
}

pgt_status pgt_dynamics(const pgt_game* game, const char* start_json,
                        int64_t max_steps, const pgt_potential* phi,
                        const pgt_options* opts, pgt_report** out) {
  if (!game) return NullArgument("game");
  if (!out) return NullArgument("out");
  return Guard([&] {
    const pgt::GameSpec& g = game->spec;
    pgt::CheckOptions o = ToOptions(opts);
    if (!g.is_finite()) {
      throw pgt::Error(pgt::ErrorKind::kInapplicable,
                       "dynamics require a finite game");
    }
    if (max_steps < 0) {
      throw pgt::Error(pgt::ErrorKind::kInvalidArgument,
                       "max steps must be >= 0");
    }
    pgt::JointStrategy start =
        start_json ? ParseProfile(g, start_json) : g.ProfileAt(0);
    auto res = pgt::BetterResponseDynamics(g, start, max_steps, o.tol,
                                           phi ? &phi->fn : nullptr);
    Emit(std::move(res.report), out);
  });
}

pgt_status pgt_abnormal(const pgt_game* game, const pgt_options* opts,
                        pgt_report** out) {
  if (!game) return NullArgument("game");
  if (!out) return NullArgument("out");
  return Guard([&] {
    pgt::CheckOptions o = ToOptions(opts);
    Emit(pgt::DetectAbnormal(game->spec, o.sampling(), o.tol), out);
  });
}

pgt_verdict pgt_report_verdict(const pgt_report* report) {
  if (!report) return PGT_VERDICT_INAPPLICABLE;
  switch (report->report.verdict) {
    case pgt::Verdict::kPass:
      return PGT_VERDICT_PASS;
    case pgt::Verdict::kFail:
      return PGT_VERDICT_FAIL;
    case pgt::Verdict::kInapplicable:
      return PGT_VERDICT_INAPPLICABLE;
  }
  return PGT_VERDICT_INAPPLICABLE;
}

double pgt_report_residual(const pgt_report* report) {
  return report ? report->report.residual_max : 0.0;
}

int pgt_report_exhaustive(const pgt_report* report) {
  return report && report->report.exhaustive ? 1 : 0;
}

pgt_status pgt_report_json(const pgt_report* report, int include_timing,
                           char** out) {
  if (!report) return NullArgument("report");
  if (!out) return NullArgument("out");
  return Guard([&] {
    *out = CopyString(report->report.ToJson(include_timing != 0).dump(2));
  });
}

pgt_status pgt_report_text(const pgt_report* report, char** out) {
  if (!report) return NullArgument("report");
  if (!out) return NullArgument("out");
  return Guard([&] { *out = CopyString(report->report.ToText()); });
}

void pgt_report_free(pgt_report* report) { delete report; }

}  // extern "C"
