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

// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pgt/pgt.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInapplicable = 3;

struct GameDeleter {
  void operator()(pgt_game* g) const { pgt_game_free(g); }
};
struct PotentialDeleter {
  void operator()(pgt_potential* p) const { pgt_potential_free(p); }
};
struct ReportDeleter {
  void operator()(pgt_report* r) const { pgt_report_free(r); }
};
using GamePtr = std::unique_ptr<pgt_game, GameDeleter>;
using PotentialPtr = std::unique_ptr<pgt_potential, PotentialDeleter>;
using ReportPtr = std::unique_ptr<pgt_report, ReportDeleter>;

// Thrown to unwind with an exit code after the message was printed.
struct Exit {
  int code;
};

std::string TakeString(char* s) {
  std::string out = s ? s : "";
  pgt_string_free(s);
  return out;
}

void Check(pgt_status status) {
  if (status == PGT_OK) return;
  std::string name = pgt_status_name(status);
  std::string msg = pgt_last_error();
  if (msg.rfind(name, 0) == 0) {
    std::cerr << "pgt: " << msg << "\n";
  } else {
    std::cerr << "pgt: " << name << ": " << msg << "\n";
  }
  throw Exit{status == PGT_ERR_INAPPLICABLE ? kExitInapplicable : kExitUsage};
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "pgt: cannot open '" << path << "'\n";
    throw Exit{kExitUsage};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline JSON, or the contents of a file when the argument names one.
std::string JsonOrFile(const std::string& arg) {
  std::ifstream probe(arg);
  if (probe.good()) return ReadFile(arg);
  return arg;
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "pgt: cannot write '" << path << "'\n";
    throw Exit{kExitUsage};
  }
  out << text << "\n";
}

struct Globals {
  double tol = 1e-9;
  std::int64_t samples = 500;
  std::uint64_t seed = 0;
  double radius = 10.0;
  bool json = false;
  bool no_timing = false;
  bool augment = false;

  pgt_options options() const {
    pgt_options o;
    pgt_options_init(&o);
    o.tol = tol;
    o.samples = samples;
    o.seed = seed;
    o.radius = radius;
    return o;
  }
};

GamePtr LoadGame(const std::string& path, const Globals& g) {
  pgt_game* raw = nullptr;
  Check(pgt_game_load_file(path.c_str(), &raw));
  GamePtr game(raw);
  if (g.augment) {
    pgt_game* aug = nullptr;
    Check(pgt_game_augment(game.get(), &aug));
    game.reset(aug);
  }
  return game;
}

PotentialPtr LoadPotential(const pgt_game* game, const std::string& path) {
  pgt_potential* raw = nullptr;
  Check(pgt_potential_load_json(game, ReadFile(path).c_str(), &raw));
  return PotentialPtr(raw);
}

std::string ReportJson(const pgt_report* r, const Globals& g) {
  char* s = nullptr;
  Check(pgt_report_json(r, g.no_timing ? 0 : 1, &s));
  return TakeString(s);
}

int ExitFor(const pgt_report* r) {
  switch (pgt_report_verdict(r)) {
    case PGT_VERDICT_PASS:
      return kExitPass;
    case PGT_VERDICT_FAIL:
      return kExitFail;
    case PGT_VERDICT_INAPPLICABLE:
      return kExitInapplicable;
  }
  return kExitUsage;
}

int Emit(pgt_report* raw, const Globals& g) {
  ReportPtr r(raw);
  if (g.json) {
    std::cout << ReportJson(r.get(), g) << "\n";
  } else {
    char* s = nullptr;
    Check(pgt_report_text(r.get(), &s));
    std::cout << TakeString(s);
  }
  return ExitFor(r.get());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pgt: decide and construct potentials of games"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tol", g.tol, "equality tolerance, band tol*(1+scale)")
      ->capture_default_str();
  app.add_option("--samples", g.samples, "sample budget")
      ->capture_default_str();
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--radius", g.radius, "sampling radius for unbounded spaces")
      ->capture_default_str();
  app.add_flag("--json", g.json, "print the report as JSON");
  app.add_flag("--no-timing", g.no_timing, "omit timing from JSON reports");
  app.add_flag("--augment", g.augment,
               "use the augmented normal form of a congestion game");

  std::string game_path;
  auto add_game = [&](CLI::App* sub) {
    sub->add_option("game", game_path, "game JSON file")->required();
  };

  CLI::App* check = app.add_subcommand("check", "test for an exact potential");
  add_game(check);
  std::string check_method;
  check->add_option("--method", check_method, "criterion")
      ->required()
      ->check(CLI::IsMember(
          {"cycle4", "pairwise", "hp", "hessian", "oracle", "hp-witness"}));

  CLI::App* construct =
      app.add_subcommand("construct", "construct a potential");
  add_game(construct);
  std::string construct_method;
  bool construct_verify = false;
  std::string construct_out;
  construct->add_option("--method", construct_method, "construction")
      ->required()
      ->check(CLI::IsMember({"theorem5", "theorem8", "rosenthal"}));
  construct->add_flag("--verify", construct_verify,
                      "verify the potential on unilateral deviations");
  construct->add_option("--out", construct_out,
                        "write the potential JSON here");

  CLI::App* verify =
      app.add_subcommand("verify", "verify a candidate potential");
  add_game(verify);
  std::string verify_potential, verify_mode = "exact";
  verify->add_option("--potential", verify_potential, "potential JSON file")
      ->required();
  verify->add_option("--mode", verify_mode, "relation to verify")
      ->check(CLI::IsMember({"exact", "ordinal", "generalized", "gradient"}))
      ->capture_default_str();

  CLI::App* ordinal = app.add_subcommand("ordinal", "ordinal potential checks");
  add_game(ordinal);
  std::string ordinal_check, ordinal_candidate;
  std::vector<double> etas;
  std::optional<double> lipschitz;
  ordinal->add_option("--check", ordinal_check, "condition")
      ->required()
      ->check(CLI::IsMember({"assumption1", "crosssign", "crosssign-critical",
                             "theorem10", "theorem11", "theorem12"}));
  ordinal->add_option("--candidate", ordinal_candidate, "candidate JSON file");
  ordinal->add_option("--eta", etas, "strong convexity constants");
  ordinal->add_option("--lipschitz", lipschitz,
                      "Lipschitz constant of grad phi");

  CLI::App* nash =
      app.add_subcommand("nash", "find or verify a pure Nash equilibrium");
  add_game(nash);
  std::string nash_profile, nash_potential;
  nash->add_option("--profile", nash_profile, "profile JSON (inline or file)");
  nash->add_option("--potential", nash_potential,
                   "potential JSON file to minimize");

  CLI::App* dynamics =
      app.add_subcommand("dynamics", "better-response dynamics");
  add_game(dynamics);
  std::string dyn_start, dyn_potential;
  std::int64_t max_steps = 1000;
  dynamics->add_option("--start", dyn_start,
                       "start profile JSON (inline or file)");
  dynamics->add_option("--max-steps", max_steps, "step budget")
      ->capture_default_str();
  dynamics->add_option("--potential", dyn_potential,
                       "potential JSON file for phi deltas");

  CLI::App* abnormal =
      app.add_subcommand("abnormal", "detect an abnormal game");
  add_game(abnormal);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    GamePtr game = LoadGame(game_path, g);
    const pgt_options opts = g.options();
    pgt_report* report = nullptr;

    if (*check) {
      Check(pgt_check(game.get(), check_method.c_str(), &opts, &report));
      return Emit(report, g);
    }
    if (*construct) {
      pgt_potential* raw = nullptr;
      Check(pgt_construct(game.get(), construct_method.c_str(), &raw));
      PotentialPtr phi(raw);
      char* s = nullptr;
      Check(pgt_potential_to_json(phi.get(), &s));
      std::string phi_json = TakeString(s);
      if (!construct_out.empty()) WriteFile(construct_out, phi_json);
      ReportPtr rep;
      if (construct_verify) {
        Check(pgt_verify(game.get(), phi.get(), "exact", &opts, &report));
        rep.reset(report);
      }
      if (g.json) {
        std::cout << "{\n\"potential\": " << phi_json;
        if (rep)
          std::cout << ",\n\"verification\": " << ReportJson(rep.get(), g);
        std::cout << "\n}\n";
      } else {
        std::cout << "potential: " << phi_json << "\n";
        if (rep) {
          Check(pgt_report_text(rep.get(), &s));
          std::cout << TakeString(s);
        }
      }
      return rep ? ExitFor(rep.get()) : kExitPass;
    }
    if (*verify) {
      PotentialPtr phi = LoadPotential(game.get(), verify_potential);
      Check(pgt_verify(game.get(), phi.get(), verify_mode.c_str(), &opts,
                       &report));
      return Emit(report, g);
    }
    if (*ordinal) {
      std::string cand;
      if (!ordinal_candidate.empty()) cand = ReadFile(ordinal_candidate);
      double lip = lipschitz.value_or(0.0);
      Check(pgt_ordinal(game.get(), ordinal_check.c_str(),
                        ordinal_candidate.empty() ? nullptr : cand.c_str(),
                        etas.empty() ? nullptr : etas.data(), etas.size(),
                        lipschitz ? &lip : nullptr, &opts, &report));
      return Emit(report, g);
    }
    if (*nash) {
      PotentialPtr phi;
      if (!nash_potential.empty())
        phi = LoadPotential(game.get(), nash_potential);
      std::string profile;
      if (!nash_profile.empty()) profile = JsonOrFile(nash_profile);
      Check(pgt_nash(game.get(),
                     nash_profile.empty() ? nullptr : profile.c_str(),
                     phi.get(), &opts, &report));
      return Emit(report, g);
    }
    if (*dynamics) {
      PotentialPtr phi;
      if (!dyn_potential.empty())
        phi = LoadPotential(game.get(), dyn_potential);
      std::string start;
      if (!dyn_start.empty()) start = JsonOrFile(dyn_start);
      Check(pgt_dynamics(game.get(),
                         dyn_start.empty() ? nullptr : start.c_str(), max_steps,
                         phi.get(), &opts, &report));
      return Emit(report, g);
    }
    if (*abnormal) {
      Check(pgt_abnormal(game.get(), &opts, &report));
      return Emit(report, g);
    }
  } catch (const Exit& e) {
    return e.code;
  }
  return kExitUsage;
}
