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

#include <cmath>
#include <string>

#include "doctest.h"
#include "pgt/pgt.h"

namespace {

std::string Data(const char* name) {
  return std::string(PGT_DATA_DIR) + "/" + name;
}

std::string Take(char* s) {
  std::string out = s ? s : "";
  pgt_string_free(s);
  return out;
}

pgt_game* Load(const char* name) {
  pgt_game* g = nullptr;
  REQUIRE(pgt_game_load_file(Data(name).c_str(), &g) == PGT_OK);
  return g;
}

pgt_options Options() {
  pgt_options o;
  pgt_options_init(&o);
  return o;
}

TEST_CASE("options defaults") {
  pgt_options o = Options();
  CHECK(o.tol == 1e-9);
  CHECK(o.samples == 500);
  CHECK(o.seed == 0);
  CHECK(o.radius == 10.0);
}

TEST_CASE("loading games and error reporting") {
  pgt_game* g = Load("cournot3.json");
  CHECK(pgt_game_num_players(g) == 3);
  char* json = nullptr;
  REQUIRE(pgt_game_to_json(g, &json) == PGT_OK);
  std::string text = Take(json);
  pgt_game* back = nullptr;
  CHECK(pgt_game_load_json(text.c_str(), &back) == PGT_OK);
  pgt_game_free(back);
  pgt_game_free(g);

  pgt_game* bad = nullptr;
  CHECK(pgt_game_load_json(R"json({"players": 2})json", &bad) ==
        PGT_ERR_SCHEMA);
  CHECK(bad == nullptr);
  CHECK(std::string(pgt_last_error()).find("/costs") != std::string::npos);
  CHECK(pgt_game_load_json("{oops", &bad) == PGT_ERR_SCHEMA);
  CHECK(pgt_game_load_json(R"json({"players": 1, "spaces": [{"kind": "all"}],
      "costs": {"kind": "expr", "exprs": ["x[1][1] +"]}})json",
                           &bad) == PGT_ERR_PARSE);
  CHECK(pgt_game_load_file(Data("missing.json").c_str(), &bad) == PGT_ERR_IO);
  CHECK(pgt_game_load_file(nullptr, &bad) == PGT_ERR_INVALID_ARGUMENT);
  CHECK(std::string(pgt_status_name(PGT_ERR_DOMAIN)) == "domain error");
}

TEST_CASE("checks") {
  pgt_options o = Options();
  pgt_game* cournot = Load("cournot3.json");
  for (const char* method : {"pairwise", "hp", "hessian", "cycle4"}) {
    pgt_report* r = nullptr;
    REQUIRE(pgt_check(cournot, method, &o, &r) == PGT_OK);
    CHECK(pgt_report_verdict(r) == PGT_VERDICT_PASS);
    CHECK(pgt_report_residual(r) <= 1e-9);
    CHECK(pgt_report_exhaustive(r) == 0);
    pgt_report_free(r);
  }
  pgt_report* r = nullptr;
  CHECK(pgt_check(cournot, "nope", &o, &r) == PGT_ERR_INVALID_ARGUMENT);
  pgt_game_free(cournot);

  pgt_game* pennies = Load("pennies.json");
  REQUIRE(pgt_check(pennies, "cycle4", &o, &r) == PGT_OK);
  CHECK(pgt_report_verdict(r) == PGT_VERDICT_FAIL);
  CHECK(pgt_report_residual(r) == 8.0);
  CHECK(pgt_report_exhaustive(r) == 1);
  char* json = nullptr;
  REQUIRE(pgt_report_json(r, 0, &json) == PGT_OK);
  std::string no_timing = Take(json);
  CHECK(no_timing.find("timing_ms") == std::string::npos);
  CHECK(no_timing.find("\"witness\"") != std::string::npos);
  REQUIRE(pgt_report_json(r, 1, &json) == PGT_OK);
  CHECK(Take(json).find("timing_ms") != std::string::npos);
  char* text = nullptr;
  REQUIRE(pgt_report_text(r, &text) == PGT_OK);
  CHECK(Take(text).rfind("cycle4: fail", 0) == 0);
  pgt_report_free(r);

  REQUIRE(pgt_check(pennies, "oracle", &o, &r) == PGT_OK);
  CHECK(pgt_report_verdict(r) == PGT_VERDICT_FAIL);
  pgt_report_free(r);
  pgt_game_free(pennies);

  pgt_game* nonneg = Load("cournot3_nonneg.json");
  REQUIRE(pgt_check(nonneg, "pairwise", &o, &r) == PGT_OK);
  CHECK(pgt_report_verdict(r) == PGT_VERDICT_INAPPLICABLE);
  pgt_report_free(r);
  pgt_game_free(nonneg);
}

TEST_CASE("construct, evaluate, serialize, verify") {
  pgt_options o = Options();
  pgt_game* g = Load("cournot4.json");
  pgt_potential* phi = nullptr;
  REQUIRE(pgt_construct(g, "theorem8", &phi) == PGT_OK);
  double v = 0;
  REQUIRE(pgt_potential_eval(phi, "[[1],[2],[3],[4]]", &v) == PGT_OK);
  // sum_i (10 - (x_1 + ... + x_i)) x_i - 2 x_i at (1,2,3,4).
  CHECK(v == doctest::Approx(7 + 10 + 6 - 8).epsilon(1e-12));
  CHECK(pgt_potential_eval(phi, "[[1],[2]]", &v) != PGT_OK);
  CHECK(pgt_potential_eval(phi, "[[11],[0],[0],[0]]", &v) != PGT_OK);

  char* json = nullptr;
  REQUIRE(pgt_potential_to_json(phi, &json) == PGT_OK);
  std::string saved = Take(json);
  pgt_potential* loaded = nullptr;
  REQUIRE(pgt_potential_load_json(g, saved.c_str(), &loaded) == PGT_OK);
  double w = 0;
  REQUIRE(pgt_potential_eval(loaded, "[[1],[2],[3],[4]]", &w) == PGT_OK);
  CHECK(w == v);

  for (const char* mode : {"exact", "gradient", "ordinal", "generalized"}) {
    pgt_report* r = nullptr;
    REQUIRE(pgt_verify(g, loaded, mode, &o, &r) == PGT_OK);
    INFO(mode);
    CHECK(pgt_report_verdict(r) == PGT_VERDICT_PASS);
    pgt_report_free(r);
  }
  pgt_potential* five = nullptr;
  REQUIRE(pgt_construct(g, "theorem5", &five) == PGT_OK);
  pgt_potential* ros = nullptr;
  CHECK(pgt_construct(g, "rosenthal", &ros) == PGT_ERR_INAPPLICABLE);
  pgt_potential_free(five);
  pgt_potential_free(loaded);
  pgt_potential_free(phi);
  pgt_game_free(g);
}

TEST_CASE("augmented congestion game") {
  pgt_options o = Options();
  o.samples = 100000;
  pgt_game* spec = Load("congestion2.json");
  pgt_game* aug = nullptr;
  REQUIRE(pgt_game_augment(spec, &aug) == PGT_OK);
  pgt_potential* phi = nullptr;
  REQUIRE(pgt_construct(aug, "rosenthal", &phi) == PGT_OK);
  double v = 1;
  REQUIRE(pgt_potential_eval(phi, "[[0],[0]]", &v) == PGT_OK);
  CHECK(v == 0.0);
  pgt_report* r = nullptr;
  REQUIRE(pgt_verify(aug, phi, "exact", &o, &r) == PGT_OK);
  CHECK(pgt_report_verdict(r) == PGT_VERDICT_PASS);
  CHECK(pgt_report_exhaustive(r) == 1);
  pgt_report_free(r);
  REQUIRE(pgt_check(aug, "pairwise", &o, &r) == PGT_OK);
  CHECK(pgt_report_verdict(r) == PGT_VERDICT_PASS);
  CHECK(pgt_report_exhaustive(r) == 1);
  pgt_report_free(r);
  pgt_potential_free(phi);
  pgt_game_free(aug);
  pgt_game* pennies = Load("pennies.json");
  CHECK(pgt_game_augment(pennies, &aug) == PGT_ERR_INAPPLICABLE);
  pgt_game_free(pennies);
  pgt_game_free(spec);
}

TEST_CASE("ordinal checks") {
  pgt_options o = Options();
  pgt_game* g = Load("power_sum_unit.json");
  pgt_report* r = nullptr;
  REQUIRE(pgt_ordinal(g, "assumption1", nullptr, nullptr, 0, nullptr, &o, &r) ==
          PGT_OK);
  CHECK(pgt_report_verdict(r) == PGT_VERDICT_PASS);
  pgt_report_free(r);
  const char* good = R"json({"phi": "a*sqrt(x[1][1])+b*sqrt(x[2][1])",
                         "params": {"a": 8, "b": 384}})json";
  const char* small = R"json({"phi": "a*sqrt(x[1][1])+b*sqrt(x[2][1])",
                          "params": {"a": 1, "b": 384}})json";
  REQUIRE(pgt_ordinal(g, "theorem11", good, nullptr, 0, nullptr, &o, &r) ==
          PGT_OK);
  CHECK(pgt_report_verdict(r) == PGT_VERDICT_PASS);
  pgt_report_free(r);
  REQUIRE(pgt_ordinal(g, "theorem11", small, nullptr, 0, nullptr, &o, &r) ==
          PGT_OK);
  CHECK(pgt_report_verdict(r) == PGT_VERDICT_FAIL);
  pgt_report_free(r);
  CHECK(pgt_ordinal(g, "theorem11", nullptr, nullptr, 0, nullptr, &o, &r) ==
        PGT_ERR_INVALID_ARGUMENT);
  CHECK(pgt_ordinal(g, "theorem99", good, nullptr, 0, nullptr, &o, &r) ==
        PGT_ERR_INVALID_ARGUMENT);
  pgt_game_free(g);

  pgt_game* q = Load("quadratic_coupled.json");
  const char* cand =
      R"json({"phi": "pow(x[1][1],2)+pow(x[2][1],2)+x[1][1]*x[2][1]"})json";
  double eta = 2.0, lip = 2.0;
  REQUIRE(pgt_ordinal(q, "theorem10", cand, &eta, 1, &lip, &o, &r) == PGT_OK);
  CHECK(pgt_report_verdict(r) == PGT_VERDICT_FAIL);
  pgt_report_free(r);
  pgt_game_free(q);
}

TEST_CASE("nash and dynamics") {
  pgt_options o = Options();
  pgt_game* coord = Load("coordination.json");
  pgt_report* r = nullptr;
  REQUIRE(pgt_nash(coord, nullptr, nullptr, &o, &r) == PGT_OK);
  CHECK(pgt_report_verdict(r) == PGT_VERDICT_PASS);
  pgt_report_free(r);
  REQUIRE(pgt_nash(coord, "[[1],[2]]", nullptr, &o, &r) == PGT_OK);
  CHECK(pgt_report_verdict(r) == PGT_VERDICT_FAIL);
  pgt_report_free(r);
  REQUIRE(pgt_dynamics(coord, "[[2],[1]]", 100, nullptr, &o, &r) == PGT_OK);
  CHECK(pgt_report_verdict(r) == PGT_VERDICT_PASS);
  pgt_report_free(r);
  pgt_game_free(coord);

  pgt_game* pennies = Load("pennies.json");
  REQUIRE(pgt_dynamics(pennies, "[[1],[1]]", 100, nullptr, &o, &r) == PGT_OK);
  CHECK(pgt_report_verdict(r) == PGT_VERDICT_FAIL);
  char* json = nullptr;
  REQUIRE(pgt_report_json(r, 0, &json) == PGT_OK);
  CHECK(Take(json).find("cycle_detected") != std::string::npos);
  pgt_report_free(r);
  REQUIRE(pgt_abnormal(pennies, &o, &r) == PGT_OK);
  CHECK(pgt_report_verdict(r) == PGT_VERDICT_PASS);
  pgt_report_free(r);
  pgt_game_free(pennies);
}

TEST_CASE("null handles are rejected") {
  pgt_report* r = nullptr;
  pgt_options o = Options();
  CHECK(pgt_check(nullptr, "cycle4", &o, &r) == PGT_ERR_INVALID_ARGUMENT);
  CHECK(pgt_report_verdict(nullptr) == PGT_VERDICT_INAPPLICABLE);
  pgt_game_free(nullptr);
  pgt_report_free(nullptr);
  pgt_potential_free(nullptr);
  pgt_string_free(nullptr);
}

}  // namespace
