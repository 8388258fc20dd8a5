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

#include "report.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace pgt {

const char* VerdictName(Verdict v) {
  switch (v) {
    case Verdict::kPass:
      return "pass";
    case Verdict::kFail:
      return "fail";
    case Verdict::kInapplicable:
      return "inapplicable";
  }
  return "?";
}

std::string TestReport::VerdictLabel() const {
  if (verdict == Verdict::kPass && !exhaustive) return "pass (sampled)";
  return VerdictName(verdict);
}

Json TestReport::ToJson(bool include_timing) const {
  Json j;
  j["method"] = method;
  j["verdict"] = VerdictLabel();
  j["residual_max"] = residual_max;
  j["witness"] = witness ? *witness : Json(nullptr);
  j["samples_used"] = samples_used;
  j["exhaustive"] = exhaustive;
  j["abstentions"] = abstentions;
  if (!conclusion.empty()) j["conclusion"] = conclusion;
  if (!notes.empty()) j["notes"] = notes;
  if (!sub.empty()) {
    Json parts = Json::array();
    for (const auto& s : sub) parts.push_back(s.ToJson(false));
    j["sub"] = std::move(parts);
  }
  if (!extra.empty()) j["extra"] = extra;
  if (include_timing) j["timing_ms"] = timing_ms;
  return j;
}

namespace {

std::string Num(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void AppendText(const TestReport& r, std::ostringstream& os,
                const std::string& indent) {
  os << indent << r.method << ": " << r.VerdictLabel() << "\n";
  os << indent << "  residual_max: " << Num(r.residual_max)
     << "  samples_used: " << r.samples_used
     << "  exhaustive: " << (r.exhaustive ? "yes" : "no")
     << "  abstentions: " << r.abstentions << "\n";
  if (r.witness) os << indent << "  witness: " << r.witness->dump() << "\n";
  if (!r.conclusion.empty()) {
    os << indent << "  conclusion: " << r.conclusion << "\n";
  }
  for (const auto& n : r.notes) os << indent << "  note: " << n << "\n";
  for (const auto& s : r.sub) AppendText(s, os, indent + "  ");
}

}  // namespace

std::string TestReport::ToText() const {
  std::ostringstream os;
  AppendText(*this, os, "");
  if (!extra.empty()) os << "extra: " << extra.dump() << "\n";
  os << "timing_ms: " << Num(timing_ms) << "\n";
  return os.str();
}

TestReport TestReport::Inapplicable(std::string method, std::string reason) {
  TestReport r;
  r.method = std::move(method);
  r.verdict = Verdict::kInapplicable;
  r.conclusion = std::move(reason);
  return r;
}

void ResidualTracker::Offer(double residual, bool violates,
                            const Json& witness) {
  Offer(residual, violates, [&] { return witness; });
}

void ResidualTracker::FillReport(TestReport& r) const {
  r.residual_max = max_;
  r.samples_used = count_;
  r.verdict = violations_ > 0 ? Verdict::kFail : Verdict::kPass;
  if (violations_ > 0) r.witness = witness_;
}

Verdict CombineVerdicts(const std::vector<TestReport>& parts) {
  bool inapplicable = false;
  for (const auto& p : parts) {
    if (p.verdict == Verdict::kFail) return Verdict::kFail;
    if (p.verdict == Verdict::kInapplicable) inapplicable = true;
  }
  return inapplicable ? Verdict::kInapplicable : Verdict::kPass;
}

}  // namespace pgt
