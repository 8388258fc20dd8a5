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

#ifndef PGT_REPORT_HPP_
#define PGT_REPORT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace pgt {

using Json = nlohmann::ordered_json;

enum class Verdict { kPass, kFail, kInapplicable };

const char* VerdictName(Verdict v);

// Outcome of any criterion check. A failing report always carries a witness;
// `exhaustive` is set only when the whole relevant index set was enumerated.
struct TestReport {
  std::string method;
  Verdict verdict = Verdict::kPass;
  double residual_max = 0.0;
  std::optional<Json> witness;
  std::int64_t samples_used = 0;
  bool exhaustive = false;
  std::int64_t abstentions = 0;
  std::string conclusion;
  std::vector<std::string> notes;
  std::vector<TestReport> sub;
  Json extra = Json::object();
  double timing_ms = 0.0;

  bool passed() const { return verdict == Verdict::kPass; }
  bool failed() const { return verdict == Verdict::kFail; }

  // "pass", "pass (sampled)", "fail", "inapplicable".
  std::string VerdictLabel() const;

  Json ToJson(bool include_timing = true) const;
  std::string ToText() const;

  static TestReport Inapplicable(std::string method, std::string reason);
};

// Keeps the largest residual seen and the witness attached to the first
// (in enumeration order) maximal violating item.
class ResidualTracker {
 public:
  void Offer(double residual, bool violates, const Json& witness);

  template <typename WitnessFn>
  void Offer(double residual, bool violates, WitnessFn&& make_witness) {
    ++count_;
    max_ = std::max(max_, residual);
    if (violates) {
      ++violations_;
      if (!witness_ || residual > witness_residual_) {
        witness_ = make_witness();
        witness_residual_ = residual;
      }
    }
  }

  double max() const { return max_; }
  std::int64_t count() const { return count_; }
  std::int64_t violations() const { return violations_; }
  const std::optional<Json>& witness() const { return witness_; }

  // Fills verdict, residual_max, witness and samples_used.
  void FillReport(TestReport& r) const;

 private:
  double max_ = 0.0;
  std::int64_t count_ = 0;
  std::int64_t violations_ = 0;
  std::optional<Json> witness_;
  double witness_residual_ = 0.0;
};

// Combines sub-verdicts: fail if any failed, else inapplicable if any was,
// else pass.
Verdict CombineVerdicts(const std::vector<TestReport>& parts);

}  // namespace pgt

#endif  // PGT_REPORT_HPP_
