// Copyright 2026 The RML Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Heuristic end-to-end constructions. Both modes may report NotFound on
// instances that do have a perfect matching; a Found is always verified.
//
// extremal:     parity template for W, bad vertices, parity breaker, greedy
//               cover, then the four-way split on the even and odd classes.
// non-extremal: device family around x0 = color 0, edge absorbers, near
//               cover, absorption, and a final device (or exact search on
//               the small leftover) for the last balanced set.

#ifndef RML_PIPELINE_HPP_
#define RML_PIPELINE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rml/constructive.hpp"
#include "rml/core.hpp"
#include "rml/solver.hpp"

namespace rml {

enum class PipelineMode { kExtremal, kNonExtremal };
std::string to_string(PipelineMode m);
PipelineMode pipeline_mode_from_string(const std::string& s);

struct PipelineOptions {
  // Desk-scale constants; SectionParams::defaults(k) are far too small here.
  SectionParams params{0.01, 0.25, 0.0, 0.0};
  double alpha_bad = 0.01;
  std::uint64_t seed = 1;
  std::uint64_t closeness_budget = 200'000;
  double device_p = 1.0;
  int device_retries = 2;
  // Exact search when the pipeline finds a matching and n is at most this.
  int cross_check_max_n = 12;
  SolveBudget budget;
};

struct PipelineResult {
  SolveStatus status = SolveStatus::kNotFound;
  std::optional<PartiteMatching> matching;
  std::string failed_stage;  // empty on success
  std::vector<std::string> trace;
  // Status from the exact solver when the cross-check ran.
  std::optional<SolveStatus> solver_status;
};

// Requires a balanced graph (PreconditionError otherwise).
PipelineResult run_pipeline(const PartiteGraph& pg, PipelineMode mode,
                            const PipelineOptions& opts = {});

}  // namespace rml

#endif  // RML_PIPELINE_HPP_
