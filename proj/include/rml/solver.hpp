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

// Exact search for rainbow perfect matchings of a family, equivalently
// perfect matchings of its (1,k)-partite lift.

#ifndef RML_SOLVER_HPP_
#define RML_SOLVER_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "rml/core.hpp"

namespace rml {

enum class SolveStatus { kFound, kNotFound, kTimeout };
std::string to_string(SolveStatus s);

// Wall-clock seconds used when no budget is given: 60, or the value of the
// RML_BUDGET_SECS environment variable.
double default_budget_secs();

struct SolveBudget {
  double seconds = default_budget_secs();
  std::uint64_t node_cap = 0;  // 0 = unlimited
  int jobs = 1;                // workers splitting the root
};

struct SolveResult {
  SolveStatus status = SolveStatus::kNotFound;
  std::optional<PartiteMatching> matching;
  std::uint64_t nodes_expanded = 0;
  double elapsed_secs = 0.0;
  bool hit_time_limit = false;
  bool hit_node_cap = false;
  std::string note;  // free-form, e.g. which stage failed in a pipeline
};

SolveResult solve_rainbow_pm(const GraphFamily& fam,
                             const SolveBudget& budget = {});
SolveResult solve_partite_pm(const PartiteGraph& pg,
                             const SolveBudget& budget = {});

// Plain nested loops over e_1 in F_1, e_2 in F_2, ... . Refuses n > 12.
SolveResult oracle_rainbow_pm(const GraphFamily& fam);

enum class Agreement { kAgree, kDisagree, kInconclusive };
struct LiftEquivalence {
  Agreement verdict = Agreement::kInconclusive;
  SolveStatus rainbow = SolveStatus::kTimeout;
  SolveStatus partite = SolveStatus::kTimeout;
};
LiftEquivalence lift_equivalence(const GraphFamily& fam,
                                 const SolveBudget& budget = {});
// True iff both sides finish and agree.
bool check_lift_equivalence(const GraphFamily& fam,
                            const SolveBudget& budget = {});

// Edges in the container, pairwise disjoint, distinct colors, and, when
// require_perfect, covering every color and every point.
bool verify_matching(const PartiteGraph& pg, const PartiteMatching& m,
                     bool require_perfect = true);
bool verify_matching(const GraphFamily& fam, const PartiteMatching& m,
                     bool require_perfect = true);

}  // namespace rml

#endif  // RML_SOLVER_HPP_
