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

// Matching constructions on (1,k)-partite graphs: parity breakers, greedy
// covers, rotations, the four-way split, near covers and absorption.
// Every "choose" is resolved lexicographically.

#ifndef RML_CONSTRUCTIVE_HPP_
#define RML_CONSTRUCTIVE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rml/core.hpp"
#include "rml/solver.hpp"

namespace rml {

// eta = 1/(4 k!), c = 1/(8 (k+1)!),
// epsilon = (80^k k^(k-5) (k!)^k ((k+1)!)^k)^(-3/2),
// gamma = epsilon^(2/3) 2^k / (c^k k^k).
// Doubles: epsilon does not fit a 64-bit rational.
struct SectionParams {
  double eta = 0.0;
  double c = 0.0;
  double epsilon = 0.0;
  double gamma = 0.0;

  static SectionParams defaults(int k);
};

struct ParityTarget {
  int i = 0;
  VertexSet x_prime;  // proper subset of the colors
  Bipartition bip;
};

struct ParityBreaker {
  bool found = false;
  std::optional<PartiteEdge> edge;  // nullopt with found = the empty breaker
};

// Whether e0 (nullopt = empty) meets the conditions that apply to
// (t.i, parity of k - t.i).
bool parity_conditions_hold(const PartiteGraph& f, const ParityTarget& t,
                            const std::optional<PartiteEdge>& e0);

// Tries the empty breaker, then edges in (color, points) order. Throws
// HypothesisError when some neighborhood has codegree <= t(n,k).
ParityBreaker find_parity_breaker(const PartiteGraph& f,
                                  const ParityTarget& t);

struct ConstructResult {
  SolveStatus status = SolveStatus::kNotFound;
  PartiteMatching matching;  // partial when not found
  std::string stage;         // failing stage, empty on success
  std::vector<std::string> trace;
  std::optional<PartiteVertexSet> unabsorbed;  // absorption_loop failures
  bool size_condition_met = true;              // close_final_split only
};

// Covers `cover` greedily: colors of X_0 with even |e & W| edges, colors of
// x1 with odd ones, then points with edges of color class i and
// |e & W| = i (mod 2). Requires |cover| <= 2 c n, the degree hypotheses
// (HypothesisError) and |W \ e0| = |x1 \ e0| (mod 2) (PreconditionError).
ConstructResult greedy_cover(const PartiteGraph& f, const Bipartition& bip,
                             const VertexSet& x1, int i,
                             const PartiteVertexSet& cover,
                             const std::optional<PartiteEdge>& e0,
                             const SectionParams& params);

// All edges of m must meet W in exactly r points. Grows m with type-r edges
// and rotations until perfect, no move applies, or the step budget runs out.
ConstructResult rotation_augment(const PartiteGraph& f, const Bipartition& bip,
                                 int r, PartiteMatching m,
                                 std::uint64_t step_budget = 2'000'000);

// Case (1..4) picked by i and the parity of k - i.
int close_final_case(int k, int i);

struct SplitPlan {
  int r1 = 0;
  int r2 = 0;
  int x = 0;  // colors of part 1
  int y = 0;  // colors of part 2
};

// Solves the case equations for the sizes left after removing e_1:
// |W' \ e_1| = r1 x + r2 y, |U' \ e_1| = (k - r1) x + (k - r2) y. Empty when
// the residue is wrong or x, y would be negative.
std::optional<SplitPlan> split_arithmetic(int n, int k, int i, int w_rest,
                                          int u_rest);

// Parity conditions on (|W'|, |U'|, i) are checked (HypothesisError). The
// size condition min(|W'|,|U'|) >= 1.1 n/k + k is reported only.
ConstructResult close_final_split(const PartiteGraph& f, const Bipartition& bip,
                                  int i);

// Maximal matching plus the exchange step; leaves at most k - 1 colors
// uncovered. Requires k + 1 <= q <= n/k and codegree > n/k in every color.
PartiteMatching extend_to_near_cover(const PartiteGraph& pg);
// Same procedure without the hypothesis checks; may stop with more
// uncovered colors when no exchange exists.
PartiteMatching grow_near_cover(const PartiteGraph& pg,
                                PartiteMatching start = {});

// Repeatedly absorbs an uncovered set of one color and k + 1 points using an
// unused S-absorbing edge of absorbing_m. Found iff every color ends up
// covered.
ConstructResult absorption_loop(const PartiteGraph& pg,
                                const PartiteMatching& absorbing_m,
                                const PartiteMatching& partial_m);

// Induced subgraph on the given colors and points, relabeled to 0.. in
// increasing order.
struct SubInstance {
  PartiteGraph graph;
  VertexSet colors;
  VertexSet points;
};
SubInstance induced_subinstance(const PartiteGraph& pg, const VertexSet& colors,
                                const VertexSet& points);
PartiteMatching lift_back(const SubInstance& sub, const PartiteMatching& m);

}  // namespace rml

#endif  // RML_CONSTRUCTIVE_HPP_
