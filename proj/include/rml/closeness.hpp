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

// Distances to the extremal configurations, good/bad vertex classes,
// ordered edge densities and the two density conditions used when choosing
// absorbing devices.

#ifndef RML_CLOSENESS_HPP_
#define RML_CLOSENESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rml/core.hpp"

namespace rml {

struct ClosenessReport {
  long long missing_count = 0;
  // Primary normalizer: |V(H1)|^k for k-graphs, (n + n/k)^(k+1) for partite
  // graphs. The three alternatives are all stored.
  double normalizer = 1.0;
  double epsilon_effective = 0.0;
  double norm_vertex_power = 1.0;  // |V(H1)|^k
  double norm_n_power = 1.0;       // n^k
  double norm_partite = 1.0;       // (n + n/k)^(k+1)
  std::optional<Bipartition> witness;
  bool non_exhaustive = false;
  std::uint64_t partitions_examined = 0;
  // Set by the debug cross-check: no sampled relabeling beat the minimum.
  std::optional<bool> cross_check_ok;
};

// |E(h1) \ E(h2)| with its normalizations. Shapes must agree.
ClosenessReport strong_closeness(const KGraph& h1, const KGraph& h2);
ClosenessReport strong_closeness(const PartiteGraph& h1,
                                 const PartiteGraph& h2);

enum class Template { kH, kComplementH, kH0, kH1 };
std::string to_string(Template t);
Template template_from_string(const std::string& s);

struct WeakOptions {
  std::uint64_t budget = 2'000'000;  // max partitions for exhaustive mode
  int jobs = 1;
  std::uint64_t seed = 1;
  int restarts = 32;
  // Side size for the H^i templates; defaults to floor(n/2).
  std::optional<int> side_size;
  // Also try this many random full relabelings and confirm none does better.
  int debug_permutations = 0;
};

// Minimum over template copies of |E(template copy) \ E(h)|. Copies are
// parameterized by the template's distinguished side (A or W) of fixed
// size; witness.w holds the minimizing side.
ClosenessReport weak_closeness_to_extremal(const KGraph& h, Template t,
                                           const WeakOptions& opts = {});

// Edge set of a template for a given distinguished side.
KGraph template_graph(int n, int k, Template t, const VertexSet& side);
int template_side_size(int n, int k, Template t,
                       std::optional<int> side_size = std::nullopt);

struct VertexClassification {
  double alpha = 0.0;
  PartiteVertexSet good;
  PartiteVertexSet bad;
  std::vector<long long> color_missing;  // |N_h(x) \ N_f(x)| per color
  std::vector<long long> point_missing;  // |N_h(v) \ N_f(v)| per point
};

// v is good iff |N_h(v) \ N_f(v)| < alpha * (n + q)^k.
VertexClassification classify_vertices(const PartiteGraph& f,
                                       const PartiteGraph& h, double alpha);

// Number of ordered tuples (v_1..v_k), v_i in sets[i], forming an edge.
long long multiset_density(const KGraph& h, const std::vector<VertexSet>& sets);
long long multiset_density(const PartiteGraph& pg, int color,
                           const std::vector<VertexSet>& sets);

enum class Absorb2Verdict { kCondI, kCondII, kNeither, kBoth };
std::string to_string(Absorb2Verdict v);

struct Absorb2Params {
  std::uint64_t exact_budget = 5'000'000;  // set tuples for exact CondI
  int samples = 4000;                      // otherwise, sampled tuples
  std::uint64_t seed = 1;
};

struct Absorb2Report {
  Absorb2Verdict verdict = Absorb2Verdict::kNeither;
  bool cond_i = false;
  bool cond_ii = false;
  bool cond_i_exact = false;
  int set_size = 0;                   // ceil((1/2 - 1/ln n) n)
  long long cond_i_min_density = 0;   // smallest density seen
  double cond_i_threshold = 0.0;      // n^k / ln^3 n
  long long cond_ii_census = 0;       // (k-1)-sets above the degree bar
  double cond_ii_degree_bar = 0.0;    // (1/2 + 2/ln n) n
  double cond_ii_count_threshold = 0.0;  // n^(k-1) / ln n
  std::string note;
};

// Natural logarithms throughout.
Absorb2Report absorb2_dichotomy(const KGraph& h, const Absorb2Params& p = {});
// Only the degree census half; cheap, used to gate pivot colors.
Absorb2Report absorb2_census(const KGraph& h);

}  // namespace rml

#endif  // RML_CLOSENESS_HPP_
