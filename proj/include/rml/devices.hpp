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

// Absorbing devices for a balanced set S = {x0, v_1..v_k}, S-absorbing
// edges for sets of one color and k + 1 points, and random selection of
// absorbing families.

#ifndef RML_DEVICES_HPP_
#define RML_DEVICES_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rml/core.hpp"

namespace rml {

enum class DeviceKind { kI, kII, kIII, kEdge };
std::string to_string(DeviceKind kind);
DeviceKind device_kind_from_string(const std::string& s);

struct BalancedSet {
  int x0 = 0;
  VertexSet vset;  // k points for devices, k + 1 for edge absorbers

  auto operator<=>(const BalancedSet&) const = default;
};

// Edge order in `edges`: e_1..e_k then g (kind I, optional) or e_1..e_{k+1}
// (kinds II, III), or the single edge e (kEdge). Witness order:
// e_1'..e_k', f, g (kind I); e_1'..e_{k+1}', f (kinds II, III); the
// 2-matching (kEdge). e_i and e_i' are paired with v_i = s.vset[i].
struct Device {
  DeviceKind kind = DeviceKind::kI;
  PartiteMatching edges;
  PartiteMatching witness;

  auto operator<=>(const Device&) const = default;
};

bool verify_device(const PartiteGraph& f, const BalancedSet& s,
                   const Device& d);

// Looks for a witness that makes `edges` an S-absorbing device of `kind`.
std::optional<Device> find_witness(const PartiteGraph& f, const BalancedSet& s,
                                   DeviceKind kind,
                                   const PartiteMatching& edges);

struct DeviceSearchBudget {
  std::uint64_t nodes = 2'000'000;
  // Kind II pivots must pass the degree census of their neighborhood.
  bool require_census = true;
  // Kind I: also look for the extra disjoint edge g.
  bool want_g = true;
  // Extra passes with shuffled color orders when the lexicographic pass
  // finds fewer than `limit` devices.
  int restarts = 0;
  std::uint64_t seed = 1;
};

// Staged search: B_1..B_k through v_1..v_k in lexicographic order, then the
// connector (kind I) or the pivot color and B_{k+1} (kinds II, III). Every
// returned device passes verify_device.
std::vector<Device> find_devices(const PartiteGraph& f, const BalancedSet& s,
                                 DeviceKind kind, int limit,
                                 const DeviceSearchBudget& budget = {});

struct EdgeAbsorberCount {
  long long count = 0;
  bool exact = true;  // false: sampled estimate
};

// Edges e with a 2-matching inside e and S (|S| = one color + k + 1
// points). Exact for n <= 15.
EdgeAbsorberCount count_edge_absorbers(const PartiteGraph& h,
                                       const BalancedSet& s,
                                       std::uint64_t seed = 1);

struct AbsorbingFamilyOptions {
  DeviceKind kind = DeviceKind::kI;  // kEdge selects edge absorbers
  // Sampling probability; <= 0 uses min(1, C log^6 n / candidates).
  double p = -1.0;
  double c_scale = 1.0;
  int retries = 8;
  std::uint64_t seed = 1;
  int required_count = 1;
  int x0 = 0;                // device modes: the fixed color of S
  int per_set_limit = 2;     // devices collected per target set
  int sampled_sets = 48;     // target sets when enumeration is too large
  std::optional<std::vector<BalancedSet>> targets;
  DeviceSearchBudget budget;
};

struct AbsorbingFamily {
  std::vector<Device> members;
  PartiteMatching matching;  // union of member edges
  bool complete = false;
  bool exhaustive = false;   // coverage checked over every target set
  long long sets_checked = 0;
  long long sets_covered = 0;
  long long candidates = 0;
  int attempts = 0;
  double p_used = 0.0;
  int required_count = 1;
  std::vector<std::string> warnings;
};

AbsorbingFamily select_absorbing_family(const PartiteGraph& f,
                                        const AbsorbingFamilyOptions& opts);

// The replacement for a verified device: its edges removed, witness added.
PartiteMatching apply_device(const PartiteMatching& m, const Device& d);

}  // namespace rml

#endif  // RML_DEVICES_HPP_
