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

// Named constructions: the parity graph H(n,k), the classes H^i(W,U), the
// partite lift, and seeded random families.

#ifndef RML_GENERATORS_HPP_
#define RML_GENERATORS_HPP_

#include <cstdint>
#include <optional>

#include "rml/core.hpp"

namespace rml {

struct ExtremalSpec {
  int n = 0;
  int k = 0;
  VertexSet a;     // the A side; B = [n] \ A
  int parity = 0;  // required |e & A| mod 2: 0 for odd k, 1 for even k
};

// |A| for H(n,k).
int make_extremal_A_size(int n, int k);
ExtremalSpec make_extremal_spec(int n, int k,
                                std::optional<VertexSet> a = std::nullopt);

// Edges: k-sets e with |e & A| of the mandated parity. A defaults to the
// index prefix {0, ..., |A|-1}.
KGraph gen_H(int n, int k, std::optional<VertexSet> a = std::nullopt);

// H^i(W,U): k-sets S with |S & W| = i (mod 2).
KGraph gen_Hi(int n, int k, const Bipartition& bip, int i);

// Color i contributes (i, e) for each e in F_i.
PartiteGraph lift_family(const GraphFamily& fam);

// n/k copies of H(n,k) with a common A, lifted.
PartiteGraph gen_script_H(int n, int k,
                          std::optional<VertexSet> a = std::nullopt);

// First m0 colors carry H^0(W,U), the next m1 carry H^1(W,U), the rest are
// empty.
PartiteGraph gen_script_Hm(int n, int k, const Bipartition& bip, int m0,
                           int m1);

// Every color's neighborhood is {e : |e & W| = r}.
PartiteGraph gen_script_H_Wr(int n, int k, const Bipartition& bip, int r);

// Each member starts complete; edges are visited once in a seeded random
// order and deleted whenever every (k-1)-set keeps codegree > min_codegree.
GraphFamily gen_random_family(int n, int k, const Rational& min_codegree,
                              std::uint64_t seed);
KGraph gen_random_member(int n, int k, const Rational& min_codegree,
                         std::uint64_t seed);

}  // namespace rml

#endif  // RML_GENERATORS_HPP_
