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

#ifndef RML_COMBINATORICS_HPP_
#define RML_COMBINATORICS_HPP_

#include <cstdint>
#include <type_traits>
#include <vector>

namespace rml {

using Vertex = int;
// Sorted, duplicate-free list of vertex labels.
using VertexSet = std::vector<Vertex>;

// Binomial coefficient; saturates at UINT64_MAX instead of overflowing.
std::uint64_t binomial(int n, int r);

// Advances `c` (a sorted r-subset of {0..n-1}) to the next subset in
// lexicographic order. Returns false after the last one.
bool next_combination(VertexSet& c, int n);

// Calls fn(subset) for every r-subset of {0..n-1} in lexicographic order.
// Stops early when fn returns false (fn may also return void).
template <typename Fn>
void for_each_combination(int n, int r, Fn&& fn) {
  if (r < 0 || r > n) return;
  VertexSet c(r);
  for (int i = 0; i < r; ++i) c[i] = i;
  do {
    if constexpr (std::is_same_v<decltype(fn(c)), bool>) {
      if (!fn(c)) return;
    } else {
      fn(c);
    }
  } while (next_combination(c, n));
}

// Same, but over r-subsets of an arbitrary sorted ground set.
template <typename Fn>
void for_each_subset_of(const VertexSet& ground, int r, Fn&& fn) {
  const int m = static_cast<int>(ground.size());
  if (r < 0 || r > m) return;
  VertexSet idx(r), sub(r);
  for (int i = 0; i < r; ++i) idx[i] = i;
  do {
    for (int i = 0; i < r; ++i) sub[i] = ground[idx[i]];
    if constexpr (std::is_same_v<decltype(fn(sub)), bool>) {
      if (!fn(sub)) return;
    } else {
      fn(sub);
    }
  } while (next_combination(idx, m));
}

// Colex rank of a sorted subset: sum of C(v_i, i+1).
std::uint64_t colex_rank(const VertexSet& s);

// Set helpers over sorted vectors.
VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
int intersection_size(const VertexSet& a, const VertexSet& b);
bool is_disjoint(const VertexSet& a, const VertexSet& b);
bool contains(const VertexSet& s, Vertex v);
bool is_subset(const VertexSet& small, const VertexSet& big);
VertexSet range_set(int begin, int end);  // {begin, ..., end-1}

}  // namespace rml

#endif  // RML_COMBINATORICS_HPP_
