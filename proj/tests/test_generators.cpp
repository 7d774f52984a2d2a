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

#include "doctest.h"
#include "oracles.hpp"
#include "rml/generators.hpp"
#include "rml/solver.hpp"

namespace rml {
namespace {

// Counts k-subsets of [n] whose intersection with the prefix {0..a-1} has
// the given parity, by brute force over masks.
long long count_parity_sets(int n, int k, int a, int parity) {
  long long count = 0;
  for (std::uint32_t m : oracle::all_ksets(n, k)) {
    if (__builtin_popcount(m & ((1U << a) - 1)) % 2 == parity) ++count;
  }
  return count;
}

TEST_CASE("A sizes") {
  CHECK(make_extremal_A_size(9, 3) == 5);
  CHECK(make_extremal_A_size(12, 4) == 6);
  CHECK(make_extremal_A_size(16, 4) == 7);
  CHECK(make_extremal_A_size(6, 3) == 3);
  CHECK(make_extremal_A_size(12, 3) == 5);
  CHECK(make_extremal_A_size(8, 4) == 3);
  CHECK_THROWS_AS(make_extremal_A_size(10, 3), PreconditionError);
  for (int k = 3; k <= 8; k += 2) {
    for (int n = k; n <= 60; n += k) {
      const int a = make_extremal_A_size(n, k);
      CHECK(a % 2 == 1);
      CHECK(2 * a >= n - 2);
      CHECK(2 * a <= n + 1);
    }
  }
}

TEST_CASE("gen_H edge counts and parity") {
  // Frozen from the brute-force count.
  CHECK(count_parity_sets(9, 3, 5, 0) == 44);
  const KGraph h = gen_H(9, 3);
  CHECK(h.edge_count() == 44);
  for (const VertexSet& e : h.edges()) {
    const int x = intersection_size(e, range_set(0, 5));
    CHECK((x == 0 || x == 2));
  }
  const KGraph h4 = gen_H(12, 4);
  CHECK(static_cast<long long>(h4.edge_count()) ==
        count_parity_sets(12, 4, 6, 1));
  for (const VertexSet& e : h4.edges()) {
    const int x = intersection_size(e, range_set(0, 6));
    CHECK((x == 1 || x == 3));
  }
  CHECK_THROWS_AS(gen_H(9, 3, VertexSet{0, 1}), PreconditionError);
  const KGraph relabeled = gen_H(9, 3, VertexSet{1, 3, 5, 7, 8});
  CHECK(relabeled.edge_count() == 44);
}

TEST_CASE("gen_Hi") {
  const Bipartition b = make_bipartition(6, {0, 1, 2});
  CHECK(count_parity_sets(6, 3, 3, 1) == 10);
  CHECK(gen_Hi(6, 3, b, 1).edge_count() == 10);
  CHECK(gen_Hi(6, 3, b, 0).edge_count() + gen_Hi(6, 3, b, 1).edge_count() ==
        20);
  // k even: swapping the sides leaves H^i unchanged.
  const Bipartition w = make_bipartition(8, {0, 2, 5});
  const Bipartition swapped = make_bipartition(8, w.u);
  for (int i = 0; i < 2; ++i) {
    CHECK(gen_Hi(8, 4, w, i) == gen_Hi(8, 4, swapped, i));
  }
}

TEST_CASE("lift and script constructions") {
  const GraphFamily two({complete_graph(6, 3), complete_graph(6, 3)});
  CHECK(lift_family(two).edge_count() == 40);
  const GraphFamily empty({KGraph(6, 3), KGraph(6, 3)});
  CHECK(lift_family(empty).edge_count() == 0);

  const PartiteGraph sh = gen_script_H(9, 3);
  CHECK(sh.edge_count() == 132);
  const GraphFamily copies(std::vector<KGraph>(3, gen_H(9, 3)));
  CHECK(lift_family(copies).neighborhoods() == sh.neighborhoods());
  for (const PartiteEdge& e : sh.edges()) {
    CHECK(intersection_size(e.points, range_set(0, 5)) % 2 == 0);
  }
  // Partite degree of the lift equals the codegree in H(n,k).
  for (int n : {9, 12}) {
    const KGraph h = gen_H(n, 3);
    const PartiteGraph lifted = gen_script_H(n, 3);
    long long min_pd = n;
    for_each_combination(n, 2, [&](const VertexSet& s) {
      for (int c = 0; c < lifted.q(); ++c) {
        const long long pd = partite_degree(lifted, c, s);
        CHECK(pd == codegree(h, s));
        min_pd = std::min(min_pd, pd);
      }
    });
    CHECK(Rational(min_pd) == threshold_t(n, 3));
  }
}

TEST_CASE("gen_script_Hm and gen_script_H_Wr") {
  const Bipartition b = make_bipartition(6, {0, 1, 2});
  const PartiteGraph both0 = gen_script_Hm(6, 3, b, 2, 0);
  CHECK(both0.neighborhood(0) == gen_Hi(6, 3, b, 0));
  CHECK(both0.neighborhood(1) == gen_Hi(6, 3, b, 0));
  const PartiteGraph mixed = gen_script_Hm(6, 3, b, 1, 1);
  CHECK(mixed.neighborhood(0).edge_count() == 10);
  CHECK(mixed.neighborhood(1).edge_count() == 10);
  CHECK(gen_script_Hm(6, 3, b, 0, 0).edge_count() == 0);
  CHECK_THROWS_AS(gen_script_Hm(6, 3, b, 2, 1), PreconditionError);

  const PartiteGraph all = gen_script_H_Wr(6, 3, make_bipartition(6, range_set(0, 6)), 3);
  CHECK(all.neighborhood(0) == complete_graph(6, 3));
  const Bipartition b2 = make_bipartition(6, {0, 1});
  for (const PartiteEdge& e : gen_script_H_Wr(6, 3, b2, 0).edges()) {
    CHECK(is_disjoint(e.points, b2.w));
  }
  // C(2,1) * C(4,2) sets meet a 2-set W in one vertex.
  CHECK(gen_script_H_Wr(6, 3, b2, 1).neighborhood(1).edge_count() == 12);
}

TEST_CASE("random families respect the codegree floor and the seed") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Rational floor(static_cast<long long>(seed % 4) + 1);
    const GraphFamily fam = gen_random_family(9, 3, floor, seed);
    CHECK(fam.size() == 3);
    for (const KGraph& m : fam.members()) {
      CHECK(Rational(min_degree(m, 2)) > floor);
    }
    const GraphFamily again = gen_random_family(9, 3, floor, seed);
    for (int c = 0; c < 3; ++c) CHECK(again[c] == fam[c]);
  }
  // Nothing is removable just below the complete codegree.
  const GraphFamily full = gen_random_family(9, 3, Rational(13, 2), 3);
  for (const KGraph& m : full.members()) CHECK(m == complete_graph(9, 3));
  // Different seeds give different members at a low floor.
  CHECK_FALSE(gen_random_family(12, 3, Rational(4), 1)[0] ==
              gen_random_family(12, 3, Rational(4), 2)[0]);
}

TEST_CASE("extremal graphs have no perfect matching") {
  // Parity argument: every edge meets A evenly (odd k) while |A| is odd, or
  // oddly (even k) while the count of edges has the wrong parity.
  for (int k = 3; k <= 4; ++k) {
    for (int n = k; n <= 24; n += k) {
      const int a = make_extremal_A_size(n, k);
      if (k % 2 == 1) {
        CHECK(a % 2 == 1);
      } else {
        CHECK((n / k) % 2 != a % 2);
      }
    }
  }
  SolveBudget budget;
  budget.seconds = 60;
  for (int n : {6, 9, 12, 15}) {
    CHECK(solve_partite_pm(gen_script_H(n, 3), budget).status ==
          SolveStatus::kNotFound);
  }
  for (int n : {8, 12}) {
    CHECK(solve_partite_pm(gen_script_H(n, 4), budget).status ==
          SolveStatus::kNotFound);
  }
}

}  // namespace
}  // namespace rml
