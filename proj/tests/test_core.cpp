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

#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "rml/core.hpp"
#include "rml/generators.hpp"
#include "rml/io.hpp"

namespace rml {
namespace {

TEST_CASE("threshold spot values") {
  CHECK(threshold_t(12, 4) == Rational(4));
  CHECK(threshold_t(9, 3) == Rational(2));
  CHECK(threshold_t(12, 3) == Rational(4));
  CHECK(threshold_t(15, 3) == Rational(6));
  CHECK(threshold_t(6, 3) == Rational(1));
  CHECK(threshold_t(8, 4) == Rational(1));
  CHECK(threshold_t(16, 4) == Rational(5));
}

TEST_CASE("threshold rejects invalid arguments") {
  CHECK_THROWS_AS(threshold_t(10, 3), PreconditionError);
  CHECK_THROWS_AS(threshold_t(6, 2), PreconditionError);
  CHECK_THROWS_AS(threshold_t(3, 6), PreconditionError);
}

TEST_CASE("threshold matches the textual cases and stays in its band") {
  for (int k = 3; k <= 8; ++k) {
    for (int n = k; n <= 60; n += k) {
      const Rational t = threshold_t(n, k);
      CHECK(to_double(t) == oracle::threshold(n, k));
      CHECK(t < Rational(n, 2));
      CHECK(t >= Rational(n, 2) - k + Rational(1, 2));
    }
  }
}

TEST_CASE("codegree examples") {
  const KGraph k4 = complete_graph(4, 3);
  CHECK(codegree(k4, {0, 1}) == 2);
  CHECK(codegree(KGraph(6, 3), {1, 2}) == 0);
  // H(9,3) with A = {0..4}; a pair inside B completes only to B vertices.
  const KGraph h = gen_H(9, 3);
  CHECK(codegree(h, {5, 6}) == 2);
  CHECK(codegree(h, {5, 6}) == oracle::codegree(h, {5, 6}));
  CHECK_THROWS_AS(codegree(h, {5, 9}), PreconditionError);
}

TEST_CASE("codegree agrees with the scanning oracle for all set sizes") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const KGraph h = oracle::bernoulli_graph(8, 4, 0.5, rng);
    for (int l = 0; l <= 4; ++l) {
      for_each_combination(8, l, [&](const VertexSet& s) {
        CHECK(codegree(h, s) == oracle::codegree(h, s));
      });
    }
  }
}

TEST_CASE("min_degree examples") {
  CHECK(min_degree(gen_H(9, 3), 2) == 2);
  CHECK(min_degree(gen_H(12, 4), 3) == 4);
  CHECK(min_degree(complete_graph(7, 3), 2) == 5);
  CHECK(min_degree(complete_graph(8, 4), 3) == 5);
  CHECK_THROWS_AS(min_degree(complete_graph(8, 4), 4), PreconditionError);
}

TEST_CASE("min_degree on random graphs matches oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const KGraph h = oracle::bernoulli_graph(9, 3, 0.7, rng);
    CHECK(min_degree(h, 2) == oracle::min_codegree(h));
  }
}

TEST_CASE("parity_degree examples and split property") {
  const KGraph k4 = complete_graph(4, 3);
  CHECK(parity_degree(k4, {0, 1}, 2, 1) == 2);
  CHECK(parity_degree(k4, {}, 2, 1) == 0);
  CHECK(parity_degree(k4, {}, 2, 0) == degree(k4, 2));
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const KGraph h = oracle::bernoulli_graph(8, 3, 0.4, rng);
    VertexSet s;
    for (int v = 0; v < 8; ++v) {
      if (bernoulli(rng, 0.5)) s.push_back(v);
    }
    const int v = static_cast<int>(uniform_index(rng, 8));
    CHECK(parity_degree(h, s, v, 0) + parity_degree(h, s, v, 1) ==
          degree(h, v));
  }
}

TEST_CASE("partite_degree") {
  const PartiteGraph complete(std::vector<KGraph>(3, complete_graph(9, 3)));
  CHECK(partite_degree(complete, 1, {0, 4}) == 7);
  const PartiteGraph sh = gen_script_H(9, 3);
  CHECK(partite_degree(sh, 2, {5, 6}) == 2);
  CHECK(partite_degree(PartiteGraph(3, 9, 3), 0, {0, 1}) == 0);
}

TEST_CASE("complement is an involution and splits C(n,k)") {
  CHECK(complement(complete_graph(6, 3)).edge_count() == 0);
  const KGraph h = gen_H(9, 3);
  CHECK(complement(h).edge_count() == 84 - h.edge_count());
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const KGraph g = oracle::bernoulli_graph(8, 3, 0.3, rng);
    const KGraph c = complement(g);
    CHECK(complement(c) == g);
    CHECK(g.edge_count() + c.edge_count() == binomial(8, 3));
  }
}

TEST_CASE("codegree is monotone under edge insertion") {
  Rng rng(9);
  KGraph h(8, 3);
  for (int step = 0; step < 40; ++step) {
    const VertexSet s = {static_cast<int>(uniform_index(rng, 4)),
                         4 + static_cast<int>(uniform_index(rng, 4))};
    const long long before = codegree(h, s);
    VertexSet e = {static_cast<int>(uniform_index(rng, 8))};
    while (e.size() < 3) {
      const int v = static_cast<int>(uniform_index(rng, 8));
      if (!contains(e, v)) {
        e.push_back(v);
        std::sort(e.begin(), e.end());
      }
    }
    h.add_edge(e);
    CHECK(codegree(h, s) >= before);
  }
}

TEST_CASE("KGraph insertion is idempotent and validates edges") {
  KGraph h(5, 3);
  CHECK(h.add_edge({2, 0, 1}));
  CHECK_FALSE(h.add_edge({0, 1, 2}));
  CHECK(h.edge_count() == 1);
  CHECK(h.has_edge({0, 1, 2}));
  CHECK_THROWS_AS(h.add_edge({0, 0, 1}), PreconditionError);
  CHECK_THROWS_AS(h.add_edge({0, 1, 5}), PreconditionError);
  CHECK_THROWS_AS(h.add_edge({0, 1}), PreconditionError);
  CHECK(h.remove_edge({0, 1, 2}));
  CHECK(h.edge_count() == 0);
  CHECK_THROWS_AS(KGraph(2, 3), PreconditionError);
}

TEST_CASE("family and bipartition invariants") {
  CHECK_THROWS_AS(GraphFamily({KGraph(6, 3), KGraph(9, 3)}),
                  PreconditionError);
  const GraphFamily fam({KGraph(6, 3), KGraph(6, 3)});
  CHECK(fam.balanced());
  const Bipartition b = make_bipartition(6, {4, 1});
  CHECK(b.w == VertexSet{1, 4});
  CHECK(b.u == VertexSet{0, 2, 3, 5});
  CHECK(is_valid_bipartition(6, b));
  CHECK_THROWS_AS(make_bipartition(6, {6}), PreconditionError);
}

TEST_CASE("text format round trip, 1-indexed on disk") {
  KGraph h(6, 3);
  h.add_edge({0, 1, 2});
  h.add_edge({3, 4, 5});
  std::ostringstream os;
  write_kgraph(os, h);
  CHECK(os.str() == "3 6 2\n1 2 3\n4 5 6\n");
  const Instance back = parse_instance("# comment\n\n" + os.str());
  CHECK(std::get<KGraph>(back) == h);

  const PartiteGraph pg = gen_script_H(6, 3);
  std::ostringstream ps;
  write_partite(ps, pg);
  const PartiteGraph pg2 = std::get<PartiteGraph>(parse_instance(ps.str()));
  CHECK(pg2.neighborhoods() == pg.neighborhoods());

  const PartiteGraph empty(2, 6, 3);
  std::ostringstream es;
  write_partite(es, empty);
  CHECK(std::get<PartiteGraph>(parse_instance(es.str())).q() == 2);

  CHECK_THROWS_AS(parse_instance("3 6 1\n1 2 7\n"), FormatError);
  CHECK_THROWS_AS(parse_instance("3 6 2\n1 2 3\n"), FormatError);
}

TEST_CASE("json round trip") {
  const PartiteGraph pg = gen_script_H(9, 3);
  const auto j = to_json(pg);
  const PartiteGraph back = std::get<PartiteGraph>(instance_from_json(j));
  CHECK(back.neighborhoods() == pg.neighborhoods());
  const KGraph h = gen_H(9, 3);
  CHECK(std::get<KGraph>(parse_instance(to_json(h).dump())) == h);
  const PartiteMatching m = {{0, {0, 1, 2}}, {1, {3, 4, 5}}};
  CHECK(matching_from_json(to_json(m)) == m);
}

}  // namespace
}  // namespace rml
