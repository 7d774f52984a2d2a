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

// Hand-built instances shared by the unit and acceptance suites: graphs from
// edge lists, dense random lifts, and planted devices.

#ifndef RML_TESTS_FIXTURES_HPP_
#define RML_TESTS_FIXTURES_HPP_

#include <algorithm>
#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "rml/core.hpp"
#include "rml/devices.hpp"
#include "rml/random.hpp"

namespace rml::fixture {

inline PartiteGraph make_partite(int q, int n, int k,
                                 const std::vector<PartiteEdge>& edges) {
  std::vector<KGraph> nb(q, KGraph(n, k));
  for (const PartiteEdge& e : edges) {
    VertexSet pts = e.points;
    std::sort(pts.begin(), pts.end());
    nb[e.color].add_edge(pts);
  }
  return PartiteGraph(std::move(nb));
}

inline PartiteGraph without_edge(const PartiteGraph& f, const PartiteEdge& e) {
  std::vector<KGraph> nb = f.neighborhoods();
  nb[e.color].remove_edge(e.points);
  return PartiteGraph(std::move(nb));
}

// q colors, each neighborhood a Bernoulli(p) k-graph.
inline PartiteGraph random_lift(int q, int n, int k, double p, Rng& rng) {
  std::vector<KGraph> nb;
  for (int c = 0; c < q; ++c) nb.push_back(oracle::bernoulli_graph(n, k, p, rng));
  return PartiteGraph(std::move(nb));
}

inline PartiteGraph complete_lift(int q, int n, int k) {
  return PartiteGraph(std::vector<KGraph>(q, complete_graph(n, k)));
}

struct Planted {
  PartiteGraph graph;
  BalancedSet s;
  Device device;
};

inline VertexSet take(int& next, int count) {
  VertexSet out(count);
  std::iota(out.begin(), out.end(), next);
  next += count;
  return out;
}

inline VertexSet plus(VertexSet a, Vertex v) {
  a.insert(std::lower_bound(a.begin(), a.end(), v), v);
  return a;
}

// A graph holding exactly one device of `kind` for S = {0; 0..k-1}. Kind II
// pads to 81 points with a complete pivot neighborhood so that the pivot
// passes the degree census. Kind I has no g. Layouts keep the planted device
// first in the search order.
inline Planted plant_device(DeviceKind kind, int k) {
  Planted out;
  int next = 0;
  out.s = BalancedSet{0, take(next, k)};
  std::vector<VertexSet> b(k);
  for (int i = 0; i < k; ++i) b[i] = take(next, k - 1);
  std::vector<PartiteEdge> edges;
  Device& d = out.device;
  d.kind = kind;

  if (kind == DeviceKind::kI) {
    const VertexSet u = take(next, k);
    for (int i = 0; i < k; ++i) d.edges.push_back({i + 1, plus(b[i], u[i])});
    for (int i = 0; i < k; ++i) d.witness.push_back({i + 1, plus(b[i], out.s.vset[i])});
    d.witness.push_back({0, u});
    edges = d.edges;
    edges.insert(edges.end(), d.witness.begin(), d.witness.end());
    out.graph = make_partite(k + 1, next, k, edges);
    return out;
  }
  if (kind == DeviceKind::kIII) {
    const VertexSet u = take(next, k);
    const VertexSet last = take(next, k);
    const int y = k + 1;
    for (int i = 0; i < k; ++i) d.edges.push_back({i + 1, plus(b[i], u[i])});
    d.edges.push_back({y, last});
    for (int i = 0; i < k; ++i) d.witness.push_back({i + 1, plus(b[i], out.s.vset[i])});
    d.witness.push_back({0, last});
    d.witness.push_back({y, u});
    edges = d.edges;
    edges.insert(edges.end(), d.witness.begin(), d.witness.end());
    out.graph = make_partite(k + 2, next, k, edges);
    return out;
  }
  // Kind II: u_1..u_{k-1}, T, u_k, u_{k+1}.
  const VertexSet head = take(next, k - 1);
  const VertexSet t = take(next, k - 1);
  const Vertex uk = next++;
  const Vertex uk1 = next++;
  const int y = k + 1;
  const int n = 81;
  const int q = n / k;
  for (int i = 0; i < k - 1; ++i) d.edges.push_back({i + 1, plus(b[i], head[i])});
  d.edges.push_back({k, plus(b[k - 1], uk)});
  d.edges.push_back({y, plus(t, uk1)});
  for (int i = 0; i < k; ++i) d.witness.push_back({i + 1, plus(b[i], out.s.vset[i])});
  d.witness.push_back({y, plus(t, uk)});
  d.witness.push_back({0, plus(head, uk1)});
  edges = d.edges;
  edges.insert(edges.end(), d.witness.begin(), d.witness.end());
  std::vector<KGraph> nb(q, KGraph(n, k));
  for (const PartiteEdge& e : edges) nb[e.color].add_edge(e.points);
  nb[y] = complete_graph(n, k);
  out.graph = PartiteGraph(std::move(nb));
  return out;
}

// One uncovered set S (color 0, k + 1 points), a single S-absorbing edge of
// color 1, and a partial matching on colors 2..q-1; n = kq + 1. Points are
// relabeled at random and Bernoulli(noise) edges added to every color.
struct AbsorptionInstance {
  PartiteGraph graph;
  BalancedSet s;
  PartiteMatching absorbing;
  PartiteMatching partial;
};

inline AbsorptionInstance plant_absorption(int k, int q, double noise,
                                           Rng& rng) {
  const int n = k * q + 1;
  VertexSet perm = range_set(0, n);
  shuffle_in_place(perm, rng);
  auto map = [&](const VertexSet& pts) {
    VertexSet out;
    for (Vertex v : pts) out.push_back(perm[v]);
    std::sort(out.begin(), out.end());
    return out;
  };
  int next = 0;
  const VertexSet s = take(next, k + 1);
  const VertexSet e = take(next, k);
  AbsorptionInstance out;
  out.s = BalancedSet{0, map(s)};
  out.absorbing = {{1, map(e)}};
  for (int c = 2; c < q; ++c) out.partial.push_back({c, map(take(next, k))});
  // Witness: color 0 on v_0..v_{k-1}; color 1 on v_k and e minus its last.
  VertexSet a(s.begin(), s.begin() + k);
  VertexSet bw(e.begin(), e.end() - 1);
  bw.push_back(s[k]);
  std::vector<KGraph> nb;
  for (int c = 0; c < q; ++c) nb.push_back(oracle::bernoulli_graph(n, k, noise, rng));
  nb[0].add_edge(map(a));
  nb[1].add_edge(map(bw));
  for (const PartiteEdge& x : out.absorbing) nb[x.color].add_edge(x.points);
  for (const PartiteEdge& x : out.partial) nb[x.color].add_edge(x.points);
  out.graph = PartiteGraph(std::move(nb));
  return out;
}

}  // namespace rml::fixture

#endif  // RML_TESTS_FIXTURES_HPP_
