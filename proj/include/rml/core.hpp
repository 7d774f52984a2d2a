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

// Core hypergraph types: k-graphs, families of k-graphs ("colors"), the
// (1,k)-partite lift, matchings, and vertex bipartitions.

#ifndef RML_CORE_HPP_
#define RML_CORE_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include <boost/rational.hpp>

#include "rml/combinatorics.hpp"

namespace rml {

using Rational = boost::rational<long long>;

std::string to_string(const Rational& r);
double to_double(const Rational& r);
// "p" or "p/q"; throws PreconditionError otherwise.
Rational parse_rational(const std::string& s);

// Caller passed arguments outside the documented domain.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A hypothesis of a constructive procedure does not hold on the input.
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// k-uniform hypergraph on vertices 0..n-1. Edges are kept in sorted
// (lexicographic) order; membership is a hash lookup on the colex rank.
class KGraph {
 public:
  KGraph() = default;
  KGraph(int n, int k);

  int n() const { return n_; }
  int k() const { return k_; }

  // Inserts a k-set (sorted or not). Inserting an existing edge is a no-op.
  // Returns true when the edge was new.
  bool add_edge(VertexSet e);
  bool remove_edge(const VertexSet& e);
  bool has_edge(const VertexSet& e) const;  // e must be sorted

  const std::vector<VertexSet>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  // Bit mask of edge i; only meaningful when n <= 64.
  std::uint64_t edge_mask(std::size_t i) const { return masks_[i]; }
  bool has_masks() const { return n_ <= 64; }

  bool operator==(const KGraph& o) const {
    return n_ == o.n_ && k_ == o.k_ && edges_ == o.edges_;
  }

 private:
  void check_edge(const VertexSet& e) const;

  int n_ = 0;
  int k_ = 0;
  std::vector<VertexSet> edges_;
  std::vector<std::uint64_t> masks_;
  std::unordered_set<std::uint64_t> keys_;
};

KGraph complete_graph(int n, int k);

// Ordered list of n/k k-graphs on a common vertex set.
class GraphFamily {
 public:
  GraphFamily() = default;
  explicit GraphFamily(std::vector<KGraph> members);

  int n() const { return n_; }
  int k() const { return k_; }
  int size() const { return static_cast<int>(members_.size()); }
  bool balanced() const { return n_ == k_ * size(); }
  const KGraph& operator[](int i) const { return members_[i]; }
  const std::vector<KGraph>& members() const { return members_; }

 private:
  int n_ = 0;
  int k_ = 0;
  std::vector<KGraph> members_;
};

struct PartiteEdge {
  int color = 0;
  VertexSet points;

  auto operator<=>(const PartiteEdge&) const = default;
};

using PartiteMatching = std::vector<PartiteEdge>;
using KMatching = std::vector<VertexSet>;

// (1,k)-partite (k+1)-graph with color side {0..q-1} and point side
// {0..n-1}. Each color's neighborhood is a k-graph on the points.
class PartiteGraph {
 public:
  PartiteGraph() = default;
  PartiteGraph(int q, int n, int k);
  explicit PartiteGraph(std::vector<KGraph> neighborhoods);

  int q() const { return static_cast<int>(nbhd_.size()); }
  int n() const { return n_; }
  int k() const { return k_; }
  bool balanced() const { return n_ == k_ * q(); }

  const KGraph& neighborhood(int color) const { return nbhd_[color]; }
  const std::vector<KGraph>& neighborhoods() const { return nbhd_; }
  bool has_edge(int color, const VertexSet& points) const;
  bool has_edge(const PartiteEdge& e) const {
    return has_edge(e.color, e.points);
  }
  std::size_t edge_count() const;
  // All edges ordered by (color, points).
  std::vector<PartiteEdge> edges() const;

 private:
  int n_ = 0;
  int k_ = 0;
  std::vector<KGraph> nbhd_;
};

// Subset of colors and points of a partite graph.
struct PartiteVertexSet {
  VertexSet colors;
  VertexSet points;

  bool empty() const { return colors.empty() && points.empty(); }
  std::size_t size() const { return colors.size() + points.size(); }
  auto operator<=>(const PartiteVertexSet&) const = default;
};

PartiteVertexSet vertices_of(const PartiteMatching& m);
PartiteVertexSet vertices_of(const PartiteEdge& e);
PartiteVertexSet all_vertices(const PartiteGraph& pg);

// W and U = [n] \ W, with an optional parity class i.
struct Bipartition {
  VertexSet w;
  VertexSet u;
  std::optional<int> parity_class;
};

// Builds (W, [n]\W); throws PreconditionError if W is not within [n].
Bipartition make_bipartition(int n, VertexSet w,
                             std::optional<int> parity_class = {});
bool is_valid_bipartition(int n, const Bipartition& b);

// Threshold t(n,k). Requires k >= 3, n >= k, k | n.
Rational threshold_t(int n, int k);

// Number of T in V\s with T u s an edge.
long long codegree(const KGraph& h, const VertexSet& s);
// Minimum l-degree over all l-subsets.
long long min_degree(const KGraph& h, int l);
long long degree(const KGraph& h, Vertex v);
// Edges through v whose intersection with s has size = j (mod 2).
long long parity_degree(const KGraph& h, const VertexSet& s, Vertex v, int j);
// Number of points completing (color, set) to an edge; |set| = k-1.
long long partite_degree(const PartiteGraph& pg, int color,
                         const VertexSet& set);
KGraph complement(const KGraph& h);

}  // namespace rml

#endif  // RML_CORE_HPP_
