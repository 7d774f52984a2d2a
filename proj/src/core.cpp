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

#include "rml/core.hpp"

#include <algorithm>
#include <limits>

namespace rml {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rational parse_rational(const std::string& s) {
  try {
    std::size_t pos = 0;
    const long long num = std::stoll(s, &pos);
    if (pos == s.size()) return Rational(num);
    if (s[pos] != '/') throw PreconditionError("bad rational: " + s);
    const std::string rest = s.substr(pos + 1);
    const long long den = std::stoll(rest, &pos);
    if (pos != rest.size() || den == 0) throw PreconditionError("bad rational: " + s);
    return Rational(num, den);
  } catch (const std::logic_error&) {
    throw PreconditionError("bad rational: " + s);
  }
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) /
         static_cast<double>(r.denominator());
}

// ---------------------------------------------------------------- KGraph

KGraph::KGraph(int n, int k) : n_(n), k_(k) {
  if (k < 1 || n < 0 || k > n) {
    throw PreconditionError("KGraph requires 1 <= k <= n");
  }
}

void KGraph::check_edge(const VertexSet& e) const {
  if (static_cast<int>(e.size()) != k_) {
    throw PreconditionError("edge has wrong size");
  }
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] < 0 || e[i] >= n_) throw PreconditionError("vertex out of range");
    if (i > 0 && e[i] == e[i - 1]) {
      throw PreconditionError("edge has repeated vertex");
    }
  }
}

bool KGraph::add_edge(VertexSet e) {
  std::sort(e.begin(), e.end());
  check_edge(e);
  if (!keys_.insert(colex_rank(e)).second) return false;
  std::uint64_t mask = 0;
  if (n_ <= 64) {
    for (Vertex v : e) mask |= std::uint64_t{1} << v;
  }
  if (edges_.empty() || edges_.back() < e) {
    edges_.push_back(std::move(e));
    masks_.push_back(mask);
  } else {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    const auto pos = it - edges_.begin();
    edges_.insert(it, std::move(e));
    masks_.insert(masks_.begin() + pos, mask);
  }
  return true;
}

bool KGraph::remove_edge(const VertexSet& e) {
  if (!has_edge(e)) return false;
  keys_.erase(colex_rank(e));
  auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
  masks_.erase(masks_.begin() + (it - edges_.begin()));
  edges_.erase(it);
  return true;
}

bool KGraph::has_edge(const VertexSet& e) const {
  if (static_cast<int>(e.size()) != k_) return false;
  for (Vertex v : e) {
    if (v < 0 || v >= n_) return false;
  }
  return keys_.count(colex_rank(e)) > 0;
}

KGraph complete_graph(int n, int k) {
  KGraph h(n, k);
  for_each_combination(n, k, [&](const VertexSet& e) { h.add_edge(e); });
  return h;
}

// ----------------------------------------------------------- GraphFamily

GraphFamily::GraphFamily(std::vector<KGraph> members)
    : members_(std::move(members)) {
  if (members_.empty()) throw PreconditionError("family must be nonempty");
  n_ = members_[0].n();
  k_ = members_[0].k();
  for (const KGraph& m : members_) {
    if (m.n() != n_ || m.k() != k_) {
      throw PreconditionError("family members differ in (n,k)");
    }
  }
}

// ---------------------------------------------------------- PartiteGraph

PartiteGraph::PartiteGraph(int q, int n, int k) : n_(n), k_(k) {
  if (q < 0) throw PreconditionError("negative color count");
  nbhd_.assign(q, KGraph(n, k));
}

PartiteGraph::PartiteGraph(std::vector<KGraph> neighborhoods)
    : nbhd_(std::move(neighborhoods)) {
  if (nbhd_.empty()) throw PreconditionError("partite graph needs a color");
  n_ = nbhd_[0].n();
  k_ = nbhd_[0].k();
  for (const KGraph& h : nbhd_) {
    if (h.n() != n_ || h.k() != k_) {
      throw PreconditionError("neighborhoods differ in (n,k)");
    }
  }
}

bool PartiteGraph::has_edge(int color, const VertexSet& points) const {
  if (color < 0 || color >= q()) return false;
  return nbhd_[color].has_edge(points);
}

std::size_t PartiteGraph::edge_count() const {
  std::size_t total = 0;
  for (const KGraph& h : nbhd_) total += h.edge_count();
  return total;
}

std::vector<PartiteEdge> PartiteGraph::edges() const {
  std::vector<PartiteEdge> out;
  out.reserve(edge_count());
  for (int c = 0; c < q(); ++c) {
    for (const VertexSet& e : nbhd_[c].edges()) out.push_back({c, e});
  }
  return out;
}

PartiteVertexSet vertices_of(const PartiteEdge& e) {
  return {{e.color}, e.points};
}

PartiteVertexSet vertices_of(const PartiteMatching& m) {
  PartiteVertexSet out;
  for (const PartiteEdge& e : m) {
    out.colors.push_back(e.color);
    out.points.insert(out.points.end(), e.points.begin(), e.points.end());
  }
  std::sort(out.colors.begin(), out.colors.end());
  std::sort(out.points.begin(), out.points.end());
  out.colors.erase(std::unique(out.colors.begin(), out.colors.end()),
                   out.colors.end());
  out.points.erase(std::unique(out.points.begin(), out.points.end()),
                   out.points.end());
  return out;
}

PartiteVertexSet all_vertices(const PartiteGraph& pg) {
  return {range_set(0, pg.q()), range_set(0, pg.n())};
}

// ----------------------------------------------------------- Bipartition

Bipartition make_bipartition(int n, VertexSet w,
                             std::optional<int> parity_class) {
  std::sort(w.begin(), w.end());
  w.erase(std::unique(w.begin(), w.end()), w.end());
  for (Vertex v : w) {
    if (v < 0 || v >= n) throw PreconditionError("W not within [n]");
  }
  Bipartition b;
  b.u = set_difference(range_set(0, n), w);
  b.w = std::move(w);
  b.parity_class = parity_class;
  return b;
}

bool is_valid_bipartition(int n, const Bipartition& b) {
  return is_disjoint(b.w, b.u) && set_union(b.w, b.u) == range_set(0, n);
}

// ------------------------------------------------------------- degrees

Rational threshold_t(int n, int k) {
  if (k < 3 || n < k || n % k != 0) {
    throw PreconditionError("threshold_t requires k >= 3, n >= k, k | n");
  }
  // Work with 2t to stay in the integers.
  long long two_t;
  if (k % 4 == 0 && (n / k) % 2 == 1) {
    two_t = n + 4 - 2LL * k;
  } else if (k % 2 == 1 && n % 2 == 1) {
    two_t = ((n - 1) / 2) % 2 == 1 ? n + 3 - 2LL * k : n + 1 - 2LL * k;
  } else {
    two_t = n + 2 - 2LL * k;
  }
  return Rational(two_t, 2);
}

long long codegree(const KGraph& h, const VertexSet& s) {
  VertexSet sorted = s;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 0 || sorted[i] >= h.n() ||
        (i > 0 && sorted[i] == sorted[i - 1])) {
      throw PreconditionError("codegree: s is not a vertex subset");
    }
  }
  const int l = static_cast<int>(sorted.size());
  if (l > h.k()) throw PreconditionError("codegree: |s| > k");
  const VertexSet rest = set_difference(range_set(0, h.n()), sorted);
  long long count = 0;
  if (l == h.k() - 1) {
    for (Vertex v : rest) {
      VertexSet e = sorted;
      e.insert(std::upper_bound(e.begin(), e.end(), v), v);
      if (h.has_edge(e)) ++count;
    }
    return count;
  }
  if (2 * l < h.k()) {
    // Few fixed vertices: scan the edge list.
    for (const VertexSet& e : h.edges()) {
      if (is_subset(sorted, e)) ++count;
    }
    return count;
  }
  for_each_subset_of(rest, h.k() - l, [&](const VertexSet& t) {
    if (h.has_edge(set_union(sorted, t))) ++count;
  });
  return count;
}

long long min_degree(const KGraph& h, int l) {
  if (l < 1 || l > h.k() - 1) {
    throw PreconditionError("min_degree requires 1 <= l <= k-1");
  }
  long long best = std::numeric_limits<long long>::max();
  if (l == h.k() - 1 && binomial(h.n(), l) <= 20000000) {
    // Tally codegrees from the edge list in one pass.
    std::vector<long long> tally(binomial(h.n(), l), 0);
    for (const VertexSet& e : h.edges()) {
      VertexSet sub(e.begin() + 1, e.end());
      for (int drop = 0; drop < h.k(); ++drop) {
        if (drop > 0) sub[drop - 1] = e[drop - 1];
        ++tally[colex_rank(sub)];
      }
    }
    for (long long t : tally) best = std::min(best, t);
    return best;
  }
  for_each_combination(h.n(), l, [&](const VertexSet& s) {
    best = std::min(best, codegree(h, s));
  });
  return best;
}

long long degree(const KGraph& h, Vertex v) {
  long long count = 0;
  for (const VertexSet& e : h.edges()) {
    if (contains(e, v)) ++count;
  }
  return count;
}

long long parity_degree(const KGraph& h, const VertexSet& s, Vertex v,
                        int j) {
  long long count = 0;
  for (const VertexSet& e : h.edges()) {
    if (contains(e, v) && intersection_size(e, s) % 2 == j) ++count;
  }
  return count;
}

long long partite_degree(const PartiteGraph& pg, int color,
                         const VertexSet& set) {
  if (color < 0 || color >= pg.q()) {
    throw PreconditionError("partite_degree: bad color");
  }
  if (static_cast<int>(set.size()) != pg.k() - 1) {
    throw PreconditionError("partite_degree: set must have k-1 points");
  }
  return codegree(pg.neighborhood(color), set);
}

KGraph complement(const KGraph& h) {
  KGraph out(h.n(), h.k());
  for_each_combination(h.n(), h.k(), [&](const VertexSet& e) {
    if (!h.has_edge(e)) out.add_edge(e);
  });
  return out;
}

}  // namespace rml
