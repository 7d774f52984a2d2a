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

#include "rml/devices.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "rml/closeness.hpp"
#include "rml/random.hpp"

namespace rml {
namespace {

// Colors and points share one id space: color c is -(c + 1).
using Ids = std::vector<int>;

int color_id(int c) { return -(c + 1); }

Ids ids_of(const PartiteEdge& e) {
  Ids out;
  out.reserve(e.points.size() + 1);
  out.push_back(color_id(e.color));
  out.insert(out.end(), e.points.begin(), e.points.end());
  return out;  // colors are negative, so this is sorted
}

Ids ids_of(const BalancedSet& s) {
  Ids out{color_id(s.x0)};
  out.insert(out.end(), s.vset.begin(), s.vset.end());
  return out;
}

Ids ids_of(const PartiteMatching& m) {
  Ids out;
  for (const PartiteEdge& e : m) {
    const Ids x = ids_of(e);
    out.insert(out.end(), x.begin(), x.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool well_formed(const PartiteGraph& f, const PartiteEdge& e) {
  if (e.color < 0 || e.color >= f.q()) return false;
  if (static_cast<int>(e.points.size()) != f.k()) return false;
  if (!std::is_sorted(e.points.begin(), e.points.end())) return false;
  if (std::adjacent_find(e.points.begin(), e.points.end()) != e.points.end()) {
    return false;
  }
  return e.points.front() >= 0 && e.points.back() < f.n();
}

bool all_in_graph(const PartiteGraph& f, const PartiteMatching& m) {
  for (const PartiteEdge& e : m) {
    if (!well_formed(f, e) || !f.has_edge(e)) return false;
  }
  return true;
}

bool is_matching(const PartiteMatching& m) {
  const Ids all = ids_of(m);
  return std::adjacent_find(all.begin(), all.end()) == all.end();
}

bool set_ok(const PartiteGraph& f, const BalancedSet& s, int points) {
  if (s.x0 < 0 || s.x0 >= f.q()) return false;
  if (static_cast<int>(s.vset.size()) != points) return false;
  if (!std::is_sorted(s.vset.begin(), s.vset.end())) return false;
  if (std::adjacent_find(s.vset.begin(), s.vset.end()) != s.vset.end()) {
    return false;
  }
  return s.vset.empty() || (s.vset.front() >= 0 && s.vset.back() < f.n());
}

bool verify_edge_absorber(const PartiteGraph& f, const BalancedSet& s,
                          const Device& d) {
  const int k = f.k();
  if (!set_ok(f, s, k + 1)) return false;
  if (d.edges.size() != 1 || d.witness.size() != 2) return false;
  if (!all_in_graph(f, d.edges) || !all_in_graph(f, d.witness)) return false;
  if (!is_matching(d.witness)) return false;
  const Ids pool = set_union(ids_of(d.edges[0]), ids_of(s));
  return is_subset(ids_of(d.witness), pool);
}

// Shared checks for kinds I-III: membership, matchings, S disjoint from the
// device, and the witness covering exactly the device plus S.
bool device_frame_ok(const PartiteGraph& f, const BalancedSet& s,
                     const Device& d) {
  if (!set_ok(f, s, f.k())) return false;
  if (!all_in_graph(f, d.edges) || !all_in_graph(f, d.witness)) return false;
  if (!is_matching(d.edges) || !is_matching(d.witness)) return false;
  const Ids dev = ids_of(d.edges);
  const Ids sid = ids_of(s);
  if (!is_disjoint(dev, sid)) return false;
  return ids_of(d.witness) == set_union(dev, sid);
}

bool verify_device_kind(const PartiteGraph& f, const BalancedSet& s,
                        const Device& d) {
  const int k = f.k();
  const std::size_t ku = static_cast<std::size_t>(k);
  const int x0 = color_id(s.x0);
  std::vector<Ids> e, ep;
  for (const PartiteEdge& x : d.edges) e.push_back(ids_of(x));
  for (const PartiteEdge& x : d.witness) ep.push_back(ids_of(x));

  switch (d.kind) {
    case DeviceKind::kI:
      if (d.edges.size() != ku && d.edges.size() != ku + 1) return false;
      if (d.witness.size() != d.edges.size() + 1) return false;
      if (d.edges.size() == ku + 1 && !(d.witness[ku + 1] == d.edges[ku])) {
        return false;
      }
      break;
    case DeviceKind::kII:
    case DeviceKind::kIII:
      if (d.edges.size() != ku + 1 || d.witness.size() != ku + 2) return false;
      break;
    case DeviceKind::kEdge:
      return false;
  }
  if (!device_frame_ok(f, s, d)) return false;

  // (i) e_i' misses e_j for i != j in [k]; (ii) e_i' \ e_i = {v_i} and
  // |e_i \ e_i'| = 1.
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (i != j && !is_disjoint(ep[i], e[j])) return false;
    }
    if (set_difference(ep[i], e[i]) != Ids{s.vset[i]}) return false;
    if (set_difference(e[i], ep[i]).size() != 1) return false;
  }
  Ids tail;
  if (d.kind == DeviceKind::kI) {
    tail = {x0};
    for (int i = 0; i < k; ++i) tail = set_union(tail, set_difference(e[i], ep[i]));
    return ep[k] == tail;
  }
  if (d.kind == DeviceKind::kII) {
    if (set_intersection(ep[k], e[k - 1]) != set_difference(e[k - 1], ep[k - 1])) {
      return false;
    }
    if (set_difference(e[k], ep[k]).size() != 1) return false;
    tail = {x0};
    for (int i = 0; i <= k; ++i) {
      if (i == k - 1) continue;
      tail = set_union(tail, set_difference(e[i], ep[i]));
    }
    return ep[k + 1] == tail;
  }
  // Kind III.
  if (set_difference(ep[k], e[k]) != Ids{x0}) return false;
  if (set_difference(e[k], ep[k]).size() != 1) return false;
  for (int i = 0; i <= k; ++i) tail = set_union(tail, set_difference(e[i], ep[i]));
  return ep[k + 1] == tail;
}

VertexSet with_point(VertexSet pts, Vertex v) {
  pts.insert(std::lower_bound(pts.begin(), pts.end(), v), v);
  return pts;
}

VertexSet without_point(VertexSet pts, Vertex v) {
  pts.erase(std::find(pts.begin(), pts.end(), v));
  return pts;
}

PartiteEdge edge_of(int color, VertexSet pts) {
  std::sort(pts.begin(), pts.end());
  return PartiteEdge{color, std::move(pts)};
}

// Witness search for kinds I-III. `order` holds the device edges in the
// e_1..e_k(,e_{k+1}) roles; returns the first verified device.
std::optional<Device> witness_for_order(const PartiteGraph& f,
                                        const BalancedSet& s, DeviceKind kind,
                                        const PartiteMatching& order,
                                        const std::optional<PartiteEdge>& g) {
  const int k = f.k();
  PartiteMatching primes(k);
  std::vector<Vertex> removed(k);
  std::optional<Device> out;

  auto finish = [&]() -> bool {
    Device d;
    d.kind = kind;
    d.edges = order;
    d.witness = primes;
    if (kind == DeviceKind::kI) {
      VertexSet u(removed.begin(), removed.end());
      d.witness.push_back(edge_of(s.x0, u));
      if (g) {
        d.edges.push_back(*g);
        d.witness.push_back(*g);
      }
      if (!f.has_edge(d.witness[k])) return false;
    } else if (kind == DeviceKind::kII) {
      const PartiteEdge& last = order[k];
      for (Vertex w : last.points) {
        PartiteEdge ek1 =
            edge_of(last.color, with_point(without_point(last.points, w),
                                           removed[k - 1]));
        VertexSet u;
        for (int i = 0; i < k - 1; ++i) u.push_back(removed[i]);
        u.push_back(w);
        Device dd = d;
        dd.witness.push_back(ek1);
        dd.witness.push_back(edge_of(s.x0, u));
        if (verify_device(f, s, dd)) {
          out = std::move(dd);
          return true;
        }
      }
      return false;
    } else {
      const PartiteEdge& last = order[k];
      d.witness.push_back(PartiteEdge{s.x0, last.points});
      d.witness.push_back(
          edge_of(last.color, VertexSet(removed.begin(), removed.end())));
    }
    if (verify_device(f, s, d)) {
      out = std::move(d);
      return true;
    }
    return false;
  };

  // Depth-first over the removed point u_i of each e_i.
  auto rec = [&](auto&& self, int i) -> bool {
    if (i == k) return finish();
    for (Vertex u : order[i].points) {
      PartiteEdge ep{order[i].color,
                     with_point(without_point(order[i].points, u), s.vset[i])};
      if (!f.has_edge(ep)) continue;
      primes[i] = std::move(ep);
      removed[i] = u;
      if (self(self, i + 1)) return true;
    }
    return false;
  };
  rec(rec, 0);
  return out;
}

std::optional<Device> edge_witness(const PartiteGraph& f, const BalancedSet& s,
                                   const PartiteEdge& e) {
  const int k = f.k();
  if (e.color == s.x0) return std::nullopt;
  const VertexSet pool = set_union(e.points, s.vset);
  std::optional<Device> out;
  for_each_subset_of(pool, k, [&](const VertexSet& a) {
    if (!f.has_edge(e.color, a)) return true;
    const VertexSet rest = set_difference(pool, a);
    for_each_subset_of(rest, k, [&](const VertexSet& b) {
      if (!f.has_edge(s.x0, b)) return true;
      Device d;
      d.kind = DeviceKind::kEdge;
      d.edges = {e};
      d.witness = {PartiteEdge{e.color, a}, PartiteEdge{s.x0, b}};
      std::sort(d.witness.begin(), d.witness.end());
      out = std::move(d);
      return false;
    });
    return !out.has_value();
  });
  return out;
}

// Staged device search.
class DeviceSearch {
 public:
  DeviceSearch(const PartiteGraph& f, const BalancedSet& s, DeviceKind kind,
               int limit, const DeviceSearchBudget& budget)
      : f_(f), s_(s), kind_(kind), limit_(limit), budget_(budget),
        k_(f.k()), used_point_(f.n(), 0), used_color_(f.q(), 0),
        b_color_(f.k()), b_points_(f.k()), u_(f.k() + 1) {
    for (Vertex v : s.vset) used_point_[v] = 1;
    used_color_[s.x0] = 1;
    color_order_.resize(f.q());
    std::iota(color_order_.begin(), color_order_.end(), 0);
  }

  void set_color_order(std::vector<int> order) { color_order_ = std::move(order); }

  std::vector<Device> run(std::set<Device>& seen) {
    seen_ = &seen;
    stage_b(0);
    return std::move(found_);
  }

  bool exhausted() const { return nodes_ >= budget_.nodes; }

 private:
  bool done() const {
    return static_cast<int>(found_.size()) >= limit_ || nodes_ >= budget_.nodes;
  }
  bool tick() { return ++nodes_ <= budget_.nodes; }

  VertexSet available() const {
    VertexSet out;
    for (int v = 0; v < f_.n(); ++v) {
      if (!used_point_[v]) out.push_back(v);
    }
    return out;
  }

  void mark(const VertexSet& pts, char value) {
    for (Vertex v : pts) used_point_[v] = value;
  }

  PartiteEdge b_edge(int i, Vertex extra) const {
    return edge_of(b_color_[i], with_point(b_points_[i], extra));
  }

  void emit(Device d) {
    if (!verify_device(f_, s_, d)) {
      throw std::logic_error("find_devices produced an unverifiable device");
    }
    if (seen_->insert(d).second) found_.push_back(std::move(d));
  }

  void stage_b(int i) {
    if (done()) return;
    if (i == k_) {
      if (kind_ == DeviceKind::kI) stage_connector(0);
      if (kind_ == DeviceKind::kII) stage_u2(0);
      if (kind_ == DeviceKind::kIII) stage_pivot3();
      return;
    }
    const VertexSet avail = available();
    for (int c : color_order_) {
      if (used_color_[c]) continue;
      used_color_[c] = 1;
      b_color_[i] = c;
      for_each_subset_of(avail, k_ - 1, [&](const VertexSet& b) {
        if (!tick()) return false;
        if (!f_.has_edge(c, with_point(b, s_.vset[i]))) return true;
        b_points_[i] = b;
        mark(b, 1);
        stage_b(i + 1);
        mark(b, 0);
        return !done();
      });
      used_color_[c] = 0;
      if (done()) return;
    }
  }

  // Kind I: u_i with B_i + u_i an edge and {x0, u_1..u_k} an edge.
  void stage_connector(int i) {
    if (done()) return;
    if (i == k_) {
      VertexSet u(u_.begin(), u_.begin() + k_);
      if (!f_.has_edge(edge_of(s_.x0, u))) return;
      Device d;
      d.kind = DeviceKind::kI;
      for (int j = 0; j < k_; ++j) d.edges.push_back(b_edge(j, u_[j]));
      for (int j = 0; j < k_; ++j) d.witness.push_back(b_edge(j, s_.vset[j]));
      d.witness.push_back(edge_of(s_.x0, u));
      if (budget_.want_g) {
        std::optional<PartiteEdge> g = find_g();  // u is already marked
        if (g) {
          d.edges.push_back(*g);
          d.witness.push_back(*g);
        }
      }
      emit(std::move(d));
      return;
    }
    for (int v = 0; v < f_.n(); ++v) {
      if (used_point_[v]) continue;
      if (!tick()) return;
      if (!f_.has_edge(b_edge(i, v))) continue;
      used_point_[v] = 1;
      u_[i] = v;
      stage_connector(i + 1);
      used_point_[v] = 0;
      if (done()) return;
    }
  }

  std::optional<PartiteEdge> find_g() {
    const VertexSet avail = available();
    for (int c : color_order_) {
      if (used_color_[c]) continue;
      std::optional<PartiteEdge> g;
      for_each_subset_of(avail, k_, [&](const VertexSet& p) {
        if (!tick()) return false;
        if (f_.has_edge(c, p)) g = PartiteEdge{c, p};
        return !g.has_value();
      });
      if (g || exhausted()) return g;
    }
    return std::nullopt;
  }

  bool pivot_ok(int y) {
    if (!budget_.require_census) return true;
    auto it = census_.find(y);
    if (it == census_.end()) {
      it = census_.emplace(y, absorb2_census(f_.neighborhood(y)).cond_ii).first;
    }
    return it->second;
  }

  // Kind II: u_1..u_{k-1}, then the pivot y with B_{k+1} = T + y.
  void stage_u2(int i) {
    if (done()) return;
    if (i == k_ - 1) {
      stage_pivot2();
      return;
    }
    for (int v = 0; v < f_.n(); ++v) {
      if (used_point_[v]) continue;
      if (!tick()) return;
      if (!f_.has_edge(b_edge(i, v))) continue;
      used_point_[v] = 1;
      u_[i] = v;
      stage_u2(i + 1);
      used_point_[v] = 0;
      if (done()) return;
    }
  }

  void stage_pivot2() {
    for (int y : color_order_) {
      if (used_color_[y] || !pivot_ok(y)) continue;
      const VertexSet avail = available();
      for_each_subset_of(avail, k_ - 1, [&](const VertexSet& t) {
        if (!tick()) return false;
        mark(t, 1);
        for (int uk = 0; uk < f_.n() && !done(); ++uk) {
          if (used_point_[uk]) continue;
          if (!f_.has_edge(b_edge(k_ - 1, uk))) continue;
          if (!f_.has_edge(edge_of(y, with_point(t, uk)))) continue;
          used_point_[uk] = 1;
          for (int uk1 = 0; uk1 < f_.n() && !done(); ++uk1) {
            if (used_point_[uk1] || !tick()) continue;
            if (!f_.has_edge(edge_of(y, with_point(t, uk1)))) continue;
            VertexSet fu(u_.begin(), u_.begin() + (k_ - 1));
            fu.push_back(uk1);
            if (!f_.has_edge(edge_of(s_.x0, fu))) continue;
            Device d;
            d.kind = DeviceKind::kII;
            for (int j = 0; j < k_ - 1; ++j) d.edges.push_back(b_edge(j, u_[j]));
            d.edges.push_back(b_edge(k_ - 1, uk));
            d.edges.push_back(edge_of(y, with_point(t, uk1)));
            for (int j = 0; j < k_; ++j) d.witness.push_back(b_edge(j, s_.vset[j]));
            d.witness.push_back(edge_of(y, with_point(t, uk)));
            d.witness.push_back(edge_of(s_.x0, fu));
            emit(std::move(d));
          }
          used_point_[uk] = 0;
        }
        mark(t, 0);
        return !done();
      });
      if (done()) return;
    }
  }

  // Kind III: pivot y with {y, u_1..u_k} an edge, then B_{k+1} with both
  // B_{k+1} + y and B_{k+1} + x0 edges.
  void stage_pivot3() {
    for (int y : color_order_) {
      if (used_color_[y]) continue;
      used_color_[y] = 1;
      pivot_ = y;
      stage_u3(0);
      used_color_[y] = 0;
      if (done()) return;
    }
  }

  void stage_u3(int i) {
    if (done()) return;
    if (i == k_) {
      VertexSet u(u_.begin(), u_.begin() + k_);
      if (!f_.has_edge(edge_of(pivot_, u))) return;
      const VertexSet avail = available();
      for_each_subset_of(avail, k_, [&](const VertexSet& b) {
        if (!tick()) return false;
        if (!f_.has_edge(pivot_, b) || !f_.has_edge(s_.x0, b)) return true;
        Device d;
        d.kind = DeviceKind::kIII;
        for (int j = 0; j < k_; ++j) d.edges.push_back(b_edge(j, u_[j]));
        d.edges.push_back(PartiteEdge{pivot_, b});
        for (int j = 0; j < k_; ++j) d.witness.push_back(b_edge(j, s_.vset[j]));
        d.witness.push_back(PartiteEdge{s_.x0, b});
        d.witness.push_back(edge_of(pivot_, u));
        emit(std::move(d));
        return !done();
      });
      return;
    }
    for (int v = 0; v < f_.n(); ++v) {
      if (used_point_[v]) continue;
      if (!tick()) return;
      if (!f_.has_edge(b_edge(i, v))) continue;
      used_point_[v] = 1;
      u_[i] = v;
      stage_u3(i + 1);
      used_point_[v] = 0;
      if (done()) return;
    }
  }

  const PartiteGraph& f_;
  const BalancedSet& s_;
  DeviceKind kind_;
  int limit_;
  DeviceSearchBudget budget_;
  int k_;
  std::uint64_t nodes_ = 0;
  std::vector<char> used_point_, used_color_;
  std::vector<int> b_color_;
  std::vector<VertexSet> b_points_;
  std::vector<Vertex> u_;
  int pivot_ = 0;
  std::vector<int> color_order_;
  std::map<int, bool> census_;
  std::vector<Device> found_;
  std::set<Device>* seen_ = nullptr;
};

std::vector<BalancedSet> all_targets(const PartiteGraph& f,
                                     const AbsorbingFamilyOptions& opts,
                                     bool& exhaustive) {
  const int k = f.k();
  const bool edge_mode = opts.kind == DeviceKind::kEdge;
  std::vector<BalancedSet> out;
  if (opts.targets) {
    exhaustive = true;
    return *opts.targets;
  }
  exhaustive = f.n() <= 12;
  const int points = edge_mode ? k + 1 : k;
  VertexSet colors;
  if (edge_mode) {
    colors = range_set(0, f.q());
  } else {
    colors = {opts.x0};
  }
  if (exhaustive) {
    for (int c : colors) {
      for_each_combination(f.n(), points, [&](const VertexSet& v) {
        out.push_back(BalancedSet{c, v});
      });
    }
    return out;
  }
  Rng rng(opts.seed ^ 0x5eedULL);
  std::set<BalancedSet> seen;
  for (int t = 0; t < opts.sampled_sets * 8 &&
                  static_cast<int>(seen.size()) < opts.sampled_sets;
       ++t) {
    BalancedSet s;
    s.x0 = colors[uniform_index(rng, colors.size())];
    VertexSet all = range_set(0, f.n());
    shuffle_in_place(all, rng);
    s.vset.assign(all.begin(), all.begin() + points);
    std::sort(s.vset.begin(), s.vset.end());
    seen.insert(s);
  }
  return {seen.begin(), seen.end()};
}

bool absorbs(const PartiteGraph& f, const BalancedSet& s, const Device& d) {
  if (!is_disjoint(ids_of(d.edges), ids_of(s))) return false;
  return find_witness(f, s, d.kind, d.edges).has_value();
}

}  // namespace

std::string to_string(DeviceKind kind) {
  switch (kind) {
    case DeviceKind::kI: return "1";
    case DeviceKind::kII: return "2";
    case DeviceKind::kIII: return "3";
    case DeviceKind::kEdge: return "edge";
  }
  return "?";
}

DeviceKind device_kind_from_string(const std::string& s) {
  if (s == "1" || s == "I") return DeviceKind::kI;
  if (s == "2" || s == "II") return DeviceKind::kII;
  if (s == "3" || s == "III") return DeviceKind::kIII;
  if (s == "edge") return DeviceKind::kEdge;
  throw PreconditionError("unknown device kind: " + s);
}

bool verify_device(const PartiteGraph& f, const BalancedSet& s,
                   const Device& d) {
  if (d.kind == DeviceKind::kEdge) return verify_edge_absorber(f, s, d);
  return verify_device_kind(f, s, d);
}

std::optional<Device> find_witness(const PartiteGraph& f, const BalancedSet& s,
                                   DeviceKind kind,
                                   const PartiteMatching& edges) {
  const int k = f.k();
  if (kind == DeviceKind::kEdge) {
    if (edges.size() != 1 || !set_ok(f, s, k + 1)) return std::nullopt;
    if (!all_in_graph(f, edges)) return std::nullopt;
    return edge_witness(f, s, edges[0]);
  }
  if (!set_ok(f, s, k) || !all_in_graph(f, edges)) return std::nullopt;
  if (!is_matching(edges) || !is_disjoint(ids_of(edges), ids_of(s))) {
    return std::nullopt;
  }
  const std::size_t ku = static_cast<std::size_t>(k);
  std::vector<std::size_t> idx(edges.size());
  std::iota(idx.begin(), idx.end(), 0);

  if (kind == DeviceKind::kI) {
    if (edges.size() != ku && edges.size() != ku + 1) return std::nullopt;
    for (std::size_t gi = 0; gi < (edges.size() == ku ? 1 : edges.size()); ++gi) {
      std::optional<PartiteEdge> g;
      std::vector<std::size_t> rest;
      for (std::size_t j = 0; j < edges.size(); ++j) {
        if (edges.size() == ku + 1 && j == gi) {
          g = edges[j];
        } else {
          rest.push_back(j);
        }
      }
      do {
        PartiteMatching order;
        for (std::size_t j : rest) order.push_back(edges[j]);
        if (auto d = witness_for_order(f, s, kind, order, g)) return d;
      } while (std::next_permutation(rest.begin(), rest.end()));
    }
    return std::nullopt;
  }
  if (edges.size() != ku + 1) return std::nullopt;
  do {
    PartiteMatching order;
    for (std::size_t j : idx) order.push_back(edges[j]);
    if (auto d = witness_for_order(f, s, kind, order, std::nullopt)) return d;
  } while (std::next_permutation(idx.begin(), idx.end()));
  return std::nullopt;
}

std::vector<Device> find_devices(const PartiteGraph& f, const BalancedSet& s,
                                 DeviceKind kind, int limit,
                                 const DeviceSearchBudget& budget) {
  std::vector<Device> out;
  if (limit <= 0) return out;
  const int k = f.k();
  if (kind == DeviceKind::kEdge) {
    if (!set_ok(f, s, k + 1)) throw PreconditionError("find_devices: bad S");
    std::uint64_t nodes = 0;
    for (const PartiteEdge& e : f.edges()) {
      if (++nodes > budget.nodes) break;
      if (auto d = edge_witness(f, s, e)) {
        if (!verify_device(f, s, *d)) {
          throw std::logic_error("find_devices produced an unverifiable device");
        }
        out.push_back(std::move(*d));
        if (static_cast<int>(out.size()) >= limit) break;
      }
    }
    return out;
  }
  if (!set_ok(f, s, k)) throw PreconditionError("find_devices: bad S");
  if (f.q() < k + 1) return out;
  std::set<Device> seen;
  {
    DeviceSearch search(f, s, kind, limit, budget);
    out = search.run(seen);
  }
  // Restarts with shuffled color orders, each with its own node budget.
  Rng rng(budget.seed);
  for (int r = 0; r < budget.restarts && static_cast<int>(out.size()) < limit;
       ++r) {
    std::vector<int> order(f.q());
    std::iota(order.begin(), order.end(), 0);
    shuffle_in_place(order, rng);
    DeviceSearch search(f, s, kind, limit - static_cast<int>(out.size()),
                        budget);
    search.set_color_order(std::move(order));
    for (Device& d : search.run(seen)) out.push_back(std::move(d));
  }
  return out;
}

EdgeAbsorberCount count_edge_absorbers(const PartiteGraph& h,
                                       const BalancedSet& s,
                                       std::uint64_t seed) {
  if (!set_ok(h, s, h.k() + 1)) {
    throw PreconditionError("count_edge_absorbers: S needs one color, k+1 points");
  }
  EdgeAbsorberCount out;
  const std::vector<PartiteEdge> edges = h.edges();
  if (h.n() <= 15) {
    for (const PartiteEdge& e : edges) {
      if (edge_witness(h, s, e)) ++out.count;
    }
    return out;
  }
  out.exact = false;
  if (edges.empty()) return out;
  Rng rng(seed);
  const int samples = 20000;
  long long hits = 0;
  for (int t = 0; t < samples; ++t) {
    if (edge_witness(h, s, edges[uniform_index(rng, edges.size())])) ++hits;
  }
  out.count = static_cast<long long>(
      std::floor(static_cast<double>(hits) * edges.size() / samples));
  return out;
}

AbsorbingFamily select_absorbing_family(const PartiteGraph& f,
                                        const AbsorbingFamilyOptions& opts) {
  if (opts.p > 1.0) throw PreconditionError("select_absorbing_family: p > 1");
  AbsorbingFamily best;
  best.required_count = std::max(1, opts.required_count);
  const int k = f.k();
  const double ln = std::log(static_cast<double>(std::max(f.n(), 2)));
  const double asymptotic_target = opts.kind == DeviceKind::kEdge
                                  ? 4.0 * (k + 3) * ln
                                  : ln * ln / 2.0;
  if (opts.required_count <= 1) {
    best.warnings.push_back("required count clamped to 1 (asymptotic target " +
                            std::to_string(asymptotic_target) + ")");
  }

  bool exhaustive = false;
  const std::vector<BalancedSet> targets = all_targets(f, opts, exhaustive);

  // Candidate pool in deterministic order.
  std::vector<Device> pool;
  {
    std::set<PartiteMatching> seen;
    if (opts.kind == DeviceKind::kEdge) {
      // Edges that absorb at least one target they avoid; the witness is
      // the one for the first such target.
      for (const PartiteEdge& e : f.edges()) {
        for (const BalancedSet& s : targets) {
          if (!is_disjoint(ids_of(e), ids_of(s))) continue;
          if (std::optional<Device> d = edge_witness(f, s, e)) {
            pool.push_back(std::move(*d));
            break;
          }
        }
      }
    } else {
      for (const BalancedSet& s : targets) {
        for (Device& d :
             find_devices(f, s, opts.kind, opts.per_set_limit, opts.budget)) {
          PartiteMatching key = d.edges;
          std::sort(key.begin(), key.end());
          if (seen.insert(key).second) pool.push_back(std::move(d));
        }
      }
    }
  }
  best.candidates = static_cast<long long>(pool.size());
  double p = opts.p;
  if (p <= 0.0) {
    p = pool.empty() ? 1.0
                     : std::min(1.0, opts.c_scale * std::pow(ln, 6) /
                                         static_cast<double>(pool.size()));
  }
  best.p_used = p;
  best.exhaustive = exhaustive;
  best.sets_checked = static_cast<long long>(targets.size());
  best.sets_covered = -1;

  const int attempts = std::max(1, opts.retries);
  for (int a = 0; a < attempts; ++a) {
    std::seed_seq seq{opts.seed, static_cast<std::uint64_t>(a)};
    Rng rng(seq);
    AbsorbingFamily fam;
    std::vector<char> used_color(f.q(), 0), used_point(f.n(), 0);
    if (opts.kind != DeviceKind::kEdge) used_color[opts.x0] = 1;
    for (const Device& d : pool) {
      if (!bernoulli(rng, p)) continue;
      bool clash = false;
      for (const PartiteEdge& e : d.edges) {
        clash = clash || used_color[e.color];
        for (Vertex v : e.points) clash = clash || used_point[v];
      }
      if (clash) continue;
      for (const PartiteEdge& e : d.edges) {
        used_color[e.color] = 1;
        for (Vertex v : e.points) used_point[v] = 1;
      }
      fam.members.push_back(d);
    }
    long long covered = 0;
    for (const BalancedSet& s : targets) {
      int count = 0;
      for (const Device& d : fam.members) {
        if (absorbs(f, s, d) && ++count >= best.required_count) break;
      }
      if (count >= best.required_count) ++covered;
    }
    if (covered > best.sets_covered) {
      best.members = std::move(fam.members);
      best.sets_covered = covered;
      best.attempts = a + 1;
    }
    if (covered == static_cast<long long>(targets.size())) break;
  }
  best.matching.clear();
  for (const Device& d : best.members) {
    best.matching.insert(best.matching.end(), d.edges.begin(), d.edges.end());
  }
  std::sort(best.matching.begin(), best.matching.end());
  best.complete = best.sets_covered == static_cast<long long>(targets.size());
  return best;
}

PartiteMatching apply_device(const PartiteMatching& m, const Device& d) {
  PartiteMatching out = m;
  for (const PartiteEdge& e : d.edges) {
    auto it = std::find(out.begin(), out.end(), e);
    if (it == out.end()) {
      throw PreconditionError("apply_device: device edge not in the matching");
    }
    out.erase(it);
  }
  for (const PartiteEdge& e : d.witness) {
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rml
