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

#include "rml/constructive.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rml/devices.hpp"

namespace rml {
namespace {

double factorial(int k) {
  double out = 1.0;
  for (int i = 2; i <= k; ++i) out *= i;
  return out;
}

int mod(int a, int m) { return ((a % m) + m) % m; }

bool odd(int a) { return mod(a, 2) == 1; }

void check_colors(const PartiteGraph& f, const VertexSet& colors,
                  const char* what) {
  if (!std::is_sorted(colors.begin(), colors.end()) ||
      std::adjacent_find(colors.begin(), colors.end()) != colors.end()) {
    throw PreconditionError(std::string(what) + ": colors must be sorted");
  }
  if (!colors.empty() && (colors.front() < 0 || colors.back() >= f.q())) {
    throw PreconditionError(std::string(what) + ": color out of range");
  }
}

void check_bipartition(const PartiteGraph& f, const Bipartition& bip,
                       const char* what) {
  if (!is_valid_bipartition(f.n(), bip)) {
    throw PreconditionError(std::string(what) + ": invalid bipartition");
  }
}

void check_codegree_above_t(const PartiteGraph& f, const char* what) {
  const Rational t = threshold_t(f.n(), f.k());
  for (int c = 0; c < f.q(); ++c) {
    if (Rational(min_degree(f.neighborhood(c), f.k() - 1)) <= t) {
      throw HypothesisError(std::string(what) + ": color " + std::to_string(c) +
                            " has codegree <= t(n,k)");
    }
  }
}

// Parity requirements of the breaker as a function of the edge signature:
// a = |e & W| (or -1 for the empty set) and whether its color is in X'.
bool signature_ok(const PartiteGraph& f, const ParityTarget& t, int a,
                  bool in_xp) {
  const int k = f.k();
  const int w = static_cast<int>(t.bip.w.size()) - std::max(a, 0);
  const int u = static_cast<int>(t.bip.u.size()) - (a < 0 ? 0 : k - a);
  const int xp = static_cast<int>(t.x_prime.size()) - (a >= 0 && in_xp ? 1 : 0);
  const int xc = f.q() - static_cast<int>(t.x_prime.size()) -
                 (a >= 0 && !in_xp ? 1 : 0);
  bool ok = true;
  if (t.i == 0) ok = ok && mod(w - xp, 2) == 0;
  if (t.i == 1) ok = ok && mod(w - xc, 2) == 0;
  if (mod(k - t.i, 2) == 0) ok = ok && mod(u - xp, 2) == 0;
  if (mod(k - t.i, 2) == 1) ok = ok && mod(u - xc, 2) == 0;
  return ok;
}

void check_target(const PartiteGraph& f, const ParityTarget& t) {
  if (t.i != 0 && t.i != 1) throw PreconditionError("parity target: i is 0 or 1");
  check_colors(f, t.x_prime, "parity target");
  if (static_cast<int>(t.x_prime.size()) >= f.q()) {
    throw PreconditionError("parity target: X' must be a proper subset");
  }
  check_bipartition(f, t.bip, "parity target");
  if (static_cast<int>(std::min(t.bip.w.size(), t.bip.u.size())) < f.k()) {
    throw PreconditionError("parity target: min(|W|,|U|) < k");
  }
}

struct Cover {
  std::vector<char> color;
  std::vector<char> point;

  explicit Cover(const PartiteGraph& f) : color(f.q(), 0), point(f.n(), 0) {}

  void add(const PartiteEdge& e) {
    color[e.color] = 1;
    for (Vertex v : e.points) point[v] = 1;
  }
  void remove(const PartiteEdge& e) {
    color[e.color] = 0;
    for (Vertex v : e.points) point[v] = 0;
  }
  bool free(const VertexSet& pts) const {
    return std::none_of(pts.begin(), pts.end(),
                        [&](Vertex v) { return point[v] != 0; });
  }
  long long covered() const {
    return std::count(color.begin(), color.end(), 1) +
           std::count(point.begin(), point.end(), 1);
  }
};

void check_matching(const PartiteGraph& f, const PartiteMatching& m,
                    const char* what) {
  if (!verify_matching(f, m, false)) {
    throw PreconditionError(std::string(what) + ": not a matching of the graph");
  }
}

Bipartition sub_bipartition(const SubInstance& sub, const VertexSet& w) {
  VertexSet local;
  for (std::size_t j = 0; j < sub.points.size(); ++j) {
    if (contains(w, sub.points[j])) local.push_back(static_cast<int>(j));
  }
  return make_bipartition(static_cast<int>(sub.points.size()), local);
}

}  // namespace

SectionParams SectionParams::defaults(int k) {
  if (k < 3) throw PreconditionError("SectionParams: k >= 3");
  SectionParams p;
  const double kf = factorial(k), k1f = factorial(k + 1);
  p.eta = 1.0 / (4.0 * kf);
  p.c = 1.0 / (8.0 * k1f);
  const double base = std::pow(80.0, k) * std::pow(k, k - 5) *
                      std::pow(kf, k) * std::pow(k1f, k);
  p.epsilon = 1.0 / std::pow(base, 1.5);
  p.gamma = std::pow(p.epsilon, 2.0 / 3.0) * std::pow(2.0, k) /
            (std::pow(p.c, k) * std::pow(k, k));
  return p;
}

bool parity_conditions_hold(const PartiteGraph& f, const ParityTarget& t,
                            const std::optional<PartiteEdge>& e0) {
  if (!e0) return signature_ok(f, t, -1, false);
  return signature_ok(f, t, intersection_size(e0->points, t.bip.w),
                      contains(t.x_prime, e0->color));
}

ParityBreaker find_parity_breaker(const PartiteGraph& f,
                                  const ParityTarget& t) {
  if (!f.balanced()) throw PreconditionError("find_parity_breaker: unbalanced");
  check_target(f, t);
  check_codegree_above_t(f, "find_parity_breaker");
  ParityBreaker out;
  if (signature_ok(f, t, -1, false)) {
    out.found = true;
    return out;
  }
  const int k = f.k();
  for (int c = 0; c < f.q(); ++c) {
    const bool in_xp = contains(t.x_prime, c);
    std::vector<char> good(k + 1);
    bool any = false;
    for (int a = 0; a <= k; ++a) {
      good[a] = signature_ok(f, t, a, in_xp);
      any = any || good[a];
    }
    if (!any) continue;
    for (const VertexSet& e : f.neighborhood(c).edges()) {
      if (good[intersection_size(e, t.bip.w)]) {
        out.found = true;
        out.edge = PartiteEdge{c, e};
        return out;
      }
    }
  }
  return out;
}

ConstructResult greedy_cover(const PartiteGraph& f, const Bipartition& bip,
                             const VertexSet& x1, int i,
                             const PartiteVertexSet& cover,
                             const std::optional<PartiteEdge>& e0,
                             const SectionParams& params) {
  const int n = f.n(), k = f.k();
  check_bipartition(f, bip, "greedy_cover");
  check_colors(f, x1, "greedy_cover");
  check_colors(f, cover.colors, "greedy_cover");
  if (i != 0 && i != 1) throw PreconditionError("greedy_cover: i is 0 or 1");
  for (Vertex v : cover.points) {
    if (v < 0 || v >= n) throw PreconditionError("greedy_cover: bad point");
  }
  if (static_cast<double>(cover.size()) > 2.0 * params.c * n) {
    throw PreconditionError("greedy_cover: |N| > 2cn");
  }
  auto in_x1 = [&](int c) { return contains(x1, c) ? 1 : 0; };
  auto w_parity = [&](const VertexSet& pts) {
    return intersection_size(pts, bip.w) % 2;
  };

  // Degree hypotheses.
  const double bar = params.eta * std::pow(static_cast<double>(n), k);
  std::vector<long long> point_deg(n, 0);
  for (int c = 0; c < f.q(); ++c) {
    long long deg = 0;
    for (const VertexSet& e : f.neighborhood(c).edges()) {
      const int par = w_parity(e);
      if (par == in_x1(c)) ++deg;
      if (in_x1(c) == i && par == i) {
        for (Vertex v : e) ++point_deg[v];
      }
    }
    if (static_cast<double>(deg) < bar) {
      throw HypothesisError("greedy_cover: color " + std::to_string(c) +
                            " has parity degree below eta n^k");
    }
  }
  for (int v = 0; v < n; ++v) {
    if (static_cast<double>(point_deg[v]) < bar) {
      throw HypothesisError("greedy_cover: point " + std::to_string(v) +
                            " has parity degree below eta n^k");
    }
  }

  auto parity_gap = [&](const PartiteMatching& m) {
    const PartiteVertexSet used = vertices_of(m);
    const int w = static_cast<int>(bip.w.size()) - intersection_size(bip.w, used.points);
    const int x = static_cast<int>(x1.size()) - intersection_size(x1, used.colors);
    return mod(w - x, 2);
  };

  ConstructResult out;
  Cover used(f);
  std::vector<char> blocked_color(f.q(), 0), blocked_point(n, 0);
  for (int c : cover.colors) blocked_color[c] = 1;
  for (Vertex v : cover.points) blocked_point[v] = 1;
  if (e0) {
    if (!f.has_edge(*e0)) throw PreconditionError("greedy_cover: e0 not an edge");
    out.matching.push_back(*e0);
    used.add(*e0);
    out.trace.push_back("e0 color " + std::to_string(e0->color));
  }
  if (parity_gap(out.matching) != 0) {
    throw PreconditionError("greedy_cover: e0 does not fix |W| against |X_1|");
  }

  auto point_free = [&](Vertex v, Vertex self) {
    return v == self || (!used.point[v] && !blocked_point[v]);
  };
  auto color_free = [&](int c, int self) {
    return c == self || (!used.color[c] && !blocked_color[c]);
  };

  // Colors of X_0, then X_1.
  for (int phase = 0; phase < 2; ++phase) {
    for (int c : cover.colors) {
      if (in_x1(c) != phase || used.color[c]) continue;
      std::optional<PartiteEdge> pick;
      for (const VertexSet& e : f.neighborhood(c).edges()) {
        if (w_parity(e) != phase) continue;
        if (!std::all_of(e.begin(), e.end(),
                         [&](Vertex v) { return point_free(v, -1); })) {
          continue;
        }
        pick = PartiteEdge{c, e};
        break;
      }
      if (!pick) {
        out.stage = "greedy";
        out.trace.push_back("dead end at color " + std::to_string(c));
        return out;
      }
      used.add(*pick);
      out.matching.push_back(*pick);
    }
  }
  // Points: colors of class i, |e & W| = i (mod 2).
  for (Vertex v : cover.points) {
    if (used.point[v]) continue;
    std::optional<PartiteEdge> pick;
    for (int c = 0; c < f.q() && !pick; ++c) {
      if (in_x1(c) != i || !color_free(c, -1)) continue;
      for (const VertexSet& e : f.neighborhood(c).edges()) {
        if (!contains(e, v) || w_parity(e) != i) continue;
        if (!std::all_of(e.begin(), e.end(),
                         [&](Vertex x) { return point_free(x, v); })) {
          continue;
        }
        pick = PartiteEdge{c, e};
        break;
      }
    }
    if (!pick) {
      out.stage = "greedy";
      out.trace.push_back("dead end at point " + std::to_string(v));
      return out;
    }
    used.add(*pick);
    out.matching.push_back(*pick);
  }

  std::sort(out.matching.begin(), out.matching.end());
  const PartiteVertexSet vm = vertices_of(out.matching);
  if (!is_subset(cover.colors, vm.colors) || !is_subset(cover.points, vm.points) ||
      parity_gap(out.matching) != 0 || !verify_matching(f, out.matching, false)) {
    throw std::logic_error("greedy_cover postcondition failed");
  }
  if (static_cast<double>(vm.size()) > (k + 1) * 2.0 * params.c * n) {
    out.trace.push_back("|V(M)| exceeds (k+1) 2cn");
  }
  out.status = SolveStatus::kFound;
  return out;
}

ConstructResult rotation_augment(const PartiteGraph& f, const Bipartition& bip,
                                 int r, PartiteMatching m,
                                 std::uint64_t step_budget) {
  const int k = f.k();
  check_bipartition(f, bip, "rotation_augment");
  if (r < 0 || r > k) throw PreconditionError("rotation_augment: 0 <= r <= k");
  check_matching(f, m, "rotation_augment");
  auto type = [&](const VertexSet& pts) { return intersection_size(pts, bip.w); };
  for (const PartiteEdge& e : m) {
    if (type(e.points) != r) {
      throw PreconditionError("rotation_augment: matching edge not of type r");
    }
  }
  ConstructResult out;
  Cover used(f);
  for (const PartiteEdge& e : m) used.add(e);
  std::uint64_t steps = 0;

  auto extend = [&]() -> bool {
    for (int c = 0; c < f.q(); ++c) {
      if (used.color[c]) continue;
      for (const VertexSet& e : f.neighborhood(c).edges()) {
        ++steps;
        if (used.free(e) && type(e) == r) {
          PartiteEdge pe{c, e};
          used.add(pe);
          m.push_back(std::move(pe));
          return true;
        }
      }
    }
    return false;
  };

  // f_j takes slot l of e_{j+l} (indices mod k+1); slots 0..r-1 are the W
  // points of an edge, r..k-1 its U points, each side in increasing order.
  auto rotate = [&]() -> bool {
    if (static_cast<int>(m.size()) < k) return false;
    VertexSet w0, u0;
    for (int v = 0; v < f.n(); ++v) {
      if (used.point[v]) continue;
      (contains(bip.w, v) ? w0 : u0).push_back(v);
    }
    auto slots = [&](const VertexSet& pts) {
      VertexSet s = set_intersection(pts, bip.w);
      const VertexSet us = set_difference(pts, bip.w);
      s.insert(s.end(), us.begin(), us.end());
      return s;
    };
    bool done = false;
    for (int xk1 = 0; xk1 < f.q() && !done; ++xk1) {
      if (used.color[xk1]) continue;
      for_each_subset_of(w0, r, [&](const VertexSet& wa) {
        for_each_subset_of(u0, k - r, [&](const VertexSet& ua) {
          VertexSet tuple = wa;
          tuple.insert(tuple.end(), ua.begin(), ua.end());
          // Ordered choice of k matching edges.
          std::vector<int> pick;
          std::vector<char> taken(m.size(), 0);
          auto rec = [&](auto&& self) -> bool {
            if (++steps > step_budget) return false;
            if (static_cast<int>(pick.size()) == k) {
              std::vector<int> colors(k + 1);
              std::vector<VertexSet> sl(k + 1);
              for (int a = 0; a < k; ++a) {
                colors[a] = m[pick[a]].color;
                sl[a] = slots(m[pick[a]].points);
              }
              colors[k] = xk1;
              sl[k] = tuple;
              PartiteMatching rotated;
              for (int j = 0; j <= k; ++j) {
                VertexSet pts;
                for (int l = 0; l < k; ++l) pts.push_back(sl[(j + 1 + l) % (k + 1)][l]);
                std::sort(pts.begin(), pts.end());
                if (!f.has_edge(colors[j], pts)) return false;
                rotated.push_back(PartiteEdge{colors[j], std::move(pts)});
              }
              for (const PartiteEdge& e : rotated) {
                if (type(e.points) != r) {
                  throw std::logic_error("rotation produced a wrong-type edge");
                }
              }
              if (!verify_matching(f, rotated, false)) {
                throw std::logic_error("rotated edges are not disjoint");
              }
              PartiteMatching next;
              for (std::size_t a = 0; a < m.size(); ++a) {
                if (!taken[a]) next.push_back(m[a]);
              }
              for (int a : pick) used.remove(m[a]);
              for (PartiteEdge& e : rotated) {
                used.add(e);
                next.push_back(std::move(e));
              }
              m = std::move(next);
              out.trace.push_back("rotation with color " + std::to_string(xk1));
              return true;
            }
            for (std::size_t a = 0; a < m.size(); ++a) {
              if (taken[a]) continue;
              taken[a] = 1;
              pick.push_back(static_cast<int>(a));
              if (self(self)) return true;
              pick.pop_back();
              taken[a] = 0;
              if (steps > step_budget) return false;
            }
            return false;
          };
          done = rec(rec);
          return !done && steps <= step_budget;
        });
        return !done && steps <= step_budget;
      });
    }
    return done;
  };

  while (static_cast<int>(m.size()) < f.q()) {
    if (steps > step_budget) {
      out.stage = "rotation-budget";
      break;
    }
    if (extend()) continue;
    if (rotate()) continue;
    out.stage = steps > step_budget ? "rotation-budget" : "rotation";
    break;
  }
  std::sort(m.begin(), m.end());
  out.matching = std::move(m);
  if (static_cast<int>(out.matching.size()) == f.q() && out.stage.empty()) {
    out.status = SolveStatus::kFound;
  }
  return out;
}

int close_final_case(int k, int i) {
  if (i == 0) return k % 2 == 0 ? 1 : 2;
  return (k - 1) % 2 == 1 ? 3 : 4;
}

std::optional<SplitPlan> split_arithmetic(int n, int k, int i, int w_rest,
                                          int u_rest) {
  if (k < 3 || n % k != 0 || w_rest < 0 || u_rest < 0) return std::nullopt;
  const int q = n / k - 1;
  if (w_rest + u_rest != k * q) return std::nullopt;
  SplitPlan p;
  switch (close_final_case(k, i)) {
    case 1:
      if (w_rest % k != 0) return std::nullopt;
      p = {k, 0, w_rest / k, u_rest / k};
      break;
    case 2:
      if (w_rest % (k - 1) != 0) return std::nullopt;
      p.r1 = k - 1;
      p.r2 = 0;
      p.x = w_rest / (k - 1);
      if (mod(u_rest - p.x, k) != 0) return std::nullopt;
      p.y = (u_rest - p.x) / k;
      break;
    case 3:
      if (mod(w_rest - q, k - 2) != 0) return std::nullopt;
      p = {k - 1, 1, (w_rest - q) / (k - 2), (u_rest - q) / (k - 2)};
      break;
    default:
      if (u_rest % (k - 1) != 0) return std::nullopt;
      p.r1 = k;
      p.r2 = 1;
      p.y = u_rest / (k - 1);
      if (mod(w_rest - p.y, k) != 0) return std::nullopt;
      p.x = (w_rest - p.y) / k;
      break;
  }
  if (p.x < 0 || p.y < 0 || p.x + p.y != q) return std::nullopt;
  if (p.r1 * p.x + p.r2 * p.y != w_rest ||
      (k - p.r1) * p.x + (k - p.r2) * p.y != u_rest) {
    return std::nullopt;
  }
  return p;
}

ConstructResult close_final_split(const PartiteGraph& f, const Bipartition& bip,
                                  int i) {
  const int n = f.n(), k = f.k();
  if (!f.balanced()) throw PreconditionError("close_final_split: unbalanced");
  if (k < 3) throw PreconditionError("close_final_split: k >= 3");
  check_bipartition(f, bip, "close_final_split");
  if (i != 0 && i != 1) throw PreconditionError("close_final_split: i is 0 or 1");
  const int w = static_cast<int>(bip.w.size());
  const int u = static_cast<int>(bip.u.size());
  const int nk = n / k;
  if (i == 0 && odd(w)) throw HypothesisError("close_final_split: (i) fails");
  if (i == 1 && odd(w - nk)) throw HypothesisError("close_final_split: (ii) fails");
  if (!odd(k - i) && odd(u)) throw HypothesisError("close_final_split: (iii) fails");
  if (odd(k - i) && odd(u - nk)) {
    throw HypothesisError("close_final_split: (iv) fails");
  }

  ConstructResult out;
  out.size_condition_met = std::min(w, u) >= 1.1 * n / k + k;
  const int which = close_final_case(k, i);
  out.trace.push_back("case " + std::to_string(which));
  if (!out.size_condition_met) out.trace.push_back("size condition not met");

  std::string last_stage = "split-residue";
  for (const PartiteEdge& e1 : f.edges()) {
    const int a = intersection_size(e1.points, bip.w);
    const std::optional<SplitPlan> plan =
        split_arithmetic(n, k, i, w - a, u - (k - a));
    if (!plan) continue;
    VertexSet colors;
    for (int c = 0; c < f.q(); ++c) {
      if (c != e1.color) colors.push_back(c);
    }
    const VertexSet wr = set_difference(bip.w, e1.points);
    const VertexSet ur = set_difference(bip.u, e1.points);
    const int w1 = plan->r1 * plan->x, u1 = (k - plan->r1) * plan->x;
    const VertexSet x1(colors.begin(), colors.begin() + plan->x);
    const VertexSet x2(colors.begin() + plan->x, colors.end());
    const VertexSet wa(wr.begin(), wr.begin() + w1), wb(wr.begin() + w1, wr.end());
    const VertexSet ua(ur.begin(), ur.begin() + u1), ub(ur.begin() + u1, ur.end());

    PartiteMatching total{e1};
    bool ok = true;
    const VertexSet part_colors[2] = {x1, x2};
    const VertexSet part_w[2] = {wa, wb};
    const VertexSet part_u[2] = {ua, ub};
    const int part_r[2] = {plan->r1, plan->r2};
    for (int part = 0; part < 2 && ok; ++part) {
      if (part_colors[part].empty()) continue;
      const SubInstance sub = induced_subinstance(
          f, part_colors[part], set_union(part_w[part], part_u[part]));
      const ConstructResult rot = rotation_augment(
          sub.graph, sub_bipartition(sub, part_w[part]), part_r[part], {});
      if (rot.status != SolveStatus::kFound) {
        ok = false;
        last_stage = "rotation-part" + std::to_string(part + 1);
        break;
      }
      const PartiteMatching lifted = lift_back(sub, rot.matching);
      total.insert(total.end(), lifted.begin(), lifted.end());
    }
    if (!ok) continue;
    std::sort(total.begin(), total.end());
    if (!verify_matching(f, total)) {
      throw std::logic_error("close_final_split produced an invalid matching");
    }
    const int floor = 20 * k * k;
    out.trace.push_back("e1 color " + std::to_string(e1.color) + ", r1=" +
                        std::to_string(plan->r1) + " r2=" +
                        std::to_string(plan->r2) + " x=" +
                        std::to_string(plan->x) + " y=" + std::to_string(plan->y));
    if (plan->x <= floor || plan->y <= floor) {
      out.trace.push_back("x, y below the 20k^2 floor");
    }
    out.matching = std::move(total);
    out.status = SolveStatus::kFound;
    return out;
  }
  out.stage = last_stage;
  return out;
}

PartiteMatching grow_near_cover(const PartiteGraph& pg, PartiteMatching start) {
  const int k = pg.k();
  check_matching(pg, start, "grow_near_cover");
  PartiteMatching m = std::move(start);
  Cover used(pg);
  for (const PartiteEdge& e : m) used.add(e);

  for (;;) {
    // Maximal extension: one pass suffices since availability only shrinks.
    for (int c = 0; c < pg.q(); ++c) {
      if (used.color[c]) continue;
      for (const VertexSet& e : pg.neighborhood(c).edges()) {
        if (used.free(e)) {
          PartiteEdge pe{c, e};
          used.add(pe);
          m.push_back(std::move(pe));
          break;
        }
      }
    }
    VertexSet free_colors, free_points;
    for (int c = 0; c < pg.q(); ++c) {
      if (!used.color[c]) free_colors.push_back(c);
    }
    for (int v = 0; v < pg.n(); ++v) {
      if (!used.point[v]) free_points.push_back(v);
    }
    if (static_cast<int>(free_colors.size()) < k) break;
    if (static_cast<int>(free_points.size()) < k * (k - 1)) break;

    // S_i = color c_i plus the i-th block of k-1 uncovered points.
    std::vector<std::vector<char>> nbr(k, std::vector<char>(pg.n(), 0));
    std::vector<VertexSet> blocks(k);
    for (int s = 0; s < k; ++s) {
      blocks[s].assign(free_points.begin() + s * (k - 1),
                       free_points.begin() + (s + 1) * (k - 1));
      for (int v = 0; v < pg.n(); ++v) {
        if (contains(blocks[s], v)) continue;
        VertexSet pts = blocks[s];
        pts.insert(std::lower_bound(pts.begin(), pts.end(), v), v);
        nbr[s][v] = pg.has_edge(free_colors[s], pts);
      }
    }
    std::sort(m.begin(), m.end());
    bool swapped = false;
    for (std::size_t idx = 0; idx < m.size() && !swapped; ++idx) {
      const PartiteEdge e = m[idx];
      for (Vertex a : e.points) {
        for (Vertex b : e.points) {
          if (a == b || swapped) continue;
          for (int si = 0; si < k && !swapped; ++si) {
            if (!nbr[si][a]) continue;
            for (int sj = 0; sj < k && !swapped; ++sj) {
              if (sj == si || !nbr[sj][b]) continue;
              VertexSet pa = blocks[si], pb = blocks[sj];
              pa.insert(std::lower_bound(pa.begin(), pa.end(), a), a);
              pb.insert(std::lower_bound(pb.begin(), pb.end(), b), b);
              used.remove(e);
              m.erase(m.begin() + static_cast<std::ptrdiff_t>(idx));
              PartiteEdge ea{free_colors[si], pa}, eb{free_colors[sj], pb};
              used.add(ea);
              used.add(eb);
              m.push_back(std::move(ea));
              m.push_back(std::move(eb));
              swapped = true;
            }
          }
        }
      }
    }
    if (!swapped) break;
  }
  std::sort(m.begin(), m.end());
  if (!verify_matching(pg, m, false)) {
    throw std::logic_error("grow_near_cover produced an invalid matching");
  }
  return m;
}

PartiteMatching extend_to_near_cover(const PartiteGraph& pg) {
  const int k = pg.k();
  if (pg.q() < k + 1 || pg.q() * k > pg.n()) {
    throw PreconditionError("extend_to_near_cover: need k+1 <= |Q| <= n/k");
  }
  for (int c = 0; c < pg.q(); ++c) {
    if (min_degree(pg.neighborhood(c), k - 1) * k <= pg.n()) {
      throw HypothesisError("extend_to_near_cover: codegree <= n/k in color " +
                            std::to_string(c));
    }
  }
  PartiteMatching m = grow_near_cover(pg);
  if (pg.q() - static_cast<int>(m.size()) > k - 1) {
    throw std::logic_error("extend_to_near_cover left k or more colors");
  }
  return m;
}

ConstructResult absorption_loop(const PartiteGraph& pg,
                                const PartiteMatching& absorbing_m,
                                const PartiteMatching& partial_m) {
  const int k = pg.k();
  check_matching(pg, absorbing_m, "absorption_loop");
  check_matching(pg, partial_m, "absorption_loop");
  PartiteMatching current = absorbing_m;
  current.insert(current.end(), partial_m.begin(), partial_m.end());
  if (!verify_matching(pg, current, false)) {
    throw PreconditionError("absorption_loop: matchings are not disjoint");
  }
  ConstructResult out;
  Cover used(pg);
  for (const PartiteEdge& e : current) used.add(e);
  std::vector<char> spent(absorbing_m.size(), 0);
  const long long kMaxSets = 20000;

  for (;;) {
    VertexSet free_colors, free_points;
    for (int c = 0; c < pg.q(); ++c) {
      if (!used.color[c]) free_colors.push_back(c);
    }
    if (free_colors.empty()) {
      out.status = SolveStatus::kFound;
      break;
    }
    for (int v = 0; v < pg.n(); ++v) {
      if (!used.point[v]) free_points.push_back(v);
    }
    if (static_cast<int>(free_points.size()) < k + 1) {
      out.stage = "no-set";
      break;
    }
    std::optional<BalancedSet> first;
    std::optional<std::pair<std::size_t, Device>> hit;
    long long tried = 0;
    for (int c : free_colors) {
      for_each_subset_of(free_points, k + 1, [&](const VertexSet& pts) {
        const BalancedSet s{c, pts};
        if (!first) first = s;
        for (std::size_t a = 0; a < absorbing_m.size(); ++a) {
          if (spent[a]) continue;
          if (auto d = find_witness(pg, s, DeviceKind::kEdge, {absorbing_m[a]})) {
            hit.emplace(a, std::move(*d));
            return false;
          }
        }
        return ++tried < kMaxSets;
      });
      if (hit || tried >= kMaxSets) break;
    }
    if (!hit) {
      if (tried >= kMaxSets) out.trace.push_back("candidate cap reached");
      out.stage = "absorb";
      out.unabsorbed = PartiteVertexSet{{first->x0}, first->vset};
      break;
    }
    const long long before = used.covered();
    const PartiteEdge& e = absorbing_m[hit->first];
    if (spent[hit->first]) throw std::logic_error("absorbing edge reused");
    spent[hit->first] = 1;
    current.erase(std::find(current.begin(), current.end(), e));
    used.remove(e);
    for (const PartiteEdge& x : hit->second.witness) {
      used.add(x);
      current.push_back(x);
    }
    if (used.covered() != before + k + 1) {
      throw std::logic_error("absorption did not gain k+1 vertices");
    }
    out.trace.push_back("absorbed with color " + std::to_string(e.color));
  }
  std::sort(current.begin(), current.end());
  if (!verify_matching(pg, current, false)) {
    throw std::logic_error("absorption_loop produced an invalid matching");
  }
  out.matching = std::move(current);
  return out;
}

SubInstance induced_subinstance(const PartiteGraph& pg, const VertexSet& colors,
                                const VertexSet& points) {
  check_colors(pg, colors, "induced_subinstance");
  if (colors.empty() || static_cast<int>(points.size()) < pg.k()) {
    throw PreconditionError("induced_subinstance: too small");
  }
  std::vector<int> local(pg.n(), -1);
  for (std::size_t j = 0; j < points.size(); ++j) {
    local[points[j]] = static_cast<int>(j);
  }
  SubInstance sub;
  sub.colors = colors;
  sub.points = points;
  std::vector<KGraph> nb;
  for (int c : colors) {
    KGraph h(static_cast<int>(points.size()), pg.k());
    for (const VertexSet& e : pg.neighborhood(c).edges()) {
      VertexSet mapped;
      for (Vertex v : e) {
        if (local[v] < 0) break;
        mapped.push_back(local[v]);
      }
      if (mapped.size() == e.size()) h.add_edge(std::move(mapped));
    }
    nb.push_back(std::move(h));
  }
  sub.graph = PartiteGraph(std::move(nb));
  return sub;
}

PartiteMatching lift_back(const SubInstance& sub, const PartiteMatching& m) {
  PartiteMatching out;
  for (const PartiteEdge& e : m) {
    PartiteEdge g;
    g.color = sub.colors[e.color];
    for (Vertex v : e.points) g.points.push_back(sub.points[v]);
    std::sort(g.points.begin(), g.points.end());
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rml
