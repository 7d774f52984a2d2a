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

#include "rml/pipeline.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "rml/closeness.hpp"
#include "rml/devices.hpp"
#include "rml/generators.hpp"

namespace rml {
namespace {

struct Stage {
  PipelineResult& out;

  void note(std::string line) { out.trace.push_back(std::move(line)); }
  PipelineResult& fail(const std::string& stage, const std::string& why) {
    out.failed_stage = stage;
    out.trace.push_back(stage + ": " + why);
    out.status = SolveStatus::kNotFound;
    return out;
  }
};

long long missing(const KGraph& f, const KGraph& h) {
  long long count = 0;
  for (const VertexSet& e : h.edges()) {
    if (!f.has_edge(e)) ++count;
  }
  return count;
}

// Colors, points not yet used by m.
PartiteVertexSet uncovered(const PartiteGraph& pg, const PartiteMatching& m) {
  const PartiteVertexSet used = vertices_of(m);
  return PartiteVertexSet{set_difference(range_set(0, pg.q()), used.colors),
                          set_difference(range_set(0, pg.n()), used.points)};
}

// Finishes a result: verification and the exact cross-check.
PipelineResult& finish(const PartiteGraph& pg, PartiteMatching m,
                       const PipelineOptions& opts, PipelineResult& out) {
  std::sort(m.begin(), m.end());
  Stage st{out};
  if (!verify_matching(pg, m)) return st.fail("verify", "assembled matching invalid");
  out.status = SolveStatus::kFound;
  out.matching = std::move(m);
  out.failed_stage.clear();
  if (pg.n() <= opts.cross_check_max_n) {
    out.solver_status = solve_partite_pm(pg, opts.budget).status;
    st.note("cross-check: solver " + to_string(*out.solver_status));
  }
  return out;
}

PipelineResult run_extremal(const PartiteGraph& pg, const PipelineOptions& opts) {
  PipelineResult out;
  Stage st{out};
  const int n = pg.n(), k = pg.k(), q = pg.q();

  // W from the parity template closest to color 0.
  WeakOptions wo;
  wo.budget = opts.closeness_budget;
  wo.seed = opts.seed;
  std::optional<Bipartition> bip;
  long long best = -1;
  for (Template t : {Template::kH0, Template::kH1}) {
    const ClosenessReport r = weak_closeness_to_extremal(pg.neighborhood(0), t, wo);
    if (r.witness && (best < 0 || r.missing_count < best)) {
      best = r.missing_count;
      bip = r.witness;
    }
  }
  if (!bip) return st.fail("closeness", "no bipartition found");
  bip->parity_class.reset();
  st.note("closeness: |W| = " + std::to_string(bip->w.size()) + ", missing " +
          std::to_string(best));

  // Color classes and bad vertices.
  const KGraph h0 = gen_Hi(n, k, *bip, 0), h1 = gen_Hi(n, k, *bip, 1);
  VertexSet x1;
  std::vector<KGraph> tmpl;
  for (int c = 0; c < q; ++c) {
    const bool odd = missing(pg.neighborhood(c), h1) < missing(pg.neighborhood(c), h0);
    if (odd) x1.push_back(c);
    tmpl.push_back(odd ? h1 : h0);
  }
  const VertexClassification cls =
      classify_vertices(pg, PartiteGraph(std::move(tmpl)), opts.alpha_bad);
  st.note("classify: |X_1| = " + std::to_string(x1.size()) + ", bad " +
          std::to_string(cls.bad.size()));

  // Parity breaker making |W \ e0| and |X_1 \ e0| congruent.
  ParityTarget target;
  if (static_cast<int>(x1.size()) < q) {
    target = ParityTarget{0, x1, *bip};
  } else {
    target = ParityTarget{1, {}, *bip};
  }
  std::optional<PartiteEdge> e0;
  try {
    const ParityBreaker pb = find_parity_breaker(pg, target);
    if (!pb.found) return st.fail("parity", "no breaker");
    e0 = pb.edge;
  } catch (const std::exception& e) {
    return st.fail("parity", e.what());
  }
  st.note(e0 ? "parity: e0 of color " + std::to_string(e0->color) : "parity: empty");

  // Cover the bad vertices.
  PartiteMatching m0;
  try {
    const int i = x1.size() * 2 > static_cast<std::size_t>(q) ? 1 : 0;
    const ConstructResult g = greedy_cover(pg, *bip, x1, i, cls.bad, e0, opts.params);
    if (g.status != SolveStatus::kFound) return st.fail("greedy", "dead end");
    m0 = g.matching;
  } catch (const std::exception& e) {
    return st.fail("greedy", e.what());
  }
  st.note("greedy: " + std::to_string(m0.size()) + " edges");

  // Split the rest into an even part (X_0 colors) and an odd part (X_1).
  const PartiteVertexSet rest = uncovered(pg, m0);
  const VertexSet rx0 = set_difference(rest.colors, x1);
  const VertexSet rx1 = set_intersection(rest.colors, x1);
  const VertexSet rw = set_intersection(rest.points, bip->w);
  const VertexSet ru = set_difference(rest.points, bip->w);
  const int na = k * static_cast<int>(rx0.size());
  const int rws = static_cast<int>(rw.size()), rus = static_cast<int>(ru.size());
  const int ideal = rest.colors.empty()
                        ? 0
                        : rws * static_cast<int>(rx0.size()) /
                              static_cast<int>(rest.colors.size());
  std::vector<int> sizes;
  for (int wa = 0; wa <= std::min(na, rws); wa += 2) {
    if (na - wa <= rus) sizes.push_back(wa);
  }
  std::stable_sort(sizes.begin(), sizes.end(), [&](int a, int b) {
    return std::abs(a - ideal) < std::abs(b - ideal);
  });

  auto solve_part = [&](const VertexSet& colors, const VertexSet& w,
                        const VertexSet& u, int i,
                        PartiteMatching& acc) -> bool {
    if (colors.empty()) return w.empty() && u.empty();
    const SubInstance sub = induced_subinstance(pg, colors, set_union(w, u));
    VertexSet lw;
    for (std::size_t j = 0; j < sub.points.size(); ++j) {
      if (contains(w, sub.points[j])) lw.push_back(static_cast<int>(j));
    }
    const ConstructResult r = close_final_split(
        sub.graph, make_bipartition(static_cast<int>(sub.points.size()), lw), i);
    if (r.status != SolveStatus::kFound) return false;
    const PartiteMatching up = lift_back(sub, r.matching);
    acc.insert(acc.end(), up.begin(), up.end());
    return true;
  };

  for (int wa : sizes) {
    const VertexSet wa_set(rw.begin(), rw.begin() + wa);
    const VertexSet wb_set(rw.begin() + wa, rw.end());
    const VertexSet ua_set(ru.begin(), ru.begin() + (na - wa));
    const VertexSet ub_set(ru.begin() + (na - wa), ru.end());
    PartiteMatching total = m0;
    try {
      if (!solve_part(rx0, wa_set, ua_set, 0, total)) continue;
      if (!solve_part(rx1, wb_set, ub_set, 1, total)) continue;
    } catch (const std::exception& e) {
      st.note("split at |W_0| = " + std::to_string(wa) + ": " + e.what());
      continue;
    }
    st.note("split: |W_0| = " + std::to_string(wa));
    return finish(pg, std::move(total), opts, out);
  }
  return st.fail("split", "no split completed (" + std::to_string(sizes.size()) +
                              " sizes tried)");
}

PipelineResult run_non_extremal(const PartiteGraph& pg,
                                const PipelineOptions& opts) {
  PipelineResult out;
  Stage st{out};
  const int k = pg.k();
  const int x0 = 0;

  // Devices absorbing sets {x0} + k points.
  AbsorbingFamilyOptions dopt;
  dopt.kind = DeviceKind::kI;
  dopt.p = opts.device_p;
  dopt.retries = opts.device_retries;
  dopt.seed = opts.seed;
  dopt.x0 = x0;
  dopt.budget.nodes = 200'000;
  dopt.budget.want_g = false;
  dopt.sampled_sets = 24;
  const AbsorbingFamily dev = select_absorbing_family(pg, dopt);
  st.note("devices: " + std::to_string(dev.members.size()) + " members, " +
          std::to_string(dev.sets_covered) + "/" + std::to_string(dev.sets_checked) +
          " sets covered");

  // The rest F' = F - V(devices) - x0.
  PartiteVertexSet dv = vertices_of(dev.matching);
  const VertexSet colors_f =
      set_difference(range_set(0, pg.q()), set_union(dv.colors, {x0}));
  const VertexSet points_f = set_difference(range_set(0, pg.n()), dv.points);
  PartiteMatching inner;
  if (!colors_f.empty()) {
    if (static_cast<int>(points_f.size()) < k) {
      return st.fail("near-cover", "too few points outside the devices");
    }
    const SubInstance sub = induced_subinstance(pg, colors_f, points_f);
    AbsorbingFamilyOptions eopt;
    eopt.kind = DeviceKind::kEdge;
    eopt.p = opts.device_p;
    eopt.retries = opts.device_retries;
    eopt.seed = opts.seed + 1;
    eopt.sampled_sets = 24;
    const AbsorbingFamily edges = select_absorbing_family(sub.graph, eopt);
    st.note("edge absorbers: " + std::to_string(edges.matching.size()));
    const PartiteMatching grown = grow_near_cover(sub.graph, edges.matching);
    PartiteMatching partial;
    for (const PartiteEdge& e : grown) {
      if (std::find(edges.matching.begin(), edges.matching.end(), e) ==
          edges.matching.end()) {
        partial.push_back(e);
      }
    }
    st.note("near cover: " + std::to_string(sub.graph.q() - static_cast<int>(grown.size())) +
            " colors left");
    const ConstructResult ab = absorption_loop(sub.graph, edges.matching, partial);
    st.note("absorption: " + std::to_string(ab.trace.size()) + " steps");
    if (ab.status != SolveStatus::kFound) {
      return st.fail("absorb", ab.stage);
    }
    inner = lift_back(sub, ab.matching);
  }

  // Last balanced set: x0 plus the points left over.
  PartiteMatching covered = dev.matching;
  covered.insert(covered.end(), inner.begin(), inner.end());
  const PartiteVertexSet left = uncovered(pg, covered);
  if (left.colors != VertexSet{x0} || static_cast<int>(left.points.size()) != k) {
    return st.fail("final", "leftover is not a balanced set");
  }
  const BalancedSet s{x0, left.points};
  for (const Device& d : dev.members) {
    if (auto w = find_witness(pg, s, DeviceKind::kI, d.edges)) {
      st.note("final: absorbed by a device");
      return finish(pg, apply_device(covered, *w), opts, out);
    }
  }
  // Exact search on F[S + V(devices)].
  const SubInstance sub = induced_subinstance(
      pg, set_union(dv.colors, {x0}), set_union(dv.points, left.points));
  const SolveResult r = solve_partite_pm(sub.graph, opts.budget);
  if (r.status != SolveStatus::kFound) {
    return st.fail("final", "no device absorbs the leftover; solver " +
                                to_string(r.status));
  }
  st.note("final: solved the device region exactly");
  PartiteMatching total = inner;
  const PartiteMatching up = lift_back(sub, *r.matching);
  total.insert(total.end(), up.begin(), up.end());
  return finish(pg, std::move(total), opts, out);
}

}  // namespace

std::string to_string(PipelineMode m) {
  return m == PipelineMode::kExtremal ? "extremal" : "non-extremal";
}

PipelineMode pipeline_mode_from_string(const std::string& s) {
  if (s == "extremal") return PipelineMode::kExtremal;
  if (s == "non-extremal") return PipelineMode::kNonExtremal;
  throw PreconditionError("unknown pipeline mode: " + s);
}

PipelineResult run_pipeline(const PartiteGraph& pg, PipelineMode mode,
                            const PipelineOptions& opts) {
  if (!pg.balanced() || pg.q() == 0) {
    throw PreconditionError("run_pipeline: graph must be balanced");
  }
  PipelineResult out = mode == PipelineMode::kExtremal ? run_extremal(pg, opts)
                                                       : run_non_extremal(pg, opts);
  out.trace.insert(out.trace.begin(), "mode " + to_string(mode));
  if (out.status == SolveStatus::kFound && out.solver_status &&
      *out.solver_status == SolveStatus::kNotFound) {
    throw std::logic_error("run_pipeline: verified matching but solver disagrees");
  }
  return out;
}

}  // namespace rml
