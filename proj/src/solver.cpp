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

#include "rml/solver.hpp"

#include <algorithm>
#include <atomic>
#include <bitset>
#include <chrono>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <thread>
#include <unordered_set>

namespace rml {
namespace {

using Clock = std::chrono::steady_clock;
constexpr int kMaxPoints = 512;
using BigMask = std::bitset<kMaxPoints>;
constexpr std::size_t kMemoCap = std::size_t{1} << 24;

inline bool test_bit(std::uint64_t m, int v) { return (m >> v) & 1U; }
inline bool test_bit(const BigMask& m, int v) { return m[v]; }
inline void set_bit(std::uint64_t& m, int v) { m |= std::uint64_t{1} << v; }
inline void set_bit(BigMask& m, int v) { m.set(v); }
inline bool disjoint(std::uint64_t a, std::uint64_t b) { return (a & b) == 0; }
inline bool disjoint(const BigMask& a, const BigMask& b) {
  return (a & b).none();
}

template <typename M>
M mask_of(const VertexSet& s) {
  M m{};
  for (Vertex v : s) set_bit(m, v);
  return m;
}

struct MemoKey {
  std::uint64_t covered;
  std::uint64_t colors;
  bool operator==(const MemoKey&) const = default;
};
struct MemoHash {
  std::size_t operator()(const MemoKey& k) const {
    return std::hash<std::uint64_t>()(k.covered * 0x9E3779B97F4A7C15ULL ^
                                      k.colors);
  }
};

struct Option {
  int color;
  int edge;  // index into the color's edge list
};

enum class Outcome { kFound, kFail, kAbort };

template <typename M>
class Engine {
 public:
  Engine(const PartiteGraph& pg, Clock::time_point deadline,
         std::uint64_t node_cap, const std::atomic<bool>* stop)
      : pg_(pg),
        n_(pg.n()),
        q_(pg.q()),
        deadline_(deadline),
        node_cap_(node_cap),
        stop_(stop),
        memo_enabled_(std::is_same_v<M, std::uint64_t> && pg.n() <= 63 &&
                      pg.q() <= 64) {
    masks_.resize(q_);
    anchors_.resize(n_);
    for (int c = 0; c < q_; ++c) {
      const auto& edges = pg.neighborhood(c).edges();
      for (int i = 0; i < static_cast<int>(edges.size()); ++i) {
        masks_[c].push_back(mask_of<M>(edges[i]));
        anchors_[edges[i].front()].push_back({c, i});
      }
    }
    // Anchor lists in (color, edge) order for deterministic branching.
    for (auto& a : anchors_) {
      std::sort(a.begin(), a.end(), [](const Option& x, const Option& y) {
        return x.color != y.color ? x.color < y.color : x.edge < y.edge;
      });
    }
    used_.assign(q_, 0);
  }

  // Branching options at the given state; empty means dead end.
  std::vector<Option> branch_options(const M& covered) const {
    int v = 0;
    while (v < n_ && test_bit(covered, v)) ++v;
    std::vector<Option> out;
    if (v == n_) return out;
    // Live candidate count per unused color; prune on zero.
    int best_color = -1;
    std::size_t best_count = std::numeric_limits<std::size_t>::max();
    for (int c = 0; c < q_; ++c) {
      if (used_[c]) continue;
      std::size_t count = 0;
      for (const M& m : masks_[c]) {
        if (disjoint(m, covered) && ++count >= best_count) break;
      }
      if (count == 0) return out;
      if (count < best_count) {
        best_count = count;
        best_color = c;
      }
    }
    std::vector<Option> anchored;
    for (const Option& o : anchors_[v]) {
      if (!used_[o.color] && disjoint(masks_[o.color][o.edge], covered)) {
        anchored.push_back(o);
      }
    }
    if (anchored.empty()) return out;
    if (anchored.size() < best_count || best_color < 0) return anchored;
    for (int i = 0; i < static_cast<int>(masks_[best_color].size()); ++i) {
      if (disjoint(masks_[best_color][i], covered)) {
        out.push_back({best_color, i});
      }
    }
    return out;
  }

  Outcome run(M covered, int remaining) {
    if (remaining == 0) return Outcome::kFound;
    ++nodes_;
    if (node_cap_ != 0 && nodes_ > node_cap_) {
      hit_node_cap_ = true;
      return Outcome::kAbort;
    }
    if ((nodes_ & 255U) == 0) {
      if (Clock::now() > deadline_) {
        hit_time_ = true;
        return Outcome::kAbort;
      }
      if (stop_ != nullptr && stop_->load(std::memory_order_relaxed)) {
        return Outcome::kAbort;
      }
    }
    MemoKey key{};
    if (memo_enabled_) {
      key = {memo_word(covered), color_mask_};
      if (failed_.count(key)) return Outcome::kFail;
    }
    const std::vector<Option> options = branch_options(covered);
    for (const Option& o : options) {
      const Outcome r = apply_and_run(covered, remaining, o);
      if (r != Outcome::kFail) return r;
    }
    if (memo_enabled_ && failed_.size() < kMemoCap) failed_.insert(key);
    return Outcome::kFail;
  }

  Outcome apply_and_run(const M& covered, int remaining, const Option& o) {
    used_[o.color] = 1;
    color_mask_ |= q_ <= 64 ? std::uint64_t{1} << o.color : 0;
    path_.push_back(o);
    const Outcome r = run(covered | masks_[o.color][o.edge], remaining - 1);
    if (r == Outcome::kFound) return r;
    path_.pop_back();
    used_[o.color] = 0;
    color_mask_ &= q_ <= 64 ? ~(std::uint64_t{1} << o.color) : ~0ULL;
    return r;
  }

  PartiteMatching matching() const {
    PartiteMatching m;
    for (const Option& o : path_) {
      m.push_back({o.color, pg_.neighborhood(o.color).edges()[o.edge]});
    }
    std::sort(m.begin(), m.end());
    return m;
  }

  std::uint64_t nodes() const { return nodes_; }
  bool hit_time() const { return hit_time_; }
  bool hit_node_cap() const { return hit_node_cap_; }

 private:
  static std::uint64_t memo_word(const M& m) {
    if constexpr (std::is_same_v<M, std::uint64_t>) {
      return m;
    } else {
      return 0;
    }
  }

  const PartiteGraph& pg_;
  int n_;
  int q_;
  Clock::time_point deadline_;
  std::uint64_t node_cap_;
  const std::atomic<bool>* stop_;
  bool memo_enabled_;
  std::vector<std::vector<M>> masks_;
  std::vector<std::vector<Option>> anchors_;
  std::vector<char> used_;
  std::uint64_t color_mask_ = 0;
  std::vector<Option> path_;
  std::unordered_set<MemoKey, MemoHash> failed_;
  std::uint64_t nodes_ = 0;
  bool hit_time_ = false;
  bool hit_node_cap_ = false;
};

template <typename M>
SolveResult solve_with(const PartiteGraph& pg, const SolveBudget& budget) {
  const auto start = Clock::now();
  const auto deadline =
      start + std::chrono::duration_cast<Clock::duration>(
                  std::chrono::duration<double>(budget.seconds));
  SolveResult result;
  auto finish = [&](SolveResult r) {
    r.elapsed_secs =
        std::chrono::duration<double>(Clock::now() - start).count();
    if (r.status == SolveStatus::kFound &&
        !verify_matching(pg, *r.matching, true)) {
      throw std::logic_error("solver produced an invalid matching");
    }
    return r;
  };

  if (budget.jobs <= 1) {
    Engine<M> engine(pg, deadline, budget.node_cap, nullptr);
    const Outcome o = engine.run(M{}, pg.q());
    result.nodes_expanded = engine.nodes();
    result.hit_time_limit = engine.hit_time();
    result.hit_node_cap = engine.hit_node_cap();
    if (o == Outcome::kFound) {
      result.status = SolveStatus::kFound;
      result.matching = engine.matching();
    } else {
      result.status =
          o == Outcome::kAbort ? SolveStatus::kTimeout : SolveStatus::kNotFound;
    }
    return finish(result);
  }

  // Root split: workers pull root options from a shared counter.
  std::vector<Option> roots;
  {
    Engine<M> probe(pg, deadline, 0, nullptr);
    roots = probe.branch_options(M{});
  }
  std::atomic<bool> stop{false};
  std::atomic<std::size_t> next{0};
  std::atomic<std::uint64_t> nodes{1};
  std::atomic<bool> aborted{false}, hit_time{false}, hit_cap{false};
  std::mutex mu;
  std::optional<PartiteMatching> found;
  auto worker = [&] {
    Engine<M> engine(pg, deadline, budget.node_cap, &stop);
    std::uint64_t last = 0;
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= roots.size() || stop.load()) break;
      const Outcome o = engine.apply_and_run(M{}, pg.q(), roots[i]);
      nodes += engine.nodes() - last;
      last = engine.nodes();
      if (o == Outcome::kFound) {
        std::lock_guard<std::mutex> lock(mu);
        if (!found) found = engine.matching();
        stop = true;
        break;
      }
      if (o == Outcome::kAbort) {
        if (!stop.load()) aborted = true;
        if (engine.hit_time()) hit_time = true;
        if (engine.hit_node_cap()) hit_cap = true;
        break;
      }
    }
  };
  std::vector<std::thread> threads;
  for (int j = 0; j < budget.jobs; ++j) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  result.nodes_expanded = nodes.load();
  result.hit_time_limit = hit_time.load();
  result.hit_node_cap = hit_cap.load();
  if (found) {
    result.status = SolveStatus::kFound;
    result.matching = std::move(found);
  } else {
    result.status = aborted ? SolveStatus::kTimeout : SolveStatus::kNotFound;
  }
  return finish(result);
}

void oracle_rec(const GraphFamily& fam, int c, std::uint64_t covered,
                std::vector<int>& pick, std::uint64_t& nodes, bool& found) {
  if (c == fam.size()) {
    found = true;
    return;
  }
  const KGraph& h = fam[c];
  for (int i = 0; i < static_cast<int>(h.edge_count()) && !found; ++i) {
    ++nodes;
    const std::uint64_t m = h.edge_mask(i);
    if (m & covered) continue;
    pick[c] = i;
    oracle_rec(fam, c + 1, covered | m, pick, nodes, found);
  }
}

}  // namespace

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kFound:
      return "Found";
    case SolveStatus::kNotFound:
      return "NotFound";
    case SolveStatus::kTimeout:
      return "Timeout";
  }
  return "?";
}

double default_budget_secs() {
  if (const char* env = std::getenv("RML_BUDGET_SECS")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0) return v;
  }
  return 60.0;
}

SolveResult solve_partite_pm(const PartiteGraph& pg,
                             const SolveBudget& budget) {
  if (!pg.balanced()) throw PreconditionError("solve: unbalanced instance");
  if (pg.n() > kMaxPoints) throw PreconditionError("solve: n too large");
  if (pg.n() <= 64) return solve_with<std::uint64_t>(pg, budget);
  return solve_with<BigMask>(pg, budget);
}

SolveResult solve_rainbow_pm(const GraphFamily& fam,
                             const SolveBudget& budget) {
  if (!fam.balanced()) throw PreconditionError("solve: unbalanced family");
  return solve_partite_pm(PartiteGraph(fam.members()), budget);
}

SolveResult oracle_rainbow_pm(const GraphFamily& fam) {
  if (fam.n() > 12) throw PreconditionError("oracle refuses n > 12");
  if (!fam.balanced()) throw PreconditionError("oracle: unbalanced family");
  const auto start = Clock::now();
  SolveResult r;
  std::vector<int> pick(fam.size(), -1);
  bool found = false;
  oracle_rec(fam, 0, 0, pick, r.nodes_expanded, found);
  if (found) {
    r.status = SolveStatus::kFound;
    PartiteMatching m;
    for (int c = 0; c < fam.size(); ++c) {
      m.push_back({c, fam[c].edges()[pick[c]]});
    }
    r.matching = std::move(m);
  } else {
    r.status = SolveStatus::kNotFound;
  }
  r.elapsed_secs = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

LiftEquivalence lift_equivalence(const GraphFamily& fam,
                                 const SolveBudget& budget) {
  LiftEquivalence out;
  out.rainbow = solve_rainbow_pm(fam, budget).status;
  out.partite = solve_partite_pm(PartiteGraph(fam.members()), budget).status;
  if (out.rainbow == SolveStatus::kTimeout ||
      out.partite == SolveStatus::kTimeout) {
    out.verdict = Agreement::kInconclusive;
  } else {
    out.verdict =
        out.rainbow == out.partite ? Agreement::kAgree : Agreement::kDisagree;
  }
  return out;
}

bool check_lift_equivalence(const GraphFamily& fam,
                            const SolveBudget& budget) {
  return lift_equivalence(fam, budget).verdict == Agreement::kAgree;
}

bool verify_matching(const PartiteGraph& pg, const PartiteMatching& m,
                     bool require_perfect) {
  std::vector<char> color_used(pg.q(), 0), point_used(pg.n(), 0);
  for (const PartiteEdge& e : m) {
    if (!pg.has_edge(e)) return false;
    if (color_used[e.color]) return false;
    color_used[e.color] = 1;
    for (Vertex v : e.points) {
      if (point_used[v]) return false;
      point_used[v] = 1;
    }
  }
  if (!require_perfect) return true;
  return std::all_of(color_used.begin(), color_used.end(),
                     [](char c) { return c != 0; }) &&
         std::all_of(point_used.begin(), point_used.end(),
                     [](char c) { return c != 0; });
}

bool verify_matching(const GraphFamily& fam, const PartiteMatching& m,
                     bool require_perfect) {
  return verify_matching(PartiteGraph(fam.members()), m, require_perfect);
}

}  // namespace rml
