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

#include "rml/closeness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include "rml/generators.hpp"
#include "rml/random.hpp"

namespace rml {
namespace {

void fill_normalizers(ClosenessReport& r, int vertices, int n, int k) {
  r.norm_vertex_power = std::pow(static_cast<double>(vertices), k);
  r.norm_n_power = std::pow(static_cast<double>(n), k);
  r.norm_partite = std::pow(n + static_cast<double>(n) / k, k + 1);
}

int template_parity(int k, Template t) {
  const int extremal = k % 2 == 1 ? 0 : 1;
  switch (t) {
    case Template::kH:
      return extremal;
    case Template::kComplementH:
      return 1 - extremal;
    case Template::kH0:
      return 0;
    case Template::kH1:
      return 1;
  }
  return 0;
}

// Counts non-edges of h whose intersection with the side has the template
// parity; these are exactly the template edges missing from h.
class MissingCounter {
 public:
  MissingCounter(const KGraph& h, int parity) : n_(h.n()), parity_(parity) {
    for_each_combination(h.n(), h.k(), [&](const VertexSet& e) {
      if (!h.has_edge(e)) non_edges_.push_back(e);
    });
  }

  long long count(const std::vector<char>& in_side) const {
    long long c = 0;
    for (const VertexSet& e : non_edges_) {
      int x = 0;
      for (Vertex v : e) x += in_side[v];
      if ((x & 1) == parity_) ++c;
    }
    return c;
  }

  long long count(const VertexSet& side) const {
    std::vector<char> in(n_, 0);
    for (Vertex v : side) in[v] = 1;
    return count(in);
  }

 private:
  int n_;
  int parity_;
  std::vector<VertexSet> non_edges_;
};

struct Best {
  long long value = std::numeric_limits<long long>::max();
  VertexSet side;

  void offer(long long v, const VertexSet& s) {
    if (v < value || (v == value && s < side)) {
      value = v;
      side = s;
    }
  }
};

// Permanent of the 0/1 matrix row i, column j = bit j of rows[i].
long long permanent(const std::vector<std::uint32_t>& rows, int cols) {
  const int r = static_cast<int>(rows.size());
  std::vector<long long> dp(std::size_t{1} << cols, 0);
  dp[0] = 1;
  for (std::uint32_t mask = 0; mask < (1U << cols); ++mask) {
    if (dp[mask] == 0) continue;
    const int i = __builtin_popcount(mask);
    if (i >= r) continue;
    for (int j = 0; j < cols; ++j) {
      if (!(mask >> j & 1U) && (rows[i] >> j & 1U)) {
        dp[mask | (1U << j)] += dp[mask];
      }
    }
  }
  long long total = 0;
  for (std::uint32_t mask = 0; mask < (1U << cols); ++mask) {
    if (__builtin_popcount(mask) == r) total += dp[mask];
  }
  return total;
}

std::vector<std::vector<char>> membership(int n,
                                          const std::vector<VertexSet>& sets) {
  std::vector<std::vector<char>> in(sets.size(), std::vector<char>(n, 0));
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (Vertex v : sets[i]) {
      if (v < 0 || v >= n) throw PreconditionError("set not within [n]");
      in[i][v] = 1;
    }
  }
  return in;
}

// For fixed N_1..N_{k-1}, w[v] = ordered tuples completing to an edge with
// v in the last slot. The minimum density over |N_k| = m is the sum of the
// m smallest weights.
std::vector<long long> last_slot_weights(
    const KGraph& h, const std::vector<std::vector<char>>& in) {
  const int k = h.k();
  std::vector<long long> w(h.n(), 0);
  std::vector<std::uint32_t> rows(k - 1);
  for (const VertexSet& e : h.edges()) {
    for (int pos = 0; pos < k; ++pos) {
      for (int i = 0; i < k - 1; ++i) {
        std::uint32_t bits = 0;
        int col = 0;
        for (int j = 0; j < k; ++j) {
          if (j == pos) continue;
          if (in[i][e[j]]) bits |= 1U << col;
          ++col;
        }
        rows[i] = bits;
      }
      w[e[pos]] += permanent(rows, k - 1);
    }
  }
  return w;
}

long long sum_smallest(std::vector<long long> w, int m) {
  std::sort(w.begin(), w.end());
  long long s = 0;
  for (int i = 0; i < m && i < static_cast<int>(w.size()); ++i) s += w[i];
  return s;
}

std::vector<long long> codegree_tally(const KGraph& h) {
  const int k = h.k();
  std::vector<long long> tally(binomial(h.n(), k - 1), 0);
  VertexSet sub(k - 1);
  for (const VertexSet& e : h.edges()) {
    for (int drop = 0; drop < k; ++drop) {
      int t = 0;
      for (int i = 0; i < k; ++i) {
        if (i != drop) sub[t++] = e[i];
      }
      ++tally[colex_rank(sub)];
    }
  }
  return tally;
}

}  // namespace

std::string to_string(Template t) {
  switch (t) {
    case Template::kH:
      return "H";
    case Template::kComplementH:
      return "complement-H";
    case Template::kH0:
      return "H0";
    case Template::kH1:
      return "H1";
  }
  return "?";
}

Template template_from_string(const std::string& s) {
  if (s == "H" || s == "extremal") return Template::kH;
  if (s == "complement-H" || s == "complement") return Template::kComplementH;
  if (s == "H0" || s == "hi0") return Template::kH0;
  if (s == "H1" || s == "hi1") return Template::kH1;
  throw PreconditionError("unknown template " + s);
}

std::string to_string(Absorb2Verdict v) {
  switch (v) {
    case Absorb2Verdict::kCondI:
      return "CondI";
    case Absorb2Verdict::kCondII:
      return "CondII";
    case Absorb2Verdict::kNeither:
      return "Neither";
    case Absorb2Verdict::kBoth:
      return "Both";
  }
  return "?";
}

ClosenessReport strong_closeness(const KGraph& h1, const KGraph& h2) {
  if (h1.n() != h2.n() || h1.k() != h2.k()) {
    throw PreconditionError("strong_closeness: shape mismatch");
  }
  ClosenessReport r;
  for (const VertexSet& e : h1.edges()) {
    if (!h2.has_edge(e)) ++r.missing_count;
  }
  fill_normalizers(r, h1.n(), h1.n(), h1.k());
  r.normalizer = r.norm_vertex_power;
  r.epsilon_effective = r.missing_count / r.normalizer;
  return r;
}

ClosenessReport strong_closeness(const PartiteGraph& h1,
                                 const PartiteGraph& h2) {
  if (h1.n() != h2.n() || h1.k() != h2.k() || h1.q() != h2.q()) {
    throw PreconditionError("strong_closeness: shape mismatch");
  }
  ClosenessReport r;
  for (int c = 0; c < h1.q(); ++c) {
    for (const VertexSet& e : h1.neighborhood(c).edges()) {
      if (!h2.neighborhood(c).has_edge(e)) ++r.missing_count;
    }
  }
  fill_normalizers(r, h1.n() + h1.q(), h1.n(), h1.k());
  r.normalizer = r.norm_partite;
  r.epsilon_effective = r.missing_count / r.normalizer;
  return r;
}

int template_side_size(int n, int k, Template t, std::optional<int> side) {
  if (t == Template::kH || t == Template::kComplementH) {
    return make_extremal_A_size(n, k);
  }
  const int s = side.value_or(n / 2);
  if (s < 0 || s > n) throw PreconditionError("side size out of range");
  return s;
}

KGraph template_graph(int n, int k, Template t, const VertexSet& side) {
  const int parity = template_parity(k, t);
  KGraph h(n, k);
  for_each_combination(n, k, [&](const VertexSet& e) {
    if (intersection_size(e, side) % 2 == parity) h.add_edge(e);
  });
  return h;
}

ClosenessReport weak_closeness_to_extremal(const KGraph& h, Template t,
                                           const WeakOptions& opts) {
  const int n = h.n();
  const int k = h.k();
  const int a = template_side_size(n, k, t, opts.side_size);
  const MissingCounter counter(h, template_parity(k, t));
  ClosenessReport r;
  fill_normalizers(r, n, n, k);
  r.normalizer = r.norm_vertex_power;

  Best best;
  if (binomial(n, a) <= opts.budget) {
    // Exhaustive. Chunks are indexed by the smallest element of the side;
    // chunk order is lexicographic order, so the merge is deterministic.
    const int chunks = a == 0 ? 1 : n - a + 1;
    std::vector<Best> results(chunks);
    auto run_chunk = [&](int f) {
      Best local;
      if (a == 0) {
        local.offer(counter.count(VertexSet{}), {});
      } else {
        const VertexSet tail = range_set(f + 1, n);
        for_each_subset_of(tail, a - 1, [&](const VertexSet& rest) {
          VertexSet side;
          side.reserve(a);
          side.push_back(f);
          side.insert(side.end(), rest.begin(), rest.end());
          local.offer(counter.count(side), side);
        });
      }
      results[f] = std::move(local);
    };
    const int jobs = std::max(1, std::min(opts.jobs, chunks));
    if (jobs == 1) {
      for (int f = 0; f < chunks; ++f) run_chunk(f);
    } else {
      std::atomic<int> next{0};
      std::vector<std::thread> pool;
      for (int j = 0; j < jobs; ++j) {
        pool.emplace_back([&] {
          for (int f; (f = next.fetch_add(1)) < chunks;) run_chunk(f);
        });
      }
      for (auto& th : pool) th.join();
    }
    for (const Best& b : results) {
      if (!b.side.empty() || a == 0) best.offer(b.value, b.side);
    }
    r.partitions_examined = binomial(n, a);
  } else {
    // Random restarts with swap descent.
    r.non_exhaustive = true;
    Rng rng(opts.seed);
    for (int restart = 0; restart < std::max(1, opts.restarts); ++restart) {
      std::vector<int> perm = range_set(0, n);
      shuffle_in_place(perm, rng);
      std::vector<char> in(n, 0);
      for (int i = 0; i < a; ++i) in[perm[i]] = 1;
      long long value = counter.count(in);
      ++r.partitions_examined;
      bool improved = true;
      while (improved) {
        improved = false;
        for (int x = 0; x < n && !improved; ++x) {
          if (!in[x]) continue;
          for (int y = 0; y < n && !improved; ++y) {
            if (in[y]) continue;
            in[x] = 0;
            in[y] = 1;
            const long long v = counter.count(in);
            ++r.partitions_examined;
            if (v < value) {
              value = v;
              improved = true;
            } else {
              in[x] = 1;
              in[y] = 0;
            }
          }
        }
      }
      VertexSet side;
      for (int v = 0; v < n; ++v) {
        if (in[v]) side.push_back(v);
      }
      best.offer(value, side);
    }
  }
  r.missing_count = best.value;
  r.epsilon_effective = r.missing_count / r.normalizer;
  r.witness = make_bipartition(n, best.side);

  if (opts.debug_permutations > 0) {
    Rng rng(opts.seed ^ 0xD1B54A32D192ED03ULL);
    bool ok = true;
    for (int i = 0; i < opts.debug_permutations; ++i) {
      std::vector<int> perm = range_set(0, n);
      shuffle_in_place(perm, rng);
      VertexSet side(perm.begin(), perm.begin() + a);
      std::sort(side.begin(), side.end());
      // A relabeled template is the template on the relabeled side; count
      // directly against h without the shortcut counter.
      const KGraph copy = template_graph(n, k, t, side);
      long long miss = 0;
      for (const VertexSet& e : copy.edges()) {
        if (!h.has_edge(e)) ++miss;
      }
      if (!r.non_exhaustive && miss < r.missing_count) ok = false;
    }
    r.cross_check_ok = ok;
  }
  return r;
}

VertexClassification classify_vertices(const PartiteGraph& f,
                                       const PartiteGraph& h, double alpha) {
  if (f.n() != h.n() || f.k() != h.k() || f.q() != h.q()) {
    throw PreconditionError("classify_vertices: shape mismatch");
  }
  VertexClassification out;
  out.alpha = alpha;
  out.color_missing.assign(h.q(), 0);
  out.point_missing.assign(h.n(), 0);
  for (int c = 0; c < h.q(); ++c) {
    for (const VertexSet& e : h.neighborhood(c).edges()) {
      if (f.neighborhood(c).has_edge(e)) continue;
      ++out.color_missing[c];
      for (Vertex v : e) ++out.point_missing[v];
    }
  }
  const double bar = alpha * std::pow(static_cast<double>(h.n() + h.q()), h.k());
  for (int c = 0; c < h.q(); ++c) {
    (out.color_missing[c] < bar ? out.good : out.bad).colors.push_back(c);
  }
  for (int v = 0; v < h.n(); ++v) {
    (out.point_missing[v] < bar ? out.good : out.bad).points.push_back(v);
  }
  return out;
}

long long multiset_density(const KGraph& h,
                           const std::vector<VertexSet>& sets) {
  if (static_cast<int>(sets.size()) != h.k()) {
    throw PreconditionError("multiset_density needs k sets");
  }
  for (const VertexSet& s : sets) {
    if (s.empty()) return 0;
  }
  const auto in = membership(h.n(), sets);
  const int k = h.k();
  std::vector<std::uint32_t> rows(k);
  long long total = 0;
  for (const VertexSet& e : h.edges()) {
    for (int i = 0; i < k; ++i) {
      std::uint32_t bits = 0;
      for (int j = 0; j < k; ++j) {
        if (in[i][e[j]]) bits |= 1U << j;
      }
      rows[i] = bits;
    }
    total += permanent(rows, k);
  }
  return total;
}

long long multiset_density(const PartiteGraph& pg, int color,
                           const std::vector<VertexSet>& sets) {
  if (color < 0 || color >= pg.q()) throw PreconditionError("bad color");
  return multiset_density(pg.neighborhood(color), sets);
}

Absorb2Report absorb2_census(const KGraph& h) {
  Absorb2Report r;
  const int n = h.n();
  const int k = h.k();
  const double ln = std::log(static_cast<double>(n));
  r.cond_ii_degree_bar = (0.5 + 2.0 / ln) * n;
  r.cond_ii_count_threshold = std::pow(static_cast<double>(n), k - 1) / ln;
  for (long long d : codegree_tally(h)) {
    if (d > r.cond_ii_degree_bar) ++r.cond_ii_census;
  }
  r.cond_ii = r.cond_ii_census >= r.cond_ii_count_threshold;
  return r;
}

Absorb2Report absorb2_dichotomy(const KGraph& h, const Absorb2Params& p) {
  Absorb2Report r = absorb2_census(h);
  const int n = h.n();
  const int k = h.k();
  const double ln = std::log(static_cast<double>(n));
  r.cond_i_threshold = std::pow(static_cast<double>(n), k) / (ln * ln * ln);
  const double raw = (0.5 - 1.0 / ln) * n;
  r.set_size = std::clamp(static_cast<int>(std::ceil(raw - 1e-12)), 1, n);
  const int m = r.set_size;

  // Density is monotone in each set, so only |N_i| = m matters. Sets are
  // interchangeable, so N_1..N_{k-1} range over multisets, and N_k is the
  // m vertices of smallest last-slot weight.
  std::vector<VertexSet> msets;
  const std::uint64_t count_msets = binomial(n, m);
  const std::uint64_t tuples =
      count_msets > 100'000'000 ? std::numeric_limits<std::uint64_t>::max()
                                : binomial(static_cast<int>(count_msets) + k - 2,
                                           k - 1);
  long long min_density = std::numeric_limits<long long>::max();
  if (tuples <= p.exact_budget && n <= 12) {
    r.cond_i_exact = true;
    for_each_combination(n, m, [&](const VertexSet& s) { msets.push_back(s); });
    std::vector<int> idx(k - 1, 0);
    const int total = static_cast<int>(msets.size());
    for (;;) {
      std::vector<VertexSet> chosen;
      for (int i : idx) chosen.push_back(msets[i]);
      const auto w = last_slot_weights(h, membership(n, chosen));
      min_density = std::min(min_density, sum_smallest(w, m));
      // Next non-decreasing index tuple.
      int pos = k - 2;
      while (pos >= 0 && idx[pos] == total - 1) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int j = pos + 1; j < k - 1; ++j) idx[j] = idx[pos];
    }
    r.note = "CondI evaluated exactly over all minimal-size set tuples";
  } else {
    Rng rng(p.seed);
    std::vector<long long> deg(n);
    for (int v = 0; v < n; ++v) deg[v] = degree(h, v);
    std::vector<int> by_degree = range_set(0, n);
    std::stable_sort(by_degree.begin(), by_degree.end(),
                     [&](int x, int y) { return deg[x] < deg[y]; });
    VertexSet low(by_degree.begin(), by_degree.begin() + m);
    std::sort(low.begin(), low.end());
    const int samples = std::max(1, p.samples);
    for (int s = 0; s < samples; ++s) {
      std::vector<VertexSet> chosen;
      for (int i = 0; i < k - 1; ++i) {
        if (s == 0 || (s % 3 == 1 && i > 0)) {
          chosen.push_back(s == 0 ? low : chosen.front());
          continue;
        }
        std::vector<int> perm = range_set(0, n);
        shuffle_in_place(perm, rng);
        VertexSet pick(perm.begin(), perm.begin() + m);
        std::sort(pick.begin(), pick.end());
        chosen.push_back(pick);
      }
      const auto w = last_slot_weights(h, membership(n, chosen));
      min_density = std::min(min_density, sum_smallest(w, m));
    }
    r.note = "CondI estimated from " + std::to_string(samples) +
             " sampled set tuples (a pass is evidence, not proof; a fail is "
             "a certificate)";
  }
  r.cond_i_min_density = min_density;
  r.cond_i = static_cast<double>(min_density) >= r.cond_i_threshold;
  if (r.cond_i && r.cond_ii) {
    r.verdict = Absorb2Verdict::kBoth;
  } else if (r.cond_i) {
    r.verdict = Absorb2Verdict::kCondI;
  } else if (r.cond_ii) {
    r.verdict = Absorb2Verdict::kCondII;
  } else {
    r.verdict = Absorb2Verdict::kNeither;
  }
  return r;
}

}  // namespace rml
