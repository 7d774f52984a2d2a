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

#include "rml/generators.hpp"

#include <algorithm>

#include "rml/random.hpp"

namespace rml {
namespace {

void check_nk(int n, int k) {
  if (k < 3 || n < k || n % k != 0) {
    throw PreconditionError("requires k >= 3, n >= k, k | n");
  }
}

}  // namespace

int make_extremal_A_size(int n, int k) {
  check_nk(n, k);
  if (k % 2 == 1) {
    // Candidates (n-2)/2, (n-1)/2, n/2, (n+1)/2, doubled to stay integral.
    for (int twice : {n - 2, n - 1, n, n + 1}) {
      if (twice % 2 == 0 && (twice / 2) % 2 == 1) return twice / 2;
    }
    throw PreconditionError("no odd candidate");  // unreachable
  }
  if ((n / k) % 2 == 0) return n / 2 - 1;
  return (n / 2) % 2 == 1 ? n / 2 - 1 : n / 2;
}

ExtremalSpec make_extremal_spec(int n, int k, std::optional<VertexSet> a) {
  ExtremalSpec spec;
  spec.n = n;
  spec.k = k;
  spec.parity = k % 2 == 1 ? 0 : 1;
  const int size = make_extremal_A_size(n, k);
  if (a) {
    VertexSet s = *a;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (static_cast<int>(s.size()) != size) {
      throw PreconditionError("A has the wrong size for H(n,k)");
    }
    if (!s.empty() && (s.front() < 0 || s.back() >= n)) {
      throw PreconditionError("A not within [n]");
    }
    spec.a = std::move(s);
  } else {
    spec.a = range_set(0, size);
  }
  return spec;
}

KGraph gen_H(int n, int k, std::optional<VertexSet> a) {
  const ExtremalSpec spec = make_extremal_spec(n, k, std::move(a));
  KGraph h(n, k);
  for_each_combination(n, k, [&](const VertexSet& e) {
    if (intersection_size(e, spec.a) % 2 == spec.parity) h.add_edge(e);
  });
  return h;
}

KGraph gen_Hi(int n, int k, const Bipartition& bip, int i) {
  if (!is_valid_bipartition(n, bip)) {
    throw PreconditionError("gen_Hi: not a bipartition of [n]");
  }
  if (i != 0 && i != 1) throw PreconditionError("gen_Hi: i must be 0 or 1");
  KGraph h(n, k);
  for_each_combination(n, k, [&](const VertexSet& e) {
    if (intersection_size(e, bip.w) % 2 == i) h.add_edge(e);
  });
  return h;
}

PartiteGraph lift_family(const GraphFamily& fam) {
  if (!fam.balanced()) throw PreconditionError("lift_family: unbalanced");
  return PartiteGraph(fam.members());
}

PartiteGraph gen_script_H(int n, int k, std::optional<VertexSet> a) {
  const KGraph h = gen_H(n, k, std::move(a));
  return PartiteGraph(std::vector<KGraph>(n / k, h));
}

PartiteGraph gen_script_Hm(int n, int k, const Bipartition& bip, int m0,
                           int m1) {
  check_nk(n, k);
  if (m0 < 0 || m1 < 0 || m0 + m1 > n / k) {
    throw PreconditionError("gen_script_Hm: need m0 + m1 <= n/k");
  }
  std::vector<KGraph> nb(n / k, KGraph(n, k));
  if (m0 > 0) {
    const KGraph h0 = gen_Hi(n, k, bip, 0);
    for (int c = 0; c < m0; ++c) nb[c] = h0;
  }
  if (m1 > 0) {
    const KGraph h1 = gen_Hi(n, k, bip, 1);
    for (int c = m0; c < m0 + m1; ++c) nb[c] = h1;
  }
  return PartiteGraph(std::move(nb));
}

PartiteGraph gen_script_H_Wr(int n, int k, const Bipartition& bip, int r) {
  check_nk(n, k);
  if (r < 0 || r > k) throw PreconditionError("gen_script_H_Wr: 0 <= r <= k");
  if (!is_valid_bipartition(n, bip)) {
    throw PreconditionError("gen_script_H_Wr: not a bipartition of [n]");
  }
  KGraph h(n, k);
  for_each_combination(n, k, [&](const VertexSet& e) {
    if (intersection_size(e, bip.w) == r) h.add_edge(e);
  });
  return PartiteGraph(std::vector<KGraph>(n / k, h));
}

KGraph gen_random_member(int n, int k, const Rational& min_codegree,
                         std::uint64_t seed) {
  Rng rng(seed);
  std::vector<VertexSet> order;
  for_each_combination(n, k, [&](const VertexSet& e) { order.push_back(e); });
  shuffle_in_place(order, rng);
  // codeg[rank of (k-1)-set] = current codegree.
  std::vector<long long> codeg(binomial(n, k - 1), n - k + 1);
  std::vector<bool> alive(order.size(), true);
  VertexSet sub(k - 1);
  auto faces = [&](const VertexSet& e, auto&& fn) {
    for (int drop = 0; drop < k; ++drop) {
      int t = 0;
      for (int i = 0; i < k; ++i) {
        if (i != drop) sub[t++] = e[i];
      }
      fn(colex_rank(sub));
    }
  };
  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    bool removable = true;
    faces(order[idx], [&](std::uint64_t r) {
      if (!(Rational(codeg[r] - 1) > min_codegree)) removable = false;
    });
    if (!removable) continue;
    faces(order[idx], [&](std::uint64_t r) { --codeg[r]; });
    alive[idx] = false;
  }
  KGraph h(n, k);
  std::vector<VertexSet> kept;
  for (std::size_t idx = 0; idx < order.size(); ++idx) {
    if (alive[idx]) kept.push_back(order[idx]);
  }
  std::sort(kept.begin(), kept.end());
  for (VertexSet& e : kept) h.add_edge(std::move(e));
  return h;
}

GraphFamily gen_random_family(int n, int k, const Rational& min_codegree,
                              std::uint64_t seed) {
  check_nk(n, k);
  if (min_codegree > Rational(n - k + 1)) {
    throw PreconditionError("min_codegree exceeds n-k+1");
  }
  // One independent stream per member, derived from the seed.
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  std::vector<std::uint32_t> member_seeds(n / k);
  seq.generate(member_seeds.begin(), member_seeds.end());
  std::vector<KGraph> members;
  for (int c = 0; c < n / k; ++c) {
    const std::uint64_t s = (seed * 0x9E3779B97F4A7C15ULL) ^
                            (std::uint64_t{member_seeds[c]} << 17) ^
                            static_cast<std::uint64_t>(c);
    members.push_back(gen_random_member(n, k, min_codegree, s));
  }
  return GraphFamily(std::move(members));
}

}  // namespace rml
