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

// Acceptance checks AC1..AC11, one line each. Exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "rml/closeness.hpp"
#include "rml/constructive.hpp"
#include "rml/devices.hpp"
#include "rml/generators.hpp"
#include "rml/pipeline.hpp"
#include "rml/solver.hpp"

namespace rml {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_secs(double s) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << s << "s";
  return os.str();
}

// ---------------------------------------------------------------------------

Outcome ac1_threshold() {
  const auto t0 = Clock::now();
  int rows = 0, bad = 0;
  for (int k = 3; k <= 8; ++k) {
    for (int n = k; n <= 64; n += k) {
      ++rows;
      const Rational got = threshold_t(n, k);
      // The oracle works in halves; compare 2t exactly.
      const double twice = 2.0 * oracle::threshold(n, k);
      if (got.denominator() > 2 ||
          static_cast<double>(2 * got.numerator() / got.denominator()) != twice) {
        ++bad;
      }
    }
  }
  const bool spots = threshold_t(12, 4) == Rational(4) && threshold_t(9, 3) == Rational(2) &&
                     threshold_t(15, 3) == Rational(6) && threshold_t(12, 3) == Rational(4);
  const double secs = since(t0);
  return {bad == 0 && spots && secs < 1.0,
          std::to_string(rows) + " rows, " + std::to_string(bad) + " mismatches, spots " +
              (spots ? "ok" : "wrong") + ", " + fmt_secs(secs)};
}

Outcome ac2_tightness() {
  const auto t0 = Clock::now();
  const std::vector<std::pair<int, int>> cases = {{6, 3},  {9, 3}, {12, 3}, {15, 3},
                                                  {18, 3}, {8, 4}, {12, 4}, {16, 4}};
  std::string failed;
  for (auto [n, k] : cases) {
    if (Rational(min_degree(gen_H(n, k), k - 1)) != threshold_t(n, k)) {
      failed += " (" + std::to_string(n) + "," + std::to_string(k) + ")";
    }
  }
  const double secs = since(t0);
  return {failed.empty() && secs < 10.0,
          std::to_string(cases.size()) + " cases" +
              (failed.empty() ? "" : ", wrong:" + failed) + ", " + fmt_secs(secs)};
}

Outcome ac3_nonexistence() {
  const std::vector<std::pair<int, int>> cases = {{6, 3},  {9, 3}, {12, 3},
                                                  {15, 3}, {8, 4}, {12, 4}};
  Outcome out;
  double worst = 0;
  for (auto [n, k] : cases) {
    SolveBudget b;
    b.seconds = 60.0;
    const auto t0 = Clock::now();
    const SolveResult r = solve_partite_pm(gen_script_H(n, k), b);
    const double secs = since(t0);
    worst = std::max(worst, secs);
    if (r.status != SolveStatus::kNotFound || secs >= 60.0) {
      out.pass = false;
      out.detail += "(" + std::to_string(n) + "," + std::to_string(k) + ") " +
                    to_string(r.status) + "; ";
    }
  }
  out.detail += std::to_string(cases.size()) + " instances, slowest " + fmt_secs(worst);
  return out;
}

// Bernoulli families with edge probability in [0.02, 0.62], plus
// families built just above the threshold.
GraphFamily random_family(int n, int k, int idx, Rng& rng) {
  if (idx % 4 == 3) {
    return gen_random_family(n, k, threshold_t(n, k), rng());
  }
  const double p = 0.02 + 0.6 * uniform_unit(rng);
  return GraphFamily(oracle::bernoulli_family(n, k, p, rng));
}

Outcome ac4_lift_equivalence() {
  const auto t0 = Clock::now();
  Rng rng(404);
  int agree = 0, total = 0, found = 0;
  for (auto [n, k] : std::vector<std::pair<int, int>>{{6, 3}, {9, 3}, {8, 4}}) {
    for (int i = 0; i < 500; ++i) {
      const GraphFamily fam = random_family(n, k, i, rng);
      const LiftEquivalence e = lift_equivalence(fam);
      ++total;
      if (e.verdict == Agreement::kAgree) ++agree;
      if (e.rainbow == SolveStatus::kFound) ++found;
    }
  }
  const double secs = since(t0);
  return {agree == total && secs < 300.0,
          std::to_string(agree) + "/" + std::to_string(total) + " agree (" +
              std::to_string(found) + " with a matching), " + fmt_secs(secs)};
}

Outcome ac5_solver_oracle() {
  Rng rng(505);
  const std::vector<std::pair<int, int>> sizes = {{6, 3}, {9, 3}, {8, 4}};
  int agree = 0, found = 0;
  for (int i = 0; i < 500; ++i) {
    const auto [n, k] = sizes[i % sizes.size()];
    const GraphFamily fam = random_family(n, k, i / 3, rng);
    const SolveResult a = solve_rainbow_pm(fam);
    const SolveResult b = oracle_rainbow_pm(fam);
    if (a.status == b.status && a.status != SolveStatus::kTimeout) ++agree;
    if (a.status == SolveStatus::kFound) {
      ++found;
      if (!verify_matching(fam, *a.matching)) --agree;
    }
  }
  return {agree == 500, std::to_string(agree) + "/500 agree (" + std::to_string(found) +
                            " with a matching)"};
}

Outcome ac6_bad_vertices() {
  Rng rng(606);
  const int n = 12, k = 3, q = n / k;
  const long long volume = 16LL * 16 * 16 * 16;  // (n + q)^(k+1)
  int worst = 0;
  Outcome out;
  for (int trial = 0; trial < 100; ++trial) {
    const int m0 = static_cast<int>(uniform_index(rng, q + 1));
    const int wsize = 1 + static_cast<int>(uniform_index(rng, n - 1));
    const Bipartition bip = make_bipartition(n, range_set(0, wsize));
    const PartiteGraph h = gen_script_Hm(n, k, bip, m0, q - m0);
    // eps = j / 10000 with budget eps * volume >= 1.
    const long long j = 1 + static_cast<long long>(uniform_index(rng, 100));
    const long long budget = j * volume / 10000;
    std::vector<PartiteEdge> edges = h.edges();
    shuffle_in_place(edges, rng);
    const long long drop = std::min<long long>(static_cast<long long>(uniform_index(rng, budget + 1)),
                                               static_cast<long long>(edges.size()));
    std::vector<KGraph> nb = h.neighborhoods();
    for (long long i = 0; i < drop; ++i) nb[edges[i].color].remove_edge(edges[i].points);
    const PartiteGraph f(std::move(nb));
    const double eps = static_cast<double>(j) / 10000.0;
    const VertexClassification c = classify_vertices(f, h, std::pow(eps, 2.0 / 3.0));
    const long long bad = static_cast<long long>(c.bad.size());
    worst = std::max(worst, static_cast<int>(bad));
    // bad <= (1 + 1/k)(k + 1) eps^(1/3) n, cubed and cleared of fractions:
    // bad^3 k^3 10000 <= ((k + 1)^2 n)^3 j.
    const long long lhs = bad * bad * bad * k * k * k * 10000;
    const long long r = (k + 1) * (k + 1) * n;
    if (lhs > r * r * r * j) {
      out.pass = false;
      out.detail += "trial " + std::to_string(trial) + " bad=" + std::to_string(bad) + "; ";
    }
  }
  out.detail += "100 perturbations, max bad count " + std::to_string(worst);
  return out;
}

// H^{i_c}(W, U) per color plus Bernoulli noise; resampled until every
// neighborhood has codegree above t(n, k).
PartiteGraph parity_instance(int n, int k, const Bipartition& bip, Rng& rng) {
  const Rational t = threshold_t(n, k);
  for (;;) {
    std::vector<KGraph> nb;
    bool ok = true;
    for (int c = 0; c < n / k && ok; ++c) {
      KGraph g = gen_Hi(n, k, bip, static_cast<int>(uniform_index(rng, 2)));
      const double p = 0.2 + 0.6 * uniform_unit(rng);
      for (std::uint32_t m : oracle::all_ksets(n, k)) {
        const VertexSet e = oracle::from_mask(m);
        if (!g.has_edge(e) && bernoulli(rng, p)) g.add_edge(e);
      }
      ok = Rational(oracle::min_codegree(g)) > t;
      nb.push_back(std::move(g));
    }
    if (ok) return PartiteGraph(std::move(nb));
  }
}

Outcome ac7_parity_breaker() {
  Rng rng(707);
  int false_certs = 0, found = 0, with_edge = 0, missed = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = trial % 2 == 0 ? 9 : 12, k = 3, q = n / k;
    VertexSet all = range_set(0, n);
    shuffle_in_place(all, rng);
    all.resize(k + uniform_index(rng, n - 2 * k + 1));  // k <= |W| <= n - k
    std::sort(all.begin(), all.end());
    const Bipartition bip = make_bipartition(n, all);
    const PartiteGraph f = parity_instance(n, k, bip, rng);
    ParityTarget t;
    t.i = static_cast<int>(uniform_index(rng, 2));
    VertexSet cols = range_set(0, q);
    shuffle_in_place(cols, rng);
    cols.resize(uniform_index(rng, q));
    std::sort(cols.begin(), cols.end());
    t.x_prime = cols;
    t.bip = bip;
    const ParityBreaker b = find_parity_breaker(f, t);
    if (b.found) {
      ++found;
      if (b.edge) ++with_edge;
      if ((b.edge && !f.has_edge(*b.edge)) || !oracle::parity_ok(f, t, b.edge)) ++false_certs;
    } else {
      bool any = oracle::parity_ok(f, t, std::nullopt);
      for (const PartiteEdge& e : f.edges()) any = any || oracle::parity_ok(f, t, e);
      if (any) ++missed;
    }
  }
  return {false_certs == 0,
          "200 instances, " + std::to_string(found) + " certificates (" +
              std::to_string(with_edge) + " edges), " + std::to_string(false_certs) +
              " false, " + std::to_string(missed) + " missed"};
}

BalancedSet random_set(int q, int n, int size, Rng& rng) {
  VertexSet pts = range_set(0, n);
  shuffle_in_place(pts, rng);
  pts.resize(size);
  std::sort(pts.begin(), pts.end());
  return BalancedSet{static_cast<int>(uniform_index(rng, q)), pts};
}

Outcome ac8_devices() {
  Rng rng(808);
  int emitted = 0, unsound = 0;
  DeviceSearchBudget budget;
  budget.nodes = 200'000;
  for (int trial = 0; trial < 20; ++trial) {
    const PartiteGraph f = fixture::random_lift(4, 12, 3, 0.5 + 0.02 * trial, rng);
    for (DeviceKind kind : {DeviceKind::kI, DeviceKind::kEdge}) {
      const BalancedSet s = random_set(4, 12, kind == DeviceKind::kEdge ? 4 : 3, rng);
      for (const Device& d : find_devices(f, s, kind, 3, budget)) {
        ++emitted;
        if (!verify_device(f, s, d)) ++unsound;
      }
    }
  }
  int recovered = 0;
  for (DeviceKind kind : {DeviceKind::kI, DeviceKind::kII, DeviceKind::kIII}) {
    const fixture::Planted p = fixture::plant_device(kind, 3);
    for (const Device& d : find_devices(p.graph, p.s, kind, 3)) {
      ++emitted;
      if (!verify_device(p.graph, p.s, d)) ++unsound;
    }
    AbsorbingFamilyOptions opts;
    opts.kind = kind;
    opts.p = 1.0;
    opts.per_set_limit = 1;
    opts.x0 = p.s.x0;
    opts.targets = std::vector<BalancedSet>{p.s};
    const AbsorbingFamily fam = select_absorbing_family(p.graph, opts);
    if (fam.complete && fam.members.size() == 1 && fam.members[0] == p.device) ++recovered;
  }
  {
    Rng prng(2);
    const fixture::AbsorptionInstance inst = fixture::plant_absorption(3, 5, 0.0, prng);
    AbsorbingFamilyOptions opts;
    opts.kind = DeviceKind::kEdge;
    opts.p = 1.0;
    opts.targets = std::vector<BalancedSet>{inst.s};
    const AbsorbingFamily fam = select_absorbing_family(inst.graph, opts);
    for (const Device& d : fam.members) {
      if (!verify_device(inst.graph, inst.s, d)) ++unsound;
    }
    if (std::any_of(fam.members.begin(), fam.members.end(),
                    [&](const Device& d) { return d.edges == inst.absorbing; })) {
      ++recovered;
    }
  }
  return {unsound == 0 && emitted > 0 && recovered == 4,
          std::to_string(emitted) + " devices emitted, " + std::to_string(unsound) +
              " unsound, planted recovered " + std::to_string(recovered) + "/4"};
}

Outcome ac9_absorption() {
  Rng rng(909);
  int ok = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int q = 4 + trial % 4;
    const double noise = (trial / 4) % 3 == 0 ? 0.0 : 0.02 * ((trial / 4) % 3);
    const fixture::AbsorptionInstance inst = fixture::plant_absorption(3, q, noise, rng);
    const ConstructResult r = absorption_loop(inst.graph, inst.absorbing, inst.partial);
    // n = kq + 1: perfect on the colors, one point left over.
    if (r.status == SolveStatus::kFound && verify_matching(inst.graph, r.matching, false) &&
        static_cast<int>(r.matching.size()) == q) {
      ++ok;
    }
  }
  return {ok == 50, std::to_string(ok) + "/50 absorbed"};
}

Outcome ac10_pipeline() {
  Rng rng(1010);
  int runs = 0, found = 0, contradictions = 0;
  std::vector<PartiteGraph> graphs;
  for (int i = 0; i < 8; ++i) graphs.push_back(fixture::random_lift(4, 12, 3, 0.4 + 0.07 * i, rng));
  for (int i = 0; i < 6; ++i) graphs.push_back(fixture::random_lift(3, 9, 3, 0.3 + 0.1 * i, rng));
  for (int n : {9, 12}) {
    graphs.push_back(lift_family(gen_random_family(n, 3, threshold_t(n, 3), rng())));
    graphs.push_back(gen_script_H(n, 3));
  }
  for (const PartiteGraph& pg : graphs) {
    for (PipelineMode mode : {PipelineMode::kNonExtremal, PipelineMode::kExtremal}) {
      ++runs;
      PipelineOptions o;
      o.seed = static_cast<std::uint64_t>(runs);
      PipelineResult r;
      try {
        r = run_pipeline(pg, mode, o);
      } catch (const std::logic_error&) {
        ++contradictions;  // internal cross-check tripped
        continue;
      }
      if (r.status != SolveStatus::kFound) continue;
      ++found;
      if (!r.matching || !verify_matching(pg, *r.matching) ||
          solve_partite_pm(pg).status != SolveStatus::kFound) {
        ++contradictions;
      }
    }
  }
  return {contradictions == 0 && found > 0,
          std::to_string(runs) + " runs, " + std::to_string(found) + " Found, " +
              std::to_string(contradictions) + " contradictions"};
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

Outcome ac11_determinism() {
  const fs::path dir = fs::temp_directory_path() / "rml_acceptance_ac11";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = RML_CLI_PATH;
  const std::string d = dir.string();
  const std::string g9 = d + "/g9.txt", g12 = d + "/g12.txt";
  const std::vector<std::string> commands = {
      "gen --kind random --n 12 --k 3 --seed 7",
      "gen --kind script-hm --n 12 --k 3 --m0 2 --m1 1 --seed 7",
      "solve --input " + g9 + " --mode rainbow --seed 3",
      "closeness --input " + g12 + " --template H0 --mode weak --seed 5 --budget 5000",
      "devices --input " + g12 + " --kind 1 --s 1:1,2,3 --limit 2 --seed 5",
      "devices --input " + g12 + " --kind edge --select --p 0.5 --seed 9",
      "pipeline --input " + g12 + " --mode non-extremal --seed 4",
      "sweep --n 6,9 --k 3 --seeds 1,2,3 --output-dir " + d + "/sweep --seed 1",
  };
  auto run = [&](const std::string& args, const fs::path& out) {
    const std::string cmd =
        "\"" + cli + "\" --log-level off " + args + " > \"" + out.string() + "\" 2>/dev/null";
    return std::system(cmd.c_str());
  };
  if (run("gen --kind random --n 9 --k 3 --seed 11 --out " + g9, dir / "x") != 0 ||
      run("gen --kind random --n 12 --k 3 --seed 12 --out " + g12, dir / "x") != 0) {
    return {false, "could not generate inputs"};
  }
  int same = 0;
  std::string diff;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const fs::path a = dir / ("a" + std::to_string(i)), b = dir / ("b" + std::to_string(i));
    run(commands[i], a);
    std::string csv_a = slurp(dir / "sweep" / "sweep.csv");
    run(commands[i], b);
    std::string csv_b = slurp(dir / "sweep" / "sweep.csv");
    if (slurp(a) == slurp(b) && !slurp(a).empty() && csv_a == csv_b) {
      ++same;
    } else {
      diff += " " + commands[i].substr(0, commands[i].find(' '));
    }
  }
  fs::remove_all(dir);
  return {same == static_cast<int>(commands.size()),
          std::to_string(same) + "/" + std::to_string(commands.size()) +
              " commands byte-identical" + (diff.empty() ? "" : ", differ:" + diff)};
}

}  // namespace
}  // namespace rml

int main() {
  using namespace rml;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> checks = {
      {"AC1 threshold formula", ac1_threshold},
      {"AC2 tightness witness", ac2_tightness},
      {"AC3 extremal non-existence", ac3_nonexistence},
      {"AC4 lift equivalence", ac4_lift_equivalence},
      {"AC5 solver vs oracle", ac5_solver_oracle},
      {"AC6 bad-vertex bound", ac6_bad_vertices},
      {"AC7 parity breaker", ac7_parity_breaker},
      {"AC8 device soundness", ac8_devices},
      {"AC9 absorption loop", ac9_absorption},
      {"AC10 pipeline cross-check", ac10_pipeline},
      {"AC11 determinism", ac11_determinism},
  };
  int failures = 0;
  for (const auto& [name, fn] : checks) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
