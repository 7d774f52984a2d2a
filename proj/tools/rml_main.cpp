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

// rml {gen|solve|closeness|construct|devices|sweep|pipeline}
//
// Vertices and colors on the command line are 1-indexed, like the files.
// Timing goes to the log (stderr), never to stdout.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rml/closeness.hpp"
#include "rml/constructive.hpp"
#include "rml/devices.hpp"
#include "rml/experiment.hpp"
#include "rml/generators.hpp"
#include "rml/io.hpp"
#include "rml/pipeline.hpp"
#include "rml/solver.hpp"
#include "spdlog/sinks/stdout_color_sinks.h"
#include "spdlog/spdlog.h"

namespace rml {
namespace {

using nlohmann::json;

struct Global {
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string log_level = "warn";
};

VertexSet one_based(const std::vector<int>& v, int limit, const char* what) {
  VertexSet out;
  for (int x : v) {
    if (x < 1 || x > limit) {
      throw PreconditionError(std::string(what) + " out of range: " + std::to_string(x));
    }
    out.push_back(x - 1);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> to_one(const VertexSet& s) {
  std::vector<int> out;
  for (int v : s) out.push_back(v + 1);
  return out;
}

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << text;
}

PartiteGraph load_partite(const std::string& path) {
  return as_partite(read_instance_file(path));
}

PartiteMatching load_matching(const std::string& path) {
  if (path.empty()) return {};
  return load_partite(path).edges();
}

std::string matching_text(const PartiteGraph& pg, const PartiteMatching& m) {
  std::ostringstream os;
  write_matching(os, pg.k(), pg.n(), pg.q(), m);
  return os.str();
}

json report_json(const ClosenessReport& r) {
  json j{{"missing_count", r.missing_count},
         {"normalizer", r.normalizer},
         {"epsilon_effective", r.epsilon_effective},
         {"norm_vertex_power", r.norm_vertex_power},
         {"norm_n_power", r.norm_n_power},
         {"norm_partite", r.norm_partite},
         {"non_exhaustive", r.non_exhaustive},
         {"partitions_examined", r.partitions_examined}};
  if (r.witness) j["witness"] = to_json(*r.witness);
  if (r.cross_check_ok) j["cross_check_ok"] = *r.cross_check_ok;
  return j;
}

json device_json(const Device& d) {
  return json{{"kind", to_string(d.kind)},
              {"matchingEdges", to_json(d.edges)},
              {"witness", to_json(d.witness)}};
}

// "x0:v1,v2,..." 1-indexed.
BalancedSet parse_set(const std::string& spec, const PartiteGraph& pg) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw PreconditionError("--s expects COLOR:V1,V2,...");
  BalancedSet s;
  s.x0 = std::stoi(spec.substr(0, colon)) - 1;
  if (s.x0 < 0 || s.x0 >= pg.q()) throw PreconditionError("--s color out of range");
  std::vector<int> pts;
  std::stringstream ss(spec.substr(colon + 1));
  std::string item;
  while (std::getline(ss, item, ',')) pts.push_back(std::stoi(item));
  s.vset = one_based(pts, pg.n(), "--s point");
  return s;
}

void setup_logging(const Global& g) {
  auto logger = spdlog::stderr_color_mt("rml");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::from_str(g.log_level));
}

// ---- gen ------------------------------------------------------------------

struct GenArgs {
  std::string kind = "extremal";
  int n = 0, k = 3, w_size = -1, parity = 0, m0 = 0, m1 = 0, r = 0;
  std::string min_codegree;
  std::string out;
  bool json_out = false;
};

int run_gen(const GenArgs& a, const Global& g) {
  const Bipartition bip =
      make_bipartition(a.n, range_set(0, a.w_size < 0 ? a.n / 2 : a.w_size));
  Instance inst;
  if (a.kind == "extremal") {
    inst = gen_H(a.n, a.k);
  } else if (a.kind == "hi") {
    inst = gen_Hi(a.n, a.k, bip, a.parity);
  } else if (a.kind == "script-h") {
    inst = gen_script_H(a.n, a.k);
  } else if (a.kind == "script-hm") {
    inst = gen_script_Hm(a.n, a.k, bip, a.m0, a.m1);
  } else if (a.kind == "wr") {
    inst = gen_script_H_Wr(a.n, a.k, bip, a.r);
  } else if (a.kind == "random") {
    const Rational bar = a.min_codegree.empty() ? threshold_t(a.n, a.k)
                                                : parse_rational(a.min_codegree);
    inst = lift_family(gen_random_family(a.n, a.k, bar, g.seed));
  } else {
    throw PreconditionError("unknown --kind " + a.kind);
  }
  std::ostringstream os;
  if (a.json_out) {
    std::visit([&](const auto& x) { os << to_json(x).dump(2) << "\n"; }, inst);
  } else if (const auto* h = std::get_if<KGraph>(&inst)) {
    write_kgraph(os, *h);
  } else {
    write_partite(os, std::get<PartiteGraph>(inst));
  }
  emit(a.out, os.str());
  return 0;
}

// ---- solve ----------------------------------------------------------------

struct SolveArgs {
  std::string input, mode = "partite", witness_out;
  double budget_secs = -1;
  std::uint64_t node_cap = 0;
};

int status_code(SolveStatus s) {
  return s == SolveStatus::kFound ? 0 : s == SolveStatus::kNotFound ? 1 : 2;
}

int run_solve(const SolveArgs& a, const Global& g) {
  const PartiteGraph pg = load_partite(a.input);
  SolveBudget budget;
  if (a.budget_secs > 0) budget.seconds = a.budget_secs;
  budget.node_cap = a.node_cap;
  budget.jobs = g.jobs;
  if (a.mode == "equiv") {
    const LiftEquivalence e = lift_equivalence(to_family(pg), budget);
    const char* verdict = e.verdict == Agreement::kAgree      ? "agree"
                          : e.verdict == Agreement::kDisagree ? "disagree"
                                                              : "inconclusive";
    std::cout << "equivalence " << verdict << " rainbow " << to_string(e.rainbow)
              << " partite " << to_string(e.partite) << "\n";
    return e.verdict == Agreement::kAgree ? 0 : 1;
  }
  SolveResult r;
  if (a.mode == "partite") {
    r = solve_partite_pm(pg, budget);
  } else if (a.mode == "rainbow") {
    r = solve_rainbow_pm(to_family(pg), budget);
  } else if (a.mode == "oracle") {
    r = oracle_rainbow_pm(to_family(pg));
  } else {
    throw PreconditionError("unknown --mode " + a.mode);
  }
  spdlog::info("solve: {} nodes, {:.3f}s", r.nodes_expanded, r.elapsed_secs);
  std::cout << "status " << to_string(r.status) << "\n";
  if (r.matching) {
    if (a.witness_out.empty()) {
      std::cout << matching_text(pg, *r.matching);
    } else {
      emit(a.witness_out, matching_text(pg, *r.matching));
    }
  }
  return status_code(r.status);
}

// ---- closeness --------------------------------------------------------------

struct ClosenessArgs {
  std::string input, tmpl = "H", mode = "weak";
  int color = 1, side_size = -1;
  std::vector<int> w;
  double alpha = -1;
  std::uint64_t budget = 2'000'000;
  bool absorb2 = false;
};

int run_closeness(const ClosenessArgs& a, const Global& g) {
  const Instance inst = read_instance_file(a.input);
  const PartiteGraph pg = as_partite(inst);
  const KGraph h = std::holds_alternative<KGraph>(inst)
                       ? std::get<KGraph>(inst)
                       : pg.neighborhood(one_based({a.color}, pg.q(), "--color")[0]);
  const Template t = template_from_string(a.tmpl);
  json out{{"template", to_string(t)}, {"mode", a.mode}};
  if (a.mode == "weak") {
    WeakOptions wo;
    wo.budget = a.budget;
    wo.jobs = g.jobs;
    wo.seed = g.seed;
    if (a.side_size >= 0) wo.side_size = a.side_size;
    out["report"] = report_json(weak_closeness_to_extremal(h, t, wo));
  } else if (a.mode == "strong") {
    VertexSet side = a.w.empty()
                         ? range_set(0, template_side_size(h.n(), h.k(), t,
                                                           a.side_size >= 0
                                                               ? std::optional<int>(a.side_size)
                                                               : std::nullopt))
                         : one_based(a.w, h.n(), "--w");
    const KGraph tg = template_graph(h.n(), h.k(), t, side);
    out["report"] = report_json(strong_closeness(h, tg));
    if (a.alpha >= 0) {
      const PartiteGraph lift(std::vector<KGraph>(pg.q(), tg));
      const VertexClassification c = classify_vertices(pg, lift, a.alpha);
      out["classification"] = {{"alpha", c.alpha},
                               {"bad_colors", to_one(c.bad.colors)},
                               {"bad_points", to_one(c.bad.points)}};
    }
  } else {
    throw PreconditionError("unknown --mode " + a.mode);
  }
  if (a.absorb2) {
    Absorb2Params p;
    p.seed = g.seed;
    const Absorb2Report r = absorb2_dichotomy(h, p);
    out["absorb2"] = {{"verdict", to_string(r.verdict)},
                      {"cond_i", r.cond_i},
                      {"cond_ii", r.cond_ii},
                      {"cond_i_exact", r.cond_i_exact},
                      {"cond_ii_census", r.cond_ii_census},
                      {"note", r.note}};
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

// ---- construct ---------------------------------------------------------------

struct ConstructArgs {
  std::string input, procedure, absorbing, partial, matching;
  std::vector<int> w, x_prime, x1, cover_colors, cover_points;
  int i = 0, r = 0;
  double eta = 0.01, c = 0.25;
  std::vector<int> e0;  // color then points
};

int run_construct(const ConstructArgs& a, const Global&) {
  const PartiteGraph pg = load_partite(a.input);
  const Bipartition bip = make_bipartition(pg.n(), one_based(a.w, pg.n(), "--w"));
  json trace = json::array();
  PartiteMatching result;
  std::string status = "Found";
  auto take = [&](const ConstructResult& r) {
    for (const std::string& line : r.trace) trace.push_back(line);
    if (!r.stage.empty()) trace.push_back("stage " + r.stage);
    status = to_string(r.status);
    result = r.matching;
  };
  std::optional<PartiteEdge> e0;
  if (!a.e0.empty()) {
    e0 = PartiteEdge{one_based({a.e0[0]}, pg.q(), "--e0 color")[0],
                     one_based(std::vector<int>(a.e0.begin() + 1, a.e0.end()),
                               pg.n(), "--e0 point")};
  }
  SectionParams params;
  params.eta = a.eta;
  params.c = a.c;

  if (a.procedure == "parity") {
    const ParityTarget t{a.i, one_based(a.x_prime, pg.q(), "--x-prime"), bip};
    const ParityBreaker b = find_parity_breaker(pg, t);
    status = b.found ? "Found" : "NotFound";
    if (b.edge) result = {*b.edge};
    trace.push_back(b.found ? (b.edge ? "edge breaker" : "empty breaker") : "none");
  } else if (a.procedure == "cover") {
    const PartiteVertexSet cover{one_based(a.cover_colors, pg.q(), "--cover-colors"),
                                 one_based(a.cover_points, pg.n(), "--cover-points")};
    take(greedy_cover(pg, bip, one_based(a.x1, pg.q(), "--x1"), a.i, cover, e0, params));
  } else if (a.procedure == "rotate") {
    take(rotation_augment(pg, bip, a.r, load_matching(a.matching)));
  } else if (a.procedure == "split") {
    take(close_final_split(pg, bip, a.i));
  } else if (a.procedure == "extend") {
    result = extend_to_near_cover(pg);
    trace.push_back(std::to_string(pg.q() - static_cast<int>(result.size())) +
                    " colors uncovered");
  } else if (a.procedure == "absorb") {
    const ConstructResult r =
        absorption_loop(pg, load_matching(a.absorbing), load_matching(a.partial));
    take(r);
    if (r.unabsorbed) {
      trace.push_back(json{{"unabsorbed_colors", to_one(r.unabsorbed->colors)},
                           {"unabsorbed_points", to_one(r.unabsorbed->points)}}.dump());
    }
  } else {
    throw PreconditionError("unknown --procedure " + a.procedure);
  }
  std::cout << matching_text(pg, result);
  std::cout << json{{"procedure", a.procedure}, {"status", status}, {"trace", trace}}.dump(2)
            << "\n";
  return status == "Found" ? 0 : 1;
}

// ---- devices ---------------------------------------------------------------------

struct DevicesArgs {
  std::string input, kind = "1", set;
  int limit = 1, retries = 8, x0 = 1;
  double p = -1;
  bool select = false, count = false;
  std::uint64_t nodes = 2'000'000;
};

int run_devices(const DevicesArgs& a, const Global& g) {
  const PartiteGraph pg = load_partite(a.input);
  const DeviceKind kind = device_kind_from_string(a.kind);
  json out{{"kind", to_string(kind)}};
  if (a.select) {
    AbsorbingFamilyOptions o;
    o.kind = kind;
    o.p = a.p;
    o.retries = a.retries;
    o.seed = g.seed;
    o.x0 = one_based({a.x0}, pg.q(), "--x0")[0];
    o.budget.nodes = a.nodes;
    if (!a.set.empty()) o.targets = std::vector<BalancedSet>{parse_set(a.set, pg)};
    const AbsorbingFamily f = select_absorbing_family(pg, o);
    json members = json::array();
    for (const Device& d : f.members) members.push_back(device_json(d));
    out["family"] = {{"members", members},
                     {"complete", f.complete},
                     {"exhaustive", f.exhaustive},
                     {"sets_checked", f.sets_checked},
                     {"sets_covered", f.sets_covered},
                     {"candidates", f.candidates},
                     {"attempts", f.attempts},
                     {"p", f.p_used},
                     {"required_count", f.required_count},
                     {"warnings", f.warnings}};
  } else {
    const BalancedSet s = parse_set(a.set, pg);
    out["s"] = {{"x0", s.x0 + 1}, {"points", to_one(s.vset)}};
    if (a.count) {
      const EdgeAbsorberCount c = count_edge_absorbers(pg, s, g.seed);
      out["edge_absorbers"] = {{"count", c.count}, {"exact", c.exact}};
    } else {
      DeviceSearchBudget b;
      b.nodes = a.nodes;
      b.seed = g.seed;
      json list = json::array();
      for (const Device& d : find_devices(pg, s, kind, a.limit, b)) {
        list.push_back(device_json(d));
      }
      out["devices"] = list;
    }
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

// ---- sweep / pipeline -------------------------------------------------------------

struct SweepArgs {
  std::string config, output_dir, pipeline;
  std::vector<int> n, k;
  std::vector<std::uint64_t> seeds;
  double budget_secs = -1;
};

int run_sweep(const SweepArgs& a, const Global& g, bool jobs_set) {
  ExperimentConfig cfg;
  if (!a.config.empty()) {
    std::ifstream is(a.config);
    if (!is) throw std::runtime_error("cannot read " + a.config);
    cfg = parse_experiment_config(is);
  } else {
    cfg.budget_secs = default_budget_secs();
  }
  if (!a.n.empty()) cfg.n_values = a.n;
  if (!a.k.empty()) cfg.k_values = a.k;
  if (!a.seeds.empty()) cfg.seeds = a.seeds;
  if (a.budget_secs > 0) cfg.budget_secs = a.budget_secs;
  if (!a.output_dir.empty()) cfg.output_dir = a.output_dir;
  if (!a.pipeline.empty()) cfg.pipeline = sweep_pipeline_from_string(a.pipeline);
  if (jobs_set) cfg.jobs = g.jobs;
  validate(cfg);
  const std::vector<ExperimentRecord> records = run_threshold_sweep(cfg);
  std::cout << records_to_csv(records);
  return 0;
}

struct PipelineArgs {
  std::string input, mode = "non-extremal", witness_out;
  double alpha = 0.01, eta = 0.01, c = 0.25, budget_secs = -1;
};

int run_pipeline_cmd(const PipelineArgs& a, const Global& g) {
  const PartiteGraph pg = load_partite(a.input);
  PipelineOptions o;
  o.seed = g.seed;
  o.alpha_bad = a.alpha;
  o.params.eta = a.eta;
  o.params.c = a.c;
  if (a.budget_secs > 0) o.budget.seconds = a.budget_secs;
  const PipelineResult r = run_pipeline(pg, pipeline_mode_from_string(a.mode), o);
  json out{{"mode", a.mode},
           {"status", to_string(r.status)},
           {"failed_stage", r.failed_stage},
           {"trace", r.trace}};
  if (r.solver_status) out["solver_status"] = to_string(*r.solver_status);
  if (r.matching) {
    out["matching"] = to_json(*r.matching);
    if (!a.witness_out.empty()) emit(a.witness_out, matching_text(pg, *r.matching));
  }
  std::cout << out.dump(2) << "\n";
  return status_code(r.status);
}

}  // namespace
}  // namespace rml

int main(int argc, char** argv) {
  using namespace rml;
  CLI::App app{"Rainbow matchings in k-graph families"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  CLI::Option* jobs_opt = app.add_option("--jobs", g.jobs, "Worker threads")
                              ->capture_default_str()
                              ->check(CLI::PositiveNumber);
  app.add_option("--log-level", g.log_level, "trace|debug|info|warn|error|off")
      ->capture_default_str();

  GenArgs ga;
  CLI::App* gen = app.add_subcommand("gen", "Generate an instance");
  gen->add_option("--kind", ga.kind)
      ->check(CLI::IsMember({"extremal", "hi", "script-h", "script-hm", "wr", "random"}));
  gen->add_option("--n", ga.n)->required();
  gen->add_option("--k", ga.k);
  gen->add_option("--w-size", ga.w_size, "|W|; W = {1..|W|}, default n/2");
  gen->add_option("--parity", ga.parity);
  gen->add_option("--m0", ga.m0);
  gen->add_option("--m1", ga.m1);
  gen->add_option("--r", ga.r);
  gen->add_option("--min-codegree", ga.min_codegree, "Rational, default t(n,k)");
  gen->add_option("--out", ga.out);
  gen->add_flag("--json", ga.json_out);

  SolveArgs sa;
  CLI::App* solve = app.add_subcommand("solve", "Exact perfect matching search");
  solve->add_option("--input", sa.input)->required();
  solve->add_option("--mode", sa.mode)
      ->check(CLI::IsMember({"rainbow", "partite", "oracle", "equiv"}));
  solve->add_option("--budget-secs", sa.budget_secs);
  solve->add_option("--node-cap", sa.node_cap);
  solve->add_option("--witness-out", sa.witness_out);

  ClosenessArgs ca;
  CLI::App* close = app.add_subcommand("closeness", "Closeness to extremal templates");
  close->add_option("--input", ca.input)->required();
  close->add_option("--template", ca.tmpl, "H|complement-H|H0|H1");
  close->add_option("--mode", ca.mode)->check(CLI::IsMember({"strong", "weak"}));
  close->add_option("--color", ca.color, "Color to inspect in a family");
  close->add_option("--side-size", ca.side_size);
  close->add_option("--w", ca.w, "Template side for strong mode")->delimiter(',');
  close->add_option("--alpha", ca.alpha, "Classify vertices (strong mode)");
  close->add_option("--budget", ca.budget);
  close->add_flag("--absorb2", ca.absorb2);

  ConstructArgs cn;
  CLI::App* cons = app.add_subcommand("construct", "Run one constructive procedure");
  cons->add_option("--input", cn.input)->required();
  cons->add_option("--procedure", cn.procedure)
      ->required()
      ->check(CLI::IsMember({"parity", "cover", "rotate", "split", "extend", "absorb"}));
  cons->add_option("--w", cn.w)->delimiter(',');
  cons->add_option("--i", cn.i);
  cons->add_option("--r", cn.r);
  cons->add_option("--x-prime", cn.x_prime)->delimiter(',');
  cons->add_option("--x1", cn.x1)->delimiter(',');
  cons->add_option("--cover-colors", cn.cover_colors)->delimiter(',');
  cons->add_option("--cover-points", cn.cover_points)->delimiter(',');
  cons->add_option("--e0", cn.e0, "COLOR,V1,..,Vk")->delimiter(',');
  cons->add_option("--eta", cn.eta);
  cons->add_option("--c", cn.c);
  cons->add_option("--matching", cn.matching, "Start matching file (rotate)");
  cons->add_option("--absorbing", cn.absorbing, "Absorbing matching file");
  cons->add_option("--partial", cn.partial, "Partial matching file");

  DevicesArgs da;
  CLI::App* dev = app.add_subcommand("devices", "Absorbing devices");
  dev->add_option("--input", da.input)->required();
  dev->add_option("--kind", da.kind)->check(CLI::IsMember({"1", "2", "3", "edge"}));
  dev->add_option("--s", da.set, "COLOR:V1,V2,...");
  dev->add_option("--limit", da.limit);
  dev->add_option("--p", da.p);
  dev->add_option("--retries", da.retries);
  dev->add_option("--x0", da.x0);
  dev->add_option("--nodes", da.nodes);
  dev->add_flag("--select", da.select, "Select an absorbing family");
  dev->add_flag("--count", da.count, "Count S-absorbing edges");

  SweepArgs wa;
  CLI::App* sweep = app.add_subcommand("sweep", "Threshold sweep");
  sweep->add_option("--config", wa.config);
  sweep->add_option("--n", wa.n)->delimiter(',');
  sweep->add_option("--k", wa.k)->delimiter(',');
  sweep->add_option("--seeds", wa.seeds)->delimiter(',');
  sweep->add_option("--budget-secs", wa.budget_secs);
  sweep->add_option("--output-dir", wa.output_dir);
  sweep->add_option("--pipeline", wa.pipeline);

  PipelineArgs pa;
  CLI::App* pipe = app.add_subcommand("pipeline", "Heuristic constructive pipeline");
  pipe->add_option("--input", pa.input)->required();
  pipe->add_option("--mode", pa.mode)->check(CLI::IsMember({"extremal", "non-extremal"}));
  pipe->add_option("--alpha", pa.alpha);
  pipe->add_option("--eta", pa.eta);
  pipe->add_option("--c", pa.c);
  pipe->add_option("--budget-secs", pa.budget_secs);
  pipe->add_option("--witness-out", pa.witness_out);

  CLI11_PARSE(app, argc, argv);
  try {
    setup_logging(g);
    if (*gen) return run_gen(ga, g);
    if (*solve) return run_solve(sa, g);
    if (*close) return run_closeness(ca, g);
    if (*cons) return run_construct(cn, g);
    if (*dev) return run_devices(da, g);
    if (*sweep) return run_sweep(wa, g, jobs_opt->count() > 0);
    if (*pipe) return run_pipeline_cmd(pa, g);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
