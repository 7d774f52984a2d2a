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

#include "rml/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <mutex>
#include <sstream>
#include <thread>

#include "rml/core.hpp"
#include "rml/generators.hpp"
#include "rml/io.hpp"
#include "rml/pipeline.hpp"
#include "rml/solver.hpp"

namespace rml {
namespace {

namespace fs = std::filesystem;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long long parse_int(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw PreconditionError("config: bad integer for " + key + ": " + s);
  }
}

// "a..b" or "a, b, c".
std::vector<long long> parse_list(const std::string& value, const std::string& key) {
  std::vector<long long> out;
  const auto dots = value.find("..");
  if (dots != std::string::npos) {
    const long long lo = parse_int(trim(value.substr(0, dots)), key);
    const long long hi = parse_int(trim(value.substr(dots + 2)), key);
    for (long long v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_int(item, key));
  }
  return out;
}

std::string rational_string(const Rational& r) { return to_string(r); }

std::string instance_id(int n, int k, std::uint64_t seed, const char* kind) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "n%03d-k%02d-s%06llu-%s", n, k,
                static_cast<unsigned long long>(seed), kind);
  return buf;
}

struct Job {
  int n = 0;
  int k = 0;
  std::uint64_t seed = 0;
  const char* kind = "";
};

long long min_codegree(const PartiteGraph& pg) {
  long long best = -1;
  for (const KGraph& h : pg.neighborhoods()) {
    const long long d = min_degree(h, pg.k() - 1);
    best = best < 0 ? d : std::min(best, d);
  }
  return best;
}

ExperimentRecord run_job(const Job& job, const ExperimentConfig& cfg) {
  const Rational t = threshold_t(job.n, job.k);
  PartiteGraph pg;
  std::string params;
  const std::string kind = job.kind;
  if (kind == "extremal") {
    pg = gen_script_H(job.n, job.k);
    params = "script-h";
  } else {
    Rational bar = t;
    if (kind == "at") {
      // Keep codegree >= ceil(t): delete while above ceil(t) - 1.
      const auto num = t.numerator(), den = t.denominator();
      const long long ceil_t = (num + den - 1) / den;
      bar = Rational(ceil_t - 1);
    }
    pg = lift_family(gen_random_family(job.n, job.k, bar, job.seed));
    params = "random min_codegree>" + rational_string(bar) + " seed=" +
             std::to_string(job.seed);
  }
  ExperimentRecord r;
  r.instance_id = instance_id(job.n, job.k, job.seed, job.kind);
  r.generator_params = params + " n=" + std::to_string(job.n) +
                       " k=" + std::to_string(job.k);
  r.min_codegree = std::to_string(min_codegree(pg));
  r.threshold_t = rational_string(t);

  SolveBudget budget;
  budget.seconds = cfg.budget_secs;
  std::optional<PartiteMatching> found;
  if (cfg.pipeline == SweepPipeline::kSolverOnly) {
    const SolveResult s = solve_partite_pm(pg, budget);
    r.solve_status = to_string(s.status);
    r.elapsed = s.elapsed_secs;
    r.nodes_expanded = s.nodes_expanded;
    found = s.matching;
  } else {
    PipelineOptions po;
    po.budget = budget;
    po.seed = job.seed;
    const auto t0 = std::chrono::steady_clock::now();
    const PipelineResult p = run_pipeline(
        pg,
        cfg.pipeline == SweepPipeline::kExtremal ? PipelineMode::kExtremal
                                                 : PipelineMode::kNonExtremal,
        po);
    r.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
    r.solve_status = to_string(p.status);
    found = p.matching;
  }
  if (found) {
    r.witness_path = "witnesses/" + r.instance_id + ".txt";
    std::ofstream os(fs::path(cfg.output_dir) / r.witness_path);
    write_matching(os, pg.k(), pg.n(), pg.q(), *found);
  }
  return r;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << text;
}

}  // namespace

std::string to_string(SweepPipeline p) {
  switch (p) {
    case SweepPipeline::kSolverOnly: return "solver-only";
    case SweepPipeline::kExtremal: return "extremal";
    case SweepPipeline::kNonExtremal: return "non-extremal";
  }
  return "?";
}

SweepPipeline sweep_pipeline_from_string(const std::string& s) {
  if (s == "solver-only") return SweepPipeline::kSolverOnly;
  if (s == "extremal") return SweepPipeline::kExtremal;
  if (s == "non-extremal") return SweepPipeline::kNonExtremal;
  throw PreconditionError("unknown pipeline: " + s);
}

std::vector<std::pair<int, int>> ExperimentConfig::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (int n : n_values) {
    for (int k : k_values) {
      if (k >= 3 && n >= k && n % k == 0) out.emplace_back(n, k);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void validate(const ExperimentConfig& cfg) {
  for (int k : cfg.k_values) {
    if (k < 3) throw PreconditionError("config: k must be at least 3");
  }
  if (cfg.jobs < 1) throw PreconditionError("config: jobs must be positive");
  if (!(cfg.budget_secs > 0)) throw PreconditionError("config: budget_secs > 0");
  if (cfg.output_dir.empty()) throw PreconditionError("config: empty output_dir");
}

ExperimentConfig parse_experiment_config(std::istream& is) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw PreconditionError("config line " + std::to_string(lineno) +
                              ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "n" || key == "n_range") {
      cfg.n_values.clear();
      for (long long v : parse_list(value, key)) cfg.n_values.push_back(static_cast<int>(v));
    } else if (key == "k" || key == "k_range") {
      cfg.k_values.clear();
      for (long long v : parse_list(value, key)) cfg.k_values.push_back(static_cast<int>(v));
    } else if (key == "seeds") {
      cfg.seeds.clear();
      for (long long v : parse_list(value, key)) {
        if (v < 0) throw PreconditionError("config: negative seed");
        cfg.seeds.push_back(static_cast<std::uint64_t>(v));
      }
    } else if (key == "budget_secs") {
      try {
        cfg.budget_secs = std::stod(value);
      } catch (const std::exception&) {
        throw PreconditionError("config: bad budget_secs: " + value);
      }
    } else if (key == "jobs") {
      cfg.jobs = static_cast<int>(parse_int(value, key));
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else if (key == "pipeline") {
      cfg.pipeline = sweep_pipeline_from_string(value);
    } else {
      throw PreconditionError("config: unknown key " + key);
    }
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig parse_experiment_config_text(const std::string& text) {
  std::istringstream is(text);
  return parse_experiment_config(is);
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  return nlohmann::json{{"n", cfg.n_values},
                        {"k", cfg.k_values},
                        {"seeds", cfg.seeds},
                        {"budget_secs", cfg.budget_secs},
                        {"jobs", cfg.jobs},
                        {"output_dir", cfg.output_dir},
                        {"pipeline", to_string(cfg.pipeline)}};
}

nlohmann::json to_json(const ExperimentRecord& r) {
  return nlohmann::json{{"instance_id", r.instance_id},
                        {"generator_params", r.generator_params},
                        {"min_codegree", r.min_codegree},
                        {"threshold_t", r.threshold_t},
                        {"solve_status", r.solve_status},
                        {"witness_path", r.witness_path},
                        {"elapsed", r.elapsed},
                        {"nodes_expanded", r.nodes_expanded}};
}

ExperimentRecord record_from_json(const nlohmann::json& j) {
  ExperimentRecord r;
  r.instance_id = j.at("instance_id").get<std::string>();
  r.generator_params = j.at("generator_params").get<std::string>();
  r.min_codegree = j.at("min_codegree").get<std::string>();
  r.threshold_t = j.at("threshold_t").get<std::string>();
  r.solve_status = j.at("solve_status").get<std::string>();
  r.witness_path = j.at("witness_path").get<std::string>();
  r.elapsed = j.at("elapsed").get<double>();
  r.nodes_expanded = j.at("nodes_expanded").get<std::uint64_t>();
  return r;
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream os;
  os << "# " << kSweepSchema << "\n";
  os << "instance_id,generator_params,min_codegree,threshold_t,solve_status,"
        "nodes_expanded,witness_path\n";
  for (const ExperimentRecord& r : records) {
    os << r.instance_id << ",\"" << r.generator_params << "\"," << r.min_codegree
       << "," << r.threshold_t << "," << r.solve_status << "," << r.nodes_expanded
       << "," << r.witness_path << "\n";
  }
  return os.str();
}

std::vector<ExperimentRecord> run_threshold_sweep(const ExperimentConfig& cfg) {
  validate(cfg);
  const fs::path dir(cfg.output_dir);
  {
    std::error_code ec;
    fs::create_directories(dir / "witnesses", ec);
    const fs::path probe = dir / ".write_probe";
    std::ofstream os(probe);
    if (ec || !os) {
      throw std::runtime_error("output_dir is not writable: " + cfg.output_dir);
    }
    os.close();
    fs::remove(probe, ec);
  }

  std::vector<Job> jobs;
  for (const auto& [n, k] : cfg.pairs()) {
    for (std::uint64_t seed : cfg.seeds) {
      for (const char* kind : {"extremal", "above", "at"}) {
        jobs.push_back(Job{n, k, seed, kind});
      }
    }
  }
  std::vector<ExperimentRecord> records(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        records[i] = run_job(jobs[i], cfg);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  std::sort(records.begin(), records.end(),
            [](const ExperimentRecord& a, const ExperimentRecord& b) {
              return a.instance_id < b.instance_id;
            });
  write_text(dir / "sweep.csv", records_to_csv(records));
  nlohmann::json j{{"schema", kSweepSchema}, {"config", to_json(cfg)}};
  j["records"] = nlohmann::json::array();
  for (const ExperimentRecord& r : records) j["records"].push_back(to_json(r));
  write_text(dir / "sweep.json", j.dump(2) + "\n");
  return records;
}

}  // namespace rml
