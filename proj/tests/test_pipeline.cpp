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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "rml/experiment.hpp"
#include "rml/generators.hpp"
#include "rml/pipeline.hpp"

namespace rml {
namespace {

namespace fs = std::filesystem;

TEST_CASE("pipeline mode names") {
  CHECK(pipeline_mode_from_string("extremal") == PipelineMode::kExtremal);
  CHECK(pipeline_mode_from_string(to_string(PipelineMode::kNonExtremal)) ==
        PipelineMode::kNonExtremal);
  CHECK_THROWS(pipeline_mode_from_string("both"));
}

TEST_CASE("pipeline on the single-edge instance") {
  const PartiteGraph pg = fixture::make_partite(1, 3, 3, {{0, {0, 1, 2}}});
  const PipelineResult r = run_pipeline(pg, PipelineMode::kNonExtremal);
  REQUIRE(r.status == SolveStatus::kFound);
  CHECK(verify_matching(pg, *r.matching));
  CHECK(r.failed_stage.empty());
}

TEST_CASE("pipeline never claims a matching on script_H") {
  const PartiteGraph pg = gen_script_H(9, 3);
  for (PipelineMode m : {PipelineMode::kExtremal, PipelineMode::kNonExtremal}) {
    const PipelineResult r = run_pipeline(pg, m);
    CHECK(r.status != SolveStatus::kFound);
    CHECK(!r.matching);
    CHECK(!r.failed_stage.empty());
  }
}

TEST_CASE("pipeline agrees with the solver on dense instances") {
  Rng rng(31);
  int found = 0;
  for (int t = 0; t < 5; ++t) {
    const PartiteGraph pg = fixture::random_lift(4, 12, 3, 0.6, rng);
    PipelineOptions o;
    o.seed = t + 1;
    const PipelineResult r = run_pipeline(pg, PipelineMode::kNonExtremal, o);
    if (r.status == SolveStatus::kFound) {
      ++found;
      CHECK(verify_matching(pg, *r.matching));
      REQUIRE(r.solver_status);
      CHECK(*r.solver_status == SolveStatus::kFound);
    }
  }
  CHECK(found >= 4);
}

TEST_CASE("pipeline rejects unbalanced graphs") {
  const PartiteGraph pg = fixture::make_partite(2, 9, 3, {{0, {0, 1, 2}}});
  CHECK_THROWS_AS(run_pipeline(pg, PipelineMode::kNonExtremal), PreconditionError);
}

TEST_CASE("experiment config parsing") {
  const ExperimentConfig c = parse_experiment_config_text(
      "# sweep\n"
      "n = 6..12\n"
      "k = 3, 4\n"
      "seeds = 1..3   # three\n"
      "budget_secs = 2.5\n"
      "jobs = 2\n"
      "output_dir = out\n"
      "pipeline = extremal\n");
  CHECK(c.n_values == std::vector<int>{6, 7, 8, 9, 10, 11, 12});
  CHECK(c.k_values == std::vector<int>{3, 4});
  CHECK(c.seeds == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(c.budget_secs == doctest::Approx(2.5));
  CHECK(c.jobs == 2);
  CHECK(c.output_dir == "out");
  CHECK(c.pipeline == SweepPipeline::kExtremal);
  const std::vector<std::pair<int, int>> want = {{6, 3}, {8, 4}, {9, 3}, {12, 3}, {12, 4}};
  CHECK(c.pairs() == want);
  CHECK(to_json(c)["n"].size() == 7);

  CHECK(parse_experiment_config_text("n = 9..6\nk = 3\nseeds = 1\n").n_values.empty());
  CHECK_THROWS_AS(parse_experiment_config_text("colour = 3\n"), PreconditionError);
  CHECK_THROWS_AS(parse_experiment_config_text("k = 2\n"), PreconditionError);
  CHECK_THROWS_AS(parse_experiment_config_text("n = x\n"), PreconditionError);
}

TEST_CASE("experiment record round trip") {
  ExperimentRecord r{"n009-k03-s000001-at", "random n=9", "2", "2", "Found",
                     "witnesses/a.txt", 0.25, 17};
  CHECK(record_from_json(to_json(r)) == r);
  const std::string csv = records_to_csv({r});
  CHECK(csv.rfind(std::string("# ") + kSweepSchema, 0) == 0);
  CHECK(csv.find("0.25") == std::string::npos);
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

TEST_CASE("small sweep is complete and reproducible") {
  const fs::path dir = fs::temp_directory_path() / "rml_test_sweep";
  fs::remove_all(dir);
  ExperimentConfig cfg;
  cfg.n_values = {6, 9};
  cfg.k_values = {3};
  for (std::uint64_t s = 1; s <= 10; ++s) cfg.seeds.push_back(s);
  cfg.budget_secs = 20;
  cfg.output_dir = dir.string();
  const std::vector<ExperimentRecord> recs = run_threshold_sweep(cfg);
  CHECK(recs.size() >= 30);
  int extremal = 0;
  for (const ExperimentRecord& r : recs) {
    if (r.instance_id.ends_with("-extremal")) {
      ++extremal;
      CHECK(r.solve_status == "NotFound");
      CHECK(r.witness_path.empty());
    } else if (r.solve_status == "Found") {
      CHECK(fs::exists(dir / r.witness_path));
    }
  }
  CHECK(extremal == 20);
  const std::string first = slurp(dir / "sweep.csv");
  CHECK(first == records_to_csv(recs));

  cfg.jobs = 2;
  run_threshold_sweep(cfg);
  CHECK(slurp(dir / "sweep.csv") == first);
  fs::remove_all(dir);
}

TEST_CASE("sweep fails fast on an unwritable directory") {
  const fs::path file = fs::temp_directory_path() / "rml_test_not_a_dir";
  std::ofstream(file) << "x";
  ExperimentConfig cfg;
  cfg.n_values = {6};
  cfg.k_values = {3};
  cfg.seeds = {1};
  cfg.output_dir = (file / "sub").string();
  CHECK_THROWS(run_threshold_sweep(cfg));
  fs::remove(file);
}

}  // namespace
}  // namespace rml
