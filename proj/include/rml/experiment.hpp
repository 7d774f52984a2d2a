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

// Threshold sweeps: configuration, records and their CSV / JSON forms.
//
// Config file, one "key = value" per line, '#' comments:
//   n = 6..12        (or a list: 6, 9, 12)
//   k = 3
//   seeds = 1..10
//   budget_secs = 30
//   jobs = 2
//   output_dir = out
//   pipeline = solver-only | extremal | non-extremal

#ifndef RML_EXPERIMENT_HPP_
#define RML_EXPERIMENT_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace rml {

inline constexpr const char* kSweepSchema = "rml-sweep v1";

enum class SweepPipeline { kSolverOnly, kExtremal, kNonExtremal };
std::string to_string(SweepPipeline p);
SweepPipeline sweep_pipeline_from_string(const std::string& s);

struct ExperimentConfig {
  std::vector<int> n_values;
  std::vector<int> k_values;
  std::vector<std::uint64_t> seeds;
  double budget_secs = 60.0;
  int jobs = 1;
  std::string output_dir = "sweep_out";
  SweepPipeline pipeline = SweepPipeline::kSolverOnly;

  // Valid (n, k) pairs: k >= 3 and k | n, in (n, k) order.
  std::vector<std::pair<int, int>> pairs() const;
};

// Throws PreconditionError on unknown keys, bad values or k < 3.
ExperimentConfig parse_experiment_config(std::istream& is);
ExperimentConfig parse_experiment_config_text(const std::string& text);
void validate(const ExperimentConfig& cfg);
nlohmann::json to_json(const ExperimentConfig& cfg);

struct ExperimentRecord {
  std::string instance_id;
  std::string generator_params;
  std::string min_codegree;  // exact rational, "p/q" or "p"
  std::string threshold_t;   // exact rational
  std::string solve_status;
  std::string witness_path;  // empty unless a matching was found
  double elapsed = 0.0;
  std::uint64_t nodes_expanded = 0;

  bool operator==(const ExperimentRecord&) const = default;
};

nlohmann::json to_json(const ExperimentRecord& r);
ExperimentRecord record_from_json(const nlohmann::json& j);

// Versioned header comment, column line, one row per record. No timing.
std::string records_to_csv(const std::vector<ExperimentRecord>& records);

// Three families per (n, k, seed): "extremal" (the lifted extremal graph),
// "above" (random, codegree > t) and "at" (random, codegree about ceil(t)).
// Writes sweep.csv, sweep.json and witnesses/ under output_dir; an
// unwritable output_dir fails before any solve. Records sorted by id.
std::vector<ExperimentRecord> run_threshold_sweep(const ExperimentConfig& cfg);

}  // namespace rml

#endif  // RML_EXPERIMENT_HPP_
