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

// Text and JSON formats. Vertices and colors are 1-indexed on disk.
//
// Single graph:           Family / partite graph:
//   k n m                   k n c
//   v1 ... vk               ci: v1 ... vk
//
// Lines starting with '#' and blank lines are ignored. The JSON mirror is
// {"kind": "kgraph", "k", "n", "edges": [[...]]} or
// {"kind": "family", "k", "n", "colors": c, "edges": [[ci, [...]], ...]}.

#ifndef RML_IO_HPP_
#define RML_IO_HPP_

#include <iosfwd>
#include <string>
#include <variant>

#include "json.hpp"
#include "rml/core.hpp"

namespace rml {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_kgraph(std::ostream& os, const KGraph& h);
void write_partite(std::ostream& os, const PartiteGraph& pg);
void write_matching(std::ostream& os, int k, int n, int q,
                    const PartiteMatching& m);

// Reads either format; single graphs come back as KGraph, families as
// PartiteGraph (one neighborhood per color).
using Instance = std::variant<KGraph, PartiteGraph>;
Instance read_instance(std::istream& is);
Instance read_instance_file(const std::string& path);
// Accepts both text and JSON (detected by a leading '{').
Instance parse_instance(const std::string& text);

PartiteGraph as_partite(const Instance& inst);
GraphFamily to_family(const PartiteGraph& pg);

nlohmann::json to_json(const KGraph& h);
nlohmann::json to_json(const PartiteGraph& pg);
nlohmann::json to_json(const PartiteEdge& e);
nlohmann::json to_json(const PartiteMatching& m);
nlohmann::json to_json(const Bipartition& b);
Instance instance_from_json(const nlohmann::json& j);
PartiteMatching matching_from_json(const nlohmann::json& j);

}  // namespace rml

#endif  // RML_IO_HPP_
