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

#include "rml/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace rml {
namespace {

VertexSet to_one_based(const VertexSet& s) {
  VertexSet out = s;
  for (Vertex& v : out) ++v;
  return out;
}

// Next non-comment, non-blank line; returns false at EOF.
bool next_line(std::istream& is, std::string& line) {
  while (std::getline(is, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    return true;
  }
  return false;
}

VertexSet read_vertices(std::istringstream& ls, int k, int n) {
  VertexSet e;
  int v;
  while (ls >> v) {
    if (v < 1 || v > n) throw FormatError("vertex out of range");
    e.push_back(v - 1);
  }
  if (static_cast<int>(e.size()) != k) {
    throw FormatError("edge line must list exactly k vertices");
  }
  return e;
}

}  // namespace

void write_kgraph(std::ostream& os, const KGraph& h) {
  os << h.k() << ' ' << h.n() << ' ' << h.edge_count() << '\n';
  for (const VertexSet& e : h.edges()) {
    for (std::size_t i = 0; i < e.size(); ++i) {
      os << (i ? " " : "") << e[i] + 1;
    }
    os << '\n';
  }
}

void write_partite(std::ostream& os, const PartiteGraph& pg) {
  os << pg.k() << ' ' << pg.n() << ' ' << pg.q() << '\n';
  for (int c = 0; c < pg.q(); ++c) {
    for (const VertexSet& e : pg.neighborhood(c).edges()) {
      os << c + 1 << ':';
      for (Vertex v : e) os << ' ' << v + 1;
      os << '\n';
    }
  }
}

void write_matching(std::ostream& os, int k, int n, int q,
                    const PartiteMatching& m) {
  os << "# matching with " << m.size() << " edges\n";
  os << k << ' ' << n << ' ' << q << '\n';
  for (const PartiteEdge& e : m) {
    os << e.color + 1 << ':';
    for (Vertex v : e.points) os << ' ' << v + 1;
    os << '\n';
  }
}

Instance read_instance(std::istream& is) {
  std::string line;
  if (!next_line(is, line)) throw FormatError("empty input");
  std::istringstream header(line);
  int k, n, c;
  if (!(header >> k >> n >> c)) throw FormatError("bad header");
  std::vector<std::string> body;
  bool any_colon = false;
  while (next_line(is, line)) {
    if (line.find(':') != std::string::npos) any_colon = true;
    body.push_back(line);
  }
  if (k < 1 || n < k) throw FormatError("bad (k, n)");
  // A header with c > 0 and no edge lines can only be an edgeless family.
  if (!any_colon && (!body.empty() || c == 0)) {
    KGraph h(n, k);
    for (const std::string& l : body) {
      std::istringstream ls(l);
      h.add_edge(read_vertices(ls, k, n));
    }
    if (static_cast<int>(h.edge_count()) != c) {
      throw FormatError("edge count does not match header");
    }
    return h;
  }
  if (c < 1) throw FormatError("family needs at least one color");
  std::vector<KGraph> nb(c, KGraph(n, k));
  for (const std::string& l : body) {
    const auto colon = l.find(':');
    if (colon == std::string::npos) throw FormatError("missing color prefix");
    const int ci = std::stoi(l.substr(0, colon));
    if (ci < 1 || ci > c) throw FormatError("color out of range");
    std::istringstream ls(l.substr(colon + 1));
    nb[ci - 1].add_edge(read_vertices(ls, k, n));
  }
  return PartiteGraph(std::move(nb));
}

Instance parse_instance(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    return instance_from_json(nlohmann::json::parse(text));
  }
  std::istringstream is(text);
  return read_instance(is);
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

PartiteGraph as_partite(const Instance& inst) {
  if (const auto* pg = std::get_if<PartiteGraph>(&inst)) return *pg;
  const KGraph& h = std::get<KGraph>(inst);
  if (h.n() % h.k() != 0) {
    throw PreconditionError("single graph with k not dividing n");
  }
  return PartiteGraph(std::vector<KGraph>(h.n() / h.k(), h));
}

GraphFamily to_family(const PartiteGraph& pg) {
  return GraphFamily(pg.neighborhoods());
}

nlohmann::json to_json(const KGraph& h) {
  nlohmann::json edges = nlohmann::json::array();
  for (const VertexSet& e : h.edges()) edges.push_back(to_one_based(e));
  return {{"kind", "kgraph"}, {"k", h.k()}, {"n", h.n()}, {"edges", edges}};
}

nlohmann::json to_json(const PartiteGraph& pg) {
  nlohmann::json edges = nlohmann::json::array();
  for (int c = 0; c < pg.q(); ++c) {
    for (const VertexSet& e : pg.neighborhood(c).edges()) {
      edges.push_back({c + 1, to_one_based(e)});
    }
  }
  return {{"kind", "family"}, {"k", pg.k()},       {"n", pg.n()},
          {"colors", pg.q()}, {"edges", edges}};
}

nlohmann::json to_json(const PartiteEdge& e) {
  return {{"color", e.color + 1}, {"points", to_one_based(e.points)}};
}

nlohmann::json to_json(const PartiteMatching& m) {
  nlohmann::json out = nlohmann::json::array();
  for (const PartiteEdge& e : m) out.push_back(to_json(e));
  return out;
}

nlohmann::json to_json(const Bipartition& b) {
  nlohmann::json out = {{"w", to_one_based(b.w)}, {"u", to_one_based(b.u)}};
  if (b.parity_class) out["parity_class"] = *b.parity_class;
  return out;
}

Instance instance_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind");
  const int k = j.at("k");
  const int n = j.at("n");
  auto zero_based = [n](const nlohmann::json& arr) {
    VertexSet e;
    for (const auto& v : arr) {
      const int x = v.get<int>();
      if (x < 1 || x > n) throw FormatError("vertex out of range");
      e.push_back(x - 1);
    }
    return e;
  };
  if (kind == "kgraph") {
    KGraph h(n, k);
    for (const auto& e : j.at("edges")) h.add_edge(zero_based(e));
    return h;
  }
  if (kind != "family") throw FormatError("unknown kind " + kind);
  const int c = j.at("colors");
  if (c < 1) throw FormatError("family needs at least one color");
  std::vector<KGraph> nb(c, KGraph(n, k));
  for (const auto& e : j.at("edges")) {
    const int ci = e.at(0);
    if (ci < 1 || ci > c) throw FormatError("color out of range");
    nb[ci - 1].add_edge(zero_based(e.at(1)));
  }
  return PartiteGraph(std::move(nb));
}

PartiteMatching matching_from_json(const nlohmann::json& j) {
  PartiteMatching m;
  for (const auto& e : j) {
    PartiteEdge pe;
    pe.color = e.at("color").get<int>() - 1;
    for (const auto& v : e.at("points")) pe.points.push_back(v.get<int>() - 1);
    std::sort(pe.points.begin(), pe.points.end());
    m.push_back(std::move(pe));
  }
  return m;
}

}  // namespace rml
