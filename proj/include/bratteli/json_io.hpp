#pragma once

// JSON schemas. Vertices are referenced as [level, "label"]; map keys use
// the compact string form "[level,label]" (split at the first comma).
//
//   graph    {"levels":[["1"],["0","1"]], "edges":[{"from":[0,"1"],
//             "to":[1,"0"], "m":1}, ...]}
//   flow     graph plus top-level "beta" and per-edge thermal data, one of
//              "spectrum": [0.0, 0.693...]   eigenvalues of H_e
//              "weights":  ["1/2", "1/4"]    Boltzmann weights (beta != 0)
//              "Z":        1.5 | "3/2" | "inf"
//   system   {"[0,1]": 1, "[1,0]": "1/2", ...}
//   measure  {"level": 2, "weights": {"0": "1/4", "1": "1/2", ...}}
//   link     graph plus per-edge "kappa"
//
// Scalars: float mode writes JSON numbers; exact mode writes "p/q" strings.
// Both parsers accept either form ("p/q" strings work in float mode too; a
// JSON number entering exact mode is converted from its binary double value,
// which is exact for dyadics — use strings for non-dyadic exact input).

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bratteli/error.hpp"
#include "bratteli/flow_spec.hpp"
#include "bratteli/graded_graph.hpp"
#include "bratteli/harmonic.hpp"
#include "bratteli/link_engine.hpp"
#include "bratteli/path_space.hpp"
#include "bratteli/realize.hpp"
#include "bratteli/scalar.hpp"

namespace bratteli {

using Json = nlohmann::ordered_json;

// --------------------------------------------------------------------------
// Scalars

template <class S>
Json scalar_to_json(const S& v) {
  if constexpr (ScalarOps<S>::kExact)
    return ScalarOps<S>::str(v);
  else
    return v;
}

template <class S>
S scalar_from_json(const Json& j) {
  if (j.is_string()) {
    // "p/q" and decimal strings; exact text in either mode.
    Rational r = parse_rational(j.get<std::string>());
    return ScalarOps<S>::from_rational(r);
  }
  if (j.is_number_integer()) return ScalarOps<S>::from_int(j.get<long long>());
  if (j.is_number()) {
    if constexpr (ScalarOps<S>::kExact)
      return ScalarOps<S>::from_rational(Rational(j.get<double>()));
    else
      return j.get<double>();
  }
  fail(Errc::ParseError, "expected a number or numeric string, got " + j.dump());
}

template <class S>
Json ext_to_json(const ExtScalar<S>& v) {
  if (v.infinite()) return "inf";
  return scalar_to_json<S>(v.finite());
}

template <class S>
ExtScalar<S> ext_from_json(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return ExtScalar<S>::infinity();
  return ExtScalar<S>(scalar_from_json<S>(j));
}

// --------------------------------------------------------------------------
// Vertex references

inline std::string vertex_key(const GradedGraph& g, VertexRef v) {
  return "[" + std::to_string(v.level) + "," + g.label(v) + "]";
}

inline VertexRef vertex_from_key(const GradedGraph& g, const std::string& key) {
  // Accept both "[level,label]" and the bare "level,label" form.
  std::string body = key;
  if (body.size() >= 2 && body.front() == '[' && body.back() == ']')
    body = body.substr(1, body.size() - 2);
  auto comma = body.find(',');
  if (comma == std::string::npos)
    fail(Errc::ParseError, "vertex key must look like [level,label]: '" + key + "'");
  int level;
  try {
    level = std::stoi(body.substr(0, comma));
  } catch (const std::exception&) {
    fail(Errc::ParseError, "bad level in vertex key '" + key + "'");
  }
  return g.vertex(level, body.substr(comma + 1));
}

inline Json vertex_to_json(const GradedGraph& g, VertexRef v) {
  return Json::array({v.level, g.label(v)});
}

inline VertexRef vertex_from_json(const GradedGraph& g, const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_string())
    fail(Errc::ParseError, "vertex reference must be [level, \"label\"], got " + j.dump());
  return g.vertex(j[0].get<int>(), j[1].get<std::string>());
}

// --------------------------------------------------------------------------
// Graphs

inline Json graph_to_json(const GradedGraph& g) {
  Json j;
  Json levels = Json::array();
  for (int n = 0; n <= g.depth(); ++n) levels.push_back(g.labels(n));
  j["levels"] = std::move(levels);
  Json edges = Json::array();
  for (int n = 1; n <= g.depth(); ++n) {
    for (const Edge& e : g.edges_at(n)) {
      Json je;
      je["from"] = Json::array({n - 1, g.labels(n - 1)[e.source]});
      je["to"] = Json::array({n, g.labels(n)[e.target]});
      je["m"] = e.multiplicity;
      edges.push_back(std::move(je));
    }
  }
  j["edges"] = std::move(edges);
  return j;
}

namespace detail {

// Shared by graph/flow/link parsing: levels, edges, and the edge objects in
// level order for attaching per-edge payloads.
struct ParsedGraph {
  GraphPtr graph;
  std::vector<std::vector<const Json*>> edge_objects;  // aligned with edges_at(n)
};

inline ParsedGraph parse_graph_common(const Json& j) {
  if (!j.is_object() || !j.contains("levels") || !j["levels"].is_array())
    fail(Errc::ParseError, "graph spec needs a \"levels\" array");
  std::vector<std::vector<std::string>> levels;
  for (const Json& lvl : j["levels"]) {
    if (!lvl.is_array()) fail(Errc::ParseError, "each level must be an array of labels");
    std::vector<std::string> labels;
    for (const Json& l : lvl) {
      if (!l.is_string()) fail(Errc::ParseError, "labels must be strings");
      labels.push_back(l.get<std::string>());
    }
    levels.push_back(std::move(labels));
  }
  if (levels.empty()) fail(Errc::ParseError, "graph needs at least level 0");

  std::vector<std::map<std::string, int, std::less<>>> index(levels.size());
  for (std::size_t n = 0; n < levels.size(); ++n)
    for (std::size_t i = 0; i < levels[n].size(); ++i)
      index[n].emplace(levels[n][i], static_cast<int>(i));

  std::vector<std::vector<Edge>> edges(levels.size());
  std::vector<std::vector<const Json*>> objects(levels.size());
  if (j.contains("edges")) {
    if (!j["edges"].is_array()) fail(Errc::ParseError, "\"edges\" must be an array");
    for (const Json& je : j["edges"]) {
      if (!je.is_object() || !je.contains("from") || !je.contains("to"))
        fail(Errc::ParseError, "edge needs \"from\" and \"to\": " + je.dump());
      auto endpoint = [&](const Json& v) -> std::pair<int, std::string> {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_string())
          fail(Errc::ParseError, "edge endpoint must be [level, \"label\"]: " + v.dump());
        return {v[0].get<int>(), v[1].get<std::string>()};
      };
      auto [fl, flab] = endpoint(je["from"]);
      auto [tl, tlab] = endpoint(je["to"]);
      if (tl != fl + 1)
        fail(Errc::ParseError, "edge must climb exactly one level: " + je.dump());
      if (tl <= 0 || tl >= static_cast<int>(levels.size()))
        fail(Errc::ParseError, "edge level out of range: " + je.dump());
      auto fit = index[fl].find(flab);
      auto tit = index[tl].find(tlab);
      if (fit == index[fl].end() || tit == index[tl].end())
        fail(Errc::ParseError, "edge endpoint names an unknown vertex: " + je.dump());
      long long m = 1;
      if (je.contains("m")) {
        if (!je["m"].is_number_integer() || je["m"].get<long long>() < 1)
          fail(Errc::ParseError, "multiplicity must be a positive integer: " + je.dump());
        m = je["m"].get<long long>();
      }
      edges[tl].push_back({fit->second, tit->second, m});
      objects[tl].push_back(&je);
    }
  }
  ParsedGraph out;
  out.graph = std::make_shared<const GradedGraph>(std::move(levels), std::move(edges));
  out.edge_objects = std::move(objects);
  return out;
}

}  // namespace detail

inline GraphPtr graph_from_json(const Json& j) { return detail::parse_graph_common(j).graph; }

// --------------------------------------------------------------------------
// Flows

template <class S>
Json flow_to_json(const FlowSpec<S>& f) {
  const GradedGraph& g = f.graph();
  Json j = graph_to_json(g);
  j["beta"] = f.beta();
  std::size_t idx = 0;
  for (int n = 1; n <= g.depth(); ++n) {
    for (std::size_t k = 0; k < g.edges_at(n).size(); ++k, ++idx) {
      const EdgeThermal<S>& t = f.thermal(n, static_cast<int>(k));
      Json& je = j["edges"][idx];
      if (t.has_spectrum()) {
        Json spec = Json::array();
        for (double l : t.eigenvalues()) spec.push_back(l);
        je["spectrum"] = std::move(spec);
        if (ScalarOps<S>::kExact && f.beta() != 0.0) {
          Json w = Json::array();
          for (const S& x : t.weights()) w.push_back(scalar_to_json<S>(x));
          je["weights"] = std::move(w);
        }
      } else {
        je["Z"] = ext_to_json<S>(t.partition());
      }
    }
  }
  return j;
}

template <class S>
FlowSpec<S> flow_from_json(const Json& j) {
  auto parsed = detail::parse_graph_common(j);
  const GradedGraph& g = *parsed.graph;
  if (!j.contains("beta") || !j["beta"].is_number())
    fail(Errc::ParseError, "flow spec needs a numeric \"beta\"");
  double beta = j["beta"].get<double>();

  std::vector<std::vector<EdgeThermal<S>>> thermal(g.depth() + 1);
  for (int n = 1; n <= g.depth(); ++n) {
    thermal[n].reserve(parsed.edge_objects[n].size());
    for (const Json* jep : parsed.edge_objects[n]) {
      const Json& je = *jep;
      if (je.contains("weights")) {
        if (!je["weights"].is_array() || je["weights"].empty())
          fail(Errc::ParseError, "\"weights\" must be a nonempty array: " + je.dump());
        std::vector<S> w;
        for (const Json& x : je["weights"]) w.push_back(scalar_from_json<S>(x));
        thermal[n].push_back(EdgeThermal<S>::from_weights(beta, std::move(w)));
      } else if (je.contains("spectrum")) {
        if (!je["spectrum"].is_array() || je["spectrum"].empty())
          fail(Errc::ParseError, "\"spectrum\" must be a nonempty array: " + je.dump());
        std::vector<double> ev;
        for (const Json& x : je["spectrum"]) {
          if (!x.is_number()) fail(Errc::ParseError, "eigenvalues must be numbers");
          ev.push_back(x.get<double>());
        }
        thermal[n].push_back(EdgeThermal<S>::from_spectrum(beta, std::move(ev)));
      } else if (je.contains("Z")) {
        thermal[n].push_back(EdgeThermal<S>::partition_only(ext_from_json<S>(je["Z"])));
      } else {
        fail(Errc::ParseError,
             "edge needs thermal data (\"spectrum\", \"weights\" or \"Z\"): " + je.dump());
      }
    }
  }
  return FlowSpec<S>(parsed.graph, beta, std::move(thermal));
}

// --------------------------------------------------------------------------
// Coherent systems and level measures

template <class S>
Json system_to_json(const CoherentSystem<S>& nu) {
  Json j = Json::object();
  for (int n = 0; n <= nu.depth(); ++n)
    for (std::size_t v = 0; v < nu.values[n].size(); ++v)
      j[vertex_key(*nu.graph, VertexRef{n, static_cast<int>(v)})] =
          scalar_to_json<S>(nu.values[n][v]);
  return j;
}

template <class S>
CoherentSystem<S> system_from_json(const Json& j, GraphPtr graph) {
  if (!j.is_object()) fail(Errc::ParseError, "coherent system must be a JSON object");
  const GradedGraph& g = *graph;
  int depth = -1;
  for (auto it = j.begin(); it != j.end(); ++it) {
    VertexRef v = vertex_from_key(g, it.key());
    depth = std::max(depth, v.level);
  }
  if (depth < 0) fail(Errc::ParseError, "coherent system is empty");
  CoherentSystem<S> nu;
  nu.graph = std::move(graph);
  nu.values.resize(depth + 1);
  for (int n = 0; n <= depth; ++n) nu.values[n].assign(g.level_size(n), ScalarOps<S>::zero());
  for (auto it = j.begin(); it != j.end(); ++it) {
    VertexRef v = vertex_from_key(g, it.key());
    nu.values[v.level][v.index] = scalar_from_json<S>(it.value());
  }
  return nu;
}

template <class S>
Json measure_to_json(const LevelMeasure<S>& mu, const GradedGraph& g) {
  Json j;
  j["level"] = mu.level;
  Json w = Json::object();
  for (std::size_t i = 0; i < mu.weights.size(); ++i)
    w[g.labels(mu.level)[i]] = scalar_to_json<S>(mu.weights[i]);
  j["weights"] = std::move(w);
  return j;
}

template <class S>
LevelMeasure<S> measure_from_json(const Json& j, const GradedGraph& g) {
  if (!j.is_object() || !j.contains("level") || !j["level"].is_number_integer() ||
      !j.contains("weights") || !j["weights"].is_object())
    fail(Errc::ParseError, "measure needs {\"level\": n, \"weights\": {label: value}}");
  LevelMeasure<S> mu;
  mu.level = j["level"].get<int>();
  if (mu.level < 0 || mu.level > g.depth())
    fail(Errc::LevelOutOfRange, "measure level " + std::to_string(mu.level));
  mu.weights.assign(g.level_size(mu.level), ScalarOps<S>::zero());
  for (auto it = j["weights"].begin(); it != j["weights"].end(); ++it) {
    auto idx = g.find(mu.level, it.key());
    if (!idx)
      fail(Errc::VertexNotFound,
           "measure names unknown vertex '" + it.key() + "' at level " +
               std::to_string(mu.level));
    mu.weights[*idx] = scalar_from_json<S>(it.value());
  }
  return mu;
}

// --------------------------------------------------------------------------
// Abstract links

template <class S>
Json link_spec_to_json(const AbstractLink<S>& k) {
  Json j = graph_to_json(*k.graph);
  std::size_t idx = 0;
  for (int n = 1; n <= k.graph->depth(); ++n)
    for (std::size_t e = 0; e < k.graph->edges_at(n).size(); ++e, ++idx)
      j["edges"][idx]["kappa"] = scalar_to_json<S>(k.weights[n][e]);
  return j;
}

template <class S>
AbstractLink<S> link_spec_from_json(const Json& j) {
  auto parsed = detail::parse_graph_common(j);
  AbstractLink<S> k;
  k.graph = parsed.graph;
  k.weights.resize(parsed.graph->depth() + 1);
  for (int n = 1; n <= parsed.graph->depth(); ++n) {
    k.weights[n].reserve(parsed.edge_objects[n].size());
    for (const Json* je : parsed.edge_objects[n]) {
      if (!je->contains("kappa"))
        fail(Errc::ParseError, "link edge needs \"kappa\": " + je->dump());
      k.weights[n].push_back(scalar_from_json<S>((*je)["kappa"]));
    }
  }
  return k;
}

// --------------------------------------------------------------------------
// Derived outputs

inline Json violations_to_json(const std::vector<Violation>& vs) {
  Json arr = Json::array();
  for (const Violation& v : vs) {
    Json j;
    j["kind"] = violation_name(v.kind);
    j["level"] = v.level;
    j["detail"] = v.detail;
    arr.push_back(std::move(j));
  }
  return arr;
}

template <class S>
Json partition_table_to_json(const FlowSpec<S>& f) {
  const GradedGraph& g = f.graph();
  Json j;
  j["beta"] = f.beta();
  Json vz = Json::object();
  for (int n = 0; n <= g.depth(); ++n)
    for (int v = 0; v < g.level_size(n); ++v)
      vz[vertex_key(g, VertexRef{n, v})] =
          ext_to_json<S>(f.partition_table().vertexZ[n][v]);
  j["vertexZ"] = std::move(vz);
  Json ez = Json::array();
  for (int n = 1; n <= g.depth(); ++n) {
    for (std::size_t k = 0; k < g.edges_at(n).size(); ++k) {
      const Edge& e = g.edges_at(n)[k];
      Json je;
      je["from"] = Json::array({n - 1, g.labels(n - 1)[e.source]});
      je["to"] = Json::array({n, g.labels(n)[e.target]});
      je["Z"] = ext_to_json<S>(f.edge_partition(n, static_cast<int>(k)));
      ez.push_back(std::move(je));
    }
  }
  j["edgeZ"] = std::move(ez);
  return j;
}

template <class S>
Json link_matrix_to_json(const LinkMatrix<S>& m, const GradedGraph& g) {
  Json j;
  j["upper"] = m.upper;
  j["lower"] = m.lower;
  j["columns"] = g.labels(m.lower);
  Json rows = Json::object();
  for (std::size_t u = 0; u < m.rows.size(); ++u) {
    Json row = Json::array();
    for (const S& v : m.rows[u]) row.push_back(scalar_to_json<S>(v));
    rows[vertex_key(g, VertexRef{m.upper, static_cast<int>(u)})] = std::move(row);
  }
  j["rows"] = std::move(rows);
  return j;
}

template <class S>
std::string link_matrix_to_csv(const LinkMatrix<S>& m, const GradedGraph& g) {
  std::ostringstream out;
  out << "vertex";
  for (const std::string& label : g.labels(m.lower)) out << "," << label;
  out << "\n";
  for (std::size_t u = 0; u < m.rows.size(); ++u) {
    out << vertex_key(g, VertexRef{m.upper, static_cast<int>(u)});
    for (const S& v : m.rows[u]) out << "," << ScalarOps<S>::str(v);
    out << "\n";
  }
  return out.str();
}

template <class S>
std::string ergodic_table_to_csv(const ErgodicTable<S>& t, const GradedGraph& g,
                                 const CoherentSystem<S>* nu_for_deviation) {
  std::ostringstream out;
  out << "m";
  for (const VertexRef& v : t.targets) out << "," << vertex_key(g, v);
  if (nu_for_deviation)
    for (const VertexRef& v : t.targets) out << ",dev " << vertex_key(g, v);
  out << "\n";
  for (std::size_t r = 0; r < t.values.size(); ++r) {
    out << t.levels[r];
    for (const S& v : t.values[r]) out << "," << ScalarOps<S>::str(v);
    if (nu_for_deviation) {
      for (std::size_t c = 0; c < t.targets.size(); ++c) {
        S dev = ScalarOps<S>::absval(t.values[r][c] - nu_for_deviation->at(t.targets[c]));
        out << "," << ScalarOps<S>::str(dev);
      }
    }
    out << "\n";
  }
  return out.str();
}

inline Json sampled_path_to_json(const SampledPath& p, const GradedGraph& g) {
  Json j;
  j["seed"] = p.seed;
  Json verts = Json::array();
  for (const VertexRef& v : p.vertices) verts.push_back(vertex_to_json(g, v));
  j["path"] = std::move(verts);
  return j;
}

inline std::vector<VertexRef> path_from_json(const Json& j, const GradedGraph& g) {
  if (!j.is_object() || !j.contains("path") || !j["path"].is_array())
    fail(Errc::ParseError, "path file needs {\"path\": [[level, \"label\"], ...]}");
  std::vector<VertexRef> out;
  for (const Json& v : j["path"]) out.push_back(vertex_from_json(g, v));
  return out;
}

// --------------------------------------------------------------------------
// Files

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoError, "cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(Errc::ParseError, "invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::IoError, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) fail(Errc::IoError, "failed writing '" + path + "'");
}

}  // namespace bratteli
