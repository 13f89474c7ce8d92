#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "umt/cantor.hpp"
#include "umt/deform.hpp"
#include "umt/distort.hpp"
#include "umt/embed.hpp"
#include "umt/errors.hpp"
#include "umt/exact.hpp"
#include "umt/metric_space.hpp"
#include "umt/props.hpp"
#include "umt/ultrametrize.hpp"

namespace umt {

using Json = nlohmann::json;

namespace detail {

inline const Json& field(const Json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw ParseError(std::string("missing field \"") + name + "\"");
  return *it;
}

inline double number(const Json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  return j.get<double>();
}

inline std::size_t unsigned_field(const Json& j, const char* what) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_number_integer()) {
    long long v = j.get<long long>();
    if (v >= 0) return static_cast<std::size_t>(v);
  }
  throw ParseError(std::string(what) + " must be a nonnegative integer");
}

}  // namespace detail

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open \"" + path + "\"");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ParseError("bad JSON in \"" + path + "\": " + e.what());
  }
  return j;
}

// {"labels": [...], "dist": [[...], ...], "infinity"?: label, "quasi"?: bool}
// Unless the space is marked quasi, the triangle inequality is re-verified.
inline ExtendedSpace space_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("space must be an object");
  const Json& jl = detail::field(j, "labels");
  const Json& jd = detail::field(j, "dist");
  if (!jl.is_array() || !jd.is_array())
    throw ParseError("labels and dist must be arrays");
  std::vector<std::string> labels;
  labels.reserve(jl.size());
  for (const auto& v : jl) {
    if (!v.is_string()) throw ParseError("labels must be strings");
    labels.push_back(v.get<std::string>());
  }
  std::size_t n = labels.size();
  if (jd.size() != n) throw ParseError("dist must have one row per label");
  std::vector<std::vector<double>> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Json& row = jd[i];
    if (!row.is_array() || row.size() != n)
      throw ParseError("dist rows must have one entry per label");
    m[i].reserve(n);
    for (const auto& v : row) {
      if (!v.is_number()) throw ParseError("distances must be numbers");
      m[i].push_back(v.get<double>());
    }
  }
  bool quasi = false;
  if (auto it = j.find("quasi"); it != j.end()) {
    if (!it->is_boolean()) throw ParseError("quasi must be a boolean");
    quasi = it->get<bool>();
  }
  FiniteMetricSpace space =
      quasi ? FiniteMetricSpace::checked(std::move(labels), flatten_matrix(m), false)
            : make_space(m, std::move(labels));
  std::optional<std::size_t> infinity;
  if (auto it = j.find("infinity"); it != j.end()) {
    if (!it->is_string()) throw ParseError("infinity must be a label");
    auto idx = space.find_label(it->get<std::string>());
    if (!idx) throw ParseError("infinity label not found");
    infinity = *idx;
  }
  return ExtendedSpace{std::move(space), infinity};
}

inline Json space_to_json(const FiniteMetricSpace& s) {
  Json j;
  j["labels"] = s.labels();
  Json rows = Json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    Json row = Json::array();
    for (std::size_t c = 0; c < s.size(); ++c) row.push_back(s.dist(i, c));
    rows.push_back(std::move(row));
  }
  j["dist"] = std::move(rows);
  if (!s.is_metric()) j["quasi"] = true;
  return j;
}

inline Json space_to_json(const ExtendedSpace& e) {
  Json j = space_to_json(e.space);
  if (e.infinity) j["infinity"] = e.space.labels()[*e.infinity];
  return j;
}

// {"k": 2, "lambda": "1/3", "depth": 4, "points": ["0101", ...], "base": "0000"}
inline Json cantor_to_json(const CantorSpace& c) {
  Json j;
  j["k"] = c.k;
  j["lambda"] = rational_to_string(c.lambda);
  j["depth"] = c.depth;
  Json pts = Json::array();
  for (const auto& w : c.points) pts.push_back(word_to_string(w));
  j["points"] = std::move(pts);
  j["base"] = word_to_string(c.base);
  return j;
}

inline CantorSpace cantor_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("word space must be an object");
  CantorSpace c;
  c.k = static_cast<unsigned>(detail::unsigned_field(detail::field(j, "k"), "k"));
  const Json& jlam = detail::field(j, "lambda");
  if (!jlam.is_string()) throw ParseError("lambda must be a rational string like \"1/3\"");
  c.lambda = parse_rational(jlam.get<std::string>());
  c.depth = detail::unsigned_field(detail::field(j, "depth"), "depth");
  const Json& jp = detail::field(j, "points");
  if (!jp.is_array()) throw ParseError("points must be an array of word strings");
  c.points.reserve(jp.size());
  for (const auto& v : jp) {
    if (!v.is_string()) throw ParseError("points must be word strings");
    c.points.push_back(word_from_string(v.get<std::string>()));
  }
  const Json& jb = detail::field(j, "base");
  if (!jb.is_string()) throw ParseError("base must be a word string");
  c.base = word_from_string(jb.get<std::string>());
  c.validate();
  return c;
}

// Nested merge tree: internal nodes {"height": h, "children": [node, ...]},
// leaves {"height": 0.0, "leaf": label}.
inline Json dendrogram_to_json(const Dendrogram& d) {
  std::function<Json(std::size_t)> conv = [&](std::size_t id) -> Json {
    const auto& node = d.nodes[id];
    Json j;
    j["height"] = node.height;
    if (node.leaf) {
      j["leaf"] = d.labels[*node.leaf];
      return j;
    }
    Json ch = Json::array();
    for (std::size_t c : node.children) ch.push_back(conv(c));
    j["children"] = std::move(ch);
    return j;
  };
  return conv(d.root);
}

// Leaf indices are assigned in depth-first order of appearance.
inline Dendrogram dendrogram_from_json(const Json& j) {
  Dendrogram d;
  std::function<std::size_t(const Json&)> build = [&](const Json& nj) -> std::size_t {
    if (!nj.is_object()) throw ParseError("dendrogram node must be an object");
    Dendrogram::Node node;
    if (auto it = nj.find("leaf"); it != nj.end()) {
      if (!it->is_string()) throw ParseError("leaf must be a label string");
      node.leaf = d.labels.size();
      d.labels.push_back(it->get<std::string>());
      d.nodes.push_back(std::move(node));
      return d.nodes.size() - 1;
    }
    node.height = detail::number(detail::field(nj, "height"), "height");
    const Json& ch = detail::field(nj, "children");
    if (!ch.is_array() || ch.size() < 2)
      throw ParseError("internal node needs at least 2 children");
    for (const auto& c : ch) node.children.push_back(build(c));
    d.nodes.push_back(std::move(node));
    return d.nodes.size() - 1;
  };
  d.root = build(j);
  for (std::size_t a = 0; a < d.labels.size(); ++a)
    for (std::size_t b = a + 1; b < d.labels.size(); ++b)
      if (d.labels[a] == d.labels[b]) throw ParseError("leaf label appears twice");
  return d;
}

// {"source": space-or-path, "target": space-or-path,
//  "assignment": {"srcLabel": "dstLabel", ...}};
// relative paths resolve against base_dir.
inline ExtendedSpace space_ref_from_json(const Json& j, const std::string& base_dir) {
  if (j.is_string()) {
    std::filesystem::path p(j.get<std::string>());
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    return space_from_json(load_json_file(p.string()));
  }
  return space_from_json(j);
}

inline PointMap map_from_json(const Json& j, const std::string& base_dir = {}) {
  if (!j.is_object()) throw ParseError("map must be an object");
  PointMap m;
  m.source = space_ref_from_json(detail::field(j, "source"), base_dir);
  m.target = space_ref_from_json(detail::field(j, "target"), base_dir);
  const Json& ja = detail::field(j, "assignment");
  if (!ja.is_object()) throw ParseError("assignment must map source labels to target labels");
  m.assignment.assign(m.source.space.size(), m.target.space.size());
  for (const auto& [src, dst] : ja.items()) {
    auto si = m.source.space.find_label(src);
    if (!si) throw ParseError("assignment source label \"" + src + "\" not in source space");
    if (!dst.is_string()) throw ParseError("assignment values must be target labels");
    auto ti = m.target.space.find_label(dst.get<std::string>());
    if (!ti) throw ParseError("assignment target label \"" + dst.get<std::string>() +
                              "\" not in target space");
    m.assignment[*si] = *ti;
  }
  for (std::size_t i = 0; i < m.assignment.size(); ++i)
    if (m.assignment[i] == m.target.space.size())
      throw ParseError("assignment missing source label \"" + m.source.space.label(i) + "\"");
  m.validate();
  return m;
}

inline Json map_to_json(const PointMap& m) {
  Json j;
  j["source"] = space_to_json(m.source);
  j["target"] = space_to_json(m.target);
  Json as = Json::object();
  for (std::size_t i = 0; i < m.assignment.size(); ++i)
    as[m.source.space.label(i)] = m.target.space.label(m.assignment[i]);
  j["assignment"] = std::move(as);
  return j;
}

inline Json triple_to_json(const TripleWitness& t) {
  return Json{{"x", t.x}, {"y", t.y}, {"z", t.z}};
}

inline Json quad_to_json(const QuadWitness& q) {
  return Json{{"x", q.x}, {"y", q.y}, {"z", q.z}, {"w", q.w}};
}

inline Json pair_to_json(const PairWitness& p) { return Json{{"a", p.a}, {"b", p.b}}; }

inline Json ultrametric_to_json(const UltrametricityResult& r) {
  Json j{{"is_ultrametric", r.is_ultrametric}, {"max_ratio", r.max_ratio}};
  if (r.witness) j["witness"] = triple_to_json(*r.witness);
  return j;
}

inline Json doubling_to_json(const DoublingResult& r) {
  return Json{{"N", r.N},
              {"method", r.method == CoverMode::Exact ? "exact" : "greedy"},
              {"center", r.center},
              {"radius", r.radius}};
}

inline Json perfectness_to_json(const PerfectnessResult& r) {
  return Json{{"C", r.C}, {"center", r.center}, {"radius", r.radius}, {"vacuous", r.vacuous}};
}

inline Json chain_to_json(const ChainResult& r) {
  return Json{{"modulus", r.modulus}, {"chain", r.chain}};
}

inline Json report_to_json(const PropertyReport& r) {
  Json j;
  j["ultrametric"] = ultrametric_to_json(r.ultrametric);
  j["doubling"] = doubling_to_json(r.doubling);
  j["perfectness"] = perfectness_to_json(r.perfectness);
  j["chain"] = chain_to_json(r.chain);
  return j;
}

inline Json bilip_to_json(const BilipschitzResult& r) {
  return Json{{"L", r.L}, {"worst", pair_to_json(r.worst)}};
}

namespace detail {

inline Json steps_to_json(const std::vector<StepPoint>& v) {
  Json a = Json::array();
  for (const auto& p : v) a.push_back(Json{{"in", p.in_ratio}, {"out", p.out_ratio}});
  return a;
}

}  // namespace detail

inline Json qs_to_json(const QsResult& r) {
  Json q{{"H", r.H}, {"worst", triple_to_json(r.worst)}};
  q["envelope"] = detail::steps_to_json(r.envelope);
  if (!r.steps.empty()) q["steps"] = detail::steps_to_json(r.steps);
  return q;
}

inline Json qm_to_json(const QmResult& r) {
  Json q{{"K", r.K},
         {"worst", quad_to_json(r.worst)},
         {"lower_bound_only", r.lower_bound_only}};
  q["envelope"] = detail::steps_to_json(r.envelope);
  if (!r.steps.empty()) q["steps"] = detail::steps_to_json(r.steps);
  return q;
}

inline Json mobius_to_json(const MobiusResult& r) {
  return Json{{"is_moebius", r.mobius},
              {"max_rel_dev", r.max_rel_dev},
              {"worst", quad_to_json(r.worst)}};
}

inline Json distortion_to_json(const DistortionReport& r) {
  Json j;
  if (r.bilip) j["bilipschitz"] = bilip_to_json(*r.bilip);
  if (r.qs) j["quasisymmetry"] = qs_to_json(*r.qs);
  if (r.qm) j["quasimoebius"] = qm_to_json(*r.qm);
  if (r.mobius) j["moebius"] = mobius_to_json(*r.mobius);
  return j;
}

inline Json embedding_to_json(const EmbeddingResult& r) {
  Json j;
  j["target"] = cantor_to_json(r.target);
  Json as = Json::array();
  for (const auto& w : r.assignment) as.push_back(word_to_string(w));
  j["assignment"] = std::move(as);
  j["target_metric"] = space_to_json(r.target_metric);
  j["report"] = distortion_to_json(r.report);
  Json sc = Json::array();
  for (const auto& [stage, value] : r.stage_constants)
    sc.push_back(Json{{"stage", stage}, {"value", value}});
  j["stage_constants"] = std::move(sc);
  if (r.input_properties) j["input_properties"] = report_to_json(*r.input_properties);
  return j;
}

inline Json counterexample_to_json(const SphericalizationCounterexample& c) {
  Json j;
  j["space"] = space_to_json(c.space);
  j["center"] = c.center;
  j["deformed"] = space_to_json(c.deformed);
  j["witness"] = Json{{"triple", triple_to_json(c.witness.triple)},
                      {"lhs", c.witness.lhs},
                      {"rhs", c.witness.rhs}};
  j["margin"] = c.margin;
  return j;
}

inline Json error_to_json(const Error& e) {
  return Json{{"error", e.type()}, {"message", e.what()}};
}

}  // namespace umt
