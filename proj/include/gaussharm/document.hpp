#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gaussharm/metric.hpp"

namespace gaussharm::io {

using json = nlohmann::json;

inline const std::vector<std::string>& known_tasks() {
  static const std::vector<std::string> tasks{
      "validate",          "classify_structure", "harmonicity_eq1", "harmonicity_tg",
      "harmonicity_biinv", "theorem2",           "witness",         "nilpotent_geodesic"};
  return tasks;
}

struct MetricSpec {
  enum class Kind { Identity, NegKilling, Explicit };
  Kind kind = Kind::Identity;
  Matrix g;  ///< only for Explicit

  friend bool operator==(const MetricSpec& a, const MetricSpec& b) {
    return a.kind == b.kind && (a.kind != Kind::Explicit || a.g == b.g);
  }
};

struct ImmersionSpec {
  Matrix tangent_frame;  ///< columns
  Matrix normal_frame;   ///< columns
  std::vector<Matrix> b; ///< b[alpha](i, k)
  std::optional<Matrix> dH;

  friend bool operator==(const ImmersionSpec& a, const ImmersionSpec& b) {
    return a.tangent_frame == b.tangent_frame && a.normal_frame == b.normal_frame && a.b == b.b &&
           a.dH == b.dH;
  }
};

/// Everything an analysis run needs: algebra, metric, optional geometric data, tasks.
struct AnalysisDocument {
  LieAlgebra algebra;
  MetricSpec metric;
  std::optional<Matrix> subspace;  ///< generators as columns
  std::optional<ImmersionSpec> immersion;
  std::vector<std::string> tasks;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
  std::optional<double> lambda;

  friend bool operator==(const AnalysisDocument& a, const AnalysisDocument& b) {
    return a.algebra.labels() == b.algebra.labels() &&
           a.algebra.entries() == b.algebra.entries() && a.metric == b.metric &&
           a.subspace == b.subspace && a.immersion == b.immersion && a.tasks == b.tasks &&
           a.tolerance == b.tolerance && a.seed == b.seed && a.lambda == b.lambda;
  }
};

/// The inner product a document's metric spec denotes.
inline InnerProduct resolve_metric(const LieAlgebra& alg, const MetricSpec& spec) {
  switch (spec.kind) {
    case MetricSpec::Kind::Identity: return InnerProduct::identity(alg.dim());
    case MetricSpec::Kind::NegKilling: return InnerProduct(-killing_form(alg));
    case MetricSpec::Kind::Explicit: return InnerProduct(spec.g);
  }
  throw Error(Errc::SchemaError, "unknown metric kind");
}

namespace detail {

inline void schema_fail(const std::string& path, const std::string& msg) {
  throw Error(Errc::SchemaError, path + ": " + msg);
}

inline void dimension_fail(const std::string& path, const std::string& msg) {
  throw Error(Errc::DimensionError, path + ": " + msg);
}

inline void reject_unknown_keys(const json& obj, const std::string& path,
                                std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) schema_fail(path + "." + key, "unknown key");
  }
}

inline double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) schema_fail(path, "expected a number");
  return j.get<double>();
}

inline Index as_index(const json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) schema_fail(path, "expected an integer");
  return j.get<Index>();
}

inline Vector as_vector(const json& j, const std::string& path, Index expect = -1) {
  if (!j.is_array()) schema_fail(path, "expected an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = as_number(j[i], path + "[" + std::to_string(i) + "]");
  if (expect >= 0 && v.size() != expect) {
    dimension_fail(path, "expected length " + std::to_string(expect) + ", got " + std::to_string(v.size()));
  }
  return v;
}

/// Rows of `j` as matrix rows.
inline Matrix as_rows(const json& j, const std::string& path, Index cols) {
  if (!j.is_array()) schema_fail(path, "expected an array of arrays");
  Matrix m(static_cast<Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    m.row(r) = as_vector(j[r], path + "[" + std::to_string(r) + "]", cols).transpose();
  }
  return m;
}

/// A list of vectors, returned as matrix columns.
inline Matrix as_columns(const json& j, const std::string& path, Index dim) {
  return as_rows(j, path, dim).transpose();
}

inline json rows_to_json(const Matrix& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

inline json columns_to_json(const Matrix& m) { return rows_to_json(m.transpose()); }

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline LieAlgebra parse_algebra(const json& j) {
  if (!j.is_object()) schema_fail("algebra", "expected an object");
  reject_unknown_keys(j, "algebra", {"dim", "labels", "brackets"});
  std::vector<std::string> labels;
  if (j.contains("labels")) {
    if (!j["labels"].is_array()) schema_fail("algebra.labels", "expected an array of strings");
    for (const auto& l : j["labels"]) {
      if (!l.is_string()) schema_fail("algebra.labels", "expected an array of strings");
      labels.push_back(l.get<std::string>());
    }
  }
  if (j.contains("dim")) {
    const Index d = as_index(j["dim"], "algebra.dim");
    if (d <= 0) schema_fail("algebra.dim", "must be positive");
    if (labels.empty()) {
      for (Index i = 0; i < d; ++i) labels.push_back("b" + std::to_string(i + 1));
    } else if (static_cast<Index>(labels.size()) != d) {
      dimension_fail("algebra.labels", "length differs from algebra.dim");
    }
  }
  if (labels.empty()) schema_fail("algebra", "needs 'dim' or 'labels'");
  const Index n = static_cast<Index>(labels.size());

  std::vector<BracketEntry> entries;
  if (j.contains("brackets")) {
    if (!j["brackets"].is_array()) schema_fail("algebra.brackets", "expected an array");
    for (std::size_t e = 0; e < j["brackets"].size(); ++e) {
      const std::string p = "algebra.brackets[" + std::to_string(e) + "]";
      const json& b = j["brackets"][e];
      if (!b.is_object()) schema_fail(p, "expected an object {i, j, k, c}");
      reject_unknown_keys(b, p, {"i", "j", "k", "c"});
      for (auto key : {"i", "j", "k", "c"}) {
        if (!b.contains(key)) schema_fail(p + "." + key, "missing");
      }
      BracketEntry be{as_index(b["i"], p + ".i"), as_index(b["j"], p + ".j"),
                      as_index(b["k"], p + ".k"), as_number(b["c"], p + ".c")};
      if (be.i >= be.j) schema_fail(p, "bracket entries need i < j");
      for (Index idx : {be.i, be.j, be.k}) {
        if (idx < 0 || idx >= n) dimension_fail(p, "index out of range");
      }
      entries.push_back(be);
    }
  }
  return LieAlgebra(std::move(labels), entries);
}

inline MetricSpec parse_metric(const json& j, Index n) {
  MetricSpec spec;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "identity") {
      spec.kind = MetricSpec::Kind::Identity;
    } else if (s == "neg_killing") {
      spec.kind = MetricSpec::Kind::NegKilling;
    } else {
      schema_fail("metric", "unknown keyword '" + s + "'");
    }
    return spec;
  }
  if (!j.is_object()) schema_fail("metric", "expected a keyword or an object");
  reject_unknown_keys(j, "metric", {"matrix", "diagonal"});
  spec.kind = MetricSpec::Kind::Explicit;
  if (j.contains("matrix") == j.contains("diagonal")) {
    schema_fail("metric", "give exactly one of 'matrix' or 'diagonal'");
  }
  if (j.contains("matrix")) {
    spec.g = as_rows(j["matrix"], "metric.matrix", n);
    if (spec.g.rows() != n) dimension_fail("metric.matrix", "expected " + std::to_string(n) + " rows");
  } else {
    spec.g = as_vector(j["diagonal"], "metric.diagonal", n).asDiagonal();
  }
  return spec;
}

inline ImmersionSpec parse_immersion(const json& j, Index dim) {
  if (!j.is_object()) schema_fail("immersion", "expected an object");
  reject_unknown_keys(j, "immersion", {"tangent_frame", "normal_frame", "b", "dH"});
  for (auto key : {"tangent_frame", "normal_frame", "b"}) {
    if (!j.contains(key)) schema_fail(std::string("immersion.") + key, "missing");
  }
  ImmersionSpec im;
  im.tangent_frame = as_columns(j["tangent_frame"], "immersion.tangent_frame", dim);
  im.normal_frame = as_columns(j["normal_frame"], "immersion.normal_frame", dim);
  const Index n = im.tangent_frame.cols(), q = im.normal_frame.cols();
  const json& b = j["b"];
  if (!b.is_array() || static_cast<Index>(b.size()) != n) {
    dimension_fail("immersion.b", "expected an n x n x q array with n = " + std::to_string(n));
  }
  im.b.assign(q, Matrix::Zero(n, n));
  for (Index i = 0; i < n; ++i) {
    const std::string pi = "immersion.b[" + std::to_string(i) + "]";
    if (!b[i].is_array() || static_cast<Index>(b[i].size()) != n) dimension_fail(pi, "expected n entries");
    for (Index k = 0; k < n; ++k) {
      const Vector v = as_vector(b[i][k], pi + "[" + std::to_string(k) + "]", q);
      for (Index a = 0; a < q; ++a) im.b[a](i, k) = v(a);
    }
  }
  if (j.contains("dH")) {
    Matrix dh = as_rows(j["dH"], "immersion.dH", q);
    if (dh.rows() != n) dimension_fail("immersion.dH", "expected n rows");
    im.dH = std::move(dh);
  }
  return im;
}

}  // namespace detail

/// Parse an analysis document (JSON). Throws Error with ParseError, SchemaError or DimensionError.
inline AnalysisDocument parse_document(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ", column " +
                                      std::to_string(col) + ": " + e.what());
  }
  if (!root.is_object()) detail::schema_fail("$", "document must be an object");
  detail::reject_unknown_keys(root, "$", {"algebra", "metric", "subspace", "immersion", "tasks",
                                          "tolerance", "seed", "lambda"});
  if (!root.contains("algebra")) detail::schema_fail("algebra", "missing");

  AnalysisDocument doc;
  doc.algebra = detail::parse_algebra(root["algebra"]);
  const Index n = doc.algebra.dim();
  if (root.contains("metric")) doc.metric = detail::parse_metric(root["metric"], n);
  try {
    (void)resolve_metric(doc.algebra, doc.metric);
  } catch (const Error& e) {
    detail::schema_fail("metric", e.what());
  }
  if (root.contains("subspace")) doc.subspace = detail::as_columns(root["subspace"], "subspace", n);
  if (root.contains("immersion")) doc.immersion = detail::parse_immersion(root["immersion"], n);
  if (root.contains("tasks")) {
    if (!root["tasks"].is_array()) detail::schema_fail("tasks", "expected an array of task names");
    for (const auto& t : root["tasks"]) {
      if (!t.is_string()) detail::schema_fail("tasks", "expected an array of task names");
      const auto name = t.get<std::string>();
      const auto& known = known_tasks();
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        detail::schema_fail("tasks", "unknown task '" + name + "'");
      }
      doc.tasks.push_back(name);
    }
  }
  if (root.contains("tolerance")) {
    doc.tolerance = detail::as_number(root["tolerance"], "tolerance");
    if (!(*doc.tolerance > 0.0)) detail::schema_fail("tolerance", "must be positive");
  }
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) detail::schema_fail("seed", "expected a non-negative integer");
    doc.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("lambda")) {
    doc.lambda = detail::as_number(root["lambda"], "lambda");
    if (*doc.lambda == 0.0) detail::schema_fail("lambda", "must be nonzero");
  }
  return doc;
}

/// Inverse of parse_document.
inline json emit_document(const AnalysisDocument& doc) {
  json root;
  json alg;
  alg["dim"] = doc.algebra.dim();
  alg["labels"] = doc.algebra.labels();
  alg["brackets"] = json::array();
  for (const auto& e : doc.algebra.entries()) {
    alg["brackets"].push_back({{"i", e.i}, {"j", e.j}, {"k", e.k}, {"c", e.c}});
  }
  root["algebra"] = std::move(alg);
  switch (doc.metric.kind) {
    case MetricSpec::Kind::Identity: root["metric"] = "identity"; break;
    case MetricSpec::Kind::NegKilling: root["metric"] = "neg_killing"; break;
    case MetricSpec::Kind::Explicit: root["metric"] = {{"matrix", detail::rows_to_json(doc.metric.g)}}; break;
  }
  if (doc.subspace) root["subspace"] = detail::columns_to_json(*doc.subspace);
  if (doc.immersion) {
    const auto& im = *doc.immersion;
    json j;
    j["tangent_frame"] = detail::columns_to_json(im.tangent_frame);
    j["normal_frame"] = detail::columns_to_json(im.normal_frame);
    const Index n = im.tangent_frame.cols(), q = im.normal_frame.cols();
    json b = json::array();
    for (Index i = 0; i < n; ++i) {
      json row = json::array();
      for (Index k = 0; k < n; ++k) {
        json cell = json::array();
        for (Index a = 0; a < q; ++a) cell.push_back(im.b[a](i, k));
        row.push_back(std::move(cell));
      }
      b.push_back(std::move(row));
    }
    j["b"] = std::move(b);
    if (im.dH) j["dH"] = detail::rows_to_json(*im.dH);
    root["immersion"] = std::move(j);
  }
  root["tasks"] = doc.tasks;
  if (doc.tolerance) root["tolerance"] = *doc.tolerance;
  if (doc.seed) root["seed"] = *doc.seed;
  if (doc.lambda) root["lambda"] = *doc.lambda;
  return root;
}

// ---------------------------------------------------------------------------
// Builtin catalog

namespace detail {

inline std::vector<std::string> labels_of(std::initializer_list<const char*> names) {
  return {names.begin(), names.end()};
}

/// [e_1,e_2] = e_3 and cyclic, on indices offset..offset+2.
inline void add_so3(std::vector<BracketEntry>& out, Index offset) {
  out.push_back({offset + 0, offset + 1, offset + 2, 1.0});
  out.push_back({offset + 1, offset + 2, offset + 0, 1.0});
  out.push_back({offset + 0, offset + 2, offset + 1, -1.0});
}

inline double param_number(const std::map<std::string, std::string>& params, const std::string& key,
                           double fallback) {
  auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    schema_fail("param " + key, "not a number: '" + it->second + "'");
  }
  return fallback;
}

/// "1,0,1;0,1,0" -> columns.
inline Matrix param_vectors(const std::string& text, Index dim) {
  std::vector<Vector> cols;
  std::stringstream outer(text);
  std::string vec;
  while (std::getline(outer, vec, ';')) {
    std::vector<double> vals;
    std::stringstream inner(vec);
    std::string num;
    while (std::getline(inner, num, ',')) {
      try {
        vals.push_back(std::stod(num));
      } catch (const std::exception&) {
        schema_fail("param subspace", "not a number: '" + num + "'");
      }
    }
    if (static_cast<Index>(vals.size()) != dim) {
      dimension_fail("param subspace", "vector needs " + std::to_string(dim) + " entries");
    }
    cols.push_back(Eigen::Map<Vector>(vals.data(), dim));
  }
  Matrix m(dim, static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) m.col(c) = cols[c];
  return m;
}

}  // namespace detail

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"so3",        "so3xso3",  "heisenberg3", "heisenberg5",
                                              "euclidean",  "so3_plus_R", "j_singular3"};
  return names;
}

/// Catalog document by name. Recognised params: `a` (so3xso3), `n` (euclidean),
/// `subspace` (any; vectors separated by ';', entries by ',').
inline AnalysisDocument builtin(const std::string& name,
                                const std::map<std::string, std::string>& params = {}) {
  AnalysisDocument doc;
  std::vector<BracketEntry> br;
  std::set<std::string> allowed{"subspace"};
  std::vector<std::string> base_tasks{"validate", "classify_structure"};
  bool nilpotent = false;

  if (name == "so3") {
    detail::add_so3(br, 0);
    doc.algebra = LieAlgebra(detail::labels_of({"e1", "e2", "e3"}), br);
  } else if (name == "so3xso3") {
    allowed.insert("a");
    const double a = detail::param_number(params, "a", 2.0);
    if (!(a > 0.0)) detail::schema_fail("param a", "must be positive");
    detail::add_so3(br, 0);
    detail::add_so3(br, 3);
    doc.algebra = LieAlgebra(detail::labels_of({"e1", "e2", "e3", "f1", "f2", "f3"}), br);
    doc.metric.kind = MetricSpec::Kind::Explicit;
    Vector diag(6);
    diag << 1, 1, 1, a * a, a * a, a * a;
    doc.metric.g = diag.asDiagonal();
    Matrix w(6, 3);
    // e1 + f1, e2 - f2, e3 + f3
    w << 1, 0, 0,
         0, 1, 0,
         0, 0, 1,
         1, 0, 0,
         0, -1, 0,
         0, 0, 1;
    doc.subspace = w;
    base_tasks = {"validate", "harmonicity_biinv", "theorem2"};
  } else if (name == "heisenberg3") {
    br.push_back({0, 1, 2, 1.0});
    doc.algebra = LieAlgebra(detail::labels_of({"X1", "X2", "Z"}), br);
    nilpotent = true;
  } else if (name == "heisenberg5") {
    br.push_back({0, 1, 4, 1.0});
    br.push_back({2, 3, 4, 1.0});
    doc.algebra = LieAlgebra(detail::labels_of({"X1", "X2", "X3", "X4", "Z"}), br);
    nilpotent = true;
  } else if (name == "euclidean") {
    allowed.insert("n");
    const double nn = detail::param_number(params, "n", 3.0);
    if (nn < 1 || nn != std::floor(nn)) detail::schema_fail("param n", "must be a positive integer");
    doc.algebra = LieAlgebra::abelian(static_cast<Index>(nn));
  } else if (name == "so3_plus_R") {
    detail::add_so3(br, 0);
    doc.algebra = LieAlgebra(detail::labels_of({"e1", "e2", "e3", "t"}), br);
  } else if (name == "j_singular3") {
    br.push_back({0, 1, 3, 1.0});
    br.push_back({0, 2, 4, 1.0});
    doc.algebra = LieAlgebra(detail::labels_of({"X1", "X2", "X3", "Z1", "Z2"}), br);
    nilpotent = true;
  } else {
    throw Error(Errc::UnknownBuiltin, "no builtin named '" + name + "'");
  }

  for (const auto& [key, _] : params) {
    if (!allowed.count(key)) detail::schema_fail("param " + key, "not accepted by builtin " + name);
  }
  if (auto it = params.find("subspace"); it != params.end()) {
    doc.subspace = detail::param_vectors(it->second, doc.algebra.dim());
    if (nilpotent && doc.subspace->cols() == 1) {
      base_tasks.push_back("harmonicity_tg");
      base_tasks.push_back("nilpotent_geodesic");
    }
  }
  doc.tasks = std::move(base_tasks);
  return doc;
}

}  // namespace gaussharm::io
