#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "json.hpp"

#include "fqr/atlas.hpp"
#include "fqr/error.hpp"
#include "fqr/field.hpp"
#include "fqr/framed_rep.hpp"
#include "fqr/matrix.hpp"
#include "fqr/normal_form.hpp"
#include "fqr/quiver.hpp"
#include "fqr/skeleton.hpp"

namespace fqr::io {

using json = nlohmann::json;

// Documents use sorted keys (nlohmann's default object map) and scalars as
// reduced strings, so emit(parse(x)) is byte-stable.

namespace detail {

inline const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::SchemaError, where + ": missing \"" + key + "\"");
  return j.at(key);
}

inline int require_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw Error(ErrorCode::SchemaError, where + ": expected an integer");
  return j.get<int>();
}

}  // namespace detail

inline AnyField parse_field(const json& j) {
  const std::string type = detail::require(j, "type", "field").get<std::string>();
  if (type == "rational") return RationalField{};
  if (type == "prime") {
    const auto& p = detail::require(j, "p", "field");
    if (!p.is_number_integer() || p.get<long long>() <= 0) throw Error(ErrorCode::SchemaError, "field.p must be a positive integer");
    return PrimeField(p.get<std::uint64_t>());
  }
  throw Error(ErrorCode::SchemaError, "field.type must be \"rational\" or \"prime\"");
}

inline json emit_field(const RationalField&) { return {{"type", "rational"}}; }
inline json emit_field(const PrimeField& f) { return {{"type", "prime"}, {"p", f.characteristic()}}; }
inline json emit_field(const AnyField& f) {
  return std::visit([](const auto& x) { return emit_field(x); }, f);
}

inline Quiver parse_quiver(const json& j) {
  const int n = detail::require_int(detail::require(j, "vertices", "quiver"), "quiver.vertices");
  const auto& arrows = detail::require(j, "arrows", "quiver");
  if (!arrows.is_array()) throw Error(ErrorCode::SchemaError, "quiver.arrows must be an array");
  std::vector<Arrow> list;
  for (const auto& a : arrows) {
    const auto& name = detail::require(a, "name", "arrow");
    if (!name.is_string()) throw Error(ErrorCode::SchemaError, "arrow.name must be a string");
    list.push_back({name.get<std::string>(), detail::require_int(detail::require(a, "tail", "arrow"), "arrow.tail"),
                    detail::require_int(detail::require(a, "head", "arrow"), "arrow.head")});
  }
  return Quiver(n, std::move(list));
}

inline json emit_quiver(const Quiver& q) {
  json arrows = json::array();
  for (const auto& a : q.arrows()) arrows.push_back({{"name", a.name}, {"tail", a.tail}, {"head", a.head}});
  return {{"vertices", q.vertex_count()}, {"arrows", arrows}};
}

inline std::vector<int> parse_counts(const json& j, const std::string& where) {
  if (!j.is_array()) throw Error(ErrorCode::SchemaError, where + " must be an array");
  std::vector<int> out;
  for (const auto& x : j) out.push_back(detail::require_int(x, where));
  return out;
}

/// A quiver plus shape, optionally with a field: the input of shape-level commands.
struct ShapeDocument {
  std::optional<AnyField> field;
  Quiver quiver;
  FramedShape shape;
};

inline ShapeDocument parse_shape_document(const json& j) {
  ShapeDocument doc;
  if (j.contains("field")) doc.field = parse_field(j.at("field"));
  doc.quiver = parse_quiver(detail::require(j, "quiver", "document"));
  doc.shape.alpha = parse_counts(detail::require(j, "alpha", "document"), "alpha");
  doc.shape.zeta = parse_counts(detail::require(j, "zeta", "document"), "zeta");
  check_shape(doc.quiver, doc.shape);
  return doc;
}

inline json emit_shape_document(const ShapeDocument& doc) {
  json j = {{"quiver", emit_quiver(doc.quiver)}, {"alpha", doc.shape.alpha}, {"zeta", doc.shape.zeta}};
  if (doc.field) j["field"] = emit_field(*doc.field);
  return j;
}

template <ExactField F>
Matrix<F> parse_matrix(const F& field, const json& j, std::size_t rows, std::size_t cols, const std::string& where) {
  if (!j.is_array() || j.size() != rows) {
    throw Error(ErrorCode::SchemaError, where + ": expected " + std::to_string(rows) + " rows");
  }
  Matrix<F> m(field, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const auto& row = j[r];
    if (!row.is_array() || row.size() != cols) {
      throw Error(ErrorCode::SchemaError, where + ": row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!row[c].is_string()) throw Error(ErrorCode::SchemaError, where + ": scalars must be strings");
      m(r, c) = field.parse(row[c].get<std::string>());
    }
  }
  return m;
}

template <ExactField F>
json emit_matrix(const Matrix<F>& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.field().format(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

template <ExactField F>
FramedRep<F> parse_rep(const F& field, const json& j) {
  auto doc = parse_shape_document(j);
  auto rep = FramedRep<F>::zero(field, doc.quiver, doc.shape);
  const json empty = json::object();
  const json& arrows = j.contains("arrows") ? j.at("arrows") : empty;
  const json& framing = j.contains("framing") ? j.at("framing") : empty;
  if (!arrows.is_object() || !framing.is_object()) throw Error(ErrorCode::SchemaError, "arrows and framing must be objects");
  for (auto it = arrows.begin(); it != arrows.end(); ++it) {
    if (!doc.quiver.find_arrow(it.key())) throw Error(ErrorCode::SchemaError, "matrix for unknown arrow '" + it.key() + "'");
  }
  for (auto it = framing.begin(); it != framing.end(); ++it) {
    bool known = false;
    for (int i = 1; i <= doc.quiver.vertex_count(); ++i) known |= it.key() == std::to_string(i);
    if (!known) throw Error(ErrorCode::SchemaError, "framing for unknown vertex '" + it.key() + "'");
  }
  for (std::size_t k = 0; k < doc.quiver.arrows().size(); ++k) {
    const Arrow& a = doc.quiver.arrow(k);
    auto& m = rep.arrow_maps[k];
    if (arrows.contains(a.name)) {
      m = parse_matrix(field, arrows.at(a.name), m.rows(), m.cols(), "arrow '" + a.name + "'");
    } else if (!m.empty()) {
      throw Error(ErrorCode::SchemaError, "missing matrix for arrow '" + a.name + "'");
    }
  }
  for (int i = 1; i <= doc.quiver.vertex_count(); ++i) {
    auto& m = rep.framing_at(i);
    const std::string key = std::to_string(i);
    if (framing.contains(key)) {
      m = parse_matrix(field, framing.at(key), m.rows(), m.cols(), "framing at vertex " + key);
    } else if (!m.empty()) {
      throw Error(ErrorCode::SchemaError, "missing framing for vertex " + key);
    }
  }
  rep.validate();
  return rep;
}

template <ExactField F>
json emit_rep(const FramedRep<F>& rep) {
  json arrows = json::object();
  for (std::size_t k = 0; k < rep.arrow_maps.size(); ++k) arrows[rep.quiver.arrow(k).name] = emit_matrix(rep.arrow_maps[k]);
  json framing = json::object();
  for (int i = 1; i <= rep.quiver.vertex_count(); ++i) framing[std::to_string(i)] = emit_matrix(rep.framing_at(i));
  return {{"field", emit_field(rep.field)}, {"quiver", emit_quiver(rep.quiver)}, {"alpha", rep.shape.alpha},
          {"zeta", rep.shape.zeta}, {"arrows", arrows}, {"framing", framing}};
}

using AnyRep = std::variant<FramedRep<RationalField>, FramedRep<PrimeField>>;

inline AnyRep parse_any_rep(const json& j) {
  AnyField field = parse_field(detail::require(j, "field", "representation"));
  return std::visit([&](const auto& f) -> AnyRep { return parse_rep(f, j); }, field);
}

inline json emit_skeleton(const Quiver& q, const Skeleton& s) { return {{"paths", format_skeleton(q, s)}}; }

inline Skeleton parse_skeleton_json(const Quiver& q, const FramedShape& shape, const json& j) {
  const json& paths = j.is_array() ? j : detail::require(j, "paths", "skeleton");
  if (!paths.is_array()) throw Error(ErrorCode::SchemaError, "skeleton paths must be an array");
  std::vector<std::string> labels;
  for (const auto& p : paths) {
    if (!p.is_string()) throw Error(ErrorCode::SchemaError, "skeleton paths must be strings");
    labels.push_back(p.get<std::string>());
  }
  return parse_skeleton(q, shape, labels);
}

/// Comma-separated path labels, as given on the command line.
inline Skeleton parse_skeleton_list(const Quiver& q, const FramedShape& shape, const std::string& list) {
  std::vector<std::string> labels;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    auto comma = list.find(',', pos);
    auto part = list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!part.empty()) labels.push_back(part);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return parse_skeleton(q, shape, labels);
}

template <ExactField F>
json emit_chart_point(const Quiver& q, const ChartPoint<F>& c) {
  json coords = json::object();
  for (std::size_t i = 0; i < c.row_labels.size(); ++i) {
    json rows = json::object();
    for (std::size_t r = 0; r < c.row_labels[i].size(); ++r) {
      json row = json::array();
      for (std::size_t col = 0; col < c.coords[i].cols(); ++col) row.push_back(c.coords[i].field().format(c.coords[i](r, col)));
      rows[format_path(q, c.row_labels[i][r])] = std::move(row);
    }
    coords[std::to_string(i + 1)] = std::move(rows);
  }
  return {{"skeleton", format_skeleton(q, c.skeleton)}, {"coords", coords}};
}

/// Rows are matched by path label; every chart row must be present exactly once.
template <ExactField F>
ChartPoint<F> parse_chart_point(const F& field, const Quiver& q, const FramedShape& shape, const json& j,
                                const std::optional<Skeleton>& expected = std::nullopt) {
  Skeleton s = parse_skeleton_json(q, shape, detail::require(j, "skeleton", "chart point"));
  if (expected && !(s == *expected)) throw Error(ErrorCode::IndexMismatch, "chart point belongs to a different skeleton");
  auto labels = chart_row_labels(q, s);
  const auto& coords = detail::require(j, "coords", "chart point");
  if (!coords.is_object()) throw Error(ErrorCode::SchemaError, "coords must be an object");
  std::vector<Matrix<F>> blocks;
  for (int i = 1; i <= q.vertex_count(); ++i) {
    const auto& lab = labels[static_cast<std::size_t>(i - 1)];
    const auto width = static_cast<std::size_t>(shape.dim(i));
    Matrix<F> block(field, lab.size(), width);
    const std::string key = std::to_string(i);
    if (!coords.contains(key)) {
      if (!lab.empty()) throw Error(ErrorCode::IndexMismatch, "coords missing vertex " + key);
      blocks.push_back(std::move(block));
      continue;
    }
    const auto& rows = coords.at(key);
    if (!rows.is_object() || rows.size() != lab.size()) {
      throw Error(ErrorCode::IndexMismatch, "coords at vertex " + key + " must have " + std::to_string(lab.size()) + " rows");
    }
    for (auto it = rows.begin(); it != rows.end(); ++it) {
      FramedPath p = parse_path(q, shape, it.key());
      auto pos = std::lower_bound(lab.begin(), lab.end(), p);
      if (pos == lab.end() || !(*pos == p)) throw Error(ErrorCode::IndexMismatch, "'" + it.key() + "' is not a chart row");
      json wrapped = json::array({it.value()});
      auto row = parse_matrix(field, wrapped, 1, width, "coords row '" + it.key() + "'");
      std::copy(row.row(0).begin(), row.row(0).end(), block.row(static_cast<std::size_t>(pos - lab.begin())).begin());
    }
    blocks.push_back(std::move(block));
  }
  for (auto it = coords.begin(); it != coords.end(); ++it) {
    bool known = false;
    for (int i = 1; i <= q.vertex_count(); ++i) known |= it.key() == std::to_string(i);
    if (!known) throw Error(ErrorCode::IndexMismatch, "coords for unknown vertex '" + it.key() + "'");
  }
  return make_chart_point(q, s, std::move(blocks));
}

template <ExactField F>
json emit_group_element(const GroupElement<F>& g) {
  json out = json::object();
  for (std::size_t i = 0; i < g.size(); ++i) out[std::to_string(i + 1)] = emit_matrix(g.components()[i]);
  return out;
}

inline std::vector<RelationPoly> parse_relations(const json& j) {
  if (!j.is_array()) throw Error(ErrorCode::SchemaError, "relation file must be a JSON list");
  std::vector<RelationPoly> out;
  for (const auto& r : j) {
    RelationPoly poly;
    if (r.contains("name")) poly.name = r.at("name").get<std::string>();
    const auto& terms = detail::require(r, "terms", "relation");
    if (!terms.is_array()) throw Error(ErrorCode::SchemaError, "relation terms must be a list");
    for (const auto& t : terms) {
      RelationTerm term;
      const auto& coef = detail::require(t, "coef", "term");
      if (!coef.is_string()) throw Error(ErrorCode::SchemaError, "coef must be a string");
      term.coefficient = fqr::detail::parse_rational(coef.get<std::string>());
      if (term.coefficient.get_den() != 1) throw Error(ErrorCode::SchemaError, "coefficients must be integers");
      const auto& mono = detail::require(t, "monomial", "term");
      if (!mono.is_object()) throw Error(ErrorCode::SchemaError, "monomial must be an object");
      for (auto it = mono.begin(); it != mono.end(); ++it) {
        int e = detail::require_int(it.value(), "exponent");
        if (e < 0) throw Error(ErrorCode::SchemaError, "exponents must be non-negative");
        term.monomial.emplace_back(it.key(), e);
      }
      poly.terms.push_back(std::move(term));
    }
    out.push_back(std::move(poly));
  }
  return out;
}

inline json emit_relations(const std::vector<RelationPoly>& relations) {
  json out = json::array();
  for (const auto& r : relations) {
    json terms = json::array();
    for (const auto& t : r.terms) {
      json mono = json::object();
      for (const auto& [label, e] : t.monomial) mono[label] = e;
      terms.push_back({{"coef", t.coefficient.get_str()}, {"monomial", mono}});
    }
    json entry = {{"terms", terms}};
    if (!r.name.empty()) entry["name"] = r.name;
    out.push_back(std::move(entry));
  }
  return out;
}

template <ExactField F>
json emit_pluecker(const Quiver& q, const PlueckerVector<F>& v) {
  json out = json::object();
  for (std::size_t i = 0; i < v.by_vertex.size(); ++i) {
    json coords = json::object();
    for (const auto& [key, value] : v.by_vertex[i]) {
      if constexpr (std::is_same_v<F, PrimeField>) {
        coords[format_key(q, key)] = std::to_string(value.value());
      } else {
        coords[format_key(q, key)] = value.get_str();
      }
    }
    out[std::to_string(i + 1)] = std::move(coords);
  }
  return out;
}

}  // namespace fqr::io
