#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fqr/fqr.hpp"
#include "fqr/json_io.hpp"

namespace fqr::test {

inline const RationalField QQ{};

using QMatrix = Matrix<RationalField>;
using QRep = FramedRep<RationalField>;

inline QMatrix qm(std::initializer_list<std::initializer_list<long>> rows) { return QMatrix::from_ints(QQ, rows); }

inline FramedShape loop_shape(int m, int k) { return {{m}, {k}}; }

/// L_{q,k} with arrows given in declaration order and one framing block.
template <ExactField F>
FramedRep<F> loop_rep(const F& field, std::vector<Matrix<F>> arrows, Matrix<F> framing) {
  const int q = static_cast<int>(arrows.size());
  const int m = static_cast<int>(framing.cols());
  auto rep = FramedRep<F>::zero(field, Quiver::loops(q), loop_shape(m, static_cast<int>(framing.rows())));
  rep.arrow_maps = std::move(arrows);
  rep.framing = {std::move(framing)};
  rep.validate();
  return rep;
}

inline FramedPath path(const Quiver& q, const FramedShape& shape, const std::string& text) {
  return parse_path(q, shape, text);
}

inline Skeleton skel(const Quiver& q, const FramedShape& shape, std::vector<std::string> labels) {
  return parse_skeleton(q, shape, labels);
}

inline std::string read_file(const std::string& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string data_path(const std::string& rel) { return std::string(FQR_DATA_DIR) + "/" + rel; }

inline std::vector<RelationPoly> load_relations(const std::string& rel) {
  return io::parse_relations(io::json::parse(read_file(data_path(rel))));
}

/// Random rep of any shape (not necessarily stable).
template <ExactField F>
FramedRep<F> any_rep(const F& field, const Quiver& q, const FramedShape& shape, std::mt19937_64& rng, long bound = 3) {
  return random_rep(field, q, shape, rng, bound);
}

template <ExactField F>
FramedRep<F> stable_rep(const F& field, const Quiver& q, const FramedShape& shape, std::mt19937_64& rng, long bound = 3) {
  return random_stable(field, q, shape, rng(), bound).rep;
}

/// Chart point with rows given by path label, in any order.
template <ExactField F>
ChartPoint<F> chart_by_label(const F& field, const Quiver& q, const Skeleton& s,
                             const std::vector<std::pair<std::string, std::vector<typename F::value_type>>>& rows) {
  auto labels = chart_row_labels(q, s);
  std::vector<Matrix<F>> coords;
  for (std::size_t i = 0; i < labels.size(); ++i) coords.emplace_back(field, labels[i].size(), static_cast<std::size_t>(s.shape.alpha[i]));
  for (const auto& [label, values] : rows) {
    auto p = parse_path(q, s.shape, label);
    auto& lab = labels[static_cast<std::size_t>(p.start - 1)];
    auto r = static_cast<std::size_t>(std::find(lab.begin(), lab.end(), p) - lab.begin());
    if (r == lab.size()) throw Error(ErrorCode::IndexMismatch, label + " is not a chart row");
    for (std::size_t j = 0; j < values.size(); ++j) coords[static_cast<std::size_t>(p.start - 1)](r, j) = values[j];
  }
  return make_chart_point(q, s, std::move(coords));
}

/// A couple of multi-vertex quivers used throughout the property tests.
inline Quiver two_vertex_quiver() {
  return Quiver(2, {{"a", 1, 2}, {"b", 2, 2}, {"c", 2, 1}});
}

}  // namespace fqr::test
