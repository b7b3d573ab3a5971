#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fqr/error.hpp"
#include "fqr/framed_rep.hpp"
#include "fqr/matrix.hpp"
#include "fqr/quiver.hpp"
#include "fqr/skeleton.hpp"

namespace fqr {

/// Row labels of the chart coordinates at each vertex: the one-arrow
/// extensions S a that start at i but are not in S_i, plus the framing roots
/// f_{iq} not in S. Canonical order.
inline std::vector<std::vector<FramedPath>> chart_row_labels(const Quiver& q, const Skeleton& s) {
  std::vector<std::set<FramedPath>> labels(s.by_vertex.size());
  for (std::size_t a = 0; a < q.arrows().size(); ++a) {
    const Arrow& arr = q.arrow(a);
    for (const auto& tau : s.at(arr.head)) {
      auto ext = extend(q, tau, a);
      if (!s.contains(ext)) labels[static_cast<std::size_t>(arr.tail - 1)].insert(std::move(ext));
    }
  }
  for (int i = 1; i <= q.vertex_count(); ++i) {
    for (int slot = 1; slot <= s.shape.framing(i); ++slot) {
      auto root = FramedPath::root(i, slot);
      if (!s.contains(root)) labels[static_cast<std::size_t>(i - 1)].insert(root);
    }
  }
  std::vector<std::vector<FramedPath>> out;
  for (auto& l : labels) out.emplace_back(l.begin(), l.end());
  return out;
}

/// Local coordinates on the chart of a skeleton: per vertex a T_i x alpha_i
/// matrix whose rows are labelled by chart_row_labels.
template <ExactField F>
struct ChartPoint {
  Skeleton skeleton;
  std::vector<std::vector<FramedPath>> row_labels;
  std::vector<Matrix<F>> coords;

  const Matrix<F>& at(int vertex) const { return coords.at(static_cast<std::size_t>(vertex - 1)); }

  /// Entry in the row labelled p, column j.
  const typename F::value_type& entry(const FramedPath& p, std::size_t j) const {
    const auto& labels = row_labels.at(static_cast<std::size_t>(p.start - 1));
    auto it = std::lower_bound(labels.begin(), labels.end(), p);
    if (it == labels.end() || !(*it == p)) throw Error(ErrorCode::IndexMismatch, "no chart row for the requested path");
    return at(p.start)(static_cast<std::size_t>(it - labels.begin()), j);
  }

  std::size_t entry_count() const {
    std::size_t n = 0;
    for (const auto& c : coords) n += c.rows() * c.cols();
    return n;
  }

  friend bool operator==(const ChartPoint& a, const ChartPoint& b) {
    return a.skeleton == b.skeleton && a.row_labels == b.row_labels && a.coords == b.coords;
  }
};

/// Builds a chart point from per-vertex matrices, checking the row counts.
template <ExactField F>
ChartPoint<F> make_chart_point(const Quiver& q, const Skeleton& s, std::vector<Matrix<F>> coords) {
  auto labels = chart_row_labels(q, s);
  if (coords.size() != labels.size()) throw Error(ErrorCode::IndexMismatch, "chart point needs one block per vertex");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (coords[i].rows() != labels[i].size() || coords[i].cols() != static_cast<std::size_t>(s.shape.alpha[i])) {
      throw Error(ErrorCode::IndexMismatch, "chart block at vertex " + std::to_string(i + 1) + " must be " +
                                                std::to_string(labels[i].size()) + "x" + std::to_string(s.shape.alpha[i]));
    }
  }
  return {s, std::move(labels), std::move(coords)};
}

/// M_a = B(S_{h(a)})^{-1} B(S_{h(a)} a), rows of the second factor read at t(a).
template <ExactField F>
std::vector<Matrix<F>> recover_arrow_maps(const Quiver& q, const RowBundle<F>& bundle, const Skeleton& s) {
  std::vector<Matrix<F>> maps;
  for (std::size_t a = 0; a < q.arrows().size(); ++a) {
    const Arrow& arr = q.arrow(a);
    const auto& base = s.at(arr.head);
    std::vector<FramedPath> extended;
    for (const auto& tau : base) extended.push_back(extend(q, tau, a));
    Matrix<F> inv = invert(bundle.rows_of(arr.head, base));
    maps.push_back(inv * bundle.rows_of(arr.tail, extended));
  }
  return maps;
}

namespace detail {

template <ExactField F>
Matrix<F> rows_for(const FramedRep<F>& rep, const std::vector<FramedPath>& paths, std::size_t width) {
  Matrix<F> out(rep.field, paths.size(), width);
  for (std::size_t r = 0; r < paths.size(); ++r) {
    auto row = row_of_path(rep, paths[r]);
    std::copy(row.row(0).begin(), row.row(0).end(), out.row(r).begin());
  }
  return out;
}

}  // namespace detail

/// C^{(i)} = (B^{(i)} B(S_i)^{-1}) restricted to the chart row labels.
template <ExactField F>
ChartPoint<F> project_chart(const FramedRep<F>& rep, const Skeleton& s) {
  auto labels = chart_row_labels(rep.quiver, s);
  std::vector<Matrix<F>> coords;
  for (int i = 1; i <= rep.quiver.vertex_count(); ++i) {
    const auto width = static_cast<std::size_t>(rep.shape.dim(i));
    Matrix<F> base = detail::rows_for(rep, s.at(i), width);
    Matrix<F> inv(rep.field, width, width);
    try {
      inv = invert(base);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Singular) throw;
      throw Error(ErrorCode::NotInChart, "B(S_" + std::to_string(i) + ") is singular");
    }
    coords.push_back(detail::rows_for(rep, labels[static_cast<std::size_t>(i - 1)], width) * inv);
  }
  return {s, std::move(labels), std::move(coords)};
}

/// The representative (M^C, f^C) with B(S_i) = identity: skeleton paths get
/// identity rows, chart rows get C, then M_a = C~(S a) and f_i = C~(f_i).
template <ExactField F>
FramedRep<F> section(const F& field, const Quiver& q, const Skeleton& s, const ChartPoint<F>& c) {
  auto labels = chart_row_labels(q, s);
  if (!(c.skeleton == s) || c.row_labels != labels || c.coords.size() != labels.size()) {
    throw Error(ErrorCode::IndexMismatch, "chart point is not indexed by this skeleton");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (c.coords[i].rows() != labels[i].size() || c.coords[i].cols() != static_cast<std::size_t>(s.shape.alpha[i]) ||
        !(c.coords[i].field() == field)) {
      throw Error(ErrorCode::IndexMismatch, "chart block at vertex " + std::to_string(i + 1));
    }
  }
  auto extended_row = [&](const FramedPath& p) {
    const int v = p.start;
    const auto width = static_cast<std::size_t>(s.shape.dim(v));
    Matrix<F> row(field, 1, width);
    const auto& skel = s.at(v);
    if (auto it = std::lower_bound(skel.begin(), skel.end(), p); it != skel.end() && *it == p) {
      row(0, static_cast<std::size_t>(it - skel.begin())) = field.one();
      return row;
    }
    const auto& lab = labels[static_cast<std::size_t>(v - 1)];
    auto it = std::lower_bound(lab.begin(), lab.end(), p);
    if (it == lab.end() || !(*it == p)) throw Error(ErrorCode::IndexMismatch, "path outside S and its chart rows");
    const auto r = static_cast<std::size_t>(it - lab.begin());
    for (std::size_t j = 0; j < width; ++j) row(0, j) = c.at(v)(r, j);
    return row;
  };

  auto rep = FramedRep<F>::zero(field, q, s.shape);
  for (std::size_t a = 0; a < q.arrows().size(); ++a) {
    const Arrow& arr = q.arrow(a);
    auto& m = rep.arrow_maps[a];
    const auto& base = s.at(arr.head);
    for (std::size_t r = 0; r < base.size(); ++r) {
      auto row = extended_row(extend(q, base[r], a));
      std::copy(row.row(0).begin(), row.row(0).end(), m.row(r).begin());
    }
  }
  for (int i = 1; i <= q.vertex_count(); ++i) {
    auto& f = rep.framing_at(i);
    for (int slot = 1; slot <= s.shape.framing(i); ++slot) {
      auto row = extended_row(FramedPath::root(i, slot));
      std::copy(row.row(0).begin(), row.row(0).end(), f.row(static_cast<std::size_t>(slot - 1)).begin());
    }
  }
  return rep;
}

template <ExactField F>
FramedRep<F> normal_form(const FramedRep<F>& rep, const Skeleton& s) {
  return section(rep.field, rep.quiver, s, project_chart(rep, s));
}

/// The local-coordinate change from the chart of s to the chart of t.
template <ExactField F>
ChartPoint<F> transition(const F& field, const Quiver& q, const Skeleton& s, const Skeleton& t, const ChartPoint<F>& c) {
  return project_chart(section(field, q, s, c), t);
}

/// g_i = B(S_i)^{-1} taken at rep's own rows: the element carrying the normal form to rep.
template <ExactField F>
GroupElement<F> normalizing_element(const FramedRep<F>& rep, const Skeleton& s) {
  std::vector<Matrix<F>> parts;
  for (int i = 1; i <= rep.quiver.vertex_count(); ++i) {
    parts.push_back(invert(detail::rows_for(rep, s.at(i), static_cast<std::size_t>(rep.shape.dim(i)))));
  }
  return GroupElement<F>(std::move(parts));
}

enum class IsoVerdict { Isomorphic, NotIsomorphic, BothUnstableUndecided };

inline std::string to_string(IsoVerdict v) {
  switch (v) {
    case IsoVerdict::Isomorphic: return "isomorphic";
    case IsoVerdict::NotIsomorphic: return "not-isomorphic";
    case IsoVerdict::BothUnstableUndecided: return "both-unstable-undecided";
  }
  return "unknown";
}

template <ExactField F>
struct IsoDecision {
  IsoVerdict verdict;
  std::optional<GroupElement<F>> witness;  // act(*witness, rep1) == rep2
  std::optional<Skeleton> skeleton;        // the common skeleton that decided it
};

/// Decides isomorphism of two framed representations of one shape by
/// comparing normal forms on their least common skeleton.
template <ExactField F>
IsoDecision<F> iso_check(const FramedRep<F>& rep1, const FramedRep<F>& rep2, const ShapeAtlas& atlas) {
  if (!(rep1.field == rep2.field)) throw Error(ErrorCode::FieldMismatch, "representations over different fields");
  if (!(rep1.quiver == rep2.quiver) || !(rep1.shape == rep2.shape)) {
    throw Error(ErrorCode::ShapeMismatch, "representations of different quivers or shapes");
  }
  const bool stable1 = is_stable(rep1);
  const bool stable2 = is_stable(rep2);
  if (!stable1 && !stable2) return {IsoVerdict::BothUnstableUndecided, std::nullopt, std::nullopt};
  if (!stable1) throw Error(ErrorCode::NotStable, "first representation is not stable");
  if (!stable2) throw Error(ErrorCode::NotStable, "second representation is not stable");

  auto sk1 = skeleta_of_rep(rep1, atlas);
  auto sk2 = skeleta_of_rep(rep2, atlas);
  std::vector<Skeleton> common;
  std::set_intersection(sk1.begin(), sk1.end(), sk2.begin(), sk2.end(), std::back_inserter(common));
  if (common.empty()) return {IsoVerdict::NotIsomorphic, std::nullopt, std::nullopt};

  const Skeleton& s = common.front();
  if (!(normal_form(rep1, s) == normal_form(rep2, s))) return {IsoVerdict::NotIsomorphic, std::nullopt, s};

  // rep_k = h_k . NF with h_k = B_k(S)^{-1}, so g = h_2 h_1^{-1} carries rep1 to rep2.
  auto h1 = normalizing_element(rep1, s);
  auto h2 = normalizing_element(rep2, s);
  std::vector<Matrix<F>> parts;
  for (int i = 1; i <= rep1.quiver.vertex_count(); ++i) parts.push_back(h2.at(i) * h1.inverse_at(i));
  GroupElement<F> g(std::move(parts));
  if (!(act(g, rep1) == rep2)) {
    throw Error(ErrorCode::IndexMismatch, "internal: isomorphism witness failed verification");
  }
  return {IsoVerdict::Isomorphic, std::move(g), s};
}

template <ExactField F>
IsoDecision<F> iso_check(const FramedRep<F>& rep1, const FramedRep<F>& rep2) {
  return iso_check(rep1, rep2, ShapeAtlas::build(rep1.quiver, rep1.shape));
}

}  // namespace fqr
