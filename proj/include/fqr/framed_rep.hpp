#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fqr/error.hpp"
#include "fqr/field.hpp"
#include "fqr/matrix.hpp"
#include "fqr/quiver.hpp"

namespace fqr {

/// A framed representation (M, f): one matrix per arrow a of shape
/// alpha_{h(a)} x alpha_{t(a)} and one framing matrix per vertex of shape
/// zeta_i x alpha_i, all over the same field.
template <ExactField F>
struct FramedRep {
  F field;
  Quiver quiver;
  FramedShape shape;
  std::vector<Matrix<F>> arrow_maps;  // indexed like quiver.arrows()
  std::vector<Matrix<F>> framing;     // indexed by vertex - 1

  /// The zero representation of the given shape.
  static FramedRep zero(const F& field, const Quiver& q, const FramedShape& shape) {
    check_shape(q, shape);
    FramedRep rep{field, q, shape, {}, {}};
    for (const Arrow& a : q.arrows())
      rep.arrow_maps.emplace_back(field, shape.dim(a.head), shape.dim(a.tail));
    for (int i = 1; i <= q.vertex_count(); ++i) rep.framing.emplace_back(field, shape.framing(i), shape.dim(i));
    return rep;
  }

  const Matrix<F>& map(std::size_t arrow) const { return arrow_maps.at(arrow); }
  const Matrix<F>& framing_at(int vertex) const { return framing.at(static_cast<std::size_t>(vertex - 1)); }
  Matrix<F>& framing_at(int vertex) { return framing.at(static_cast<std::size_t>(vertex - 1)); }

  void validate() const {
    check_shape(quiver, shape);
    if (arrow_maps.size() != quiver.arrows().size() || framing.size() != static_cast<std::size_t>(quiver.vertex_count())) {
      throw Error(ErrorCode::ShapeMismatch, "wrong number of matrices");
    }
    for (std::size_t k = 0; k < arrow_maps.size(); ++k) {
      const Arrow& a = quiver.arrow(k);
      const auto& m = arrow_maps[k];
      if (!(m.field() == field)) throw Error(ErrorCode::FieldMismatch, "arrow '" + a.name + "'");
      if (m.rows() != static_cast<std::size_t>(shape.dim(a.head)) || m.cols() != static_cast<std::size_t>(shape.dim(a.tail))) {
        throw Error(ErrorCode::ShapeMismatch, "arrow '" + a.name + "' must be " + std::to_string(shape.dim(a.head)) +
                                                  "x" + std::to_string(shape.dim(a.tail)));
      }
    }
    for (int i = 1; i <= quiver.vertex_count(); ++i) {
      const auto& m = framing_at(i);
      if (!(m.field() == field)) throw Error(ErrorCode::FieldMismatch, "framing at vertex " + std::to_string(i));
      if (m.rows() != static_cast<std::size_t>(shape.framing(i)) || m.cols() != static_cast<std::size_t>(shape.dim(i))) {
        throw Error(ErrorCode::ShapeMismatch, "framing at vertex " + std::to_string(i) + " must be " +
                                                  std::to_string(shape.framing(i)) + "x" + std::to_string(shape.dim(i)));
      }
    }
  }

  friend bool operator==(const FramedRep& a, const FramedRep& b) {
    return a.field == b.field && a.quiver == b.quiver && a.shape == b.shape && a.arrow_maps == b.arrow_maps &&
           a.framing == b.framing;
  }
};

/// An element of GL(alpha): one invertible matrix per vertex.
template <ExactField F>
class GroupElement {
 public:
  explicit GroupElement(std::vector<Matrix<F>> components) : components_(std::move(components)) {
    for (const auto& g : components_) inverses_.push_back(invert(g));
  }

  static GroupElement identity(const F& field, const FramedShape& shape) {
    std::vector<Matrix<F>> parts;
    for (int a : shape.alpha) parts.push_back(Matrix<F>::identity(field, static_cast<std::size_t>(a)));
    return GroupElement(std::move(parts));
  }

  const Matrix<F>& at(int vertex) const { return components_.at(static_cast<std::size_t>(vertex - 1)); }
  const Matrix<F>& inverse_at(int vertex) const { return inverses_.at(static_cast<std::size_t>(vertex - 1)); }
  const std::vector<Matrix<F>>& components() const { return components_; }
  std::size_t size() const { return components_.size(); }

  GroupElement inverse() const { return GroupElement(inverses_); }

  friend bool operator==(const GroupElement& a, const GroupElement& b) { return a.components_ == b.components_; }

 private:
  std::vector<Matrix<F>> components_;
  std::vector<Matrix<F>> inverses_;
};

/// g . (M, f) = (g_{h(a)} M_a g_{t(a)}^{-1}, f_i g_i^{-1}).
template <ExactField F>
FramedRep<F> act(const GroupElement<F>& g, const FramedRep<F>& rep) {
  if (g.size() != static_cast<std::size_t>(rep.quiver.vertex_count())) {
    throw Error(ErrorCode::ShapeMismatch, "group element has the wrong number of components");
  }
  for (int i = 1; i <= rep.quiver.vertex_count(); ++i) {
    if (g.at(i).rows() != static_cast<std::size_t>(rep.shape.dim(i))) {
      throw Error(ErrorCode::ShapeMismatch, "group component at vertex " + std::to_string(i));
    }
  }
  FramedRep<F> out = rep;
  for (std::size_t k = 0; k < rep.arrow_maps.size(); ++k) {
    const Arrow& a = rep.quiver.arrow(k);
    out.arrow_maps[k] = g.at(a.head) * rep.arrow_maps[k] * g.inverse_at(a.tail);
  }
  for (int i = 1; i <= rep.quiver.vertex_count(); ++i) out.framing_at(i) = rep.framing_at(i) * g.inverse_at(i);
  return out;
}

/// The row f_{iq} M_{a_1} ... M_{a_k}, of length alpha_{start(p)}.
template <ExactField F>
Matrix<F> row_of_path(const FramedRep<F>& rep, const FramedPath& p) {
  const auto& f = rep.framing_at(p.vertex);
  if (p.slot < 1 || static_cast<std::size_t>(p.slot) > f.rows()) {
    throw Error(ErrorCode::SlotOutOfRange, "slot " + std::to_string(p.slot) + " at vertex " + std::to_string(p.vertex));
  }
  std::size_t slot = static_cast<std::size_t>(p.slot - 1);
  Matrix<F> row = select_rows(f, std::span<const std::size_t>(&slot, 1));
  for (std::size_t a : p.arrows) row = row * rep.map(a);
  return row;
}

/// Rows indexed by framed paths, grouped by start vertex: the matrices B^{(i)}.
template <ExactField F>
class RowBundle {
 public:
  RowBundle(F field, const FramedShape& shape)
      : field_(std::move(field)), shape_(shape), paths_(shape.alpha.size()) {
    for (int a : shape.alpha) rows_.emplace_back(field_, 0, static_cast<std::size_t>(a));
    index_.resize(shape.alpha.size());
  }

  RowBundle(F field, const FramedShape& shape, std::vector<std::vector<FramedPath>> paths,
            std::vector<Matrix<F>> rows)
      : field_(std::move(field)), shape_(shape), paths_(std::move(paths)), rows_(std::move(rows)) {
    if (paths_.size() != shape_.alpha.size() || rows_.size() != shape_.alpha.size()) {
      throw Error(ErrorCode::ShapeMismatch, "row bundle needs one block per vertex");
    }
    index_.resize(paths_.size());
    for (std::size_t i = 0; i < paths_.size(); ++i) {
      if (rows_[i].rows() != paths_[i].size() || rows_[i].cols() != static_cast<std::size_t>(shape_.alpha[i])) {
        throw Error(ErrorCode::ShapeMismatch, "row bundle block " + std::to_string(i + 1));
      }
      for (std::size_t r = 0; r < paths_[i].size(); ++r) {
        if (paths_[i][r].start != static_cast<int>(i + 1)) {
          throw Error(ErrorCode::ShapeMismatch, "path filed under the wrong start vertex");
        }
        if (r > 0 && !(paths_[i][r - 1] < paths_[i][r])) {
          throw Error(ErrorCode::IndexMismatch, "row bundle paths must be strictly increasing");
        }
        index_[i].emplace(paths_[i][r], r);
      }
    }
  }

  const F& field() const { return field_; }
  const FramedShape& shape() const { return shape_; }
  std::size_t vertex_count() const { return paths_.size(); }

  const std::vector<FramedPath>& paths(int vertex) const { return paths_.at(static_cast<std::size_t>(vertex - 1)); }
  const Matrix<F>& block(int vertex) const { return rows_.at(static_cast<std::size_t>(vertex - 1)); }
  Matrix<F>& block(int vertex) { return rows_.at(static_cast<std::size_t>(vertex - 1)); }

  std::optional<std::size_t> index_of(const FramedPath& p) const {
    if (p.start < 1 || static_cast<std::size_t>(p.start) > index_.size()) return std::nullopt;
    const auto& idx = index_[static_cast<std::size_t>(p.start - 1)];
    auto it = idx.find(p);
    if (it == idx.end()) return std::nullopt;
    return it->second;
  }

  bool contains(const FramedPath& p) const { return index_of(p).has_value(); }

  /// B(T): the rows of the given paths (all starting at one vertex), in the given order.
  Matrix<F> rows_of(int vertex, std::span<const FramedPath> subset) const {
    std::vector<std::size_t> idx;
    idx.reserve(subset.size());
    for (const auto& p : subset) {
      if (p.start != vertex) throw Error(ErrorCode::IndexMismatch, "path does not start at vertex " + std::to_string(vertex));
      auto r = index_of(p);
      if (!r) throw Error(ErrorCode::MissingRow, "row bundle has no row for the requested path");
      idx.push_back(*r);
    }
    return select_rows(block(vertex), idx);
  }

 private:
  F field_;
  FramedShape shape_;
  std::vector<std::vector<FramedPath>> paths_;
  std::vector<Matrix<F>> rows_;
  std::vector<std::map<FramedPath, std::size_t>> index_;
};

/// Evaluates every path of the universe on rep. Rows of paths whose prefix is
/// also in the universe are obtained from the prefix row by one product.
template <ExactField F>
RowBundle<F> build_row_bundle(const FramedRep<F>& rep, std::span<const FramedPath> universe) {
  const auto n = static_cast<std::size_t>(rep.quiver.vertex_count());
  std::vector<FramedPath> sorted(universe.begin(), universe.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::map<FramedPath, Matrix<F>> computed;
  std::vector<std::vector<FramedPath>> paths(n);
  for (const auto& p : sorted) {
    if (p.start < 1 || static_cast<std::size_t>(p.start) > n) throw Error(ErrorCode::ShapeMismatch, "path start vertex");
    std::optional<Matrix<F>> row;
    if (auto pre = p.prefix(rep.quiver)) {
      auto it = computed.find(*pre);
      if (it != computed.end()) row = it->second * rep.map(p.arrows.back());
    }
    if (!row) row = row_of_path(rep, p);
    computed.emplace(p, std::move(*row));
    paths[static_cast<std::size_t>(p.start - 1)].push_back(p);
  }
  std::vector<Matrix<F>> blocks;
  for (std::size_t i = 0; i < n; ++i) {
    Matrix<F> b(rep.field, paths[i].size(), static_cast<std::size_t>(rep.shape.alpha[i]));
    for (std::size_t r = 0; r < paths[i].size(); ++r) {
      const auto& row = computed.at(paths[i][r]);
      std::copy(row.row(0).begin(), row.row(0).end(), b.row(r).begin());
    }
    blocks.push_back(std::move(b));
  }
  return RowBundle<F>(rep.field, rep.shape, std::move(paths), std::move(blocks));
}

/// Per-vertex subspaces, each given by a matrix whose columns are a basis.
template <ExactField F>
struct GradedSubspace {
  std::vector<Matrix<F>> bases;

  std::size_t dim(int vertex) const { return bases.at(static_cast<std::size_t>(vertex - 1)).cols(); }
  bool is_zero() const {
    return std::all_of(bases.begin(), bases.end(), [](const Matrix<F>& b) { return b.cols() == 0; });
  }
};

/// The largest subrepresentation contained in ker f. Starts from ker f_i and
/// shrinks K_i to {x in K_i : M_a x in K_{h(a)} for all a leaving i} until stable.
template <ExactField F>
GradedSubspace<F> max_submodule_in_kernel(const FramedRep<F>& rep) {
  const int n = rep.quiver.vertex_count();
  std::vector<Matrix<F>> k;
  for (int i = 1; i <= n; ++i) k.push_back(kernel_basis(rep.framing_at(i)));
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Matrix<F>> annihilators;
    for (const auto& basis : k) annihilators.push_back(annihilator_rows(basis));
    for (int i = 1; i <= n; ++i) {
      auto& ki = k[static_cast<std::size_t>(i - 1)];
      if (ki.cols() == 0) continue;
      Matrix<F> conditions(rep.field, 0, ki.cols());
      for (std::size_t a = 0; a < rep.arrow_maps.size(); ++a) {
        const Arrow& arr = rep.quiver.arrow(a);
        if (arr.tail != i) continue;
        conditions = vstack(conditions, annihilators[static_cast<std::size_t>(arr.head - 1)] * rep.map(a) * ki);
      }
      Matrix<F> y = kernel_basis(conditions);
      if (y.cols() < ki.cols()) {
        ki = ki * y;
        changed = true;
      }
    }
  }
  return {std::move(k)};
}

/// Per-vertex row spaces of all path rows, grown one arrow at a time from
/// the framing rows until no vertex gains rank.
template <ExactField F>
std::vector<Matrix<F>> saturated_row_spaces(const FramedRep<F>& rep) {
  const int n = rep.quiver.vertex_count();
  std::vector<Matrix<F>> spaces;
  for (int i = 1; i <= n; ++i) spaces.push_back(row_space_basis(rep.framing_at(i)));
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::size_t a = 0; a < rep.arrow_maps.size(); ++a) {
      const Arrow& arr = rep.quiver.arrow(a);
      auto& target = spaces[static_cast<std::size_t>(arr.tail - 1)];
      const auto& source = spaces[static_cast<std::size_t>(arr.head - 1)];
      if (source.rows() == 0 || target.rows() == target.cols()) continue;
      Matrix<F> merged = row_space_basis(vstack(target, source * rep.map(a)));
      if (merged.rows() > target.rows()) {
        target = std::move(merged);
        grew = true;
      }
    }
  }
  return spaces;
}

template <ExactField F>
bool is_stable(const FramedRep<F>& rep) {
  auto spaces = saturated_row_spaces(rep);
  for (int i = 1; i <= rep.quiver.vertex_count(); ++i) {
    if (spaces[static_cast<std::size_t>(i - 1)].rows() != static_cast<std::size_t>(rep.shape.dim(i))) return false;
  }
  return true;
}

}  // namespace fqr
