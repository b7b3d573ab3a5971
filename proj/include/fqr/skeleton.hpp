#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fqr/error.hpp"
#include "fqr/framed_rep.hpp"
#include "fqr/matrix.hpp"
#include "fqr/quiver.hpp"

namespace fqr {

/// A prefix-closed set of framed paths with exactly alpha_i paths starting
/// at each vertex i. Paths are kept per start vertex in canonical order.
struct Skeleton {
  FramedShape shape;
  std::vector<std::vector<FramedPath>> by_vertex;

  static Skeleton from_paths(const FramedShape& shape, std::span<const FramedPath> paths) {
    Skeleton s{shape, std::vector<std::vector<FramedPath>>(shape.alpha.size())};
    for (const auto& p : paths) {
      if (p.start < 1 || static_cast<std::size_t>(p.start) > s.by_vertex.size()) {
        throw Error(ErrorCode::ShapeMismatch, "skeleton path starts outside the quiver");
      }
      s.by_vertex[static_cast<std::size_t>(p.start - 1)].push_back(p);
    }
    for (auto& v : s.by_vertex) {
      std::sort(v.begin(), v.end());
      if (std::adjacent_find(v.begin(), v.end()) != v.end()) throw Error(ErrorCode::IndexMismatch, "repeated skeleton path");
    }
    return s;
  }

  const std::vector<FramedPath>& at(int vertex) const { return by_vertex.at(static_cast<std::size_t>(vertex - 1)); }

  /// All paths, canonical order.
  std::vector<FramedPath> all_paths() const {
    std::vector<FramedPath> out;
    for (const auto& v : by_vertex) out.insert(out.end(), v.begin(), v.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  bool contains(const FramedPath& p) const {
    if (p.start < 1 || static_cast<std::size_t>(p.start) > by_vertex.size()) return false;
    const auto& v = by_vertex[static_cast<std::size_t>(p.start - 1)];
    return std::binary_search(v.begin(), v.end(), p);
  }

  friend bool operator==(const Skeleton& a, const Skeleton& b) { return a.by_vertex == b.by_vertex; }

  /// Lexicographic on the canonically sorted path tuples.
  friend bool operator<(const Skeleton& a, const Skeleton& b) { return a.all_paths() < b.all_paths(); }
};

inline std::vector<std::string> format_skeleton(const Quiver& q, const Skeleton& s) {
  std::vector<std::string> out;
  for (const auto& p : s.all_paths()) out.push_back(format_path(q, p));
  return out;
}

/// The two defining conditions plus the storage invariants.
inline bool satisfies_skeleton_conditions(const Quiver& q, const Skeleton& s) {
  if (s.by_vertex.size() != s.shape.alpha.size()) return false;
  for (std::size_t i = 0; i < s.by_vertex.size(); ++i) {
    const auto& v = s.by_vertex[i];
    if (v.size() != static_cast<std::size_t>(s.shape.alpha[i])) return false;
    if (!std::is_sorted(v.begin(), v.end()) || std::adjacent_find(v.begin(), v.end()) != v.end()) return false;
    for (const auto& p : v) {
      if (p.start != static_cast<int>(i + 1)) return false;
      if (!q.has_vertex(p.vertex) || p.slot < 1 || p.slot > s.shape.framing(p.vertex)) return false;
      if (auto pre = p.prefix(q); pre && !s.contains(*pre)) return false;
    }
  }
  return true;
}

/// Every prefix-closed path set of dimension vector alpha. Each set is
/// produced once by adding its paths in increasing canonical order: a
/// path's prefix is always smaller, so the next path is drawn from roots
/// and one-arrow extensions of chosen paths that exceed the last one.
inline std::vector<Skeleton> enumerate_abstract_skeleta(const Quiver& q, const FramedShape& shape) {
  check_shape(q, shape);
  const auto n = static_cast<std::size_t>(q.vertex_count());
  std::vector<Skeleton> out;
  std::vector<FramedPath> chosen;
  std::vector<int> counts(n, 0);
  int remaining = shape.total_dimension();

  std::vector<FramedPath> roots;
  for (int i = 1; i <= q.vertex_count(); ++i)
    for (int s = 1; s <= shape.framing(i); ++s) roots.push_back(FramedPath::root(i, s));

  std::function<void()> recurse = [&]() {
    if (remaining == 0) {
      out.push_back(Skeleton::from_paths(shape, chosen));
      return;
    }
    std::set<FramedPath> candidates;
    auto consider = [&](const FramedPath& p) {
      if (!chosen.empty() && !(chosen.back() < p)) return;
      if (counts[static_cast<std::size_t>(p.start - 1)] >= shape.dim(p.start)) return;
      candidates.insert(p);
    };
    for (const auto& r : roots) consider(r);
    for (const auto& c : chosen)
      for (std::size_t a = 0; a < q.arrows().size(); ++a)
        if (q.arrow(a).head == c.start) consider(extend(q, c, a));
    for (const auto& p : candidates) {
      chosen.push_back(p);
      ++counts[static_cast<std::size_t>(p.start - 1)];
      --remaining;
      recurse();
      ++remaining;
      --counts[static_cast<std::size_t>(p.start - 1)];
      chosen.pop_back();
    }
  };
  recurse();
  std::sort(out.begin(), out.end());
  return out;
}

enum class UniverseMode { Exact, Superset };

/// Gamma: paths occurring in skeleta; Gamma~: Gamma plus one-arrow extensions.
struct PathUniverse {
  std::vector<FramedPath> gamma;
  std::vector<FramedPath> gamma_tilde;

  bool in_gamma(const FramedPath& p) const { return std::binary_search(gamma.begin(), gamma.end(), p); }
  bool in_gamma_tilde(const FramedPath& p) const {
    return std::binary_search(gamma_tilde.begin(), gamma_tilde.end(), p);
  }
  std::vector<FramedPath> gamma_tilde_at(int vertex) const {
    std::vector<FramedPath> out;
    for (const auto& p : gamma_tilde)
      if (p.start == vertex) out.push_back(p);
    return out;
  }
};

inline std::vector<FramedPath> one_arrow_closure(const Quiver& q, std::vector<FramedPath> gamma) {
  std::set<FramedPath> all(gamma.begin(), gamma.end());
  for (const auto& p : gamma)
    for (std::size_t a = 0; a < q.arrows().size(); ++a)
      if (q.arrow(a).head == p.start) all.insert(extend(q, p, a));
  return {all.begin(), all.end()};
}

inline PathUniverse path_universe_from_skeleta(const Quiver& q, std::span<const Skeleton> skeleta) {
  std::set<FramedPath> gamma;
  for (const auto& s : skeleta)
    for (const auto& v : s.by_vertex) gamma.insert(v.begin(), v.end());
  PathUniverse u;
  u.gamma.assign(gamma.begin(), gamma.end());
  u.gamma_tilde = one_arrow_closure(q, u.gamma);
  return u;
}

/// Exact mode takes the union of all abstract skeleta. Superset mode takes
/// every framed path of plain length below sum(alpha), the bound that
/// prefix chains inside a skeleton cannot exceed.
inline PathUniverse path_universe(const Quiver& q, const FramedShape& shape, UniverseMode mode = UniverseMode::Exact) {
  if (mode == UniverseMode::Exact) {
    auto skeleta = enumerate_abstract_skeleta(q, shape);
    return path_universe_from_skeleta(q, skeleta);
  }
  auto eq = build_extended_quiver(q, shape);
  const int total = shape.total_dimension();
  PathUniverse u;
  if (total > 0) u.gamma = enumerate_framed_paths(eq, static_cast<std::size_t>(total - 1));
  u.gamma_tilde = one_arrow_closure(q, u.gamma);
  return u;
}

/// Per-shape data shared by every representation of that shape.
struct ShapeAtlas {
  Quiver quiver;
  FramedShape shape;
  std::vector<Skeleton> skeleta;
  PathUniverse universe;

  static ShapeAtlas build(const Quiver& q, const FramedShape& shape, UniverseMode mode = UniverseMode::Exact) {
    ShapeAtlas atlas{q, shape, enumerate_abstract_skeleta(q, shape), {}};
    atlas.universe = mode == UniverseMode::Exact ? path_universe_from_skeleta(q, atlas.skeleta)
                                                 : path_universe(q, shape, mode);
    return atlas;
  }
};

/// The canonical skeleton: seed with independent framing rows in (i, q)
/// order, then take one-arrow extensions of chosen paths in canonical order
/// whenever their row is independent of the rows already chosen at its start.
template <ExactField F>
Skeleton greedy_skeleton(const FramedRep<F>& rep) {
  const auto n = static_cast<std::size_t>(rep.quiver.vertex_count());
  std::vector<Matrix<F>> chosen_rows;
  for (int i = 1; i <= rep.quiver.vertex_count(); ++i) chosen_rows.emplace_back(rep.field, 0, static_cast<std::size_t>(rep.shape.dim(i)));
  std::vector<FramedPath> chosen;
  int remaining = rep.shape.total_dimension();

  std::set<FramedPath> frontier;
  std::map<FramedPath, Matrix<F>> frontier_rows;
  for (int i = 1; i <= rep.quiver.vertex_count(); ++i) {
    for (int s = 1; s <= rep.shape.framing(i); ++s) {
      auto p = FramedPath::root(i, s);
      frontier.insert(p);
      frontier_rows.emplace(p, row_of_path(rep, p));
    }
  }
  while (remaining > 0 && !frontier.empty()) {
    FramedPath p = *frontier.begin();
    frontier.erase(frontier.begin());
    Matrix<F> row = std::move(frontier_rows.at(p));
    frontier_rows.erase(p);
    auto& rows = chosen_rows[static_cast<std::size_t>(p.start - 1)];
    if (rows.rows() == rows.cols()) continue;
    Matrix<F> candidate = vstack(rows, row);
    if (rank(candidate) <= rows.rows()) continue;
    rows = std::move(candidate);
    chosen.push_back(p);
    --remaining;
    for (std::size_t a = 0; a < rep.arrow_maps.size(); ++a) {
      if (rep.quiver.arrow(a).head != p.start) continue;
      auto next = extend(rep.quiver, p, a);
      frontier_rows.emplace(next, row * rep.map(a));
      frontier.insert(std::move(next));
    }
  }
  if (remaining > 0) {
    std::string detail;
    for (std::size_t i = 0; i < n; ++i) {
      detail += (i ? "," : "") + std::to_string(chosen_rows[i].rows()) + "/" + std::to_string(rep.shape.alpha[i]);
    }
    throw Error(ErrorCode::NotStable, "row saturation reached ranks (" + detail + ")");
  }
  return Skeleton::from_paths(rep.shape, chosen);
}

/// True iff every B(S_i) is nonsingular on this bundle.
template <ExactField F>
bool bundle_in_chart(const RowBundle<F>& bundle, const Skeleton& s) {
  for (int i = 1; i <= static_cast<int>(s.by_vertex.size()); ++i) {
    if (is_zero(determinant(bundle.rows_of(i, s.at(i))))) return false;
  }
  return true;
}

/// All abstract skeleta S with every det B(S_i) != 0, in skeleton order.
template <ExactField F>
std::vector<Skeleton> skeleta_of_rep(const FramedRep<F>& rep, const ShapeAtlas& atlas) {
  auto bundle = build_row_bundle(rep, atlas.universe.gamma_tilde);
  std::vector<Skeleton> out;
  for (const auto& s : atlas.skeleta)
    if (bundle_in_chart(bundle, s)) out.push_back(s);
  return out;
}

template <ExactField F>
std::vector<Skeleton> skeleta_of_rep(const FramedRep<F>& rep) {
  return skeleta_of_rep(rep, ShapeAtlas::build(rep.quiver, rep.shape));
}

inline Skeleton parse_skeleton(const Quiver& q, const FramedShape& shape, std::span<const std::string> labels) {
  std::vector<FramedPath> paths;
  for (const auto& l : labels) paths.push_back(parse_path(q, shape, l));
  Skeleton s = Skeleton::from_paths(shape, paths);
  if (!satisfies_skeleton_conditions(q, s)) {
    throw Error(ErrorCode::IndexMismatch, "path list is not a prefix-closed set of dimension alpha");
  }
  return s;
}

}  // namespace fqr
