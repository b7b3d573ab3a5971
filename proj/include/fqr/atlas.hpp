#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "fqr/error.hpp"
#include "fqr/framed_rep.hpp"
#include "fqr/matrix.hpp"
#include "fqr/normal_form.hpp"
#include "fqr/quiver.hpp"
#include "fqr/skeleton.hpp"

namespace fqr {

/// A strictly increasing tuple of paths, all starting at the same vertex.
using PlueckerKey = std::vector<FramedPath>;

inline std::string format_key(const Quiver& q, const PlueckerKey& key) {
  std::string out = "p[";
  for (std::size_t i = 0; i < key.size(); ++i) out += (i ? "," : "") + format_path(q, key[i]);
  return out + "]";
}

/// Sorts key in place and returns the sign of the sorting permutation; 0 on a repeated path.
inline int canonicalize_key(PlueckerKey& key) {
  int sign = 1;
  for (std::size_t i = 1; i < key.size(); ++i) {
    for (std::size_t j = i; j > 0 && key[j] < key[j - 1]; --j) {
      std::swap(key[j], key[j - 1]);
      sign = -sign;
    }
  }
  if (std::adjacent_find(key.begin(), key.end()) != key.end()) return 0;
  return sign;
}

template <ExactField F>
struct PlueckerVector {
  std::vector<std::map<PlueckerKey, typename F::value_type>> by_vertex;

  const std::map<PlueckerKey, typename F::value_type>& at(int vertex) const {
    return by_vertex.at(static_cast<std::size_t>(vertex - 1));
  }
  std::map<PlueckerKey, typename F::value_type>& at(int vertex) {
    return by_vertex.at(static_cast<std::size_t>(vertex - 1));
  }
};

namespace detail {

/// Calls visit(indices) for every k-subset of {0..n-1} in lexicographic order.
template <class Visit>
void for_each_subset(std::size_t n, std::size_t k, Visit&& visit) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    visit(static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

inline std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

/// All maximal minors of every B^{(i)}, keyed by canonically ordered row paths.
template <ExactField F>
PlueckerVector<F> pluecker(const RowBundle<F>& bundle) {
  PlueckerVector<F> out;
  for (int i = 1; i <= static_cast<int>(bundle.vertex_count()); ++i) {
    std::map<PlueckerKey, typename F::value_type> coords;
    const auto& paths = bundle.paths(i);
    const auto& block = bundle.block(i);
    detail::for_each_subset(paths.size(), block.cols(), [&](const std::vector<std::size_t>& rows) {
      PlueckerKey key;
      for (std::size_t r : rows) key.push_back(paths[r]);
      coords.emplace(std::move(key), minor_det(block, rows));
    });
    out.by_vertex.push_back(std::move(coords));
  }
  return out;
}

/// Checks B_{tau a} = B_tau M_a for every row pair (tau, tau a) of the bundle,
/// with M_a recovered from the chart of s.
template <ExactField F>
bool verify_chart_membership(const Quiver& q, const RowBundle<F>& bundle, const Skeleton& s) {
  auto maps = recover_arrow_maps(q, bundle, s);
  for (int i = 1; i <= static_cast<int>(bundle.vertex_count()); ++i) {
    for (const auto& p : bundle.paths(i)) {
      auto pre = p.prefix(q);
      if (!pre || !bundle.contains(*pre)) continue;
      auto parent = bundle.rows_of(pre->start, std::vector<FramedPath>{*pre});
      auto expected = parent * maps[p.arrows.back()];
      if (!(expected == bundle.rows_of(i, std::vector<FramedPath>{p}))) return false;
    }
  }
  return true;
}

/// Where an essential coordinate comes from: a skeleton key, or the
/// skeleton with element `replaced` swapped for chart row `replacement`.
/// For a replacement, the chart entry in row `replacement`, column of
/// `replaced` equals sign * p_key / p_skeleton.
struct CoordinateProvenance {
  std::size_t skeleton_index;
  int vertex;
  std::optional<FramedPath> replaced;
  std::optional<FramedPath> replacement;
  int sign = 1;
};

struct CoordinateClassification {
  std::vector<std::vector<PlueckerKey>> all;  // per vertex, all alpha_i-subsets of Gamma~_i
  std::set<std::pair<int, PlueckerKey>> essential;
  std::set<std::pair<int, PlueckerKey>> exceed;
  std::map<std::pair<int, PlueckerKey>, std::vector<CoordinateProvenance>> provenance;

  std::size_t total() const { return essential.size() + exceed.size(); }
};

inline CoordinateClassification classify_coordinates(const ShapeAtlas& atlas) {
  const Quiver& q = atlas.quiver;
  CoordinateClassification out;
  for (int i = 1; i <= q.vertex_count(); ++i) {
    auto rows = atlas.universe.gamma_tilde_at(i);
    std::vector<PlueckerKey> keys;
    detail::for_each_subset(rows.size(), static_cast<std::size_t>(atlas.shape.dim(i)),
                            [&](const std::vector<std::size_t>& idx) {
                              PlueckerKey k;
                              for (std::size_t r : idx) k.push_back(rows[r]);
                              keys.push_back(std::move(k));
                            });
    out.all.push_back(std::move(keys));
  }
  for (std::size_t si = 0; si < atlas.skeleta.size(); ++si) {
    const Skeleton& s = atlas.skeleta[si];
    auto labels = chart_row_labels(q, s);
    for (int i = 1; i <= q.vertex_count(); ++i) {
      const auto& base = s.at(i);
      out.provenance[{i, base}].push_back({si, i, std::nullopt, std::nullopt, 1});
      out.essential.insert({i, base});
      for (std::size_t j = 0; j < base.size(); ++j) {
        for (const auto& rho : labels[static_cast<std::size_t>(i - 1)]) {
          PlueckerKey key = base;
          key[j] = rho;
          int sign = canonicalize_key(key);
          out.essential.insert({i, key});
          out.provenance[{i, key}].push_back({si, i, base[j], rho, sign});
        }
      }
    }
  }
  for (int i = 1; i <= q.vertex_count(); ++i)
    for (const auto& k : out.all[static_cast<std::size_t>(i - 1)])
      if (!out.essential.contains({i, k})) out.exceed.insert({i, k});
  return out;
}

inline CoordinateClassification classify_coordinates(const Quiver& q, const FramedShape& shape) {
  return classify_coordinates(ShapeAtlas::build(q, shape));
}

struct ChartDimension {
  long dimension = 0;               // sum alpha_h alpha_t + sum zeta alpha - sum alpha^2
  bool negative = false;            // no stable points are expected when set
  std::vector<std::size_t> per_chart;  // sum_i T_i alpha_i for each abstract skeleton
};

inline long dimension_formula(const Quiver& q, const FramedShape& shape) {
  long d = 0;
  for (const Arrow& a : q.arrows()) d += static_cast<long>(shape.dim(a.head)) * shape.dim(a.tail);
  for (int i = 1; i <= q.vertex_count(); ++i) {
    d += static_cast<long>(shape.framing(i)) * shape.dim(i);
    d -= static_cast<long>(shape.dim(i)) * shape.dim(i);
  }
  return d;
}

inline ChartDimension chart_dimension(const ShapeAtlas& atlas) {
  ChartDimension out;
  out.dimension = dimension_formula(atlas.quiver, atlas.shape);
  out.negative = out.dimension < 0;
  for (const auto& s : atlas.skeleta) {
    auto labels = chart_row_labels(atlas.quiver, s);
    std::size_t entries = 0;
    for (int i = 1; i <= atlas.quiver.vertex_count(); ++i) {
      entries += labels[static_cast<std::size_t>(i - 1)].size() * static_cast<std::size_t>(atlas.shape.dim(i));
    }
    if (static_cast<long>(entries) != out.dimension) {
      throw Error(ErrorCode::IndexMismatch, "chart entry count " + std::to_string(entries) +
                                                " disagrees with the dimension formula " + std::to_string(out.dimension));
    }
    out.per_chart.push_back(entries);
  }
  return out;
}

inline ChartDimension chart_dimension(const Quiver& q, const FramedShape& shape) {
  return chart_dimension(ShapeAtlas::build(q, shape));
}

/// Integer-coefficient polynomial in Plücker variables.
struct RelationTerm {
  Rational coefficient;
  std::vector<std::pair<std::string, int>> monomial;  // variable label, exponent
};

struct RelationPoly {
  std::string name;
  std::vector<RelationTerm> terms;
};

struct ResolvedVariable {
  int vertex;
  PlueckerKey key;
  int sign;
};

/// Resolves "p[path,path,...]" against the shape; any path order is accepted
/// and the sorting sign is returned alongside the canonical key.
inline ResolvedVariable resolve_variable(const Quiver& q, const FramedShape& shape, std::string_view label) {
  if (label.size() < 3 || label.substr(0, 2) != "p[" || label.back() != ']') {
    throw Error(ErrorCode::UnknownVariable, "malformed variable '" + std::string(label) + "'");
  }
  std::string_view body = label.substr(2, label.size() - 3);
  PlueckerKey key;
  while (!body.empty()) {
    auto comma = body.find(',');
    auto part = body.substr(0, comma);
    try {
      key.push_back(parse_path(q, shape, part));
    } catch (const Error& e) {
      throw Error(ErrorCode::UnknownVariable, "'" + std::string(label) + "': " + e.what());
    }
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  if (key.empty()) throw Error(ErrorCode::UnknownVariable, "empty variable '" + std::string(label) + "'");
  const int vertex = key.front().start;
  for (const auto& p : key) {
    if (p.start != vertex) throw Error(ErrorCode::UnknownVariable, "'" + std::string(label) + "' mixes start vertices");
  }
  if (key.size() != static_cast<std::size_t>(shape.dim(vertex))) {
    throw Error(ErrorCode::UnknownVariable, "'" + std::string(label) + "' needs " + std::to_string(shape.dim(vertex)) + " paths");
  }
  int sign = canonicalize_key(key);
  if (sign == 0) throw Error(ErrorCode::UnknownVariable, "'" + std::string(label) + "' repeats a path");
  return {vertex, std::move(key), sign};
}

template <ExactField F>
typename F::value_type coefficient_in(const F& field, const Rational& c) {
  if constexpr (std::is_same_v<F, PrimeField>) {
    return field.from_rational(c);
  } else {
    return c;
  }
}

template <ExactField F>
typename F::value_type evaluate_relation(const F& field, const Quiver& q, const FramedShape& shape,
                                         const RelationPoly& poly, const PlueckerVector<F>& values) {
  using V = typename F::value_type;
  V total = field.zero();
  for (const auto& term : poly.terms) {
    V product = coefficient_in(field, term.coefficient);
    for (const auto& [label, exponent] : term.monomial) {
      auto var = resolve_variable(q, shape, label);
      const auto& coords = values.at(var.vertex);
      auto it = coords.find(var.key);
      if (it == coords.end()) {
        throw Error(ErrorCode::UnknownVariable, "'" + label + "' is not a coordinate of this universe");
      }
      V v = it->second;
      if (var.sign < 0) v = -v;
      for (int e = 0; e < exponent; ++e) product *= v;
    }
    total += product;
  }
  return total;
}

template <ExactField F>
struct RelationReport {
  // values[r][s]: relation r evaluated on sample s.
  std::vector<std::vector<typename F::value_type>> values;

  bool all_zero() const {
    for (const auto& row : values)
      for (const auto& v : row)
        if (!is_zero(v)) return false;
    return true;
  }
  std::size_t nonzero_relations() const {
    std::size_t n = 0;
    for (const auto& row : values)
      if (std::any_of(row.begin(), row.end(), [](const auto& v) { return !is_zero(v); })) ++n;
    return n;
  }
};

/// Evaluates each relation on the Plücker vector of each sample's row bundle over Gamma~.
template <ExactField F>
RelationReport<F> verify_relations(std::span<const RelationPoly> relations, std::span<const FramedRep<F>> samples,
                                   const ShapeAtlas& atlas) {
  std::vector<PlueckerVector<F>> vectors;
  for (const auto& s : samples) vectors.push_back(pluecker(build_row_bundle(s, atlas.universe.gamma_tilde)));
  RelationReport<F> report;
  for (const auto& r : relations) {
    std::vector<typename F::value_type> row;
    for (std::size_t k = 0; k < samples.size(); ++k) {
      row.push_back(evaluate_relation(samples[k].field, atlas.quiver, atlas.shape, r, vectors[k]));
    }
    report.values.push_back(std::move(row));
  }
  return report;
}

}  // namespace fqr
