#pragma once

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fqr/error.hpp"

namespace fqr {

// Vertices are 1-based throughout, matching how quivers are drawn and how
// documents refer to them.

struct Arrow {
  std::string name;
  int tail = 1;
  int head = 1;

  friend bool operator==(const Arrow&, const Arrow&) = default;
};

class Quiver {
 public:
  Quiver() = default;

  Quiver(int vertex_count, std::vector<Arrow> arrows) : vertex_count_(vertex_count), arrows_(std::move(arrows)) {
    if (vertex_count_ < 0) throw Error(ErrorCode::ShapeMismatch, "negative vertex count");
    for (std::size_t i = 0; i < arrows_.size(); ++i) {
      const Arrow& a = arrows_[i];
      if (!valid_name(a.name)) throw Error(ErrorCode::SyntaxError, "invalid arrow name '" + a.name + "'");
      if (!has_vertex(a.tail) || !has_vertex(a.head)) {
        throw Error(ErrorCode::ShapeMismatch, "arrow '" + a.name + "' has an endpoint outside 1.." +
                                                  std::to_string(vertex_count_));
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (arrows_[j].name == a.name) throw Error(ErrorCode::SchemaError, "duplicate arrow name '" + a.name + "'");
      }
    }
  }

  /// L_q: one vertex with q loops named a, b, c, ... (a1, a2, ... beyond 26).
  static Quiver loops(int q) {
    std::vector<Arrow> arrows;
    for (int i = 0; i < q; ++i) {
      std::string name = q <= 26 ? std::string(1, static_cast<char>('a' + i)) : "a" + std::to_string(i + 1);
      arrows.push_back({name, 1, 1});
    }
    return Quiver(1, std::move(arrows));
  }

  int vertex_count() const { return vertex_count_; }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  const Arrow& arrow(std::size_t index) const { return arrows_.at(index); }
  bool has_vertex(int v) const { return v >= 1 && v <= vertex_count_; }

  std::optional<std::size_t> find_arrow(std::string_view name) const {
    for (std::size_t i = 0; i < arrows_.size(); ++i)
      if (arrows_[i].name == name) return i;
    return std::nullopt;
  }

  static bool valid_name(std::string_view name) {
    if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
    return std::all_of(name.begin(), name.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
  }

  friend bool operator==(const Quiver&, const Quiver&) = default;

 private:
  int vertex_count_ = 0;
  std::vector<Arrow> arrows_;
};

/// Dimension vector alpha of the representation and zeta of the framing.
struct FramedShape {
  std::vector<int> alpha;
  std::vector<int> zeta;

  int total_dimension() const {
    int s = 0;
    for (int a : alpha) s += a;
    return s;
  }
  int dim(int vertex) const { return alpha.at(static_cast<std::size_t>(vertex - 1)); }
  int framing(int vertex) const { return zeta.at(static_cast<std::size_t>(vertex - 1)); }

  friend bool operator==(const FramedShape&, const FramedShape&) = default;
};

inline void check_shape(const Quiver& q, const FramedShape& shape) {
  const auto n = static_cast<std::size_t>(q.vertex_count());
  if (shape.alpha.size() != n || shape.zeta.size() != n) {
    throw Error(ErrorCode::ShapeMismatch, "shape vectors must have length " + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (shape.alpha[i] < 0 || shape.zeta[i] < 0) throw Error(ErrorCode::ShapeMismatch, "negative dimension");
  }
}

/// A path in Q, stored head-first as arrow indices a_1 ... a_k with
/// t(a_j) = h(a_{j+1}). The trivial path e_i has no arrows and head = tail = i.
struct PlainPath {
  int head = 1;
  int tail = 1;
  std::vector<std::size_t> arrows;

  static PlainPath trivial(int vertex) { return {vertex, vertex, {}}; }
  static PlainPath of_arrow(const Quiver& q, std::size_t index) {
    const Arrow& a = q.arrow(index);
    return {a.head, a.tail, {index}};
  }

  std::size_t length() const { return arrows.size(); }

  friend bool operator==(const PlainPath&, const PlainPath&) = default;
};

/// sigma * tau: defined when h(tau) = t(sigma); trivial paths act as units.
inline PlainPath compose(const PlainPath& sigma, const PlainPath& tau) {
  if (tau.head != sigma.tail) {
    throw Error(ErrorCode::NotComposable, "h(tau)=" + std::to_string(tau.head) + " but t(sigma)=" +
                                              std::to_string(sigma.tail));
  }
  PlainPath out{sigma.head, tau.tail, sigma.arrows};
  out.arrows.insert(out.arrows.end(), tau.arrows.begin(), tau.arrows.end());
  return out;
}

/// f_{vertex,slot} * tau, a path of Q^zeta ending in the framing vertex.
struct FramedPath {
  int vertex = 1;
  int slot = 1;
  std::vector<std::size_t> arrows;
  int start = 1;  // t(tau), the vertex whose row bundle carries this path

  static FramedPath root(int vertex, int slot) { return {vertex, slot, {}, vertex}; }

  std::size_t plain_length() const { return arrows.size(); }
  std::size_t length() const { return arrows.size() + 1; }
  PlainPath plain(const Quiver& q) const {
    return {vertex, arrows.empty() ? vertex : q.arrow(arrows.back()).tail, arrows};
  }
  /// Drops the last arrow; the root has no prefix.
  std::optional<FramedPath> prefix(const Quiver& q) const {
    if (arrows.empty()) return std::nullopt;
    FramedPath p{vertex, slot, {arrows.begin(), arrows.end() - 1}, vertex};
    if (!p.arrows.empty()) p.start = q.arrow(p.arrows.back()).tail;
    return p;
  }

  friend bool operator==(const FramedPath& a, const FramedPath& b) {
    return a.vertex == b.vertex && a.slot == b.slot && a.arrows == b.arrows;
  }

  /// Canonical order: length, framing vertex, slot, then the arrow word.
  friend std::strong_ordering operator<=>(const FramedPath& a, const FramedPath& b) {
    if (auto c = a.arrows.size() <=> b.arrows.size(); c != 0) return c;
    if (auto c = a.vertex <=> b.vertex; c != 0) return c;
    if (auto c = a.slot <=> b.slot; c != 0) return c;
    return std::lexicographical_compare_three_way(a.arrows.begin(), a.arrows.end(), b.arrows.begin(),
                                                  b.arrows.end());
  }
};

inline std::strong_ordering canonical_compare(const FramedPath& a, const FramedPath& b) { return a <=> b; }

/// p * a, requiring h(a) = start(p).
inline FramedPath extend(const Quiver& q, const FramedPath& p, std::size_t arrow_index) {
  const Arrow& a = q.arrow(arrow_index);
  if (a.head != p.start) {
    throw Error(ErrorCode::NotComposable, "arrow '" + a.name + "' has head " + std::to_string(a.head) +
                                              " but the path starts at " + std::to_string(p.start));
  }
  FramedPath out = p;
  out.arrows.push_back(arrow_index);
  out.start = a.tail;
  return out;
}

struct FramingArrow {
  int vertex;
  int slot;
};

/// Q^zeta: the base quiver plus zeta_i arrows f_{iq} from each i to infinity.
struct ExtendedQuiver {
  Quiver base;
  FramedShape shape;
  std::vector<FramingArrow> framing;  // (i, q) lexicographic
};

inline ExtendedQuiver build_extended_quiver(const Quiver& q, const FramedShape& shape) {
  check_shape(q, shape);
  ExtendedQuiver eq{q, shape, {}};
  for (int i = 1; i <= q.vertex_count(); ++i)
    for (int s = 1; s <= shape.framing(i); ++s) eq.framing.push_back({i, s});
  return eq;
}

inline std::string format_path(const Quiver& q, const FramedPath& p) {
  std::string out = "f" + std::to_string(p.vertex) + "." + std::to_string(p.slot);
  for (std::size_t a : p.arrows) out += "*" + q.arrow(a).name;
  return out;
}

namespace detail {

inline std::optional<int> parse_positive(std::string_view s) {
  if (s.empty() || s.size() > 9 || s.find_first_not_of("0123456789") != std::string_view::npos) return std::nullopt;
  int v = std::stoi(std::string(s));
  if (v <= 0) return std::nullopt;
  return v;
}

}  // namespace detail

/// Grammar: f<i>.<q> followed by zero or more *<arrow>, applied left to right.
inline FramedPath parse_path(const Quiver& q, const FramedShape& shape, std::string_view text) {
  auto fail = [&](const std::string& why) -> Error {
    return Error(ErrorCode::SyntaxError, "path '" + std::string(text) + "': " + why);
  };
  if (text.size() < 4 || text[0] != 'f') throw fail("expected f<i>.<q>");
  std::size_t star = text.find('*');
  std::string_view head = text.substr(1, star == std::string_view::npos ? std::string_view::npos : star - 1);
  std::size_t dot = head.find('.');
  if (dot == std::string_view::npos) throw fail("missing '.' in framing index");
  auto vertex = detail::parse_positive(head.substr(0, dot));
  auto slot = detail::parse_positive(head.substr(dot + 1));
  if (!vertex || !slot) throw fail("framing index must be positive integers");
  if (!q.has_vertex(*vertex)) throw Error(ErrorCode::SlotOutOfRange, "vertex " + std::to_string(*vertex) + " in '" + std::string(text) + "'");
  if (*slot > shape.framing(*vertex)) {
    throw Error(ErrorCode::SlotOutOfRange, "slot " + std::to_string(*slot) + " exceeds zeta_" +
                                               std::to_string(*vertex) + " in '" + std::string(text) + "'");
  }
  FramedPath p = FramedPath::root(*vertex, *slot);
  while (star != std::string_view::npos) {
    std::size_t next = text.find('*', star + 1);
    std::string_view name = text.substr(star + 1, next == std::string_view::npos ? std::string_view::npos : next - star - 1);
    if (name.empty()) throw fail("empty arrow name");
    auto index = q.find_arrow(name);
    if (!index) throw Error(ErrorCode::UnknownArrow, "'" + std::string(name) + "' in '" + std::string(text) + "'");
    p = extend(q, p, *index);
    star = next;
  }
  return p;
}

/// All framed paths whose plain part has length <= max_plain_length, canonical order.
inline std::vector<FramedPath> enumerate_framed_paths(const ExtendedQuiver& eq, std::size_t max_plain_length) {
  std::vector<FramedPath> level;
  for (const auto& f : eq.framing) level.push_back(FramedPath::root(f.vertex, f.slot));
  std::vector<FramedPath> out = level;
  for (std::size_t len = 1; len <= max_plain_length; ++len) {
    std::vector<FramedPath> next;
    for (const auto& p : level) {
      for (std::size_t a = 0; a < eq.base.arrows().size(); ++a) {
        if (eq.base.arrow(a).head == p.start) next.push_back(extend(eq.base, p, a));
      }
    }
    std::sort(next.begin(), next.end());
    out.insert(out.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return out;
}

}  // namespace fqr
