#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fqr/error.hpp"
#include "fqr/field.hpp"
#include "fqr/framed_rep.hpp"
#include "fqr/matrix.hpp"

namespace fqr::oracle {

// Plain enumeration over GF(p), independent of the saturation and chart
// machinery. Used only to certify the main engines on tiny inputs.

struct OracleBudget {
  std::uint64_t max_total_dimension = 4;
  std::uint64_t max_enumeration = 1u << 22;
};

namespace detail {

inline std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t cap) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (r > cap / base) return cap + 1;
    r *= base;
  }
  return r;
}

inline void check_dimension(const FramedShape& shape, const OracleBudget& budget) {
  if (static_cast<std::uint64_t>(shape.total_dimension()) > budget.max_total_dimension) {
    throw Error(ErrorCode::BudgetExceeded, "total dimension " + std::to_string(shape.total_dimension()) +
                                               " exceeds " + std::to_string(budget.max_total_dimension));
  }
}

/// All subspaces of GF(p)^n, each as a matrix whose columns are a basis
/// (the transpose of a reduced echelon representative).
inline std::vector<Matrix<PrimeField>> all_subspaces(const PrimeField& field, std::size_t n) {
  const std::uint32_t p = field.characteristic();
  std::vector<Matrix<PrimeField>> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < n; ++c)
      if (mask & (1u << c)) pivots.push_back(c);
    const std::size_t k = pivots.size();
    // Free positions: row r, column c > pivots[r] with c not a pivot.
    std::vector<std::pair<std::size_t, std::size_t>> free;
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = pivots[r] + 1; c < n; ++c)
        if (!(mask & (1u << c))) free.emplace_back(r, c);
    std::vector<std::uint32_t> digits(free.size(), 0);
    while (true) {
      Matrix<PrimeField> rows(field, k, n);
      for (std::size_t r = 0; r < k; ++r) rows(r, pivots[r]) = field.one();
      for (std::size_t f = 0; f < free.size(); ++f) rows(free[f].first, free[f].second) = field.from_int(digits[f]);
      out.push_back(transpose(rows));
      std::size_t f = 0;
      while (f < digits.size() && ++digits[f] == p) digits[f++] = 0;
      if (f == digits.size()) break;
    }
  }
  return out;
}

inline bool contained_in(const Matrix<PrimeField>& vectors, const Matrix<PrimeField>& basis) {
  if (vectors.cols() == 0) return true;
  return rank(hstack(basis, vectors)) == basis.cols();
}

}  // namespace detail

/// Literal stability test: no nonzero graded subspace N with M_a N_{t(a)}
/// inside N_{h(a)} and N_i inside ker f_i.
inline bool stability_bruteforce(const FramedRep<PrimeField>& rep, const OracleBudget& budget = {}) {
  detail::check_dimension(rep.shape, budget);
  const int n = rep.quiver.vertex_count();
  std::vector<std::vector<Matrix<PrimeField>>> candidates;
  std::uint64_t total = 1;
  for (int i = 1; i <= n; ++i) {
    std::vector<Matrix<PrimeField>> inside_kernel;
    for (auto& sub : detail::all_subspaces(rep.field, static_cast<std::size_t>(rep.shape.dim(i)))) {
      if ((rep.framing_at(i) * sub).is_zero_matrix()) inside_kernel.push_back(std::move(sub));
    }
    total *= inside_kernel.size();
    if (total > budget.max_enumeration) throw Error(ErrorCode::BudgetExceeded, "too many graded subspaces");
    candidates.push_back(std::move(inside_kernel));
  }
  std::vector<std::size_t> choice(static_cast<std::size_t>(n), 0);
  while (true) {
    bool nonzero = false;
    for (int i = 0; i < n; ++i) nonzero |= candidates[i][choice[i]].cols() > 0;
    if (nonzero) {
      bool invariant = true;
      for (std::size_t a = 0; a < rep.arrow_maps.size() && invariant; ++a) {
        const Arrow& arr = rep.quiver.arrow(a);
        const auto& src = candidates[arr.tail - 1][choice[arr.tail - 1]];
        const auto& dst = candidates[arr.head - 1][choice[arr.head - 1]];
        invariant = detail::contained_in(rep.map(a) * src, dst);
      }
      if (invariant) return false;
    }
    std::size_t i = 0;
    while (i < choice.size() && ++choice[i] == candidates[i].size()) choice[i++] = 0;
    if (i == choice.size()) break;
  }
  return true;
}

/// Calls visit(g) for each element of GL(alpha) over GF(p): identity first,
/// then the rest in lexicographic order of their entries. Stops when visit returns true.
inline void for_each_group_element(const PrimeField& field, const FramedShape& shape, const OracleBudget& budget,
                                   const std::function<bool(const GroupElement<PrimeField>&)>& visit) {
  detail::check_dimension(shape, budget);
  std::uint64_t digits_count = 0;
  for (int a : shape.alpha) digits_count += static_cast<std::uint64_t>(a) * a;
  if (detail::checked_pow(field.characteristic(), digits_count, budget.max_enumeration) > budget.max_enumeration) {
    throw Error(ErrorCode::BudgetExceeded, "group enumeration exceeds the cap");
  }
  auto identity = GroupElement<PrimeField>::identity(field, shape);
  if (visit(identity)) return;

  std::vector<std::uint32_t> digits(digits_count, 0);
  const std::uint32_t p = field.characteristic();
  while (true) {
    std::vector<Matrix<PrimeField>> parts;
    std::size_t d = 0;
    bool invertible = true;
    for (int a : shape.alpha) {
      Matrix<PrimeField> m(field, static_cast<std::size_t>(a), static_cast<std::size_t>(a));
      for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = field.from_int(digits[d++]);
      invertible = invertible && rank(m) == m.rows();
      parts.push_back(std::move(m));
    }
    if (invertible) {
      GroupElement<PrimeField> g(std::move(parts));
      if (!(g == identity) && visit(g)) return;
    }
    // Most significant digit first, so the enumeration is lexicographic.
    std::size_t k = digits.size();
    while (k > 0 && ++digits[k - 1] == p) digits[--k] = 0;
    if (k == 0) break;
  }
}

struct OrbitResult {
  bool isomorphic = false;
  std::optional<GroupElement<PrimeField>> witness;
};

inline OrbitResult orbit_iso_bruteforce(const FramedRep<PrimeField>& rep1, const FramedRep<PrimeField>& rep2,
                                        const OracleBudget& budget = {}) {
  if (!(rep1.quiver == rep2.quiver) || !(rep1.shape == rep2.shape)) {
    throw Error(ErrorCode::ShapeMismatch, "representations of different quivers or shapes");
  }
  OrbitResult result;
  for_each_group_element(rep1.field, rep1.shape, budget, [&](const GroupElement<PrimeField>& g) {
    if (act(g, rep1) == rep2) {
      result.isomorphic = true;
      result.witness = g;
      return true;
    }
    return false;
  });
  return result;
}

}  // namespace fqr::oracle
