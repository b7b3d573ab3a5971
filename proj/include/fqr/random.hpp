#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>

#include "fqr/error.hpp"
#include "fqr/field.hpp"
#include "fqr/framed_rep.hpp"
#include "fqr/matrix.hpp"
#include "fqr/quiver.hpp"

namespace fqr {

inline constexpr std::size_t kRandomRetryCap = 1000;

/// Uniform integer in [-bound, bound] drawn straight from the engine, so the
/// stream is identical across standard library implementations.
inline long draw_entry(std::mt19937_64& engine, long bound) {
  const std::uint64_t width = 2 * static_cast<std::uint64_t>(bound) + 1;
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % width;
  std::uint64_t x;
  do x = engine(); while (x >= limit);
  return static_cast<long>(x % width) - bound;
}

template <ExactField F>
Matrix<F> random_matrix(const F& field, std::size_t rows, std::size_t cols, std::mt19937_64& engine, long bound) {
  Matrix<F> m(field, rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = field.from_int(draw_entry(engine, bound));
  return m;
}

template <ExactField F>
FramedRep<F> random_rep(const F& field, const Quiver& q, const FramedShape& shape, std::mt19937_64& engine, long bound) {
  auto rep = FramedRep<F>::zero(field, q, shape);
  for (auto& m : rep.arrow_maps) m = random_matrix(field, m.rows(), m.cols(), engine, bound);
  for (auto& m : rep.framing) m = random_matrix(field, m.rows(), m.cols(), engine, bound);
  return rep;
}

/// Random invertible element of GL(alpha), by rejection.
template <ExactField F>
GroupElement<F> random_group_element(const F& field, const FramedShape& shape, std::mt19937_64& engine, long bound) {
  std::vector<Matrix<F>> parts;
  for (int a : shape.alpha) {
    const auto n = static_cast<std::size_t>(a);
    for (std::size_t attempt = 0;; ++attempt) {
      auto m = random_matrix(field, n, n, engine, bound);
      if (rank(m) == n) {
        parts.push_back(std::move(m));
        break;
      }
      if (attempt == kRandomRetryCap) throw Error(ErrorCode::GaveUp, "no invertible matrix found");
    }
  }
  return GroupElement<F>(std::move(parts));
}

template <ExactField F>
struct StableSample {
  FramedRep<F> rep;
  std::size_t rejections = 0;
};

template <ExactField F>
StableSample<F> random_stable(const F& field, const Quiver& q, const FramedShape& shape, std::uint64_t seed, long entry_bound) {
  if (entry_bound < 1) throw Error(ErrorCode::InvalidArgument, "entry bound must be at least 1");
  check_shape(q, shape);
  std::mt19937_64 engine(seed);
  for (std::size_t rejections = 0; rejections < kRandomRetryCap; ++rejections) {
    auto rep = random_rep(field, q, shape, engine, entry_bound);
    if (is_stable(rep)) return {std::move(rep), rejections};
  }
  throw Error(ErrorCode::GaveUp, "no stable sample after " + std::to_string(kRandomRetryCap) + " draws");
}

}  // namespace fqr
