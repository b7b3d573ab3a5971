#include <gtest/gtest.h>

#include "support.hpp"

using namespace fqr;
using namespace fqr::test;

namespace {

using PMatrix = Matrix<PrimeField>;
const PrimeField F2(2);
const PrimeField F3(3);

FramedRep<PrimeField> l1(const PrimeField& f, std::initializer_list<std::initializer_list<long>> a,
                         std::initializer_list<std::initializer_list<long>> framing) {
  return loop_rep(f, {PMatrix::from_ints(f, a)}, PMatrix::from_ints(f, framing));
}

}  // namespace

TEST(StabilityOracle, Examples) {
  EXPECT_FALSE(oracle::stability_bruteforce(l1(F2, {{0, 0}, {0, 1}}, {{1, 0}})));
  EXPECT_TRUE(oracle::stability_bruteforce(l1(F2, {{0, 1}, {0, 0}}, {{1, 0}})));
  EXPECT_FALSE(oracle::stability_bruteforce(l1(F2, {{1, 1}, {0, 1}}, {{0, 0}})));
}

TEST(StabilityOracle, SubspaceCounts) {
  // Number of subspaces of GF(p)^n: sum of Gaussian binomials.
  EXPECT_EQ(oracle::detail::all_subspaces(F2, 2).size(), 5u);
  EXPECT_EQ(oracle::detail::all_subspaces(F3, 2).size(), 6u);
  EXPECT_EQ(oracle::detail::all_subspaces(F2, 3).size(), 16u);
  EXPECT_EQ(oracle::detail::all_subspaces(F2, 0).size(), 1u);
}

TEST(StabilityOracle, Budget) {
  auto rep = FramedRep<PrimeField>::zero(F2, Quiver::loops(1), loop_shape(5, 1));
  try {
    oracle::stability_bruteforce(rep);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
  }
  oracle::OracleBudget small{4, 10};
  auto rep2 = FramedRep<PrimeField>::zero(F3, Quiver::loops(1), loop_shape(2, 1));
  EXPECT_THROW(oracle::orbit_iso_bruteforce(rep2, rep2, small), Error);
}

TEST(OrbitOracle, Examples) {
  auto a = l1(F2, {{0, 1}, {1, 0}}, {{1, 0}});
  auto b = l1(F2, {{0, 1}, {1, 1}}, {{1, 0}});
  EXPECT_FALSE(oracle::orbit_iso_bruteforce(a, b).isomorphic);

  auto self = oracle::orbit_iso_bruteforce(a, a);
  ASSERT_TRUE(self.isomorphic);
  EXPECT_EQ(*self.witness, GroupElement<PrimeField>::identity(F2, a.shape));

  GroupElement<PrimeField> g({PMatrix::from_ints(F2, {{1, 1}, {0, 1}})});
  auto moved = act(g, a);
  auto r = oracle::orbit_iso_bruteforce(a, moved);
  ASSERT_TRUE(r.isomorphic);
  EXPECT_EQ(act(*r.witness, a), moved);
}

TEST(OrbitOracle, GroupEnumerationCounts) {
  std::size_t count = 0;
  oracle::for_each_group_element(F2, loop_shape(2, 1), {}, [&](const auto&) {
    ++count;
    return false;
  });
  EXPECT_EQ(count, 6u);
  count = 0;
  oracle::for_each_group_element(F3, loop_shape(2, 1), {}, [&](const auto&) {
    ++count;
    return false;
  });
  EXPECT_EQ(count, 48u);
  count = 0;
  oracle::for_each_group_element(F2, FramedShape{{1, 2}, {0, 0}}, {}, [&](const auto&) {
    ++count;
    return false;
  });
  EXPECT_EQ(count, 6u);
}

// The exhaustive GF(2) sweeps live in the acceptance binary; here GF(3) is sampled.
TEST(OracleEquivalence, SampledGF3) {
  std::mt19937_64 rng(61);
  int stable = 0, total = 0;
  for (int q = 0; q <= 2; ++q)
    for (int k = 0; k <= 2; ++k)
      for (int m = 1; m <= 2; ++m) {
        auto quiver = Quiver::loops(q);
        for (int t = 0; t < 30; ++t, ++total) {
          auto rep = any_rep(F3, quiver, loop_shape(m, k), rng, 1);
          bool s = is_stable(rep);
          EXPECT_EQ(s, oracle::stability_bruteforce(rep));
          EXPECT_EQ(s, max_submodule_in_kernel(rep).is_zero());
          stable += s;
        }
      }
  EXPECT_GE(total, 500);
  EXPECT_GT(stable, 50);
}

TEST(OracleEquivalence, SampledIsoGF3) {
  std::mt19937_64 rng(62);
  auto q = Quiver::loops(1);
  auto s = loop_shape(2, 1);
  auto atlas = ShapeAtlas::build(q, s);
  for (int t = 0; t < 40; ++t) {
    auto a = stable_rep(F3, q, s, rng, 1);
    auto b = t % 2 ? act(random_group_element(F3, s, rng, 1), a) : stable_rep(F3, q, s, rng, 1);
    auto d = iso_check(a, b, atlas);
    auto o = oracle::orbit_iso_bruteforce(a, b);
    EXPECT_EQ(d.verdict == IsoVerdict::Isomorphic, o.isomorphic);
    if (d.witness) {
      EXPECT_EQ(act(*d.witness, a), b);
    }
  }
}
