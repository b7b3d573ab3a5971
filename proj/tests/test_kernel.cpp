#include <gtest/gtest.h>

#include "support.hpp"

using namespace fqr;
using namespace fqr::test;

namespace {

// Independent determinant: cofactor expansion along the first row.
Rational cofactor_det(const QMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  Rational total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    QMatrix sub(QQ, n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t k = 0, j = 0; k < n; ++k)
        if (k != c) sub(r - 1, j++) = m(r, k);
    Rational term = m(0, c) * cofactor_det(sub);
    total += (c % 2 == 0) ? term : Rational(-term);
  }
  return total;
}

QMatrix random_q(std::mt19937_64& rng, std::size_t r, std::size_t c) {
  QMatrix m(QQ, r, c);
  std::uniform_int_distribution<long> num(-9, 9), den(1, 4);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      Rational x(num(rng), den(rng));
      x.canonicalize();
      m(i, j) = x;
    }
  return m;
}

}  // namespace

TEST(Rational, ParsesReducedForms) {
  EXPECT_EQ(QQ.parse("-6/8"), Rational(-3, 4));
  EXPECT_EQ(QQ.format(QQ.parse("4/2")), "2");
  EXPECT_THROW(QQ.parse("1/0"), Error);
  EXPECT_THROW(QQ.parse("1.5"), Error);
  EXPECT_THROW(QQ.parse(""), Error);
}

TEST(PrimeField, ArithmeticAndMismatch) {
  PrimeField f7(7), f5(5);
  auto a = f7.from_int(3), b = f7.from_int(5);
  EXPECT_EQ((a * b).value(), 1u);
  EXPECT_EQ((a - b).value(), 5u);
  EXPECT_EQ((a / b).value(), (a * b.inverse()).value());
  EXPECT_EQ(f7.from_int(-1).value(), 6u);
  try {
    (void)(a + f5.from_int(1));
    FAIL() << "mixing moduli must throw";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FieldMismatch);
  }
  EXPECT_THROW(PrimeField(6), Error);
  EXPECT_THROW(f7.from_int(0).inverse(), Error);
}

TEST(PrimeField, MatrixFieldMismatch) {
  PrimeField f3(3), f5(5);
  auto a = Matrix<PrimeField>::identity(f3, 2);
  auto b = Matrix<PrimeField>::identity(f5, 2);
  try {
    (void)(a * b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FieldMismatch);
  }
}

TEST(FieldFlag, Parses) {
  EXPECT_TRUE(std::holds_alternative<RationalField>(parse_field_flag("rational")));
  auto f = parse_field_flag("prime:11");
  ASSERT_TRUE(std::holds_alternative<PrimeField>(f));
  EXPECT_EQ(std::get<PrimeField>(f).characteristic(), 11u);
  EXPECT_THROW(parse_field_flag("prime:12"), Error);
  EXPECT_THROW(parse_field_flag("real"), Error);
}

TEST(RrefRank, Examples) {
  auto id = rref_rank(QMatrix::identity(QQ, 2));
  EXPECT_EQ(id.rank, 2u);
  EXPECT_EQ(id.pivots, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(rank(qm({{1, 2}, {2, 4}})), 1u);
  PrimeField f3(3);
  EXPECT_EQ(rank(Matrix<PrimeField>::from_ints(f3, {{1, 2}, {2, 4}})), 1u);
  // Over GF(3) this matrix loses rank; over Q it does not.
  EXPECT_EQ(rank(qm({{1, 1}, {1, 4}})), 2u);
  EXPECT_EQ(rank(Matrix<PrimeField>::from_ints(f3, {{1, 1}, {1, 4}})), 1u);
  auto r = rref_rank(qm({{0, 2, 4}, {1, 1, 1}}));
  EXPECT_EQ(r.reduced, qm({{1, 0, -1}, {0, 1, 2}}));
}

TEST(Invert, Examples) {
  QMatrix expected(QQ, 2, 2, {1, 0, Rational(-1, 2), Rational(1, 2)});
  EXPECT_EQ(invert(qm({{1, 0}, {1, 2}})), expected);
  EXPECT_EQ(invert(QMatrix::identity(QQ, 3)), QMatrix::identity(QQ, 3));
  try {
    invert(qm({{1, 2}, {2, 4}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Singular);
  }
}

TEST(MinorDet, Examples) {
  auto m = qm({{1, 0}, {0, 1}, {5, 7}});
  std::vector<std::size_t> r01{0, 1}, r02{0, 2}, r12{1, 2}, bad{0};
  EXPECT_EQ(minor_det(m, r01), 1);
  EXPECT_EQ(minor_det(m, r02), 7);
  EXPECT_EQ(minor_det(m, r12), -5);
  try {
    minor_det(m, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SubsetSizeMismatch);
  }
}

TEST(KernelBasis, Examples) {
  EXPECT_EQ(kernel_basis(QMatrix::identity(QQ, 2)).cols(), 0u);
  EXPECT_EQ(kernel_basis(QMatrix(QQ, 2, 2)).cols(), 2u);
  auto k = kernel_basis(qm({{1, 0}, {0, 0}}));
  ASSERT_EQ(k.cols(), 1u);
  EXPECT_EQ(k, qm({{0}, {1}}));
}

TEST(KernelProperties, RandomInverseIsExact) {
  std::mt19937_64 rng(11);
  int checked = 0;
  for (int t = 0; t < 100; ++t) {
    auto m = random_q(rng, 4, 4);
    if (rank(m) < 4) continue;
    EXPECT_EQ(invert(m) * m, QMatrix::identity(QQ, 4));
    EXPECT_EQ(m * invert(m), QMatrix::identity(QQ, 4));
    ++checked;
  }
  EXPECT_GT(checked, 90);
}

TEST(KernelProperties, RankNullity) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 100; ++t) {
    std::size_t r = rng() % 5 + 1, c = rng() % 5 + 1;
    auto m = random_q(rng, r, c);
    // Force some rank deficiency half the time.
    if (t % 2 == 0 && r > 1)
      for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = m(0, j) * 2;
    auto k = kernel_basis(m);
    EXPECT_EQ(rank(m) + k.cols(), c);
    EXPECT_TRUE((m * k).is_zero_matrix());
    EXPECT_EQ(rank(k), k.cols());
  }
}

TEST(KernelProperties, MinorDetAgreesWithCofactorOracle) {
  std::mt19937_64 rng(13);
  std::vector<std::size_t> all{0, 1, 2, 3};
  for (int t = 0; t < 100; ++t) {
    auto m = random_q(rng, 4, 4);
    EXPECT_EQ(minor_det(m, all), cofactor_det(m));
    EXPECT_EQ(determinant(m), cofactor_det(m));
  }
}

TEST(KernelProperties, PrimeFieldDeterminantMatchesReducedRational) {
  std::mt19937_64 rng(14);
  PrimeField f(101);
  for (int t = 0; t < 50; ++t) {
    QMatrix m(QQ, 3, 3);
    Matrix<PrimeField> mp(f, 3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        long v = static_cast<long>(rng() % 21) - 10;
        m(i, j) = v;
        mp(i, j) = f.from_int(v);
      }
    EXPECT_EQ(determinant(mp), f.from_rational(determinant(m)));
  }
}
