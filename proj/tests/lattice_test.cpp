#include <random>

#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "toric/lattice.hpp"

namespace toric {
namespace {

IntMatrix from_grid(const oracle::Grid& g) {
  IntMatrix m(g.size(), g.empty() ? 0 : g[0].size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = g[i][j];
  return m;
}

IntVector iv(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

void expect_valid_snf(const IntMatrix& m, const SNFResult& s) {
  EXPECT_EQ(s.U * m * s.V, s.D);
  EXPECT_EQ(abs(determinant(s.U)), 1);
  EXPECT_EQ(abs(determinant(s.V)), 1);
  for (std::size_t i = 0; i < s.D.rows(); ++i)
    for (std::size_t j = 0; j < s.D.cols(); ++j)
      if (i != j) EXPECT_EQ(s.D(i, j), 0);
  auto f = s.invariant_factors();
  for (std::size_t i = 0; i < f.size(); ++i) {
    EXPECT_GT(f[i], 0);
    if (i + 1 < f.size()) EXPECT_TRUE(mpz_divisible_p(f[i + 1].get_mpz_t(), f[i].get_mpz_t()));
  }
}

TEST(SmithNormalForm, IdentityIsFixed) {
  auto id = IntMatrix::identity(2);
  auto s = smith_normal_form(id);
  EXPECT_EQ(s.U, id);
  EXPECT_EQ(s.D, id);
  EXPECT_EQ(s.V, id);
}

TEST(SmithNormalForm, DiagonalTwoThree) {
  IntMatrix m{{2, 0}, {0, 3}};
  auto s = smith_normal_form(m);
  expect_valid_snf(m, s);
  EXPECT_EQ(s.D, (IntMatrix{{1, 0}, {0, 6}}));
}

TEST(SmithNormalForm, TwoByTwo) {
  IntMatrix m{{1, 2}, {3, 4}};
  auto s = smith_normal_form(m);
  expect_valid_snf(m, s);
  EXPECT_EQ(s.D, (IntMatrix{{1, 0}, {0, 2}}));
}

TEST(SmithNormalForm, RectangularAndZero) {
  IntMatrix z(2, 3);
  auto s = smith_normal_form(z);
  expect_valid_snf(z, s);
  EXPECT_TRUE(s.invariant_factors().empty());

  IntMatrix r{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}};
  auto t = smith_normal_form(r);
  expect_valid_snf(r, t);
  // Determinantal divisors: D1 = 2, D2 = 12, D3 = |det| = 144.
  EXPECT_EQ(t.invariant_factors(), (std::vector<Integer>{2, 6, 12}));
}

TEST(SmithNormalForm, AgreesWithMinorOracleOnRandomMatrices) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dim(1, 4);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = oracle::random_grid(rng, dim(rng), dim(rng), 9);
    auto m = from_grid(g);
    auto s = smith_normal_form(m);
    expect_valid_snf(m, s);
    EXPECT_EQ(s.invariant_factors(), oracle::invariant_factors(g));
  }
}

TEST(SmithNormalForm, Deterministic) {
  IntMatrix m{{4, -6, 8}, {3, 9, -1}, {0, 5, 5}};
  auto a = smith_normal_form(m);
  auto b = smith_normal_form(m);
  EXPECT_EQ(a.U, b.U);
  EXPECT_EQ(a.D, b.D);
  EXPECT_EQ(a.V, b.V);
}

TEST(Determinant, MatchesLeibniz) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    auto g = oracle::random_grid(rng, 4, 4, 9);
    EXPECT_EQ(determinant(from_grid(g)), oracle::leibniz_det(g));
  }
}

TEST(UnimodularSystem, Examples) {
  std::vector<IntVector> std2{iv({1, 0}), iv({0, 1})};
  EXPECT_TRUE(is_unimodular_system(std2));
  std::vector<IntVector> weighted{iv({1, 0}), iv({1, 2})};
  EXPECT_FALSE(is_unimodular_system(weighted));
  std::vector<IntVector> prim{iv({2, 3})};
  EXPECT_TRUE(is_unimodular_system(prim));
  EXPECT_TRUE(is_unimodular_system(std::vector<IntVector>{}));
  std::vector<IntVector> bad{iv({1, 0}), iv({1, 0, 0})};
  EXPECT_THROW(is_unimodular_system(bad), Error);
}

TEST(ExtendToBasis, Examples) {
  std::vector<IntVector> std2{iv({1, 0}), iv({0, 1})};
  EXPECT_EQ(extend_to_basis(std2, 2), std2);

  std::vector<IntVector> one{iv({2, 3})};
  auto b = extend_to_basis(one, 2);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0], iv({2, 3}));
  EXPECT_EQ(abs(determinant(IntMatrix::from_rows(b, 2))), 1);

  auto e = extend_to_basis(std::vector<IntVector>{}, 2);
  EXPECT_EQ(abs(determinant(IntMatrix::from_rows(e, 2))), 1);

  std::vector<IntVector> weighted{iv({1, 0}), iv({1, 2})};
  try {
    extend_to_basis(weighted, 2);
    FAIL() << "expected NotUnimodular";
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::NotUnimodular);
  }
}

// Two independent routes to the same question must agree.
TEST(ExtendToBasis, AgreesWithUnimodularTest) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> dn(1, 5);
  std::uniform_int_distribution<long> entry(-9, 9);
  int unimodular = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = dn(rng);
    std::size_t k = std::uniform_int_distribution<std::size_t>(0, n)(rng);
    std::vector<IntVector> vs(k, IntVector(n));
    for (auto& v : vs)
      for (auto& x : v) {
        // Bias toward small entries so unimodular systems actually occur.
        long r = entry(rng);
        x = (std::abs(r) > 2 && trial % 2) ? 0 : r;
      }
    bool expected = is_unimodular_system(vs);
    bool extended = false;
    try {
      auto b = extend_to_basis(vs, n);
      extended = abs(determinant(IntMatrix::from_rows(b, n))) == 1;
      for (std::size_t i = 0; i < k; ++i) EXPECT_EQ(b[i], vs[i]);
    } catch (const Error& err) {
      EXPECT_EQ(err.code(), ErrorCode::NotUnimodular);
    }
    EXPECT_EQ(expected, extended);
    unimodular += expected;
  }
  EXPECT_GT(unimodular, 20);
}

TEST(Primitive, Examples) {
  auto [p, g] = primitive(iv({2, 4}));
  EXPECT_EQ(p, iv({1, 2}));
  EXPECT_EQ(g, 2);
  auto [q, h] = primitive(iv({1, 0, 0}));
  EXPECT_EQ(q, iv({1, 0, 0}));
  EXPECT_EQ(h, 1);
  auto [r, k] = primitive(iv({-6, 9}));
  EXPECT_EQ(r, iv({-2, 3}));
  EXPECT_EQ(k, 3);
  try {
    primitive(iv({0, 0}));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::ZeroVector);
  }
}

TEST(Primitive, Idempotent) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> entry(-30, 30);
  for (int t = 0; t < 100; ++t) {
    IntVector v{entry(rng), entry(rng), entry(rng)};
    if (content(v) == 0) continue;
    auto [p, g] = primitive(v);
    auto [p2, g2] = primitive(p);
    EXPECT_EQ(p2, p);
    EXPECT_EQ(g2, 1);
  }
}

TEST(DualPairing, Examples) {
  RatVector eta{Rational(1, 2), Rational(1, 3)};
  EXPECT_EQ(dual_pairing(eta, iv({2, 3})), 2);
  EXPECT_EQ(dual_pairing(RatVector{0, 0}, iv({5, -7})), 0);
  EXPECT_EQ(dual_pairing(RatVector{1, 0}, iv({0, 1})), 0);
  EXPECT_THROW(dual_pairing(RatVector{1}, iv({0, 1})), Error);
}

}  // namespace
}  // namespace toric
