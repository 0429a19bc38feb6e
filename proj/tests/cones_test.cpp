#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "toric/cones.hpp"

namespace toric {
namespace {

IntVector iv(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

RatVector rv(std::initializer_list<long> xs) {
  RatVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

UnimodularCone quadrant() { return new_cone(2, {iv({1, 0}), iv({0, 1})}, rv({0, 0})); }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

TEST(NewCone, Examples) {
  auto q = quadrant();
  EXPECT_EQ(q.size(), 2u);
  auto all = new_cone(2, {}, {});
  EXPECT_EQ(all, UnimodularCone::whole_space(2));
  EXPECT_EQ(code_of([] { new_cone(2, {iv({1, 0}), iv({1, 2})}, rv({0, 0})); }), ErrorCode::NotUnimodular);
  EXPECT_EQ(code_of([] { new_cone(2, {iv({2, 0})}, rv({0})); }), ErrorCode::NotPrimitive);
  EXPECT_EQ(code_of([] { new_cone(2, {iv({1, 0}), iv({1, 0})}, rv({0, 1})); }), ErrorCode::DuplicateNormal);
  EXPECT_EQ(code_of([] { new_cone(2, {iv({1, 0, 0})}, rv({0})); }), ErrorCode::DimensionMismatch);
}

TEST(Contains, Examples) {
  auto q = quadrant();
  EXPECT_TRUE(contains(q, rv({1, 1})));
  EXPECT_FALSE(contains(q, rv({-1, 0})));
  EXPECT_TRUE(contains(UnimodularCone::whole_space(2), rv({-7, 3})));
  EXPECT_THROW(contains(q, rv({1})), Error);
}

TEST(ActiveSet, Examples) {
  auto q = quadrant();
  EXPECT_EQ(active_set(q, rv({0, 3})), (FaceSelector{0}));
  EXPECT_EQ(active_set(q, rv({0, 0})), (FaceSelector{0, 1}));
  EXPECT_TRUE(active_set(q, rv({2, 5})).empty());
  EXPECT_EQ(code_of([&] { active_set(q, rv({-1, 0})); }), ErrorCode::PointNotInCone);
}

TEST(FaceData, Examples) {
  auto q = quadrant();
  auto v = face_data(q, {0, 1});
  EXPECT_EQ(v.basis, (std::vector<IntVector>{iv({1, 0}), iv({0, 1})}));
  EXPECT_EQ(v.dim, 0u);
  auto whole = face_data(q, {});
  EXPECT_TRUE(whole.basis.empty());
  EXPECT_EQ(whole.dim, 2u);
  auto orthant = new_cone(3, {iv({1, 0, 0}), iv({0, 1, 0}), iv({0, 0, 1})}, rv({0, 0, 0}));
  auto f = face_data(orthant, {1});
  EXPECT_EQ(f.basis, (std::vector<IntVector>{iv({0, 1, 0})}));
  EXPECT_EQ(f.dim, 2u);
  EXPECT_EQ(code_of([&] { face_data(q, {2}); }), ErrorCode::InvalidIndex);
}

TEST(Canonicalize, Examples) {
  HalfspaceSet scaled{2, {{iv({2, 0}), 0}, {iv({0, 3}), 0}}};
  EXPECT_EQ(canonicalize(scaled), quadrant());

  HalfspaceSet redundant{2, {{iv({1, 0}), 0}, {iv({0, 1}), 0}, {iv({1, 1}), -5}}};
  EXPECT_EQ(canonicalize(redundant), quadrant());

  HalfspaceSet empty{2, {{iv({1, 0}), 0}, {iv({-1, 0}), 1}}};
  EXPECT_EQ(code_of([&] { canonicalize(empty); }), ErrorCode::EmptyCone);

  HalfspaceSet weighted{2, {{iv({1, 0}), 0}, {iv({1, 2}), 0}}};
  EXPECT_EQ(code_of([&] { canonicalize(weighted); }), ErrorCode::NotUnimodular);

  // Scaling divides the offset as well.
  HalfspaceSet shifted{2, {{iv({3, 0}), 1}}};
  auto c = canonicalize(shifted);
  EXPECT_EQ(c.offsets(), (RatVector{Rational(1, 3)}));
}

TEST(CommonCone, Examples) {
  auto q = quadrant();
  auto c = common_cone(q, q, {{{0}, {0}}});
  EXPECT_EQ(c, new_cone(2, {iv({1, 0})}, rv({0})));
  EXPECT_EQ(common_cone(q, q, {}), UnimodularCone::whole_space(2));

  auto a = new_cone(2, {iv({1, 0})}, rv({0}));
  auto b = new_cone(2, {iv({1, 0})}, rv({1}));
  EXPECT_EQ(code_of([&] { common_cone(a, b, {{{0}, {0}}}); }), ErrorCode::OffsetMismatch);
}

// Random cones of the form g(orthant) + shift with g in GL(n, Z).
struct RandomCone {
  std::size_t n;
  std::vector<Halfspace> hs;
};

IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n) {
  auto m = IntMatrix::identity(n);
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<long> f(-2, 2);
  for (int step = 0; step < 6 && n > 1; ++step) {
    std::size_t i = idx(rng), j = idx(rng);
    if (i != j) m.add_row(i, j, Integer(f(rng)));
  }
  return m;
}

RandomCone random_cone(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dn(1, 4);
  std::uniform_int_distribution<long> off(-5, 5);
  RandomCone rc;
  rc.n = dn(rng);
  auto g = random_unimodular(rng, rc.n);
  std::size_t k = std::uniform_int_distribution<std::size_t>(0, rc.n)(rng);
  for (std::size_t i = 0; i < k; ++i) rc.hs.push_back({g.row(i), Rational(off(rng)) / 2});
  return rc;
}

TEST(CanonicalizeProperty, InvariantUnderPermutationScalingRedundancy) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> scale(1, 4);
  for (int trial = 0; trial < 60; ++trial) {
    auto rc = random_cone(rng);
    auto base = canonicalize({rc.n, rc.hs});
    EXPECT_EQ(canonicalize({rc.n, rc.hs}), base) << "deterministic";

    auto twisted = rc.hs;
    std::shuffle(twisted.begin(), twisted.end(), rng);
    for (auto& h : twisted) {
      long s = scale(rng);
      for (auto& x : h.normal) x *= s;
      h.offset *= s;
    }
    // Redundant: a positive combination of two constraints, loosened.
    if (rc.hs.size() >= 2) {
      Halfspace r{rc.hs[0].normal, rc.hs[0].offset + rc.hs[1].offset - 3};
      for (std::size_t j = 0; j < rc.n; ++j) r.normal[j] += rc.hs[1].normal[j];
      if (content(r.normal) != 0) twisted.push_back(r);
    }
    if (!rc.hs.empty()) twisted.push_back({rc.hs[0].normal, rc.hs[0].offset - 1});
    EXPECT_EQ(canonicalize({rc.n, twisted}), base);

    std::vector<Halfspace> again;
    for (std::size_t i = 0; i < base.size(); ++i) again.push_back({base.normals()[i], base.offsets()[i]});
    EXPECT_EQ(canonicalize({rc.n, again}), base) << "idempotent";
  }
}

TEST(ActiveSetProperty, FaceBasisIsUnimodularAndVertexIsUnique) {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<long> coord(-4, 4);
  int hits = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto rc = random_cone(rng);
    auto c = canonicalize({rc.n, rc.hs});
    RatVector eta(rc.n);
    for (auto& x : eta) x = Rational(coord(rng)) / 2;
    if (!contains(c, eta)) continue;
    ++hits;
    auto sel = active_set(c, eta);
    EXPECT_TRUE(is_unimodular_system(face_data(c, sel).basis));
    if (c.size() == rc.n && sel.size() == rc.n) {
      // All constraints tight: eta is the unique solution of the square system.
      RatMatrix a(rc.n, rc.n);
      for (std::size_t i = 0; i < rc.n; ++i)
        for (std::size_t j = 0; j < rc.n; ++j) a(i, j) = c.normals()[i][j];
      EXPECT_EQ(solve_square(a, c.offsets()), eta);
    }
  }
  EXPECT_GT(hits, 30);
}

TEST(CommonConeProperty, SymmetricAndContainsBoth) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    auto rc = random_cone(rng);
    auto a = canonicalize({rc.n, rc.hs});
    std::vector<Halfspace> hs = rc.hs;
    std::shuffle(hs.begin(), hs.end(), rng);
    auto b = new_cone(rc.n, [&] {
      std::vector<IntVector> ns;
      for (auto& h : hs) ns.push_back(primitive(h.normal).first);
      return ns;
    }(), [&] {
      RatVector os;
      for (auto& h : hs) os.push_back(h.offset);
      return os;
    }());
    FaceSelector sa, sb;
    for (std::size_t i = 0; i < a.size(); ++i) sa.push_back(i);
    for (std::size_t i = 0; i < b.size(); ++i) sb.push_back(i);
    std::vector<std::pair<FaceSelector, FaceSelector>> s{{sa, sb}}, swapped{{sb, sa}};
    auto ab = common_cone(a, b, s);
    EXPECT_EQ(ab, common_cone(b, a, swapped));
    // Every constraint of the common cone is a constraint of a: a is inside.
    for (std::size_t i = 0; i < ab.size(); ++i) {
      auto it = std::find(a.normals().begin(), a.normals().end(), ab.normals()[i]);
      ASSERT_NE(it, a.normals().end());
      EXPECT_EQ(a.offsets()[static_cast<std::size_t>(it - a.normals().begin())], ab.offsets()[i]);
    }
  }
}

}  // namespace
}  // namespace toric
