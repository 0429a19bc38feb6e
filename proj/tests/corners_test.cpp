#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "toric/builders.hpp"
#include "toric/corners.hpp"

namespace toric {
namespace {

using builders::half;
using builders::ivec;

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::InvalidArgument;
}

long euler_characteristic(const CornerComplex& w) {
  long chi = 0;
  for (const auto& c : w.cells) chi += (c.dim % 2) ? -1 : 1;
  return chi;
}

// Boundary normals tight at a point, sorted canonically.
std::vector<IntVector> tight_normals(const std::vector<Halfspace>& hs, const RatVector& eta) {
  std::vector<IntVector> out;
  for (const auto& h : hs)
    if (h.kind == HalfspaceKind::Boundary && h.tight(eta)) out.push_back(h.normal);
  std::sort(out.begin(), out.end(), canonical_before);
  return out;
}

TEST(FromPolyhedron, Square) {
  auto w = from_polyhedron(builders::square_polytope());
  EXPECT_EQ(faces(w, 0).size(), 4u);
  EXPECT_EQ(facets(w).size(), 4u);
  EXPECT_EQ(faces(w, 2).size(), 1u);
  EXPECT_EQ(w.strata.size(), 9u);
  for (auto f : faces(w, 0)) {
    EXPECT_EQ(w.strata[f].index(), 2u);
    EXPECT_EQ(abs(determinant(IntMatrix::from_rows(w.strata[f].basis, 2))), 1);
  }
  EXPECT_EQ(euler_characteristic(w.complex), 1);
}

TEST(FromPolyhedron, Simplex) {
  auto w = from_polyhedron(builders::standard_simplex(2));
  EXPECT_EQ(facets(w).size(), 3u);
  EXPECT_EQ(faces(w, 0).size(), 3u);
}

TEST(FromPolyhedron, Rejections) {
  EXPECT_EQ(code_of([] { from_polyhedron(builders::weighted_cone()); }), ErrorCode::NotUnimodularAtFace);
  PolyhedronSpec flat{2, {half({1, 0}, 0), half({-1, 0}, 0)}};
  EXPECT_EQ(code_of([&] { from_polyhedron(flat); }), ErrorCode::EmptyOrLowerDim);
  PolyhedronSpec empty{2, {half({1, 0}, 1), half({-1, 0}, 1)}};
  EXPECT_EQ(code_of([&] { from_polyhedron(empty); }), ErrorCode::EmptyOrLowerDim);
}

TEST(FromPolyhedron, UnboundedExamples) {
  auto q = from_polyhedron(builders::orthant(2));
  ASSERT_EQ(faces(q, 0).size(), 1u);
  EXPECT_EQ(q.strata[faces(q, 0)[0]].index(), 2u);
  EXPECT_EQ(q.strata[faces(q, 0)[0]].base_value, (RatVector{0, 0}));
  ASSERT_EQ(facets(q).size(), 2u);
  for (auto f : facets(q)) EXPECT_EQ(q.strata[f].index(), 1u);

  auto g = from_polyhedron(builders::whole_space(2));
  EXPECT_EQ(g.strata.size(), 1u);
  EXPECT_TRUE(facets(g).empty());
  for (std::size_t c = 0; c < g.complex.cells.size(); ++c) EXPECT_EQ(index_of(g, c), 0u);
}

TEST(Validate, RoundTrip) {
  auto w = from_polyhedron(builders::square_polytope());
  auto v = validate(w.complex);
  EXPECT_EQ(v.basis, w.basis);
  EXPECT_EQ(v.strata.size(), w.strata.size());
  for (auto f : faces(v, 0)) EXPECT_EQ(v.strata[f].basis.size(), 2u);
}

TEST(Validate, NonPrimitiveNormalInOneChart) {
  auto cx = from_polyhedron(builders::square_polytope()).complex;
  bool changed = false;
  for (auto& ch : cx.charts)
    for (auto& h : ch.cone)
      if (!changed && h.normal == ivec({1, 0})) {
        h.normal = ivec({2, 0});
        h.offset *= 2;
        changed = true;
      }
  ASSERT_TRUE(changed);
  EXPECT_EQ(code_of([&] { validate(cx); }), ErrorCode::InconsistentFaceBasis);
}

TEST(Validate, IncompatibleCharts) {
  auto cx = from_polyhedron(builders::square_polytope()).complex;
  cx.charts[0].translation[0] += 1;
  EXPECT_EQ(code_of([&] { validate(cx); }), ErrorCode::IncompatibleCharts);
}

TEST(Validate, ChartlessInterior) {
  CornerComplex w;
  w.n = 2;
  w.cells = {{0, {}}, {0, {}}, {0, {}}, {1, {{0, -1}, {1, 1}}}, {1, {{1, -1}, {2, 1}}}, {1, {{0, -1}, {2, 1}}},
             {2, {{3, 1}, {4, 1}, {5, -1}}}};
  auto u = validate(w);
  EXPECT_TRUE(u.cohomology_only());
  for (const auto& b : u.basis) EXPECT_TRUE(b.empty());
  EXPECT_EQ(u.strata.size(), 1u);
}

TEST(Validate, BrokenIncidence) {
  CornerComplex w;
  w.n = 2;
  // A 2-cell bounded by an open path.
  w.cells = {{0, {}}, {0, {}}, {0, {}}, {1, {{0, -1}, {1, 1}}}, {1, {{1, -1}, {2, 1}}}, {2, {{3, 1}, {4, 1}}}};
  EXPECT_EQ(code_of([&] { validate(w); }), ErrorCode::InconsistentIncidence);
}

TEST(Glue, HalfPlane) {
  auto ex = builders::half_plane();
  auto w = glue(ex.pieces, ex.walls);
  EXPECT_EQ(facets(w).size(), 1u);
  EXPECT_TRUE(faces(w, 0).empty());
  EXPECT_TRUE(is_embedding(w));
  auto img = moment_image(w);
  ASSERT_EQ(img.status, ImageStatus::Ok);
  EXPECT_EQ(img.image->halfspaces, (std::vector<Halfspace>{half({0, 1}, 0)}));
}

TEST(Glue, SinglePieceIsIdentity) {
  auto p = builders::square_polytope();
  auto a = glue({p}, {});
  auto b = from_polyhedron(p);
  EXPECT_EQ(a.basis, b.basis);
  EXPECT_EQ(a.vertex_image, b.vertex_image);
  EXPECT_EQ(a.strata.size(), b.strata.size());
}

TEST(Glue, BasisMismatch) {
  auto ex = builders::mismatched_half_plane();
  EXPECT_EQ(code_of([&] { glue(ex.pieces, ex.walls); }), ErrorCode::IncompatibleGluing);
}

TEST(Glue, WallsMustBeOpposite) {
  auto ex = builders::half_plane();
  ex.walls = {{0, 0, 1, 1}};
  EXPECT_EQ(code_of([&] { glue(ex.pieces, ex.walls); }), ErrorCode::IncompatibleGluing);
}

TEST(Glue, DoubleCoverIsNotEmbedded) {
  auto ex = builders::double_cover();
  auto w = glue(ex.pieces, ex.walls);
  EXPECT_FALSE(is_embedding(w));
  EXPECT_EQ(moment_image(w).status, ImageStatus::NotEmbedded);
  EXPECT_EQ(w.strata.size(), 1u);
  EXPECT_EQ(euler_characteristic(w.complex), 0);
}

TEST(MomentImage, Tautological) {
  for (const auto& p : {builders::square_polytope(), builders::standard_simplex(2), builders::orthant(2)}) {
    auto w = from_polyhedron(p);
    EXPECT_TRUE(is_embedding(w));
    auto img = moment_image(w);
    ASSERT_EQ(img.status, ImageStatus::Ok);
    EXPECT_EQ(img.image->halfspaces, irredundant_halfspaces(p));
  }
  auto sq = moment_image(from_polyhedron(builders::square_polytope()));
  EXPECT_EQ(sq.image->halfspaces.size(), 4u);
}

TEST(MomentImage, ExplicitComplexUsesCellHulls) {
  auto w = from_polyhedron(builders::standard_simplex(2));
  w.sources.clear();
  auto img = moment_image(w);
  ASSERT_EQ(img.status, ImageStatus::Ok);
  EXPECT_EQ(img.image->halfspaces, irredundant_halfspaces(builders::standard_simplex(2)));
}

TEST(MomentImage, CohomologyOnly) {
  EXPECT_EQ(moment_image(validate(builders::annulus())).status, ImageStatus::Unavailable);
}

PolyhedronSpec transform(const PolyhedronSpec& p, const IntMatrix& g, const RatVector& shift) {
  // Image of P under x -> g x + shift: halfspace <a,x> >= c becomes
  // <g^{-T} a, y> >= c + <g^{-T} a, shift>.
  auto ginv_t = unimodular_inverse(g).transpose();
  PolyhedronSpec out{p.dim, {}};
  for (const auto& h : p.halfspaces) {
    auto a = ginv_t.apply(h.normal);
    out.halfspaces.push_back({a, h.offset + dual_pairing(shift, a), h.kind});
  }
  return out;
}

IntMatrix random_gl2(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> f(-2, 2);
  auto g = IntMatrix::identity(2);
  for (int i = 0; i < 4; ++i) g.add_row(i % 2, 1 - i % 2, Integer(f(rng)));
  if (rng() % 2) g.swap_rows(0, 1);
  return g;
}

TEST(FromPolyhedronProperty, DelzantUnderLatticeMotions) {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<long> num(-7, 7);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = random_gl2(rng);
    RatVector shift{Rational(num(rng)) / 3, Rational(num(rng)) / 2};
    auto p = transform(trial % 2 ? builders::square_polytope() : builders::standard_simplex(2), g, shift);
    auto w = from_polyhedron(p);
    auto hs = irredundant_halfspaces(p);
    EXPECT_EQ(w.strata.size(), trial % 2 ? 9u : 7u);
    for (const auto& s : w.strata) {
      EXPECT_EQ(s.index(), 2 - s.dim);
      EXPECT_EQ(s.basis, tight_normals(hs, s.base_value));
      EXPECT_TRUE(is_unimodular_system(s.basis));
      // Another relative-interior sample: the barycenter of a top cell of the face.
      for (auto c : s.cells)
        if (w.complex.cells[c].dim == s.dim) {
          RatVector eta = barycenter([&] {
            std::vector<RatVector> pts;
            for (auto v : w.vertices[c]) pts.push_back(w.vertex_image[v]);
            return pts;
          }());
          EXPECT_EQ(tight_normals(hs, eta), s.basis);
        }
    }
  }
}

}  // namespace
}  // namespace toric
