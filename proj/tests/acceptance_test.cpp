// Acceptance suite: one PASS/FAIL line per criterion, with wall time against
// its budget. Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "support/oracles.hpp"
#include "toric/builders.hpp"
#include "toric/numcheck.hpp"
#include "toric/toric.hpp"

namespace {

using namespace toric;
using builders::ivec;

// Pinned tolerances and budgets.
constexpr double kCutTolerance = 1e-10;
constexpr double kFdTolerance = 1e-6;
constexpr double kFdStep = 1e-4;
constexpr double kMinOrder = 1.9;
constexpr double kFlippedFloor = 1e-6;
constexpr std::size_t kCutSamples = 1000;
constexpr std::size_t kHorizontalSamples = 200;
constexpr std::size_t kMomentSamples = 200;
constexpr std::size_t kRoundTrips = 24;
constexpr std::size_t kSnfMatrices = 1000;
constexpr std::uint64_t kSeed = 20240601;

struct Check {
  bool ok = true;
  std::ostringstream why;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) why << what;
    ok = ok && cond;
  }
};

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

bool succeeds(const std::function<void()>& f) {
  try {
    f();
    return true;
  } catch (const Error&) {
    return false;
  }
}

oracle::Grid to_grid(const IntMatrix& m) {
  oracle::Grid g(m.rows(), std::vector<long>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) g[i][j] = m(i, j).get_si();
  return g;
}

IntMatrix from_grid(const oracle::Grid& g) {
  IntMatrix m(g.size(), g.empty() ? 0 : g[0].size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = g[i][j];
  return m;
}

void delzant_validation(Check& c) {
  c.require(succeeds([] { from_polyhedron(builders::square_polytope()); }), "square rejected");
  c.require(succeeds([] { from_polyhedron(builders::standard_simplex(2)); }), "simplex rejected");
  auto code = code_of([] { new_cone(2, {ivec({1, 0}), ivec({1, 2})}, {0, 0}); });
  c.require(code == ErrorCode::NotUnimodular, std::string("cone gave ") + std::string(to_string(code)));
  // Independent check: the normals span a sublattice of index 2.
  auto f = oracle::invariant_factors({{1, 0}, {1, 2}});
  c.require(f.size() == 2 && f[1] == 2, "oracle disagrees on the cone");
}

void convex_classification(Check& c) {
  auto sq = classify_over(from_polyhedron(builders::square_polytope()));
  auto si = classify_over(from_polyhedron(builders::standard_simplex(2)));
  c.require(sq.trivial() && sq.describe() == "trivial", "square: " + sq.describe());
  c.require(si.trivial() && si.describe() == "trivial", "simplex: " + si.describe());
  c.require(delzant_unique(from_polyhedron(builders::square_polytope())).unique(), "square not unique");
  c.require(delzant_unique(from_polyhedron(builders::standard_simplex(2))).unique(), "simplex not unique");
}

void shell_classification(Check& c) {
  auto r = classify_over(validate(builders::punctured_space(3)));
  c.require(r.lattice_copies == 3, "n != 3");
  c.require(r.h2_int.free_rank == 1 && r.h2_int.torsion.empty(), "H2(Z) != Z");
  c.require(r.real_rank == 1, "H2(R) != R");
  c.require(r.describe() == "ℤ³ × ℝ", "described as " + r.describe());
}

void class_round_trip(Check& c) {
  auto w = validate(builders::punctured_space(3));
  auto t = trivial_bundle(w);
  const auto& cx = *t.complex;
  auto gen = generators(cx, 2).free.at(0);
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<long> coef(-2, 2), noise(-3, 3);

  struct Drawn {
    std::vector<long> a;
    long b;
    BundleData bundle;
  };
  std::vector<Drawn> drawn;
  for (std::size_t trial = 0; trial < kRoundTrips; ++trial) {
    std::vector<long> a{coef(rng), coef(rng), coef(rng)};
    long b = coef(rng);
    // Random representatives: generator multiples plus random coboundaries.
    auto a1 = CochainData::zero(cx, 1, Ring::Integers, 3);
    for (auto& v : a1.values)
      for (auto& x : v) x = noise(rng);
    auto b1 = CochainData::zero(cx, 1, Ring::Rationals, 1);
    for (auto& v : b1.values) v[0] = Rational(noise(rng)) / 5;
    auto chern = tensor(gen, {a[0], a[1], a[2]}) + coboundary(a1, cx);
    auto hor_gen = gen;
    hor_gen.ring = Ring::Rationals;
    auto hor = Rational(Rational(b) / 3) * hor_gen + coboundary(b1, cx);

    auto bundle = with_classes(w, t.complex, chern, hor);
    auto out = collapse(bundle);
    // Expected classes from the coboundary-free representatives.
    auto want_a = class_reduce(tensor(gen, {a[0], a[1], a[2]}), cx);
    auto want_b = class_reduce(Rational(Rational(b) / 3) * hor_gen, cx);
    c.require(chern_class(out) == want_a, "Chern class changed in trial " + std::to_string(trial));
    c.require(horizontal_class(out) == want_b, "horizontal class changed in trial " + std::to_string(trial));
    drawn.push_back({a, b, std::move(bundle)});
  }
  for (const auto& x : drawn)
    for (const auto& y : drawn) {
      const bool same = x.a == y.a && x.b == y.b;
      c.require(isomorphic(x.bundle, y.bundle) == same, "isomorphic disagrees with the drawn classes");
    }
}

void snf_suite(Check& c) {
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<int> dim(1, 5);
  for (std::size_t trial = 0; trial < kSnfMatrices && c.ok; ++trial) {
    auto g = oracle::random_grid(rng, dim(rng), dim(rng), 9);
    auto m = from_grid(g);
    auto s = smith_normal_form(m);
    c.require(s.U * m * s.V == s.D, "U M V != D");
    c.require(abs(determinant(s.U)) == 1 && abs(determinant(s.V)) == 1, "U or V not unimodular");
    for (std::size_t i = 0; i < s.D.rows(); ++i)
      for (std::size_t j = 0; j < s.D.cols(); ++j)
        if (i != j) c.require(s.D(i, j) == 0, "D not diagonal");
    auto f = s.invariant_factors();
    for (std::size_t i = 0; i + 1 < f.size(); ++i)
      c.require(mpz_divisible_p(f[i + 1].get_mpz_t(), f[i].get_mpz_t()) != 0, "divisibility chain broken");
    c.require(f == oracle::invariant_factors(g), "invariant factors disagree with minors");
  }
}

void cohomology_sanity(Check& c) {
  constexpr long p = 1000000007;
  const std::vector<std::pair<const char*, CornerComplex>> complexes{
      {"point", builders::point()},
      {"interval", builders::interval()},
      {"square", builders::square()},
      {"annulus", builders::annulus()},
      {"tetrahedron", builders::tetrahedron_boundary()},
      {"cube shell", builders::cube_surface()}};
  for (const auto& [name, w] : complexes) {
    auto cx = cellular_complex(w);
    long cells = 0, betti = 0;
    for (std::size_t k = 0; k <= cx.top(); ++k) {
      const long sign = (k % 2) ? -1 : 1;
      // Rank-nullity: dim C^k = rank into + rank out + b_k.
      const std::size_t in = oracle::rank_mod_p(to_grid(cx.into[k].delta), p);
      const std::size_t out = k + 1 < cx.into.size() ? oracle::rank_mod_p(to_grid(cx.into[k + 1].delta), p) : 0;
      const std::size_t b = cohomology_group(cx, k, Ring::Rationals).free_rank;
      c.require(in + out + b == cx.count(k), std::string(name) + ": rank-nullity fails in degree " + std::to_string(k));
      cells += sign * static_cast<long>(cx.count(k));
      betti += sign * static_cast<long>(b);
    }
    c.require(cells == betti, std::string(name) + ": Euler characteristics differ");
  }
  auto shell = cohomology_group(cellular_complex(builders::punctured_space(3)), 2, Ring::Integers);
  c.require(shell.free_rank == 1 && shell.torsion.empty(), "H2 of the shell is not Z");
}

QuotientResult quotient_of(const ULE& w) { return cn_quotient(collapse(trivial_bundle(w))); }

void cn_quotients(Check& c) {
  auto simplex = quotient_of(from_polyhedron(builders::standard_simplex(2)));
  auto square = quotient_of(from_polyhedron(builders::square_polytope()));
  auto whole = quotient_of(from_polyhedron(builders::whole_space(2)));
  auto ex = builders::double_cover();
  auto cover = quotient_of(glue(ex.pieces, ex.walls));
  c.require(simplex.minimal_n == 3u, "simplex N != 3");
  c.require(square.minimal_n == 4u, "square N != 4");
  c.require(whole.failure == QuotientFailure::NoVertex, std::string("whole space: ") + std::string(to_string(whole.failure)));
  c.require(cover.failure == QuotientFailure::NotEmbedded, std::string("double cover: ") + std::string(to_string(cover.failure)));
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

void cut_identity(Check& c) {
  auto quadrant = new_cone(2, {ivec({1, 0}), ivec({0, 1})}, {0, 0});
  auto r = numcheck::cut_residual(quadrant, numcheck::sample_cone(quadrant, kCutSamples, kSeed));
  c.require(r.samples == kCutSamples, "sample count");
  c.require(r.max_abs_residual < kCutTolerance, "max residual " + sci(r.max_abs_residual));
}

void horizontal_identity(Check& c) {
  numcheck::HorizontalModel m;
  m.n = 2;
  m.beta = {{0, 1}, {-1, 0}};
  auto r = numcheck::horizontal_residual(m, kHorizontalSamples, kFdStep, kSeed);
  const double order = numcheck::convergence_order(m, kHorizontalSamples, numcheck::kOrderStep, kSeed);
  c.require(r.max_abs_residual < kFdTolerance, "residual " + sci(r.max_abs_residual));
  c.require(order >= kMinOrder, "order " + std::to_string(order));
}

void moment_convention(Check& c) {
  auto r = numcheck::moment_gradient_check(1, 1, kMomentSamples, kFdStep, kSeed);
  auto flipped = numcheck::moment_gradient_check(1, 1, kMomentSamples, kFdStep, kSeed, numcheck::Convention::Flipped);
  c.require(r.max_abs_residual < kFdTolerance, "deviation " + sci(r.max_abs_residual));
  c.require(!flipped.passes(kFdTolerance) && flipped.max_abs_residual > kFlippedFloor,
            "flipped control passed with " + sci(flipped.max_abs_residual));
}

struct Criterion {
  const char* name;
  double budget_seconds;
  void (*run)(Check&);
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"Delzant validation (square, simplex; {(1,0),(1,2)} NotUnimodular)", 1, delzant_validation},
      {"classification over convex W is trivial (square, simplex)", 1, convex_classification},
      {"shell n=3 classifies as Z^3 x R", 5, shell_classification},
      {"class round trip through collapse (24 random pairs)", 10, class_round_trip},
      {"Smith normal form vs minor oracle (1000 matrices <= 5x5, |entries| <= 9)", 30, snf_suite},
      {"cohomology: Euler characteristic, rank-nullity, H2(shell) = Z", 5, cohomology_sanity},
      {"C^N quotient: simplex 3, square 4, g* NoVertex, double cover NotEmbedded", 1, cn_quotients},
      {"cut identity on the quadrant (1000 samples, tol 1e-10)", 1, cut_identity},
      {"horizontal identity (tol 1e-6 at h=1e-4, order >= 1.9)", 5, horizontal_identity},
      {"moment convention on T*T^1 x C (tol 1e-6; flipped control fails)", 5, moment_convention},
  };
  int failed = 0;
  int index = 0;
  for (const auto& cr : criteria) {
    ++index;
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.require(secs < cr.budget_seconds, "over budget");
    std::printf("%s  %2d  %s  [%.3f s / %.0f s]%s%s\n", c.ok ? "PASS" : "FAIL", index, cr.name, secs,
                cr.budget_seconds, c.ok ? "" : "  ", c.why.str().c_str());
    failed += c.ok ? 0 : 1;
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed;
}
