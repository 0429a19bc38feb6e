#pragma once

// Small bundled complexes and polyhedra used by the tests, the acceptance
// suite and the CLI's "builtin" inputs.

#include <algorithm>
#include <array>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "toric/corners.hpp"

namespace toric::builders {

/// Cubical complex of the given unit cubes (lower corners in Z^n) and all
/// their faces. No charts.
inline CornerComplex cubical(std::size_t n, const std::vector<std::vector<long>>& corners) {
  using Key = std::pair<std::vector<long>, unsigned>;  // (anchor, mask of free directions)
  std::set<Key> keys;
  for (const auto& c : corners) {
    if (c.size() != n) fail(ErrorCode::DimensionMismatch, "cube corner dimension");
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      // Faces of the cube: fixed directions take offset 0 or 1.
      std::vector<std::size_t> fixed;
      for (std::size_t i = 0; i < n; ++i)
        if (!(mask >> i & 1u)) fixed.push_back(i);
      for (unsigned eps = 0; eps < (1u << fixed.size()); ++eps) {
        auto a = c;
        for (std::size_t j = 0; j < fixed.size(); ++j) a[fixed[j]] += (eps >> j) & 1u;
        keys.insert({a, mask});
      }
    }
  }
  std::vector<Key> sorted(keys.begin(), keys.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const Key& a, const Key& b) {
    return __builtin_popcount(a.second) < __builtin_popcount(b.second);
  });
  std::map<Key, std::size_t> id;
  for (std::size_t i = 0; i < sorted.size(); ++i) id[sorted[i]] = i;

  CornerComplex w;
  w.n = n;
  w.cohomology_only = true;
  for (const auto& [a, mask] : sorted) {
    Cell cell;
    cell.dim = static_cast<std::size_t>(__builtin_popcount(mask));
    int position = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1u)) continue;
      const int s = (position % 2) ? -1 : 1;
      auto upper = a;
      upper[i] += 1;
      cell.boundary.push_back({id.at({a, mask & ~(1u << i)}), -s});
      cell.boundary.push_back({id.at({upper, mask & ~(1u << i)}), s});
      ++position;
    }
    w.cells.push_back(std::move(cell));
  }
  return w;
}

/// Simplicial complex generated by the given maximal simplices. No charts.
inline CornerComplex simplicial(const std::vector<std::vector<std::size_t>>& maximal) {
  std::set<std::vector<std::size_t>> all;
  std::size_t top = 0;
  for (auto s : maximal) {
    std::sort(s.begin(), s.end());
    top = std::max(top, s.size() - 1);
    for (unsigned mask = 1; mask < (1u << s.size()); ++mask) {
      std::vector<std::size_t> f;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (mask >> i & 1u) f.push_back(s[i]);
      all.insert(f);
    }
  }
  std::vector<std::vector<std::size_t>> sorted(all.begin(), all.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  std::map<std::vector<std::size_t>, std::size_t> id;
  for (std::size_t i = 0; i < sorted.size(); ++i) id[sorted[i]] = i;

  CornerComplex w;
  w.n = top;
  w.cohomology_only = true;
  for (const auto& s : sorted) {
    Cell cell;
    cell.dim = s.size() - 1;
    for (std::size_t i = 0; i < s.size() && s.size() > 1; ++i) {
      auto f = s;
      f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
      cell.boundary.push_back({id.at(f), (i % 2) ? -1 : 1});
    }
    w.cells.push_back(std::move(cell));
  }
  return w;
}

inline CornerComplex point() { return simplicial({{0}}); }
inline CornerComplex interval() { return simplicial({{0, 1}}); }
inline CornerComplex square() { return cubical(2, {{0, 0}}); }

/// Eight unit squares around a square hole.
inline CornerComplex annulus() {
  std::vector<std::vector<long>> cs;
  for (long x = 0; x < 3; ++x)
    for (long y = 0; y < 3; ++y)
      if (x != 1 || y != 1) cs.push_back({x, y});
  return cubical(2, cs);
}

inline CornerComplex tetrahedron_boundary() { return simplicial({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}); }

/// Boundary of the unit cube: six squares.
inline CornerComplex cube_surface() {
  auto solid = cubical(3, {{0, 0, 0}});
  CornerComplex w;
  w.n = 2;
  w.cohomology_only = true;
  for (const auto& c : solid.cells)
    if (c.dim < 3) w.cells.push_back(c);
  return w;
}

/// The six-vertex real projective plane.
inline CornerComplex projective_plane() {
  return simplicial({{0, 1, 3}, {0, 1, 4}, {0, 2, 3}, {0, 2, 5}, {0, 4, 5},
                     {1, 2, 4}, {1, 2, 5}, {1, 3, 5}, {2, 3, 4}, {3, 4, 5}});
}

/// Thickened sphere around the origin of R^n: the 3^n grid of unit cubes with
/// the central cube removed. A cohomology-only model of g* minus the origin.
inline CornerComplex punctured_space(std::size_t n) {
  std::vector<std::vector<long>> cs;
  std::vector<long> c(n, 0);
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t x = code;
    bool center = true;
    for (std::size_t i = 0; i < n; ++i) {
      c[i] = static_cast<long>(x % 3) - 1;
      x /= 3;
      center = center && c[i] == 0;
    }
    if (!center) cs.push_back(c);
  }
  return cubical(n, cs);
}

inline IntVector ivec(std::initializer_list<long> xs) {
  IntVector v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

inline Halfspace half(std::initializer_list<long> normal, Rational offset,
                      HalfspaceKind kind = HalfspaceKind::Boundary) {
  return {ivec(normal), std::move(offset), kind};
}

/// [-1,1]^2
inline PolyhedronSpec square_polytope() {
  return {2, {half({1, 0}, -1), half({-1, 0}, -1), half({0, 1}, -1), half({0, -1}, -1)}};
}

/// {x_i >= 0, sum x_i <= 1}
inline PolyhedronSpec standard_simplex(std::size_t n) {
  PolyhedronSpec p{n, {}};
  for (std::size_t i = 0; i < n; ++i) {
    IntVector e(n, Integer(0));
    e[i] = 1;
    p.halfspaces.push_back({e, 0});
  }
  p.halfspaces.push_back({IntVector(n, Integer(-1)), -1});
  return p;
}

inline PolyhedronSpec orthant(std::size_t n) {
  PolyhedronSpec p{n, {}};
  for (std::size_t i = 0; i < n; ++i) {
    IntVector e(n, Integer(0));
    e[i] = 1;
    p.halfspaces.push_back({e, 0});
  }
  return p;
}

inline PolyhedronSpec whole_space(std::size_t n) { return {n, {}}; }

/// {x >= 0, x + 2y >= 0}: a cone violating the Delzant condition at its apex.
inline PolyhedronSpec weighted_cone() { return {2, {half({1, 0}, 0), half({1, 2}, 0)}}; }

/// Two quadrants glued along the y-axis: the closed upper half-plane.
struct GluingExample {
  std::vector<PolyhedronSpec> pieces;
  std::vector<WallIdentification> walls;
};

inline GluingExample half_plane() {
  return {{{2, {half({1, 0}, 0, HalfspaceKind::Cut), half({0, 1}, 0)}},
           {2, {half({-1, 0}, 0, HalfspaceKind::Cut), half({0, 1}, 0)}}},
          {{0, 0, 1, 0}}};
}

/// As half_plane, but the second piece has no boundary along y = 0, so the
/// stabilizers disagree on the seam.
inline GluingExample mismatched_half_plane() {
  return {{{2, {half({1, 0}, 0, HalfspaceKind::Cut), half({0, 1}, 0)}},
           {2, {half({-1, 0}, 0, HalfspaceKind::Cut), half({0, 1}, 0, HalfspaceKind::Cut)}}},
          {{0, 0, 1, 0}}};
}

/// Truncated two-sheeted cover of the punctured plane: eight quarter-annuli
/// glued cyclically, going around the origin twice.
inline GluingExample double_cover() {
  GluingExample g;
  const std::array<std::array<long, 2>, 4> signs{{{1, 1}, {-1, 1}, {-1, -1}, {1, -1}}};
  for (std::size_t i = 0; i < 8; ++i) {
    auto [sx, sy] = signs[i % 4];
    g.pieces.push_back({2,
                        {half({sx, 0}, 0, HalfspaceKind::Cut), half({0, sy}, 0, HalfspaceKind::Cut),
                         half({sx, sy}, 1, HalfspaceKind::Cut)}});
  }
  // Quadrants 0|1 and 2|3 meet on x = 0 (halfspace 0); 1|2 and 3|0 on y = 0 (halfspace 1).
  for (std::size_t i = 0; i < 8; ++i) {
    std::size_t h = (i % 2 == 0) ? 0 : 1;
    g.walls.push_back({i, h, (i + 1) % 8, h});
  }
  return g;
}

}  // namespace toric::builders
