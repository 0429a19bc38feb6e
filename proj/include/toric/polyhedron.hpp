#pragma once

// Exact face lattices of small rational polyhedra. Unbounded polyhedra are
// made finite by a large axis-aligned truncation box that contains every
// minimal face, which preserves the homotopy type and the set of face
// stabilizers.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "toric/cones.hpp"
#include "toric/fourier_motzkin.hpp"
#include "toric/lattice.hpp"

namespace toric {

using PolyhedronSpec = HalfspaceSet;

inline bool lex_less(const RatVector& a, const RatVector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

namespace detail {

inline void combinations(std::size_t m, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                         const auto& visit) {
  if (cur.size() == k) {
    visit(cur);
    return;
  }
  for (std::size_t i = start; i + (k - cur.size()) <= m; ++i) {
    cur.push_back(i);
    combinations(m, k, i + 1, cur, visit);
    cur.pop_back();
  }
}

}  // namespace detail

/// Vertices of {x : a_i.x >= b_i, e_j.x = f_j}, sorted lexicographically.
inline std::vector<RatVector> enumerate_vertices(std::size_t n, const std::vector<Halfspace>& ineqs,
                                                 const std::vector<std::pair<RatVector, Rational>>& eqs = {}) {
  std::vector<RatVector> out;
  if (eqs.size() > n) return out;
  const std::size_t pick = n - eqs.size();
  std::vector<std::size_t> cur;
  detail::combinations(ineqs.size(), pick, 0, cur, [&](const std::vector<std::size_t>& idx) {
    RatMatrix a(n, n);
    RatVector b(n);
    std::size_t r = 0;
    for (const auto& [e, f] : eqs) {
      for (std::size_t j = 0; j < n; ++j) a(r, j) = e[j];
      b[r++] = f;
    }
    for (auto i : idx) {
      for (std::size_t j = 0; j < n; ++j) a(r, j) = ineqs[i].normal[j];
      b[r++] = ineqs[i].offset;
    }
    auto x = solve_square(a, b);
    if (!x) return;
    for (const auto& h : ineqs)
      if (!h.contains(*x)) return;
    for (auto& c : *x) c.canonicalize();
    out.push_back(std::move(*x));
  });
  std::sort(out.begin(), out.end(), lex_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline std::vector<LinearConstraint> as_constraints(const std::vector<Halfspace>& hs,
                                                    Relation rel = Relation::GreaterEqual) {
  std::vector<LinearConstraint> cons;
  for (const auto& h : hs) cons.push_back(detail::as_constraint(h, rel));
  return cons;
}

/// True iff the polyhedron has nonempty interior.
inline bool is_full_dimensional(std::size_t n, const std::vector<Halfspace>& hs) {
  return is_feasible(n, as_constraints(hs, Relation::Greater));
}

/// True iff the recession cone {d : a_i.d >= 0} is {0}.
inline bool is_bounded(std::size_t n, const std::vector<Halfspace>& hs) {
  for (std::size_t i = 0; i < n; ++i)
    for (int sign : {1, -1}) {
      std::vector<LinearConstraint> cons;
      for (const auto& h : hs) cons.push_back({to_rational(h.normal), Rational(0), Relation::GreaterEqual});
      RatVector e(n, Rational(0));
      e[i] = sign;
      cons.push_back({e, Rational(0), Relation::Greater});
      if (is_feasible(n, cons)) return false;
    }
  return true;
}

/// One point on each minimal face: the vertices of P intersected with the
/// orthogonal complement of its lineality space.
inline std::vector<RatVector> minimal_face_points(std::size_t n, const std::vector<Halfspace>& hs) {
  RatMatrix a(hs.size(), n);
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = hs[i].normal[j];
  std::vector<std::pair<RatVector, Rational>> eqs;
  for (auto& u : null_space(a)) eqs.emplace_back(std::move(u), Rational(0));
  return enumerate_vertices(n, hs, eqs);
}

/// Smallest integer R >= 2 with every minimal face point strictly inside [-R+1, R-1]^n.
inline Integer truncation_radius(std::size_t n, const std::vector<Halfspace>& hs) {
  Integer r = 2;
  for (const auto& p : minimal_face_points(n, hs))
    for (const auto& c : p) {
      Rational a = abs(c);
      Integer f;
      mpz_cdiv_q(f.get_mpz_t(), a.get_num_mpz_t(), a.get_den_mpz_t());
      if (f + 2 > r) r = f + 2;
    }
  return r;
}

inline std::vector<Halfspace> truncation_box(std::size_t n, const Integer& radius) {
  std::vector<Halfspace> box;
  for (std::size_t i = 0; i < n; ++i) {
    IntVector e(n, Integer(0));
    e[i] = 1;
    box.push_back({e, Rational(-radius), HalfspaceKind::Truncation});
    e[i] = -1;
    box.push_back({e, Rational(-radius), HalfspaceKind::Truncation});
  }
  return box;
}

/// Affine dimension of a finite point set (-1 for the empty set).
inline long affine_dimension(const std::vector<RatVector>& pts) {
  if (pts.empty()) return -1;
  const std::size_t n = pts[0].size();
  RatMatrix m(pts.size() - 1, n);
  for (std::size_t i = 1; i < pts.size(); ++i)
    for (std::size_t j = 0; j < n; ++j) m(i - 1, j) = pts[i][j] - pts[0][j];
  return static_cast<long>(rank(m));
}

inline RatVector barycenter(const std::vector<RatVector>& pts) {
  RatVector c(pts.at(0).size(), Rational(0));
  for (const auto& p : pts)
    for (std::size_t j = 0; j < c.size(); ++j) c[j] += p[j];
  for (auto& x : c) {
    x /= static_cast<long>(pts.size());
    x.canonicalize();
  }
  return c;
}

/// Face of a polytope, identified by its vertex set.
struct PolytopeFace {
  std::vector<std::size_t> vertices;  // indices into Polytope::vertices, increasing
  std::size_t dim = 0;
  std::vector<std::size_t> tight;  // constraints tight on the whole face
  RatVector barycenter;
};

/// Face lattice of a bounded full-dimensional polyhedron. Faces are sorted by
/// dimension, then by vertex set; the last face is the polytope itself.
struct Polytope {
  std::size_t dim = 0;
  std::vector<Halfspace> constraints;
  std::vector<RatVector> vertices;
  std::vector<PolytopeFace> faces;

  bool contains_face(std::size_t outer, std::size_t inner) const {
    const auto& o = faces[outer].vertices;
    const auto& i = faces[inner].vertices;
    return std::includes(o.begin(), o.end(), i.begin(), i.end());
  }
};

inline Polytope polytope_faces(std::size_t n, std::vector<Halfspace> constraints) {
  Polytope p;
  p.dim = n;
  p.vertices = enumerate_vertices(n, constraints);
  const std::size_t nv = p.vertices.size();

  auto tight_vertices = [&](const Halfspace& h) {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < nv; ++v)
      if (h.tight(p.vertices[v])) out.push_back(v);
    return out;
  };
  auto points = [&](const std::vector<std::size_t>& idx) {
    std::vector<RatVector> pts;
    for (auto i : idx) pts.push_back(p.vertices[i]);
    return pts;
  };

  std::vector<std::size_t> all(nv);
  for (std::size_t v = 0; v < nv; ++v) all[v] = v;
  std::vector<std::vector<std::size_t>> facets;
  for (const auto& h : constraints) {
    auto t = tight_vertices(h);
    if (affine_dimension(points(t)) == static_cast<long>(n) - 1 &&
        std::find(facets.begin(), facets.end(), t) == facets.end())
      facets.push_back(std::move(t));
  }

  std::set<std::vector<std::size_t>> seen{all};
  std::vector<std::vector<std::size_t>> queue{all};
  for (std::size_t q = 0; q < queue.size(); ++q) {
    for (const auto& f : facets) {
      std::vector<std::size_t> meet;
      std::set_intersection(queue[q].begin(), queue[q].end(), f.begin(), f.end(), std::back_inserter(meet));
      if (meet.empty() || seen.count(meet)) continue;
      seen.insert(meet);
      queue.push_back(std::move(meet));
    }
  }

  for (const auto& vs : seen) {
    PolytopeFace face;
    face.vertices = vs;
    auto pts = points(vs);
    face.dim = static_cast<std::size_t>(affine_dimension(pts));
    for (std::size_t c = 0; c < constraints.size(); ++c) {
      bool all_tight = std::all_of(pts.begin(), pts.end(), [&](const RatVector& x) { return constraints[c].tight(x); });
      if (all_tight) face.tight.push_back(c);
    }
    face.barycenter = barycenter(pts);
    p.faces.push_back(std::move(face));
  }
  std::sort(p.faces.begin(), p.faces.end(), [](const PolytopeFace& a, const PolytopeFace& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.vertices < b.vertices;
  });
  p.constraints = std::move(constraints);
  return p;
}

/// Irredundant primitive description, sorted canonically (cut halfspaces
/// included). Throws EmptyOrLowerDim when the interior is empty.
inline std::vector<Halfspace> irredundant_halfspaces(const PolyhedronSpec& spec) {
  std::vector<Halfspace> hs;
  if (!detail::primitivize(spec, hs)) fail(ErrorCode::EmptyOrLowerDim, "a zero-normal halfspace is violated");
  if (!is_full_dimensional(spec.dim, hs)) fail(ErrorCode::EmptyOrLowerDim, "polyhedron has empty interior");
  return detail::drop_redundant(spec.dim, std::move(hs));
}

/// Exact volume times n! of a bounded polytope, by summing over the flags of
/// its barycentric subdivision.
inline Rational scaled_volume(const Polytope& p) {
  const std::size_t n = p.dim;
  Rational total = 0;
  // Depth-first over chains F_0 < F_1 < ... < F_n with dim F_i = i.
  std::vector<std::size_t> chain;
  auto recurse = [&](auto&& self, std::size_t face) -> void {
    chain.push_back(face);
    if (p.faces[face].dim == n) {
      RatMatrix m(n, n);
      const auto& base = p.faces[chain[0]].barycenter;
      for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i - 1, j) = p.faces[chain[i]].barycenter[j] - base[j];
      total += abs(determinant(m));
    } else {
      for (std::size_t g = 0; g < p.faces.size(); ++g)
        if (p.faces[g].dim == p.faces[face].dim + 1 && p.contains_face(g, face)) self(self, g);
    }
    chain.pop_back();
  };
  for (std::size_t f = 0; f < p.faces.size(); ++f)
    if (p.faces[f].dim == 0) recurse(recurse, f);
  return total;
}

}  // namespace toric
