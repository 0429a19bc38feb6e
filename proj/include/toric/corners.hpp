#pragma once

// Finite models of manifolds with corners W together with a piecewise-affine
// unimodular local embedding psi: W -> g*. A complex is a regular CW complex
// given by cells and signed boundary incidences; each top cell carries a
// chart (an affine map on local vertex coordinates plus a cone). Cells are
// assumed to map onto the convex hull of their vertex images.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "toric/cones.hpp"
#include "toric/error.hpp"
#include "toric/fourier_motzkin.hpp"
#include "toric/lattice.hpp"
#include "toric/polyhedron.hpp"

namespace toric {

struct Incidence {
  std::size_t cell = 0;
  int sign = 1;

  friend bool operator==(const Incidence&, const Incidence&) = default;
};

struct Cell {
  std::size_t dim = 0;
  std::vector<Incidence> boundary;
  /// For 0-cells built by subdivision: dimension of the face whose barycenter
  /// the vertex is; -1 otherwise.
  int origin = -1;
};

struct Chart {
  std::size_t top = 0;
  std::vector<Halfspace> cone;
  RatMatrix matrix;
  RatVector translation;
  std::map<std::size_t, RatVector> local;  // vertex id -> local coordinates

  RatVector image(std::span<const Rational> x) const {
    auto y = matrix.apply(x);
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] += translation[i];
      y[i].canonicalize();
    }
    return y;
  }
};

struct CornerComplex {
  std::size_t n = 0;
  std::vector<Cell> cells;
  std::vector<Chart> charts;
  /// Trivial chart data: only the cell structure is meaningful.
  bool cohomology_only = false;
};

/// Closure of a stratum of points with a common stabilizer basis.
struct Stratum {
  std::size_t dim = 0;
  std::vector<IntVector> basis;
  std::vector<std::size_t> cells;
  RatVector base_value;  // empty for cohomology-only complexes

  std::size_t index() const noexcept { return basis.size(); }
};

/// A validated complex with per-cell stabilizer bases.
struct ULE {
  CornerComplex complex;
  std::vector<std::vector<IntVector>> basis;  // per cell, canonical order
  std::vector<RatVector> vertex_image;        // per cell; empty unless a charted 0-cell
  std::vector<std::vector<std::size_t>> vertices;  // per cell, sorted 0-cell ids of its closure
  std::vector<Stratum> strata;
  std::vector<std::size_t> stratum_of;  // per cell
  /// Polyhedral pieces this ULE was built from, and the common truncation radius.
  std::vector<std::vector<Halfspace>> sources;
  std::optional<Integer> radius;

  std::size_t dim() const noexcept { return complex.n; }
  bool cohomology_only() const noexcept { return complex.cohomology_only; }
};

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;  // the smaller id stays representative
  }

 private:
  std::vector<std::size_t> parent_;
};

inline std::vector<std::vector<std::size_t>> closure_vertices(const CornerComplex& w) {
  std::vector<std::vector<std::size_t>> out(w.cells.size());
  std::vector<std::size_t> order(w.cells.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return w.cells[a].dim < w.cells[b].dim; });
  for (auto c : order) {
    if (w.cells[c].dim == 0) {
      out[c] = {c};
      continue;
    }
    std::set<std::size_t> vs;
    for (const auto& inc : w.cells[c].boundary) vs.insert(out[inc.cell].begin(), out[inc.cell].end());
    out[c].assign(vs.begin(), vs.end());
  }
  return out;
}

/// Top cells whose closure contains each cell.
inline std::vector<std::vector<std::size_t>> containing_tops(const CornerComplex& w) {
  std::vector<std::set<std::size_t>> up(w.cells.size());
  std::vector<std::size_t> order(w.cells.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return w.cells[a].dim > w.cells[b].dim; });
  for (auto c : order) {
    if (w.cells[c].dim == w.n) up[c].insert(c);
    for (const auto& inc : w.cells[c].boundary) up[inc.cell].insert(up[c].begin(), up[c].end());
  }
  std::vector<std::vector<std::size_t>> out;
  for (auto& s : up) out.emplace_back(s.begin(), s.end());
  return out;
}

inline void check_structure(const CornerComplex& w) {
  const std::size_t m = w.cells.size();
  for (std::size_t c = 0; c < m; ++c) {
    const auto& cell = w.cells[c];
    if (cell.dim > w.n)
      fail(ErrorCode::InconsistentIncidence, "cell " + std::to_string(c) + " exceeds the ambient dimension");
    if (cell.dim == 0 && !cell.boundary.empty())
      fail(ErrorCode::InconsistentIncidence, "0-cell " + std::to_string(c) + " has a boundary");
    for (const auto& inc : cell.boundary) {
      if (inc.cell >= m || w.cells[inc.cell].dim + 1 != cell.dim)
        fail(ErrorCode::InconsistentIncidence, "cell " + std::to_string(c) + " has an invalid boundary entry");
      if (inc.sign != 1 && inc.sign != -1)
        fail(ErrorCode::InconsistentIncidence, "incidence numbers must be +1 or -1");
    }
    // Boundary of the boundary vanishes mod 2.
    std::map<std::size_t, int> parity;
    for (const auto& f : cell.boundary)
      for (const auto& g : w.cells[f.cell].boundary) parity[g.cell] ^= 1;
    for (const auto& [g, p] : parity)
      if (p) fail(ErrorCode::InconsistentIncidence, "boundary of the boundary of cell " + std::to_string(c) + " is nonzero");
  }
  auto tops = containing_tops(w);
  for (std::size_t c = 0; c < m; ++c)
    if (tops[c].empty())
      fail(ErrorCode::InconsistentIncidence, "cell " + std::to_string(c) + " is not in the closure of a top cell");
}

inline void sort_basis(std::vector<IntVector>& b) { std::sort(b.begin(), b.end(), canonical_before); }

inline std::string basis_string(const std::vector<IntVector>& b) {
  std::string s = "{";
  for (std::size_t i = 0; i < b.size(); ++i) s += (i ? "," : "") + to_string(b[i]);
  return s + "}";
}

inline RatVector cell_barycenter(const ULE& u, std::size_t c) {
  std::vector<RatVector> pts;
  for (auto v : u.vertices[c]) pts.push_back(u.vertex_image[v]);
  return barycenter(pts);
}

inline UnimodularCone chart_cone(std::size_t n, const Chart& ch) {
  std::vector<IntVector> normals;
  RatVector offsets;
  for (const auto& h : ch.cone) {
    normals.push_back(h.normal);
    offsets.push_back(h.offset);
  }
  try {
    return new_cone(n, std::move(normals), std::move(offsets));
  } catch (const Error& e) {
    fail(ErrorCode::InconsistentFaceBasis, "chart of top cell " + std::to_string(ch.top) + ": " + e.what());
  }
}

inline void build_strata(ULE& u) {
  const auto& w = u.complex;
  const std::size_t m = w.cells.size();
  DisjointSets ds(m);
  for (std::size_t c = 0; c < m; ++c)
    for (const auto& inc : w.cells[c].boundary)
      if (u.basis[c].size() == u.basis[inc.cell].size()) ds.unite(c, inc.cell);

  std::map<std::size_t, std::size_t> root_to_stratum;
  std::vector<Stratum> strata;
  u.stratum_of.assign(m, 0);
  for (std::size_t c = 0; c < m; ++c) {
    auto r = ds.find(c);
    auto it = root_to_stratum.find(r);
    if (it == root_to_stratum.end()) {
      it = root_to_stratum.emplace(r, strata.size()).first;
      strata.push_back({});
      strata.back().basis = u.basis[c];
    }
    auto& s = strata[it->second];
    if (s.basis != u.basis[c])
      fail(ErrorCode::InconsistentFaceBasis, "stabilizer basis jumps from " + basis_string(s.basis) + " to " +
                                                 basis_string(u.basis[c]) + " inside one face (cell " +
                                                 std::to_string(c) + ")");
    s.cells.push_back(c);
    s.dim = std::max(s.dim, w.cells[c].dim);
  }

  for (auto& s : strata) {
    if (w.cohomology_only) continue;
    if (s.dim + s.index() != w.n)
      fail(ErrorCode::InconsistentFaceBasis, "face with basis " + basis_string(s.basis) + " has dimension " +
                                                 std::to_string(s.dim) + ", expected " +
                                                 std::to_string(w.n - s.index()));
    // Base value: the barycenter vertex of the largest subdivided face, else
    // the barycenter of the first cell of maximal dimension.
    std::optional<std::size_t> best;
    for (auto c : s.cells)
      if (w.cells[c].dim == 0 && w.cells[c].origin >= 0 && (!best || w.cells[c].origin > w.cells[*best].origin))
        best = c;
    if (best) {
      s.base_value = u.vertex_image[*best];
    } else {
      std::size_t top = s.cells.front();
      for (auto c : s.cells)
        if (w.cells[c].dim > w.cells[top].dim) top = c;
      s.base_value = cell_barycenter(u, top);
    }
  }

  std::vector<std::size_t> order(strata.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (strata[a].dim != strata[b].dim) return strata[a].dim < strata[b].dim;
    return lex_less(strata[a].base_value, strata[b].base_value);
  });
  u.strata.clear();
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (auto c : strata[order[i]].cells) u.stratum_of[c] = i;
    u.strata.push_back(std::move(strata[order[i]]));
  }
}

}  // namespace detail

/// Checks the cell structure and the charts and computes the stabilizer
/// basis of every cell. A complex without charts is treated as
/// cohomology-only.
inline ULE validate(CornerComplex w) {
  detail::check_structure(w);
  if (w.charts.empty()) w.cohomology_only = true;

  ULE u;
  u.vertices = detail::closure_vertices(w);
  const std::size_t m = w.cells.size();
  u.basis.assign(m, {});
  u.vertex_image.assign(m, {});
  u.complex = std::move(w);
  const auto& cx = u.complex;
  const std::size_t n = cx.n;

  if (cx.cohomology_only) {
    detail::build_strata(u);
    return u;
  }

  // Charts: one per top cell, invertible, covering its vertices.
  std::vector<std::optional<std::size_t>> chart_of(m);
  for (std::size_t i = 0; i < cx.charts.size(); ++i) {
    const auto& ch = cx.charts[i];
    const std::string where = "chart of cell " + std::to_string(ch.top);
    if (ch.top >= m || cx.cells[ch.top].dim != n) fail(ErrorCode::IncompatibleCharts, where + ": not a top cell");
    if (chart_of[ch.top]) fail(ErrorCode::IncompatibleCharts, where + ": more than one chart");
    chart_of[ch.top] = i;
    if (ch.matrix.rows() != n || ch.matrix.cols() != n || ch.translation.size() != n)
      fail(ErrorCode::DimensionMismatch, where + ": affine map has the wrong shape");
    if (rank(ch.matrix) != n) fail(ErrorCode::IncompatibleCharts, where + ": affine map is not injective");
    for (const auto& h : ch.cone)
      if (h.normal.size() != n) fail(ErrorCode::DimensionMismatch, where + ": cone normal dimension");
    for (auto v : u.vertices[ch.top]) {
      auto it = ch.local.find(v);
      if (it == ch.local.end())
        fail(ErrorCode::IncompatibleCharts, where + ": no local coordinates for vertex " + std::to_string(v));
      if (it->second.size() != n) fail(ErrorCode::DimensionMismatch, where + ": local coordinate dimension");
      auto img = ch.image(it->second);
      if (u.vertex_image[v].empty()) {
        u.vertex_image[v] = img;
      } else if (u.vertex_image[v] != img) {
        fail(ErrorCode::IncompatibleCharts, "vertex " + std::to_string(v) + " maps to " +
                                                to_string(u.vertex_image[v]) + " and " + to_string(img));
      }
      for (const auto& h : ch.cone)
        if (!h.contains(img))
          fail(ErrorCode::IncompatibleCharts, where + ": vertex image " + to_string(img) + " outside the chart cone");
    }
  }
  for (std::size_t c = 0; c < m; ++c)
    if (cx.cells[c].dim == n && !chart_of[c])
      fail(ErrorCode::IncompatibleCharts, "top cell " + std::to_string(c) + " has no chart");

  // Per-cell bases from every chart containing the cell.
  auto tops = detail::containing_tops(cx);
  std::vector<std::vector<FaceSelector>> active(m);
  for (std::size_t c = 0; c < m; ++c) {
    auto eta = detail::cell_barycenter(u, c);
    bool first = true;
    for (auto t : tops[c]) {
      const auto& ch = cx.charts[*chart_of[t]];
      std::vector<IntVector> b;
      FaceSelector sel;
      for (std::size_t i = 0; i < ch.cone.size(); ++i)
        if (ch.cone[i].tight(eta) && ch.cone[i].kind == HalfspaceKind::Boundary) {
          b.push_back(ch.cone[i].normal);
          sel.push_back(i);
        }
      for (const auto& v : b)
        if (!is_primitive(v))
          fail(ErrorCode::InconsistentFaceBasis, "cell " + std::to_string(c) + " is assigned the non-primitive normal " + to_string(v));
      if (!is_unimodular_system(b))
        fail(ErrorCode::InconsistentFaceBasis, "cell " + std::to_string(c) + " has non-unimodular basis " + detail::basis_string(b));
      detail::sort_basis(b);
      if (first) {
        u.basis[c] = std::move(b);
        first = false;
      } else if (u.basis[c] != b) {
        fail(ErrorCode::InconsistentFaceBasis, "cell " + std::to_string(c) + " has basis " + detail::basis_string(u.basis[c]) +
                                                   " in one chart and " + detail::basis_string(b) + " in another");
      }
      active[c].push_back(std::move(sel));
    }
  }

  // Overlap compatibility between every pair of charts sharing a cell.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::pair<FaceSelector, FaceSelector>>> overlaps;
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t i = 0; i < tops[c].size(); ++i)
      for (std::size_t j = i + 1; j < tops[c].size(); ++j)
        overlaps[{tops[c][i], tops[c][j]}].emplace_back(active[c][i], active[c][j]);
  std::vector<std::optional<UnimodularCone>> cones(cx.charts.size());
  auto cone_of = [&](std::size_t top) -> const UnimodularCone& {
    auto i = *chart_of[top];
    if (!cones[i]) cones[i] = detail::chart_cone(n, cx.charts[i]);
    return *cones[i];
  };
  for (const auto& [pair, shared] : overlaps) {
    try {
      common_cone(cone_of(pair.first), cone_of(pair.second), shared);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::OffsetMismatch) throw;
      fail(ErrorCode::IncompatibleCharts, "charts of cells " + std::to_string(pair.first) + " and " +
                                              std::to_string(pair.second) + ": " + e.what());
    }
  }

  detail::build_strata(u);
  return u;
}

namespace detail {

/// Barycentric subdivision of a polytope: one simplex per chain of faces.
/// Every top simplex gets the identity chart with the boundary constraints
/// tight at its vertex of origin.
inline CornerComplex subdivide(const Polytope& p) {
  const std::size_t nf = p.faces.size();
  std::vector<std::vector<std::size_t>> up(nf);  // faces strictly containing f
  for (std::size_t f = 0; f < nf; ++f)
    for (std::size_t g = 0; g < nf; ++g)
      if (p.faces[g].dim > p.faces[f].dim && p.contains_face(g, f)) up[f].push_back(g);

  std::vector<std::vector<std::size_t>> chains;
  std::vector<std::size_t> cur;
  auto extend = [&](auto&& self, std::size_t f) -> void {
    cur.push_back(f);
    chains.push_back(cur);
    for (auto g : up[f]) self(self, g);
    cur.pop_back();
  };
  for (std::size_t f = 0; f < nf; ++f) extend(extend, f);
  std::stable_sort(chains.begin(), chains.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  std::map<std::vector<std::size_t>, std::size_t> id;
  for (std::size_t i = 0; i < chains.size(); ++i) id.emplace(chains[i], i);

  CornerComplex w;
  w.n = p.dim;
  for (const auto& ch : chains) {
    Cell cell;
    cell.dim = ch.size() - 1;
    if (cell.dim == 0) cell.origin = static_cast<int>(p.faces[ch[0]].dim);
    for (std::size_t i = 0; i < ch.size() && ch.size() > 1; ++i) {
      auto face = ch;
      face.erase(face.begin() + static_cast<std::ptrdiff_t>(i));
      cell.boundary.push_back({id.at(face), (i % 2) ? -1 : 1});
    }
    w.cells.push_back(std::move(cell));
  }
  for (const auto& ch : chains) {
    if (ch.size() != p.dim + 1) continue;
    Chart chart;
    chart.top = id.at(ch);
    for (auto c : p.faces[ch[0]].tight)
      if (p.constraints[c].kind == HalfspaceKind::Boundary) chart.cone.push_back(p.constraints[c]);
    chart.matrix = RatMatrix::identity(p.dim);
    chart.translation.assign(p.dim, Rational(0));
    for (auto f : ch) chart.local[id.at({f})] = p.faces[f].barycenter;
    w.charts.push_back(std::move(chart));
  }
  return w;
}

inline void check_delzant(const Polytope& p) {
  for (const auto& f : p.faces) {
    std::vector<IntVector> normals;
    for (auto c : f.tight)
      if (p.constraints[c].kind == HalfspaceKind::Boundary) normals.push_back(p.constraints[c].normal);
    if (!is_unimodular_system(normals))
      fail(ErrorCode::NotUnimodularAtFace, std::to_string(f.dim) + "-face at " + to_string(f.barycenter) +
                                               " with normals " + basis_string(normals));
  }
}

/// Irredundant halfspaces of one piece, its truncation radius if unbounded.
inline std::pair<std::vector<Halfspace>, std::optional<Integer>> prepare_piece(const PolyhedronSpec& spec) {
  if (spec.dim == 0) fail(ErrorCode::EmptyOrLowerDim, "ambient dimension must be positive");
  auto hs = irredundant_halfspaces(spec);
  std::optional<Integer> r;
  if (!is_bounded(spec.dim, hs)) r = truncation_radius(spec.dim, hs);
  return {std::move(hs), r};
}

inline ULE build_piece(std::size_t n, const std::vector<Halfspace>& hs, const std::optional<Integer>& radius) {
  auto constraints = hs;
  if (radius) {
    auto box = truncation_box(n, *radius);
    constraints.insert(constraints.end(), box.begin(), box.end());
  }
  auto poly = polytope_faces(n, std::move(constraints));
  check_delzant(poly);
  auto u = validate(subdivide(poly));
  u.sources = {hs};
  u.radius = radius;
  return u;
}

}  // namespace detail

/// The tautological ULE of a Delzant polyhedron (psi = inclusion).
/// Unbounded polyhedra are truncated by a box containing every minimal face;
/// the truncation walls carry no stabilizer data.
inline ULE from_polyhedron(const PolyhedronSpec& spec) {
  auto [hs, r] = detail::prepare_piece(spec);
  return detail::build_piece(spec.dim, hs, r);
}

/// Where a cell went under identify_cells: its new index and whether its
/// orientation was kept (+1) or reversed (-1).
struct CellImage {
  std::size_t index = 0;
  int sign = 1;
};

/// Identifies cells of equal dimension pairwise. Orientations of identified
/// cells are reconciled; identified cells must have matching boundaries.
inline CornerComplex identify_cells(const CornerComplex& w, const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                    std::vector<CellImage>* images = nullptr) {
  const std::size_t m = w.cells.size();
  detail::DisjointSets ds(m);
  for (auto [a, b] : pairs) {
    if (a >= m || b >= m) fail(ErrorCode::IncompatibleGluing, "gluing refers to an unknown cell");
    if (w.cells[a].dim != w.cells[b].dim) fail(ErrorCode::IncompatibleGluing, "glued cells differ in dimension");
    ds.unite(a, b);
  }
  auto cells = w.cells;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> cofaces(m);  // (coface, position)
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t k = 0; k < cells[c].boundary.size(); ++k) cofaces[cells[c].boundary[k].cell].emplace_back(c, k);

  auto mapped = [&](std::size_t c) {
    std::map<std::size_t, int> b;
    for (const auto& inc : cells[c].boundary) b[ds.find(inc.cell)] += inc.sign;
    return b;
  };
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cells[a].dim < cells[b].dim; });
  std::vector<bool> flipped(m, false);
  for (auto c : order) {
    auto r = ds.find(c);
    if (r == c || cells[c].dim == 0) continue;
    auto mine = mapped(c), theirs = mapped(r);
    if (mine == theirs) continue;
    for (auto& [k, s] : mine) s = -s;
    if (mine != theirs)
      fail(ErrorCode::IncompatibleGluing, "cells " + std::to_string(r) + " and " + std::to_string(c) + " have different boundaries");
    for (auto& inc : cells[c].boundary) inc.sign = -inc.sign;
    for (auto [up, k] : cofaces[c]) cells[up].boundary[k].sign = -cells[up].boundary[k].sign;
    flipped[c] = true;
  }

  std::vector<std::size_t> new_id(m, m);
  CornerComplex out;
  out.n = w.n;
  out.cohomology_only = w.cohomology_only;
  for (std::size_t c = 0; c < m; ++c)
    if (ds.find(c) == c) {
      new_id[c] = out.cells.size();
      out.cells.push_back(cells[c]);
    }
  for (auto& cell : out.cells)
    for (auto& inc : cell.boundary) inc.cell = new_id[ds.find(inc.cell)];
  if (images) {
    images->clear();
    for (std::size_t c = 0; c < m; ++c) images->push_back({new_id[ds.find(c)], flipped[c] ? -1 : 1});
  }
  for (const auto& ch : w.charts) {
    Chart c = ch;
    c.top = new_id[ds.find(ch.top)];
    c.local.clear();
    for (const auto& [v, x] : ch.local) {
      auto nv = new_id[ds.find(v)];
      auto [it, fresh] = c.local.emplace(nv, x);
      if (!fresh && it->second != x)
        fail(ErrorCode::IncompatibleGluing, "glued vertices have different local coordinates in one chart");
    }
    out.charts.push_back(std::move(c));
  }
  return out;
}

/// Identifies the wall {<x, normal_a> = offset_a} of piece a with the wall
/// {<x, normal_b> = offset_b} of piece b, where the halfspaces are given by
/// their positions in the pieces' original descriptions.
struct WallIdentification {
  std::size_t piece_a = 0;
  std::size_t halfspace_a = 0;
  std::size_t piece_b = 0;
  std::size_t halfspace_b = 0;
};

/// Glues polyhedral pieces along walls. Pieces are rebuilt with a common
/// truncation radius so that walls are cellulated identically.
inline ULE glue(const std::vector<PolyhedronSpec>& pieces, const std::vector<WallIdentification>& ids) {
  if (pieces.empty()) fail(ErrorCode::InvalidArgument, "nothing to glue");
  const std::size_t n = pieces[0].dim;
  std::vector<std::vector<Halfspace>> hs;
  std::optional<Integer> radius;
  for (const auto& p : pieces) {
    if (p.dim != n) fail(ErrorCode::DimensionMismatch, "pieces of different dimension");
    auto [h, r] = detail::prepare_piece(p);
    hs.push_back(std::move(h));
    if (r && (!radius || *r > *radius)) radius = r;
  }
  if (radius)
    for (const auto& h : hs) {
      // Bounded pieces must sit inside the common box.
      auto r = truncation_radius(n, h);
      if (r > *radius) radius = r;
    }

  std::vector<ULE> built;
  for (const auto& h : hs) built.push_back(detail::build_piece(n, h, radius));

  CornerComplex all;
  all.n = n;
  std::vector<std::size_t> offset;
  for (const auto& b : built) {
    const std::size_t base = all.cells.size();
    offset.push_back(base);
    for (auto cell : b.complex.cells) {
      for (auto& inc : cell.boundary) inc.cell += base;
      all.cells.push_back(std::move(cell));
    }
    for (auto ch : b.complex.charts) {
      ch.top += base;
      std::map<std::size_t, RatVector> local;
      for (auto& [v, x] : ch.local) local.emplace(v + base, std::move(x));
      ch.local = std::move(local);
      all.charts.push_back(std::move(ch));
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& id : ids) {
    const std::string where = "wall " + std::to_string(id.halfspace_a) + " of piece " + std::to_string(id.piece_a) +
                              " and wall " + std::to_string(id.halfspace_b) + " of piece " + std::to_string(id.piece_b);
    if (id.piece_a >= pieces.size() || id.piece_b >= pieces.size() ||
        id.halfspace_a >= pieces[id.piece_a].halfspaces.size() || id.halfspace_b >= pieces[id.piece_b].halfspaces.size())
      fail(ErrorCode::IncompatibleGluing, where + ": index out of range");
    const auto& ha = pieces[id.piece_a].halfspaces[id.halfspace_a];
    const auto& hb = pieces[id.piece_b].halfspaces[id.halfspace_b];
    auto [pa, ga] = primitive(ha.normal);
    auto [pb, gb] = primitive(hb.normal);
    Rational oa = ha.offset / Rational(ga), ob = hb.offset / Rational(gb);
    IntVector neg = pb;
    for (auto& x : neg) x = -x;
    if (pa != neg || oa != -ob) fail(ErrorCode::IncompatibleGluing, where + ": walls are not opposite sides of one hyperplane");
    Halfspace wall{pa, oa};

    auto wall_cells = [&](std::size_t piece) {
      const auto& u = built[piece];
      std::map<std::vector<RatVector>, std::size_t> out;
      for (std::size_t c = 0; c < u.complex.cells.size(); ++c) {
        std::vector<RatVector> key;
        bool on = true;
        for (auto v : u.vertices[c]) {
          if (!wall.tight(u.vertex_image[v])) {
            on = false;
            break;
          }
          key.push_back(u.vertex_image[v]);
        }
        if (!on) continue;
        std::sort(key.begin(), key.end(), lex_less);
        out.emplace(std::move(key), c);
      }
      return out;
    };
    auto ca = wall_cells(id.piece_a), cb = wall_cells(id.piece_b);
    if (ca.size() != cb.size()) fail(ErrorCode::IncompatibleGluing, where + ": walls are cellulated differently");
    for (const auto& [key, a] : ca) {
      auto it = cb.find(key);
      if (it == cb.end()) fail(ErrorCode::IncompatibleGluing, where + ": walls are cellulated differently");
      const auto& ba = built[id.piece_a].basis[a];
      const auto& bb = built[id.piece_b].basis[it->second];
      if (ba != bb)
        fail(ErrorCode::IncompatibleGluing, where + ": stabilizer " + detail::basis_string(ba) + " meets " +
                                                detail::basis_string(bb) + " at " + to_string(barycenter(key)));
      pairs.emplace_back(a + offset[id.piece_a], it->second + offset[id.piece_b]);
    }
  }

  ULE out;
  try {
    out = validate(identify_cells(all, pairs));
  } catch (const Error& e) {
    fail(ErrorCode::IncompatibleGluing, e.what());
  }
  out.sources = std::move(hs);
  out.radius = radius;
  return out;
}

/// Faces of dimension k, as indices into W.strata.
inline std::vector<std::size_t> faces(const ULE& w, std::size_t k) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < w.strata.size(); ++i)
    if (w.strata[i].dim == k) out.push_back(i);
  return out;
}

inline std::vector<std::size_t> facets(const ULE& w) {
  if (w.dim() == 0) return {};
  return faces(w, w.dim() - 1);
}

/// Number of independent circles fixing the points of a cell.
inline std::size_t index_of(const ULE& w, std::size_t cell) {
  if (cell >= w.basis.size()) fail(ErrorCode::InvalidFace, "unknown cell " + std::to_string(cell));
  return w.basis[cell].size();
}

namespace detail {

struct Box {
  RatVector lo, hi;
};

inline Box bounding_box(const ULE& u, std::size_t c) {
  Box b{u.vertex_image[u.vertices[c][0]], u.vertex_image[u.vertices[c][0]]};
  for (auto v : u.vertices[c])
    for (std::size_t j = 0; j < b.lo.size(); ++j) {
      b.lo[j] = std::min(b.lo[j], u.vertex_image[v][j]);
      b.hi[j] = std::max(b.hi[j], u.vertex_image[v][j]);
    }
  return b;
}

/// Relative interiors of conv(A) and conv(B) meet iff some strictly positive
/// convex combinations agree.
inline bool relative_interiors_meet(const std::vector<RatVector>& a, const std::vector<RatVector>& b) {
  const std::size_t n = a[0].size(), na = a.size(), nv = na + b.size();
  std::vector<LinearConstraint> cons;
  for (std::size_t i = 0; i < nv; ++i) {
    RatVector e(nv, Rational(0));
    e[i] = 1;
    cons.push_back({e, 0, Relation::Greater});
  }
  RatVector sa(nv, Rational(0)), sb(nv, Rational(0));
  for (std::size_t i = 0; i < nv; ++i) (i < na ? sa : sb)[i] = 1;
  cons.push_back({sa, 1, Relation::Equal});
  cons.push_back({sb, 1, Relation::Equal});
  for (std::size_t j = 0; j < n; ++j) {
    RatVector row(nv);
    for (std::size_t i = 0; i < na; ++i) row[i] = a[i][j];
    for (std::size_t i = 0; i < b.size(); ++i) row[na + i] = -b[i][j];
    cons.push_back({row, 0, Relation::Equal});
  }
  return is_feasible(nv, cons);
}

}  // namespace detail

/// True iff psi is injective: relative interiors of distinct cells have
/// disjoint images.
inline bool is_embedding(const ULE& w) {
  if (w.cohomology_only()) return false;
  const std::size_t m = w.complex.cells.size();
  std::vector<detail::Box> boxes;
  std::vector<std::vector<RatVector>> pts(m);
  for (std::size_t c = 0; c < m; ++c) {
    boxes.push_back(detail::bounding_box(w, c));
    for (auto v : w.vertices[c]) pts[c].push_back(w.vertex_image[v]);
  }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      bool overlap = true;
      for (std::size_t j = 0; j < w.dim() && overlap; ++j)
        overlap = !(boxes[a].hi[j] < boxes[b].lo[j] || boxes[b].hi[j] < boxes[a].lo[j]);
      if (!overlap) continue;
      const auto& va = w.vertices[a];
      const auto& vb = w.vertices[b];
      // A proper face of a cell has a relative interior disjoint from the cell's.
      if (std::includes(va.begin(), va.end(), vb.begin(), vb.end()) ||
          std::includes(vb.begin(), vb.end(), va.begin(), va.end()))
        if (va != vb) continue;
      if (detail::relative_interiors_meet(pts[a], pts[b])) return false;
    }
  return true;
}

enum class ImageStatus { Ok, Unavailable, NotEmbedded, NotPolyhedral };

constexpr std::string_view to_string(ImageStatus s) {
  switch (s) {
    case ImageStatus::Ok: return "Ok";
    case ImageStatus::Unavailable: return "Unavailable";
    case ImageStatus::NotEmbedded: return "NotEmbedded";
    case ImageStatus::NotPolyhedral: return "NotPolyhedral";
  }
  return "Unknown";
}

struct MomentImage {
  ImageStatus status = ImageStatus::Unavailable;
  std::optional<PolyhedronSpec> image;  // canonical when status is Ok
};

namespace detail {

/// Facet halfspaces of an n-simplex, oriented inward.
inline std::vector<Halfspace> simplex_facets(const std::vector<RatVector>& v) {
  const std::size_t n = v[0].size();
  std::vector<Halfspace> out;
  for (std::size_t skip = 0; skip < v.size(); ++skip) {
    RatMatrix d(n - 1, n);
    std::size_t r = 0, base = skip == 0 ? 1 : 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i == skip || i == base) continue;
      for (std::size_t j = 0; j < n; ++j) d(r, j) = v[i][j] - v[base][j];
      ++r;
    }
    auto ns = null_space(d);
    if (ns.size() != 1) continue;
    Integer l = 1;
    for (const auto& x : ns[0]) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
    IntVector normal;
    for (const auto& x : ns[0]) normal.push_back(Integer(x * l));
    normal = primitive(normal).first;
    Rational off = dual_pairing(v[base], normal);
    if (dual_pairing(v[skip], normal) < off) {
      for (auto& x : normal) x = -x;
      off = -off;
    }
    out.push_back({normal, off});
  }
  return out;
}

}  // namespace detail

/// Image of an embedded W as a canonical intersection of halfspaces.
inline MomentImage moment_image(const ULE& w) {
  if (w.cohomology_only()) return {ImageStatus::Unavailable, std::nullopt};
  if (!is_embedding(w)) return {ImageStatus::NotEmbedded, std::nullopt};
  const std::size_t n = w.dim();

  std::vector<Halfspace> candidates;
  Rational volume = 0;
  for (std::size_t c = 0; c < w.complex.cells.size(); ++c) {
    if (w.complex.cells[c].dim != n) continue;
    std::vector<RatVector> pts;
    for (auto v : w.vertices[c]) pts.push_back(w.vertex_image[v]);
    if (pts.size() != n + 1) return {ImageStatus::NotPolyhedral, std::nullopt};
    RatMatrix d(n, n);
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 0; j < n; ++j) d(i - 1, j) = pts[i][j] - pts[0][j];
    volume += abs(determinant(d));
    if (w.sources.empty()) {
      auto f = detail::simplex_facets(pts);
      candidates.insert(candidates.end(), f.begin(), f.end());
    }
  }
  for (const auto& s : w.sources) candidates.insert(candidates.end(), s.begin(), s.end());

  std::vector<Halfspace> valid;
  for (const auto& h : candidates) {
    bool ok = true;
    for (std::size_t c = 0; c < w.complex.cells.size() && ok; ++c)
      if (w.complex.cells[c].dim == 0) ok = h.contains(w.vertex_image[c]);
    if (ok) valid.push_back(h);
  }
  PolyhedronSpec q{n, irredundant_halfspaces({n, valid})};

  auto truncated = q.halfspaces;
  if (w.radius) {
    auto box = truncation_box(n, *w.radius);
    truncated.insert(truncated.end(), box.begin(), box.end());
  }
  if (!is_bounded(n, truncated)) return {ImageStatus::NotPolyhedral, std::nullopt};
  if (scaled_volume(polytope_faces(n, truncated)) != volume) return {ImageStatus::NotPolyhedral, std::nullopt};
  return {ImageStatus::Ok, std::move(q)};
}

}  // namespace toric
