#pragma once

// Cellular cochain complexes of corner complexes and their cohomology over
// Z and Q, computed from Smith normal forms of the coboundary matrices.
// Cochains take values in Z^m or Q^m; classes are compared through
// canonical representatives.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toric/corners.hpp"
#include "toric/error.hpp"
#include "toric/lattice.hpp"

namespace toric {

enum class Ring { Integers, Rationals };

/// The coboundary C^{k-1} -> C^k together with its Smith decomposition.
struct Coboundary {
  IntMatrix delta;  // rows: k-cells, columns: (k-1)-cells
  SNFResult snf;
  IntMatrix u_inverse;
  std::size_t rank = 0;
};

struct ChainComplexData {
  std::vector<std::vector<std::size_t>> cells;  // cells[k]: ids of the k-cells, increasing
  std::vector<IntMatrix> boundary;              // boundary[k]: C_k -> C_{k-1}; boundary[0] has no rows
  std::vector<Coboundary> into;                 // into[k]: C^{k-1} -> C^k

  std::size_t top() const noexcept { return cells.empty() ? 0 : cells.size() - 1; }
  std::size_t count(std::size_t k) const noexcept { return k < cells.size() ? cells[k].size() : 0; }
};

struct CochainData {
  std::size_t degree = 0;
  Ring ring = Ring::Integers;
  std::size_t width = 1;
  std::vector<RatVector> values;  // one entry of length `width` per degree-k cell

  static CochainData zero(const ChainComplexData& c, std::size_t k, Ring ring, std::size_t width) {
    return {k, ring, width, std::vector<RatVector>(c.count(k), RatVector(width, Rational(0)))};
  }

  bool is_zero() const {
    for (const auto& v : values)
      for (const auto& x : v)
        if (x != 0) return false;
    return true;
  }

  friend bool operator==(const CochainData& a, const CochainData& b) {
    return a.degree == b.degree && a.ring == b.ring && a.width == b.width && a.values == b.values;
  }
};

inline CochainData operator+(const CochainData& a, const CochainData& b) {
  if (a.degree != b.degree || a.ring != b.ring || a.width != b.width || a.values.size() != b.values.size())
    fail(ErrorCode::DimensionMismatch, "adding cochains of different shape");
  CochainData c = a;
  for (std::size_t i = 0; i < c.values.size(); ++i)
    for (std::size_t j = 0; j < c.width; ++j) c.values[i][j] += b.values[i][j];
  return c;
}

inline CochainData operator*(const Rational& s, const CochainData& a) {
  CochainData c = a;
  for (auto& v : c.values)
    for (auto& x : v) x *= s;
  return c;
}

/// The Z^m-valued cochain c (x) v for a scalar cochain c.
inline CochainData tensor(const CochainData& c, const RatVector& v) {
  if (c.width != 1) fail(ErrorCode::DimensionMismatch, "tensoring a non-scalar cochain");
  CochainData out{c.degree, c.ring, v.size(), {}};
  for (const auto& x : c.values) {
    RatVector row(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) row[j] = x[0] * v[j];
    out.values.push_back(std::move(row));
  }
  return out;
}

struct CohomologyGroup {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;  // invariant factors > 1

  bool trivial() const noexcept { return free_rank == 0 && torsion.empty(); }
  friend bool operator==(const CohomologyGroup& a, const CohomologyGroup& b) {
    return a.free_rank == b.free_rank && a.torsion == b.torsion;
  }
};

namespace detail {

inline std::string superscript(std::size_t e) {
  static const char* digits[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
  if (e == 1) return "";
  std::string s;
  for (char ch : std::to_string(e)) s += digits[ch - '0'];
  return s;
}

inline Coboundary make_coboundary(IntMatrix delta) {
  Coboundary c;
  c.snf = smith_normal_form(delta);
  c.rank = c.snf.rank();
  c.u_inverse = unimodular_inverse(c.snf.U);
  c.delta = std::move(delta);
  return c;
}

inline void check_cochain(const CochainData& c, const ChainComplexData& cx) {
  if (c.values.size() != cx.count(c.degree))
    fail(ErrorCode::DimensionMismatch, "cochain has " + std::to_string(c.values.size()) + " values for " +
                                           std::to_string(cx.count(c.degree)) + " cells of degree " +
                                           std::to_string(c.degree));
  for (const auto& v : c.values) {
    if (v.size() != c.width) fail(ErrorCode::DimensionMismatch, "cochain value of the wrong width");
    if (c.ring == Ring::Integers)
      for (const auto& x : v)
        if (x.get_den() != 1) fail(ErrorCode::InvalidArgument, "integer cochain with value " + to_string(x));
  }
}

inline RatVector component(const CochainData& c, std::size_t j) {
  RatVector x;
  for (const auto& v : c.values) x.push_back(v[j]);
  return x;
}

inline RatVector apply(const IntMatrix& m, const RatVector& x) { return to_rational(m).apply(x); }

/// The coboundary C^k -> C^{k+1} (empty above the top degree).
inline IntMatrix outgoing(const ChainComplexData& cx, std::size_t k) {
  if (k + 1 < cx.into.size()) return cx.into[k + 1].delta;
  return IntMatrix(0, cx.count(k));
}

}  // namespace detail

/// Cellular chain complex of W. Incidence numbers are taken from the cell
/// boundaries; the composite boundary must vanish over Z.
inline ChainComplexData cellular_complex(const CornerComplex& w) {
  ChainComplexData cx;
  std::size_t top = 0;
  for (const auto& c : w.cells) top = std::max(top, c.dim);
  cx.cells.assign(w.cells.empty() ? 0 : top + 1, {});
  std::vector<std::size_t> pos(w.cells.size());
  for (std::size_t i = 0; i < w.cells.size(); ++i) {
    pos[i] = cx.cells[w.cells[i].dim].size();
    cx.cells[w.cells[i].dim].push_back(i);
  }
  for (std::size_t k = 0; k < cx.cells.size(); ++k) {
    IntMatrix d(k == 0 ? 0 : cx.count(k - 1), cx.count(k));
    if (k > 0)
      for (std::size_t j = 0; j < cx.count(k); ++j)
        for (const auto& inc : w.cells[cx.cells[k][j]].boundary) {
          if (w.cells[inc.cell].dim + 1 != k) fail(ErrorCode::InconsistentIncidence, "boundary entry of the wrong dimension");
          d(pos[inc.cell], j) += inc.sign;
        }
    cx.boundary.push_back(std::move(d));
  }
  for (std::size_t k = 2; k < cx.boundary.size(); ++k)
    if (!(cx.boundary[k - 1] * cx.boundary[k]).is_zero())
      fail(ErrorCode::InconsistentIncidence, "boundary of the boundary is nonzero in degree " + std::to_string(k));
  for (std::size_t k = 0; k < cx.boundary.size(); ++k) cx.into.push_back(detail::make_coboundary(cx.boundary[k].transpose()));
  return cx;
}

inline ChainComplexData cellular_complex(const ULE& w) { return cellular_complex(w.complex); }

/// H^k(C; Z) from the Smith forms, or H^k(C; Q) by rational elimination.
inline CohomologyGroup cohomology_group(const ChainComplexData& cx, std::size_t k, Ring ring) {
  if (k >= cx.cells.size()) return {};
  const std::size_t cells = cx.count(k);
  if (ring == Ring::Rationals) {
    const std::size_t out = rank(detail::outgoing(cx, k));
    const std::size_t in = rank(cx.into[k].delta);
    return {cells - out - in, {}};
  }
  const std::size_t out = k + 1 < cx.into.size() ? cx.into[k + 1].rank : 0;
  CohomologyGroup g{cells - out - cx.into[k].rank, {}};
  for (const auto& d : cx.into[k].snf.invariant_factors())
    if (d > 1) g.torsion.push_back(d);
  return g;
}

inline bool is_cocycle(const CochainData& c, const ChainComplexData& cx) {
  detail::check_cochain(c, cx);
  auto delta = detail::outgoing(cx, c.degree);
  for (std::size_t j = 0; j < c.width; ++j)
    for (const auto& x : detail::apply(delta, detail::component(c, j)))
      if (x != 0) return false;
  return true;
}

/// Coboundary of a (k-1)-cochain.
inline CochainData coboundary(const CochainData& b, const ChainComplexData& cx) {
  detail::check_cochain(b, cx);
  auto delta = detail::outgoing(cx, b.degree);
  CochainData c = CochainData::zero(cx, b.degree + 1, b.ring, b.width);
  for (std::size_t j = 0; j < b.width; ++j) {
    auto y = detail::apply(delta, detail::component(b, j));
    for (std::size_t i = 0; i < y.size(); ++i) c.values[i][j] = y[i];
  }
  return c;
}

/// A cochain b with coboundary(b) = c, or nullopt if c is not a coboundary
/// over its ring.
inline std::optional<CochainData> is_coboundary(const CochainData& c, const ChainComplexData& cx) {
  detail::check_cochain(c, cx);
  if (c.degree == 0) fail(ErrorCode::InvalidArgument, "degree-0 cochains have no primitive");
  const auto& in = cx.into[c.degree];
  const auto& snf = in.snf;
  CochainData b = CochainData::zero(cx, c.degree - 1, c.ring, c.width);
  for (std::size_t j = 0; j < c.width; ++j) {
    auto y = detail::apply(snf.U, detail::component(c, j));
    RatVector z(in.delta.cols(), Rational(0));
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (i >= in.rank) {
        if (y[i] != 0) return std::nullopt;
        continue;
      }
      Rational q = y[i] / Rational(snf.D(i, i));
      if (c.ring == Ring::Integers && q.get_den() != 1) return std::nullopt;
      z[i] = q;
    }
    auto x = detail::apply(snf.V, z);
    for (std::size_t i = 0; i < x.size(); ++i) b.values[i][j] = x[i];
  }
  return b;
}

/// Canonical representative of the class of a cocycle: in the coordinates
/// y = U c given by the Smith form of the incoming coboundary, entries
/// hitting the image are reduced modulo their invariant factor (over Q, set
/// to zero) and the remaining entries are kept.
inline CochainData class_reduce(const CochainData& c, const ChainComplexData& cx) {
  if (!is_cocycle(c, cx)) fail(ErrorCode::NotACocycle, "degree-" + std::to_string(c.degree) + " cochain is not closed");
  if (c.degree >= cx.into.size()) return c;
  const auto& in = cx.into[c.degree];
  CochainData out = c;
  for (std::size_t j = 0; j < c.width; ++j) {
    auto y = detail::apply(in.snf.U, detail::component(c, j));
    for (std::size_t i = 0; i < in.rank; ++i) {
      if (c.ring == Ring::Rationals) {
        y[i] = 0;
        continue;
      }
      Integer r;
      Integer num = y[i].get_num();
      mpz_fdiv_r(r.get_mpz_t(), num.get_mpz_t(), in.snf.D(i, i).get_mpz_t());
      y[i] = r;
    }
    auto x = detail::apply(in.u_inverse, y);
    for (std::size_t i = 0; i < x.size(); ++i) out.values[i][j] = x[i];
  }
  return out;
}

/// Scalar integer cocycles generating H^k(C; Z): free generators first,
/// then one generator per torsion factor.
struct Generators {
  std::vector<CochainData> free;
  std::vector<CochainData> torsion;
};

inline Generators generators(const ChainComplexData& cx, std::size_t k) {
  Generators g;
  if (k >= cx.cells.size()) return g;
  const auto& in = cx.into[k];
  const std::size_t nk = cx.count(k), r = in.rank;
  auto cochain = [&](const IntVector& y) {
    CochainData c = CochainData::zero(cx, k, Ring::Integers, 1);
    auto x = in.u_inverse.apply(y);
    for (std::size_t i = 0; i < nk; ++i) c.values[i][0] = x[i];
    return c;
  };
  // Cocycle condition on the coordinates y_r.. not hit by the image.
  auto out = detail::outgoing(cx, k);
  IntMatrix tail(nk, nk - r);
  for (std::size_t i = 0; i < nk; ++i)
    for (std::size_t j = r; j < nk; ++j) tail(i, j - r) = in.u_inverse(i, j);
  auto m = out * tail;
  auto ker = smith_normal_form(m);
  for (std::size_t j = ker.rank(); j < nk - r; ++j) {
    IntVector y(nk, Integer(0));
    for (std::size_t i = 0; i < nk - r; ++i) y[r + i] = ker.V(i, j);
    g.free.push_back(cochain(y));
  }
  for (std::size_t i = 0; i < r; ++i)
    if (in.snf.D(i, i) > 1) {
      IntVector y(nk, Integer(0));
      y[i] = 1;
      g.torsion.push_back(cochain(y));
    }
  return g;
}

/// The classifying set H^2(W; Z^n x R) = H^2(W; Z)^n x H^2(W; R).
struct ClassificationResult {
  CohomologyGroup h2_int;
  std::size_t lattice_copies = 0;
  std::size_t real_rank = 0;
  Generators h2_generators;

  bool trivial() const noexcept { return (h2_int.trivial() || lattice_copies == 0) && real_rank == 0; }

  /// E.g. "ℤ³ × ℝ", "(ℤ/2)² ", or "trivial".
  std::string describe() const {
    if (trivial()) return "trivial";
    std::vector<std::string> parts;
    if (h2_int.free_rank && lattice_copies) parts.push_back("ℤ" + detail::superscript(h2_int.free_rank * lattice_copies));
    std::map<std::string, std::size_t> tors;
    for (const auto& d : h2_int.torsion) tors[d.get_str()] += lattice_copies;
    for (const auto& [d, e] : tors)
      if (e) parts.push_back(e == 1 ? "ℤ/" + d : "(ℤ/" + d + ")" + detail::superscript(e));
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " ⊕ " : "") + parts[i];
    if (real_rank) s += (s.empty() ? "" : " × ") + std::string("ℝ") + detail::superscript(real_rank);
    return s;
  }
};

inline ClassificationResult classification_set(const ChainComplexData& cx, std::size_t n) {
  ClassificationResult r;
  r.h2_int = cohomology_group(cx, 2, Ring::Integers);
  r.real_rank = cohomology_group(cx, 2, Ring::Rationals).free_rank;
  r.lattice_copies = n;
  if (r.real_rank != r.h2_int.free_rank)
    fail(ErrorCode::ClassificationMismatch, "rank of H2 over Q is " + std::to_string(r.real_rank) +
                                                " but the free rank over Z is " + std::to_string(r.h2_int.free_rank));
  r.h2_generators = generators(cx, 2);
  return r;
}

inline ClassificationResult classification_set(const ULE& w, std::size_t n) {
  return classification_set(cellular_complex(w), n);
}

}  // namespace toric
