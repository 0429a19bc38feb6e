#pragma once

// Unimodular cones {eta : <eta, v_i> >= c_i} with v_1..v_k a basis of the
// integral lattice of a subtorus. Only the offsets c_i = <eps, v_i> are kept;
// the apex eps itself is not determined by the cone when k < n.

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "toric/fourier_motzkin.hpp"
#include "toric/lattice.hpp"

namespace toric {

/// Boundary halfspaces bound the space being modeled. Cut halfspaces are
/// artificial walls (open ends, gluing seams) and truncation halfspaces are
/// added internally to make unbounded pieces finite; neither contributes to
/// stabilizer data.
enum class HalfspaceKind { Boundary, Cut, Truncation };

struct Halfspace {
  IntVector normal;
  Rational offset;
  HalfspaceKind kind = HalfspaceKind::Boundary;

  bool contains(std::span<const Rational> eta) const { return dual_pairing(eta, normal) >= offset; }
  bool tight(std::span<const Rational> eta) const { return dual_pairing(eta, normal) == offset; }

  friend bool operator==(const Halfspace& a, const Halfspace& b) {
    return a.normal == b.normal && a.offset == b.offset && a.kind == b.kind;
  }
};

/// Raw, possibly redundant and non-primitive halfspace description.
struct HalfspaceSet {
  std::size_t dim = 0;
  std::vector<Halfspace> halfspaces;

  friend bool operator==(const HalfspaceSet& a, const HalfspaceSet& b) {
    return a.dim == b.dim && a.halfspaces == b.halfspaces;
  }
};

/// Indices (0-based, increasing) of constraints of a cone.
using FaceSelector = std::vector<std::size_t>;

/// Descending lexicographic order; puts e_1, e_2, ... in their natural order.
inline bool canonical_before(const IntVector& a, const IntVector& b) {
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

class UnimodularCone {
 public:
  /// The whole dual space (k = 0).
  static UnimodularCone whole_space(std::size_t n) {
    UnimodularCone c;
    c.dim_ = n;
    return c;
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return normals_.size(); }
  const std::vector<IntVector>& normals() const noexcept { return normals_; }
  const RatVector& offsets() const noexcept { return offsets_; }

  friend bool operator==(const UnimodularCone&, const UnimodularCone&) = default;

 private:
  friend UnimodularCone new_cone(std::size_t, std::vector<IntVector>, RatVector);
  std::size_t dim_ = 0;
  std::vector<IntVector> normals_;
  RatVector offsets_;
};

/// Validates and builds a cone. The normal order is kept as given.
inline UnimodularCone new_cone(std::size_t n, std::vector<IntVector> normals, RatVector offsets) {
  if (normals.size() != offsets.size())
    fail(ErrorCode::DimensionMismatch, "normals and offsets differ in length");
  for (const auto& v : normals) {
    if (v.size() != n) fail(ErrorCode::DimensionMismatch, "normal " + to_string(v) + " not in Z^" + std::to_string(n));
    if (!is_primitive(v)) fail(ErrorCode::NotPrimitive, "normal " + to_string(v) + " is not primitive");
  }
  for (std::size_t i = 0; i < normals.size(); ++i)
    for (std::size_t j = i + 1; j < normals.size(); ++j)
      if (normals[i] == normals[j]) fail(ErrorCode::DuplicateNormal, "normal " + to_string(normals[i]) + " repeated");
  if (!is_unimodular_system(normals)) {
    std::string list;
    for (const auto& v : normals) list += to_string(v);
    fail(ErrorCode::NotUnimodular, "normals " + list + " do not extend to a lattice basis");
  }
  UnimodularCone c;
  c.dim_ = n;
  c.normals_ = std::move(normals);
  c.offsets_ = std::move(offsets);
  for (auto& o : c.offsets_) o.canonicalize();
  return c;
}

inline bool contains(const UnimodularCone& c, std::span<const Rational> eta) {
  if (eta.size() != c.dim()) fail(ErrorCode::DimensionMismatch, "point dimension differs from cone");
  for (std::size_t i = 0; i < c.size(); ++i)
    if (dual_pairing(eta, c.normals()[i]) < c.offsets()[i]) return false;
  return true;
}

/// Constraints tight at eta. Their normals are the stabilizer basis at eta.
inline FaceSelector active_set(const UnimodularCone& c, std::span<const Rational> eta) {
  if (!contains(c, eta)) fail(ErrorCode::PointNotInCone, "point " + to_string(RatVector(eta.begin(), eta.end())) + " outside cone");
  FaceSelector sel;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (dual_pairing(eta, c.normals()[i]) == c.offsets()[i]) sel.push_back(i);
  return sel;
}

struct FaceData {
  std::vector<IntVector> basis;
  std::size_t dim = 0;
};

inline FaceData face_data(const UnimodularCone& c, const FaceSelector& sel) {
  FaceData out;
  for (std::size_t k = 0; k < sel.size(); ++k) {
    if (sel[k] >= c.size()) fail(ErrorCode::InvalidIndex, "face index " + std::to_string(sel[k]) + " out of range");
    if (k > 0 && sel[k] <= sel[k - 1]) fail(ErrorCode::InvalidIndex, "face selector must be strictly increasing");
    out.basis.push_back(c.normals()[sel[k]]);
  }
  out.dim = c.dim() - sel.size();
  return out;
}

namespace detail {

inline LinearConstraint as_constraint(const Halfspace& h, Relation rel = Relation::GreaterEqual) {
  return {to_rational(h.normal), h.offset, rel};
}

/// Primitive normals, no zero rows, no duplicate normals (tightest offset kept),
/// sorted canonically. Returns false if a zero row is violated.
inline bool primitivize(const HalfspaceSet& h, std::vector<Halfspace>& out) {
  out.clear();
  for (const auto& hs : h.halfspaces) {
    if (hs.normal.size() != h.dim) fail(ErrorCode::DimensionMismatch, "halfspace normal dimension");
    if (content(hs.normal) == 0) {
      if (hs.offset > 0) return false;
      continue;
    }
    auto [p, g] = primitive(hs.normal);
    Rational off = hs.offset / Rational(g);
    off.canonicalize();
    auto it = std::find_if(out.begin(), out.end(), [&](const Halfspace& x) { return x.normal == p; });
    if (it == out.end()) {
      out.push_back({std::move(p), off, hs.kind});
    } else if (off > it->offset || (off == it->offset && hs.kind == HalfspaceKind::Boundary)) {
      it->offset = off;
      it->kind = hs.kind;
    }
  }
  std::sort(out.begin(), out.end(),
            [](const Halfspace& a, const Halfspace& b) { return canonical_before(a.normal, b.normal); });
  return true;
}

/// Removes halfspaces that do not change the solution set. Processing order is
/// the canonical order, so the result does not depend on the input order.
inline std::vector<Halfspace> drop_redundant(std::size_t n, std::vector<Halfspace> hs) {
  for (std::size_t i = 0; i < hs.size();) {
    std::vector<LinearConstraint> cons;
    for (std::size_t j = 0; j < hs.size(); ++j)
      if (j != i) cons.push_back(as_constraint(hs[j]));
    LinearConstraint violate = as_constraint(hs[i]);
    // a.x < c  <=>  (-a).x > -c
    for (auto& x : violate.coeffs) x = -x;
    violate.rhs = -violate.rhs;
    violate.rel = Relation::Greater;
    cons.push_back(std::move(violate));
    if (!is_feasible(n, cons))
      hs.erase(hs.begin() + static_cast<std::ptrdiff_t>(i));
    else
      ++i;
  }
  return hs;
}

}  // namespace detail

/// Recovers the canonical cone from a raw halfspace description: normals made
/// primitive (offsets rescaled), redundant halfspaces removed, unimodularity
/// checked, normals sorted canonically. Independent of input order, positive
/// rescaling and redundant additions.
inline UnimodularCone canonicalize(const HalfspaceSet& h) {
  std::vector<Halfspace> hs;
  if (!detail::primitivize(h, hs)) fail(ErrorCode::EmptyCone, "a zero-normal halfspace is violated");
  std::vector<LinearConstraint> cons;
  for (const auto& x : hs) cons.push_back(detail::as_constraint(x));
  if (!is_feasible(h.dim, cons)) fail(ErrorCode::EmptyCone, "halfspaces have empty intersection");
  hs = detail::drop_redundant(h.dim, std::move(hs));
  std::vector<IntVector> normals;
  RatVector offsets;
  for (auto& x : hs) {
    normals.push_back(x.normal);
    offsets.push_back(x.offset);
  }
  return new_cone(h.dim, std::move(normals), std::move(offsets));
}

/// Cone of the normals shared by two charts and simultaneously active on
/// their overlap. `shared_active` lists, per face realized on the overlap,
/// the active selector in each chart. Shared normals must carry equal offsets.
inline UnimodularCone common_cone(const UnimodularCone& a, const UnimodularCone& b,
                                  const std::vector<std::pair<FaceSelector, FaceSelector>>& shared_active) {
  if (a.dim() != b.dim()) fail(ErrorCode::DimensionMismatch, "cones of different dimension");
  std::vector<IntVector> normals;
  RatVector offsets;
  for (const auto& [sa, sb] : shared_active) {
    for (std::size_t i : sa) {
      if (i >= a.size()) fail(ErrorCode::InvalidIndex, "selector index out of range");
      for (std::size_t j : sb) {
        if (j >= b.size()) fail(ErrorCode::InvalidIndex, "selector index out of range");
        if (a.normals()[i] != b.normals()[j]) continue;
        if (a.offsets()[i] != b.offsets()[j])
          fail(ErrorCode::OffsetMismatch, "normal " + to_string(a.normals()[i]) + " has offsets " +
                                              to_string(a.offsets()[i]) + " and " + to_string(b.offsets()[j]));
        if (std::find(normals.begin(), normals.end(), a.normals()[i]) == normals.end()) {
          normals.push_back(a.normals()[i]);
          offsets.push_back(a.offsets()[i]);
        }
      }
    }
  }
  std::vector<std::size_t> order(normals.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return canonical_before(normals[x], normals[y]); });
  std::vector<IntVector> sn;
  RatVector so;
  for (auto i : order) {
    sn.push_back(normals[i]);
    so.push_back(offsets[i]);
  }
  return new_cone(a.dim(), std::move(sn), std::move(so));
}

}  // namespace toric
