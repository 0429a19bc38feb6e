#pragma once

// Symplectic toric bundles over a unimodular local embedding, described by
// their Chern and horizontal cocycles, and the collapse to a symplectic
// toric manifold at the level of strata, local models and classes.

#include <algorithm>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toric/cohomology.hpp"
#include "toric/corners.hpp"
#include "toric/error.hpp"

namespace toric {

/// A symplectic toric bundle over W. The Chern cocycle is Z^n-valued, the
/// horizontal cocycle is real (rational) valued. The reduced classes are
/// computed once, on construction.
struct BundleData {
  ULE base;
  std::shared_ptr<const ChainComplexData> complex;
  CochainData chern_cocycle;
  CochainData horizontal_cocycle;
  CochainData chern_reduced;
  CochainData horizontal_reduced;
};

/// Normal form T*T^l x C^k near an orbit over a face.
struct LocalModel {
  std::size_t ell = 0;
  std::size_t k = 0;
  std::vector<IntVector> weights;
  RatVector base_value;
};

struct StratumRecord {
  std::size_t face = 0;
  std::size_t dim = 0;
  LocalModel model;
};

struct ToricDescriptor {
  ULE base;
  std::vector<StratumRecord> strata;
  CochainData chern_class;
  CochainData horizontal_class;
  MomentImage moment_image;
};

namespace detail {

inline void check_bundle_cochain(const CochainData& c, const ChainComplexData& cx, Ring ring, std::size_t width,
                                 std::string_view what) {
  if (c.degree != 2 || c.ring != ring || c.width != width || c.values.size() != cx.count(2))
    fail(ErrorCode::DimensionMismatch, std::string(what) + " cocycle has the wrong shape");
  if (!is_cocycle(c, cx)) fail(ErrorCode::NotACocycle, std::string(what) + " cochain is not a cocycle");
}

inline bool same_base(const ULE& a, const ULE& b) {
  if (a.dim() != b.dim() || a.complex.cells.size() != b.complex.cells.size() || a.basis != b.basis) return false;
  for (std::size_t c = 0; c < a.complex.cells.size(); ++c) {
    const auto& x = a.complex.cells[c];
    const auto& y = b.complex.cells[c];
    if (x.dim != y.dim || x.boundary != y.boundary) return false;
  }
  return a.vertex_image == b.vertex_image;
}

}  // namespace detail

inline BundleData trivial_bundle(const ULE& w) {
  auto cx = std::make_shared<const ChainComplexData>(cellular_complex(w));
  auto chern = CochainData::zero(*cx, 2, Ring::Integers, w.dim());
  auto hor = CochainData::zero(*cx, 2, Ring::Rationals, 1);
  return {w, std::move(cx), chern, hor, chern, hor};
}

/// A bundle with Chern class [a] and horizontal class [b]. `cx` must be the
/// cellular complex of W.
inline BundleData with_classes(const ULE& w, std::shared_ptr<const ChainComplexData> cx, const CochainData& a,
                               const CochainData& b) {
  detail::check_bundle_cochain(a, *cx, Ring::Integers, w.dim(), "Chern");
  detail::check_bundle_cochain(b, *cx, Ring::Rationals, 1, "horizontal");
  auto ra = class_reduce(a, *cx);
  auto rb = class_reduce(b, *cx);
  return {w, std::move(cx), a, b, std::move(ra), std::move(rb)};
}

inline BundleData with_classes(const ULE& w, const CochainData& a, const CochainData& b) {
  return with_classes(w, std::make_shared<const ChainComplexData>(cellular_complex(w)), a, b);
}

inline const CochainData& chern_class(const BundleData& b) { return b.chern_reduced; }
inline const CochainData& horizontal_class(const BundleData& b) { return b.horizontal_reduced; }

inline bool isomorphic(const BundleData& a, const BundleData& b) {
  if (!detail::same_base(a.base, b.base)) fail(ErrorCode::BaseMismatch, "bundles live over different bases");
  return chern_class(a) == chern_class(b) && horizontal_class(a) == horizontal_class(b);
}

/// Local model over the face W.strata[face].
inline LocalModel local_model(const ULE& w, std::size_t face) {
  if (face >= w.strata.size())
    fail(ErrorCode::InvalidFace, "face " + std::to_string(face) + " of " + std::to_string(w.strata.size()));
  const auto& s = w.strata[face];
  return {w.dim() - s.index(), s.index(), s.basis, s.base_value};
}

inline ToricDescriptor collapse(const BundleData& b) {
  ToricDescriptor d;
  d.base = b.base;
  for (std::size_t f = 0; f < b.base.strata.size(); ++f)
    d.strata.push_back({f, b.base.strata[f].dim, local_model(b.base, f)});
  d.chern_class = chern_class(b);
  d.horizontal_class = horizontal_class(b);
  d.moment_image = moment_image(b.base);
  return d;
}

inline CochainData chern_class(const ToricDescriptor& d) { return d.chern_class; }
inline CochainData horizontal_class(const ToricDescriptor& d) { return d.horizontal_class; }

inline ClassificationResult classify_over(const ULE& w) { return classification_set(w, w.dim()); }

/// Whether the moment image determines the manifold, and if not, why.
struct DelzantVerdict {
  ImageStatus image = ImageStatus::Unavailable;
  bool classes_trivial = false;

  bool unique() const noexcept { return image == ImageStatus::Ok && classes_trivial; }

  std::vector<std::string> reasons() const {
    std::vector<std::string> out;
    if (image != ImageStatus::Ok) out.push_back("moment image: " + std::string(to_string(image)));
    if (!classes_trivial) out.push_back("nontrivial classifying group");
    return out;
  }
};

inline DelzantVerdict delzant_unique(const ULE& w) {
  return {moment_image(w).status, classify_over(w).trivial()};
}

enum class QuotientFailure { None, NotEmbedded, NotPolyhedral, NotClosed, NoVertex };

constexpr std::string_view to_string(QuotientFailure f) {
  switch (f) {
    case QuotientFailure::None: return "None";
    case QuotientFailure::NotEmbedded: return "NotEmbedded";
    case QuotientFailure::NotPolyhedral: return "NotPolyhedral";
    case QuotientFailure::NotClosed: return "NotClosed";
    case QuotientFailure::NoVertex: return "NoVertex";
  }
  return "Unknown";
}

struct QuotientResult {
  std::optional<std::size_t> minimal_n;
  QuotientFailure failure = QuotientFailure::None;
  std::size_t facet_count = 0;

  bool ok() const noexcept { return minimal_n.has_value(); }
};

/// Whether the manifold is a reduced space of C^N, and the least such N.
inline QuotientResult cn_quotient(const ToricDescriptor& d) {
  QuotientResult r;
  switch (d.moment_image.status) {
    case ImageStatus::Ok: break;
    case ImageStatus::Unavailable:
    case ImageStatus::NotEmbedded: r.failure = QuotientFailure::NotEmbedded; return r;
    case ImageStatus::NotPolyhedral: r.failure = QuotientFailure::NotPolyhedral; return r;
  }
  const auto& hs = d.moment_image.image->halfspaces;
  r.facet_count = hs.size();
  for (const auto& h : hs)
    if (h.kind == HalfspaceKind::Cut) {
      r.failure = QuotientFailure::NotClosed;
      return r;
    }
  if (faces(d.base, 0).empty()) {
    r.failure = QuotientFailure::NoVertex;
    return r;
  }
  r.minimal_n = std::max(hs.size(), d.base.dim());
  return r;
}

}  // namespace toric
