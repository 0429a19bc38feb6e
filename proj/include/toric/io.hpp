#pragma once

// JSON formats for polyhedra, corner complexes, glued pieces, bundles and
// numeric check specifications. Rationals travel as strings "p/q".

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "toric/builders.hpp"
#include "toric/cohomology.hpp"
#include "toric/corners.hpp"
#include "toric/error.hpp"
#include "toric/toric.hpp"

namespace toric::io {

using Json = nlohmann::ordered_json;

[[noreturn]] inline void parse_fail(const std::string& what) { fail(ErrorCode::ParseError, what); }

inline std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t x) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << x;
  return os.str();
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json parse_text(const std::string& text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_fail(where + ": " + e.what());
  }
}

// Scalars

inline Integer parse_integer(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) {
    static const std::regex re("-?[0-9]+");
    const auto s = j.get<std::string>();
    if (std::regex_match(s, re)) return Integer(s);
  }
  parse_fail("expected an integer, got " + j.dump());
}

inline Rational parse_rational(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) {
    static const std::regex re("(-?[0-9]+)(/([0-9]+))?");
    const auto s = j.get<std::string>();
    std::smatch m;
    if (std::regex_match(s, m, re)) {
      Integer num(m[1].str());
      Integer den = m[3].matched ? Integer(m[3].str()) : Integer(1);
      if (den == 0) parse_fail("zero denominator in " + s);
      Rational r(num, den);
      r.canonicalize();
      return r;
    }
  }
  parse_fail("expected a rational \"p/q\", got " + j.dump());
}

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline std::size_t parse_index(const Json& j) {
  if (!j.is_number_integer() || j.get<long>() < 0) parse_fail("expected a nonnegative integer, got " + j.dump());
  return j.get<std::size_t>();
}

inline const Json& parse_array(const Json& j, const char* what) {
  if (!j.is_array()) parse_fail(std::string(what) + " must be an array");
  return j;
}

inline IntVector parse_int_vector(const Json& j) {
  IntVector v;
  for (const auto& x : parse_array(j, "integer vector")) v.push_back(parse_integer(x));
  return v;
}

inline RatVector parse_rat_vector(const Json& j) {
  RatVector v;
  for (const auto& x : parse_array(j, "rational vector")) v.push_back(parse_rational(x));
  return v;
}

inline Json to_json(const Rational& x) { return x.get_str(); }
inline Json to_json(const Integer& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}
inline Json to_json(const IntVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}
inline Json to_json(const RatVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}
inline Json to_json(const std::vector<IntVector>& vs) {
  Json a = Json::array();
  for (const auto& v : vs) a.push_back(to_json(v));
  return a;
}

// Polyhedra

inline HalfspaceKind parse_kind(const Json& j) {
  const auto s = j.is_string() ? j.get<std::string>() : std::string();
  if (s == "boundary") return HalfspaceKind::Boundary;
  if (s == "cut") return HalfspaceKind::Cut;
  if (s == "truncation") return HalfspaceKind::Truncation;
  parse_fail("unknown halfspace kind " + j.dump());
}

constexpr std::string_view kind_name(HalfspaceKind k) {
  switch (k) {
    case HalfspaceKind::Boundary: return "boundary";
    case HalfspaceKind::Cut: return "cut";
    case HalfspaceKind::Truncation: return "truncation";
  }
  return "boundary";
}

inline Halfspace parse_halfspace(const Json& j) {
  Halfspace h{parse_int_vector(field(j, "normal")), parse_rational(field(j, "offset"))};
  if (j.contains("kind")) h.kind = parse_kind(j.at("kind"));
  return h;
}

inline Json to_json(const Halfspace& h) {
  Json j{{"normal", to_json(h.normal)}, {"offset", to_json(h.offset)}};
  if (h.kind != HalfspaceKind::Boundary) j["kind"] = kind_name(h.kind);
  return j;
}

inline PolyhedronSpec parse_polyhedron(const Json& j) {
  PolyhedronSpec p{parse_index(field(j, "dim")), {}};
  for (const auto& h : parse_array(field(j, "halfspaces"), "halfspaces")) {
    p.halfspaces.push_back(parse_halfspace(h));
    if (p.halfspaces.back().normal.size() != p.dim)
      fail(ErrorCode::DimensionMismatch, "halfspace normal of length " +
                                             std::to_string(p.halfspaces.back().normal.size()) + " in dimension " +
                                             std::to_string(p.dim));
  }
  return p;
}

inline Json to_json(const PolyhedronSpec& p) {
  Json hs = Json::array();
  for (const auto& h : p.halfspaces) hs.push_back(to_json(h));
  return {{"dim", p.dim}, {"halfspaces", hs}};
}

// Corner complexes. Cell ids are positions in the cell list.

inline CornerComplex parse_complex(const Json& j) {
  CornerComplex w;
  w.n = parse_index(field(j, "dim"));
  const auto& cells = parse_array(field(j, "cells"), "cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    if (c.contains("id") && parse_index(c.at("id")) != i)
      parse_fail("cell ids must be 0, 1, 2, ... in order; found " + c.at("id").dump() + " at position " +
                 std::to_string(i));
    Cell cell;
    cell.dim = parse_index(field(c, "dim"));
    if (c.contains("boundary"))
      for (const auto& inc : parse_array(c.at("boundary"), "boundary")) {
        auto id = parse_index(field(inc, "id"));
        auto s = parse_integer(field(inc, "incidence"));
        if (id >= cells.size()) parse_fail("boundary refers to unknown cell " + std::to_string(id));
        if (s != 1 && s != -1) parse_fail("incidence must be 1 or -1");
        cell.boundary.push_back({id, static_cast<int>(s.get_si())});
      }
    if (c.contains("origin")) cell.origin = static_cast<int>(parse_integer(c.at("origin")).get_si());
    w.cells.push_back(std::move(cell));
  }
  if (j.contains("charts"))
    for (const auto& c : parse_array(j.at("charts"), "charts")) {
      Chart ch;
      ch.top = parse_index(field(c, "top"));
      const auto& rows = parse_array(field(c, "matrix"), "matrix");
      ch.matrix = RatMatrix(w.n, w.n);
      if (rows.size() != w.n) fail(ErrorCode::DimensionMismatch, "chart matrix must be n x n");
      for (std::size_t r = 0; r < w.n; ++r) {
        auto row = parse_rat_vector(rows[r]);
        if (row.size() != w.n) fail(ErrorCode::DimensionMismatch, "chart matrix must be n x n");
        for (std::size_t k = 0; k < w.n; ++k) ch.matrix(r, k) = row[k];
      }
      ch.translation = parse_rat_vector(field(c, "translation"));
      if (ch.translation.size() != w.n) fail(ErrorCode::DimensionMismatch, "chart translation length");
      for (const auto& h : parse_array(field(c, "cone"), "cone")) ch.cone.push_back(parse_halfspace(h));
      for (const auto& l : parse_array(field(c, "local"), "local"))
        ch.local[parse_index(field(l, "vertex"))] = parse_rat_vector(field(l, "coords"));
      w.charts.push_back(std::move(ch));
    }
  w.cohomology_only = w.charts.empty();
  return w;
}

inline Json to_json(const CornerComplex& w) {
  Json cells = Json::array();
  for (std::size_t i = 0; i < w.cells.size(); ++i) {
    Json b = Json::array();
    for (const auto& inc : w.cells[i].boundary) b.push_back({{"id", inc.cell}, {"incidence", inc.sign}});
    Json c{{"id", i}, {"dim", w.cells[i].dim}, {"boundary", b}};
    if (w.cells[i].origin >= 0) c["origin"] = w.cells[i].origin;
    cells.push_back(std::move(c));
  }
  Json j{{"dim", w.n}, {"cells", cells}};
  if (!w.charts.empty()) {
    Json charts = Json::array();
    for (const auto& ch : w.charts) {
      Json m = Json::array();
      for (std::size_t r = 0; r < ch.matrix.rows(); ++r) {
        RatVector row;
        for (std::size_t k = 0; k < ch.matrix.cols(); ++k) row.push_back(ch.matrix(r, k));
        m.push_back(to_json(row));
      }
      Json cone = Json::array();
      for (const auto& h : ch.cone) cone.push_back(to_json(h));
      Json local = Json::array();
      for (const auto& [v, x] : ch.local) local.push_back({{"vertex", v}, {"coords", to_json(x)}});
      charts.push_back({{"top", ch.top}, {"matrix", m}, {"translation", to_json(ch.translation)}, {"cone", cone},
                        {"local", local}});
    }
    j["charts"] = charts;
  }
  return j;
}

/// A validated base together with the position and orientation, in the
/// validated complex, of every cell id used by the input.
struct Base {
  std::string kind;
  ULE ule;
  std::vector<CellImage> images;
  std::size_t lattice_dim = 0;  // n of Z^n; defaults to the complex dimension
};

inline std::vector<CellImage> identity_images(std::size_t m) {
  std::vector<CellImage> out;
  for (std::size_t i = 0; i < m; ++i) out.push_back({i, 1});
  return out;
}

inline CornerComplex builtin_complex(const std::string& name, std::size_t dim) {
  if (name == "point") return builders::point();
  if (name == "interval") return builders::interval();
  if (name == "square") return builders::square();
  if (name == "annulus") return builders::annulus();
  if (name == "tetrahedron") return builders::tetrahedron_boundary();
  if (name == "cube-surface") return builders::cube_surface();
  if (name == "projective-plane") return builders::projective_plane();
  if (name == "shell") return builders::punctured_space(dim);
  parse_fail("unknown builtin " + name);
}

inline Base load_base(const Json& j, const std::filesystem::path& dir);

inline Base load_base_file(const std::filesystem::path& path) {
  return load_base(parse_text(read_file(path), path.string()), path.parent_path());
}

inline WallIdentification parse_wall(const Json& j) {
  return {parse_index(field(j, "piece_a")), parse_index(field(j, "halfspace_a")), parse_index(field(j, "piece_b")),
          parse_index(field(j, "halfspace_b"))};
}

inline Base load_base(const Json& j, const std::filesystem::path& dir) {
  if (j.is_string()) return load_base_file(dir / j.get<std::string>());
  if (!j.is_object()) parse_fail("expected an object describing W");
  Base b;
  if (j.contains("builtin")) {
    const auto name = field(j, "builtin").get<std::string>();
    const std::size_t dim = j.contains("dim") ? parse_index(j.at("dim")) : 3;
    if (name == "double-cover" || name == "half-plane") {
      auto ex = name == "double-cover" ? builders::double_cover() : builders::half_plane();
      b.kind = "pieces";
      b.ule = glue(ex.pieces, ex.walls);
    } else {
      b.kind = "complex";
      b.ule = validate(builtin_complex(name, dim));
    }
    b.lattice_dim = name == "shell" ? dim : b.ule.dim();
  } else if (j.contains("pieces")) {
    std::vector<PolyhedronSpec> pieces;
    for (const auto& p : parse_array(j.at("pieces"), "pieces")) pieces.push_back(parse_polyhedron(p));
    std::vector<WallIdentification> walls;
    if (j.contains("walls"))
      for (const auto& w : parse_array(j.at("walls"), "walls")) walls.push_back(parse_wall(w));
    b.kind = "pieces";
    b.ule = glue(pieces, walls);
  } else if (j.contains("cells")) {
    auto w = parse_complex(j);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (j.contains("gluings"))
      for (const auto& g : parse_array(j.at("gluings"), "gluings")) {
        if (!g.is_array() || g.size() != 2) parse_fail("a gluing is a pair of cell ids");
        pairs.emplace_back(parse_index(g[0]), parse_index(g[1]));
      }
    b.kind = "complex";
    if (pairs.empty()) {
      b.images = identity_images(w.cells.size());
      b.ule = validate(std::move(w));
    } else {
      b.ule = validate(identify_cells(w, pairs, &b.images));
    }
  } else if (j.contains("halfspaces")) {
    b.kind = "polyhedron";
    b.ule = from_polyhedron(parse_polyhedron(j));
  } else {
    parse_fail("cannot tell the input kind: expected one of builtin, pieces, cells, halfspaces");
  }
  if (b.images.empty()) b.images = identity_images(b.ule.complex.cells.size());
  if (!b.lattice_dim) b.lattice_dim = b.ule.dim();
  return b;
}

// Cochains. Entries name cells by input id; values on cells whose
// orientation was reversed by a gluing change sign.

inline CochainData parse_cochain(const Json& entries, const Base& b, const ChainComplexData& cx, Ring ring,
                                 std::size_t width) {
  auto c = CochainData::zero(cx, 2, ring, width);
  std::map<std::size_t, std::size_t> position;
  for (std::size_t i = 0; i < cx.count(2); ++i) position[cx.cells[2][i]] = i;
  std::map<std::size_t, RatVector> seen;
  for (const auto& e : parse_array(entries, "cochain")) {
    auto id = parse_index(field(e, "cell"));
    if (id >= b.images.size()) parse_fail("cochain refers to unknown cell " + std::to_string(id));
    const auto& v = field(e, "value");
    RatVector value;
    if (ring == Ring::Integers) {
      for (const auto& x : parse_int_vector(v)) value.emplace_back(x);
    } else {
      value = v.is_array() ? parse_rat_vector(v) : RatVector{parse_rational(v)};
    }
    if (value.size() != width)
      fail(ErrorCode::DimensionMismatch, "cochain value on cell " + std::to_string(id) + " has length " +
                                             std::to_string(value.size()) + ", expected " + std::to_string(width));
    auto [target, sign] = b.images[id];
    auto it = position.find(target);
    if (it == position.end())
      fail(ErrorCode::DimensionMismatch, "cell " + std::to_string(id) + " is not a 2-cell");
    for (auto& x : value) x *= sign;
    auto [prev, fresh] = seen.emplace(target, value);
    if (!fresh && prev->second != value) parse_fail("conflicting values on identified cells");
    c.values[it->second] = value;
  }
  return c;
}

/// Nonzero entries only, by cell index of the validated complex.
inline Json to_json(const CochainData& c, const ChainComplexData& cx) {
  Json out = Json::array();
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    bool zero = true;
    for (const auto& x : c.values[i]) zero = zero && x == 0;
    if (zero) continue;
    Json value;
    if (c.ring == Ring::Rationals && c.width == 1) {
      value = to_json(c.values[i][0]);
    } else if (c.ring == Ring::Integers) {
      value = Json::array();
      for (const auto& x : c.values[i]) value.push_back(to_json(Integer(x)));
    } else {
      value = to_json(c.values[i]);
    }
    out.push_back({{"cell", cx.cells[c.degree][i]}, {"value", value}});
  }
  return out;
}

struct LoadedBundle {
  Base base;
  BundleData bundle;
};

/// A bundle file {base, chern, horizontal}, or a bare description of W,
/// which stands for its trivial bundle.
inline LoadedBundle load_bundle(const Json& j, const std::filesystem::path& dir) {
  if (j.is_object() && j.contains("base")) {
    auto base = load_base(j.at("base"), dir);
    auto cx = std::make_shared<const ChainComplexData>(cellular_complex(base.ule));
    const std::size_t n = base.ule.dim();
    auto a = j.contains("chern") ? parse_cochain(j.at("chern"), base, *cx, Ring::Integers, n)
                                 : CochainData::zero(*cx, 2, Ring::Integers, n);
    auto h = j.contains("horizontal") ? parse_cochain(j.at("horizontal"), base, *cx, Ring::Rationals, 1)
                                      : CochainData::zero(*cx, 2, Ring::Rationals, 1);
    auto bundle = with_classes(base.ule, cx, a, h);
    return {std::move(base), std::move(bundle)};
  }
  auto base = load_base(j, dir);
  auto bundle = trivial_bundle(base.ule);
  return {std::move(base), std::move(bundle)};
}

// Reports

inline Json to_json(const MomentImage& m) {
  Json j{{"status", to_string(m.status)}};
  if (m.image) {
    Json hs = Json::array();
    for (const auto& h : m.image->halfspaces) hs.push_back(to_json(h));
    j["halfspaces"] = hs;
  }
  return j;
}

inline Json strata_table(const ULE& w) {
  Json out = Json::array();
  for (std::size_t f = 0; f < w.strata.size(); ++f) {
    const auto& s = w.strata[f];
    Json row{{"face", f}, {"dim", s.dim}, {"index", s.index()}, {"basis", to_json(s.basis)}};
    if (!s.base_value.empty()) row["base_value"] = to_json(s.base_value);
    out.push_back(std::move(row));
  }
  return out;
}

inline Json to_json(const CohomologyGroup& g) {
  Json t = Json::array();
  for (const auto& d : g.torsion) t.push_back(to_json(d));
  return {{"free_rank", g.free_rank}, {"torsion", t}};
}

inline Json to_json(const ToricDescriptor& d, const ChainComplexData& cx) {
  Json strata = Json::array();
  for (const auto& s : d.strata) {
    Json row{{"face", s.face},
             {"dim", s.dim},
             {"ell", s.model.ell},
             {"k", s.model.k},
             {"weights", to_json(s.model.weights)}};
    if (!s.model.base_value.empty()) row["base_value"] = to_json(s.model.base_value);
    strata.push_back(std::move(row));
  }
  return {{"strata", strata},
          {"chern_class", to_json(d.chern_class, cx)},
          {"horizontal_class", to_json(d.horizontal_class, cx)},
          {"moment_image", to_json(d.moment_image)}};
}

}  // namespace toric::io
