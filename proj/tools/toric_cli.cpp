// toric: validate, classify, collapse, C^N-quotient test and numeric checks.
//
// Exit codes: 0 ok, 2 parse error, 3 validation error, 4 numeric tolerance
// exceeded.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "toric/io.hpp"
#include "toric/numcheck.hpp"

namespace {

using toric::io::Json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitTolerance = 4;

struct Options {
  std::string input;
  std::size_t dim = 0;
  double tolerance = 0;
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  bool json = false;
  bool text = false;
};

struct Outcome {
  Json result;
  bool within_tolerance = true;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("-i,--input", o.input, "Input JSON file")->required()->check(CLI::ExistingFile);
  sub->add_option("--dim", o.dim, "Lattice rank n of Z^n (classify); defaults to the dimension of W");
  sub->add_option("--tolerance", o.tolerance, "Residual tolerance (numcheck)");
  sub->add_option("--samples", o.samples, "Number of samples (numcheck)");
  sub->add_option("--seed", o.seed, "Sampling seed (numcheck); TORIC_SEED overrides");
  auto* j = sub->add_flag("--json", o.json, "JSON report (default)");
  auto* t = sub->add_flag("--text", o.text, "Plain text report");
  j->excludes(t);
}

Json load(const Options& o) { return toric::io::parse_text(toric::io::read_file(o.input), o.input); }

Outcome cmd_validate(const Options& o) {
  auto base = toric::io::load_base(load(o), fs::path(o.input).parent_path());
  const auto& w = base.ule;
  Json by_dim = Json::array();
  for (std::size_t k = 0; k <= w.dim(); ++k) by_dim.push_back(toric::faces(w, k).size());
  return {Json{{"kind", base.kind},
               {"dim", w.dim()},
               {"cells", w.complex.cells.size()},
               {"cohomology_only", w.cohomology_only()},
               {"faces_by_dim", by_dim},
               {"strata", toric::io::strata_table(w)},
               {"moment_image", toric::io::to_json(toric::moment_image(w))}}};
}

Outcome cmd_classify(const Options& o) {
  auto base = toric::io::load_base(load(o), fs::path(o.input).parent_path());
  const std::size_t n = o.dim ? o.dim : base.lattice_dim;
  auto cx = toric::cellular_complex(base.ule);
  auto cls = toric::classification_set(cx, n);
  auto verdict = toric::delzant_unique(base.ule);

  std::string summary = cls.describe();
  if (cls.trivial()) {
    if (verdict.image == toric::ImageStatus::Ok)
      summary = "trivial; unique toric manifold";
    else if (cls.h2_int.trivial())
      summary = "trivial (H²=0)";
  }
  Json free = Json::array(), torsion = Json::array();
  for (const auto& g : cls.h2_generators.free) free.push_back(toric::io::to_json(g, cx));
  for (const auto& g : cls.h2_generators.torsion) torsion.push_back(toric::io::to_json(g, cx));
  Json reasons = Json::array();
  for (const auto& r : verdict.reasons()) reasons.push_back(r);
  return {Json{{"kind", base.kind},
               {"n", n},
               {"h2_integer", toric::io::to_json(cls.h2_int)},
               {"h2_real_rank", cls.real_rank},
               {"group", cls.describe()},
               {"summary", summary},
               {"generators", {{"free", free}, {"torsion", torsion}}},
               {"delzant_unique", verdict.unique()},
               {"reasons", reasons}}};
}

Outcome cmd_collapse(const Options& o) {
  auto loaded = toric::io::load_bundle(load(o), fs::path(o.input).parent_path());
  auto d = toric::collapse(loaded.bundle);
  Json r = toric::io::to_json(d, *loaded.bundle.complex);
  r["kind"] = loaded.base.kind;
  return {r};
}

Outcome cmd_cnquotient(const Options& o) {
  auto loaded = toric::io::load_bundle(load(o), fs::path(o.input).parent_path());
  auto q = toric::cn_quotient(toric::collapse(loaded.bundle));
  Json r{{"kind", loaded.base.kind}, {"quotient", q.ok()}};
  r["minimal_N"] = q.minimal_n ? Json(*q.minimal_n) : Json(nullptr);
  r["failure"] = q.ok() ? Json(nullptr) : Json(std::string(toric::to_string(q.failure)));
  r["facets"] = q.facet_count;
  return {r};
}

double number(const Json& spec, const char* key, double fallback) {
  if (!spec.contains(key)) return fallback;
  if (!spec.at(key).is_number()) toric::io::parse_fail(std::string(key) + " must be a number");
  return spec.at(key).get<double>();
}

std::size_t count(const Json& spec, const char* key, std::size_t fallback) {
  return spec.contains(key) ? toric::io::parse_index(spec.at(key)) : fallback;
}

Outcome cmd_numcheck(const Options& o) {
  namespace nc = toric::numcheck;
  const Json spec = load(o);
  const auto check = toric::io::field(spec, "check");
  if (!check.is_string()) toric::io::parse_fail("check must be a string");
  const std::string name = check.get<std::string>();
  const std::size_t samples = o.samples ? o.samples : count(spec, "samples", 1000);

  Json r{{"check", name}};
  nc::ResidualReport rep;
  double tol = 0;
  bool pass = true;
  if (name == "cut") {
    auto cone = toric::canonicalize(toric::io::parse_polyhedron(toric::io::field(spec, "cone")));
    rep = nc::cut_residual(cone, nc::sample_cone(cone, samples, o.seed));
    tol = o.tolerance ? o.tolerance : number(spec, "tolerance", nc::kAlgebraicTolerance);
  } else if (name == "horizontal") {
    nc::HorizontalModel m;
    m.n = count(spec, "dim", 2);
    if (spec.contains("beta")) m.beta = spec.at("beta").get<std::vector<std::vector<double>>>();
    m.warp = number(spec, "warp", nc::kDefaultWarp);
    const double h = number(spec, "step", nc::kDefaultStep);
    rep = nc::horizontal_residual(m, samples, h, o.seed);
    const double order = nc::convergence_order(m, samples, nc::kOrderStep, o.seed);
    tol = o.tolerance ? o.tolerance : number(spec, "tolerance", nc::kFiniteDifferenceTolerance);
    r["order"] = order;
    r["order_steps"] = Json::array({nc::kOrderStep, nc::kOrderStep / 2});
    r["min_order"] = nc::kMinConvergenceOrder;
    // A zero residual has no measurable order.
    if (rep.max_abs_residual > 0) pass = order >= nc::kMinConvergenceOrder;
  } else if (name == "moment") {
    const auto convention = spec.contains("convention") ? spec.at("convention").get<std::string>() : "standard";
    if (convention != "standard" && convention != "flipped") toric::io::parse_fail("unknown convention " + convention);
    rep = nc::moment_gradient_check(count(spec, "ell", 1), count(spec, "k", 1), samples,
                                    number(spec, "step", nc::kDefaultStep), o.seed,
                                    convention == "flipped" ? nc::Convention::Flipped : nc::Convention::Standard);
    tol = o.tolerance ? o.tolerance : number(spec, "tolerance", nc::kFiniteDifferenceTolerance);
    r["convention"] = convention;
  } else {
    toric::io::parse_fail("unknown check " + name);
  }
  pass = pass && rep.passes(tol);
  r["max_abs_residual"] = rep.max_abs_residual;
  r["samples"] = rep.samples;
  r["step"] = rep.step;
  r["seed"] = o.seed;
  r["tolerance"] = tol;
  r["pass"] = pass;
  return {r, pass};
}

void render_text(const Json& j, const std::string& prefix, std::ostream& out) {
  auto scalar = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) render_text(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    bool flat = true;
    for (const auto& v : j) flat = flat && !v.is_structured();
    if (flat) {
      out << prefix << ": [";
      for (std::size_t i = 0; i < j.size(); ++i) out << (i ? ", " : "") << scalar(j[i]);
      out << "]\n";
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) render_text(j[i], prefix + "[" + std::to_string(i) + "]", out);
    }
  } else {
    out << prefix << ": " << scalar(j) << "\n";
  }
}

std::string digest(const Options& o, const std::string& command) {
  std::uint64_t h = toric::io::fnv1a64(toric::io::read_file(o.input));
  std::ostringstream flags;
  flags << command << ";dim=" << o.dim << ";tolerance=" << o.tolerance << ";samples=" << o.samples
        << ";seed=" << o.seed;
  return "fnv1a64:" + toric::io::hex64(toric::io::fnv1a64(flags.str(), h));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact classification toolkit for symplectic toric manifolds over unimodular local embeddings"};
  app.require_subcommand(1);
  Options o;
  auto* validate = app.add_subcommand("validate", "Check that the input is a unimodular local embedding");
  auto* classify = app.add_subcommand("classify", "Compute the classifying group H^2(W; Z^n x R)");
  auto* collapse = app.add_subcommand("collapse", "Collapse a bundle to a toric manifold descriptor");
  auto* cnquotient = app.add_subcommand("cnquotient", "Decide whether the manifold is a reduced space of C^N");
  auto* numcheck = app.add_subcommand("numcheck", "Run a floating-point check of a local formula");
  for (auto* sub : {validate, classify, collapse, cnquotient, numcheck}) add_common(sub, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitParse;
  }
  if (const char* env = std::getenv("TORIC_SEED")) {
    try {
      o.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "TORIC_SEED must be a nonnegative integer\n";
      return kExitParse;
    }
  }

  const std::string command = app.get_subcommands().front()->get_name();
  Json report{{"command", command}};
  int rc = kExitOk;
  try {
    report["inputs"] = {{"digest", digest(o, command)}};
    Outcome out;
    if (command == "validate") out = cmd_validate(o);
    if (command == "classify") out = cmd_classify(o);
    if (command == "collapse") out = cmd_collapse(o);
    if (command == "cnquotient") out = cmd_cnquotient(o);
    if (command == "numcheck") out = cmd_numcheck(o);
    if (out.within_tolerance) {
      report["status"] = "ok";
    } else {
      report["status"] = "error";
      report["error"] = {
          {"category", "ToleranceError"}, {"code", "ToleranceExceeded"}, {"message", "residual above tolerance"}};
      rc = kExitTolerance;
    }
    report["result"] = out.result;
  } catch (const toric::Error& e) {
    const bool parse = e.code() == toric::ErrorCode::ParseError;
    rc = parse ? kExitParse : kExitValidation;
    report["status"] = "error";
    report["error"] = {{"category", parse ? "ParseError" : "ValidationError"},
                       {"code", toric::to_string(e.code())},
                       {"message", e.what()}};
  } catch (const nlohmann::json::exception& e) {
    rc = kExitParse;
    report["status"] = "error";
    report["error"] = {{"category", "ParseError"}, {"code", "ParseError"}, {"message", e.what()}};
  }

  if (o.text)
    render_text(report, "", std::cout);
  else
    std::cout << report.dump(2) << "\n";
  return rc;
}
