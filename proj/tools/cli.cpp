#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dop/boundary.hpp"
#include "dop/catalog.hpp"
#include "dop/error.hpp"
#include "dop/geometry.hpp"
#include "dop/quadrature.hpp"
#include "dop/spectra.hpp"
#include "dop/verification.hpp"

namespace dop::cli {

namespace {

using nlohmann::json;

struct Common {
  std::string format = "pretty";
  std::string out_path;
  std::string seed_text;
};

void add_common(CLI::App* sub, Common& c, bool seeded) {
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv", "pretty"}));
  sub->add_option("--out", c.out_path, "Write the report to PATH instead of stdout");
  if (seeded) sub->add_option("--seed", c.seed_text, "RNG seed (decimal or 0x hex); default 0xD0F5EEDD");
}

std::uint64_t parse_seed(const std::string& text) {
  if (text.empty()) return kDefaultSeed;
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used, 0);
  } catch (const std::exception&) {
    throw parse_error("malformed seed: " + text);
  }
  if (used != text.size()) throw parse_error("malformed seed: " + text);
  return v;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

// One rendered report in the three formats; only the requested one is built.
struct Report {
  std::function<json()> as_json;
  std::function<std::string()> as_pretty;
  std::function<std::string()> as_csv;
};

void emit(const Common& c, const Report& r, std::ostream& out) {
  std::string text;
  if (c.format == "json") text = r.as_json().dump(2) + "\n";
  else if (c.format == "csv") text = r.as_csv();
  else text = r.as_pretty();
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw parameter_error("cannot open output file " + c.out_path);
  f << text;
  if (!f) throw parameter_error("cannot write output file " + c.out_path);
}

std::vector<Rational> parse_witness(const std::string& text) {
  std::vector<Rational> w;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) w.push_back(parse_rational(item));
  if (w.empty()) throw parse_error("empty witness");
  return w;
}

std::optional<std::string> opt_string(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s;
}

json cometric_json(const CoMetric& g) {
  json rows = json::array();
  for (int i = 0; i < g.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < g.dim(); ++j) row.push_back(g(i, j).str());
    rows.push_back(row);
  }
  return rows;
}

std::string status_tag(const std::string& s) { return "[" + s + "]"; }

// ---- subcommands ----

int cmd_models_list(const Common& c, std::ostream& out) {
  const auto models = list_models();
  Report r;
  r.as_json = [&] {
    json a = json::array();
    for (const auto& m : models)
      a.push_back({{"name", m.name},
                   {"dim", m.dim},
                   {"params", m.params},
                   {"boundary_degree", m.boundary_degree},
                   {"compact", m.compact},
                   {"label", m.label}});
    return a;
  };
  r.as_csv = [&] {
    std::string s = "name,dim,params,boundary_degree,compact\n";
    for (const auto& m : models) {
      std::string p;
      for (const auto& x : m.params) p += (p.empty() ? "" : " ") + x;
      s += m.name + "," + std::to_string(m.dim) + "," + csv_field(p) + "," + std::to_string(m.boundary_degree) + "," +
           (m.compact ? "true" : "false") + "\n";
    }
    return s;
  };
  r.as_pretty = [&] {
    std::ostringstream s;
    for (const auto& m : models) {
      s << m.name << "  d=" << m.dim << "  deg=" << m.boundary_degree << (m.compact ? "  compact" : "  non-compact");
      if (!m.params.empty()) {
        s << "  params:";
        for (const auto& p : m.params) s << ' ' << p;
      }
      s << "\n    " << m.label << "\n";
    }
    return s.str();
  };
  emit(c, r, out);
  return kOk;
}

struct AdmissibleArgs {
  std::vector<std::string> factors;
  std::string witness;
  std::size_t directions = 10000;
};

int cmd_admissible(const Common& c, const AdmissibleArgs& a, std::ostream& out) {
  BoundarySpec spec;
  spec.witness = parse_witness(a.witness);
  spec.dim = static_cast<int>(spec.witness.size());
  std::vector<std::string> flipped;
  for (const auto& text : a.factors) {
    Polynomial f = parse_polynomial(text, spec.dim);
    const Rational at = f.eval(spec.witness);
    if (at == 0) throw parameter_error("boundary factor " + f.str() + " vanishes at the witness");
    if (at < 0) {
      f = -f;
      flipped.push_back(f.str());
    }
    spec.factors.push_back(f);
  }
  spec.validate();
  const std::uint64_t seed = parse_seed(c.seed_text);

  auto sol = solve_admissibility(spec);
  auto search = elliptic_search(spec, sol, a.directions, seed);
  const bool elliptic = search.elliptic > 0;
  const std::string verdict = elliptic ? "elliptic solution found" : "no elliptic solution";

  Report r;
  r.as_json = [&] {
    json basis = json::array();
    for (std::size_t b = 0; b < sol.g_basis.size(); ++b) {
      json s = json::array();
      for (const auto& per_factor : sol.s_for[b]) {
        json axes = json::array();
        for (const auto& p : per_factor) axes.push_back(p.str());
        s.push_back(axes);
      }
      basis.push_back({{"cometric", cometric_json(sol.g_basis[b])}, {"S", s}});
    }
    json factors = json::array();
    for (const auto& f : spec.factors) factors.push_back(f.str());
    json j{{"dim", spec.dim},
           {"factors", factors},
           {"negated_factors", flipped},
           {"dimension", sol.g_basis.size()},
           {"basis", basis},
           {"directions", search.directions},
           {"elliptic_directions", search.elliptic},
           {"elliptic", elliptic},
           {"verdict", verdict}};
    if (elliptic) j["elliptic_coefficients"] = search.first;
    return j;
  };
  r.as_csv = [&] {
    std::string s = "basis,i,j,entry\n";
    for (std::size_t b = 0; b < sol.g_basis.size(); ++b)
      for (int i = 0; i < spec.dim; ++i)
        for (int j = i; j < spec.dim; ++j)
          s += std::to_string(b) + "," + std::to_string(i) + "," + std::to_string(j) + "," +
               csv_field(sol.g_basis[b](i, j).str()) + "\n";
    return s;
  };
  r.as_pretty = [&] {
    std::ostringstream s;
    for (const auto& f : flipped) s << "note: factor negated to be positive at the witness: " << f << "\n";
    s << "solution dimension: " << sol.g_basis.size() << "\n";
    for (std::size_t b = 0; b < sol.g_basis.size(); ++b) {
      s << "basis element " << b << ":\n";
      for (int i = 0; i < spec.dim; ++i)
        for (int j = i; j < spec.dim; ++j) s << "  g" << i + 1 << j + 1 << " = " << sol.g_basis[b](i, j).str() << "\n";
    }
    s << "ellipticity: " << verdict << " (" << search.elliptic << " of " << search.directions
      << " sampled directions)\n";
    return s.str();
  };
  emit(c, r, out);
  return kOk;
}

struct ModelArgs {
  std::string model;
  std::vector<std::string> params;
  std::string measure;
};

int cmd_spectrum(const Common& c, const ModelArgs& m, int degree, std::ostream& out) {
  if (degree < 0) throw parameter_error("degree must be non-negative");
  Model model = get_model(m.model, parse_param_assignments(m.params), opt_string(m.measure));
  const SpectrumResult spec = graded_eigenvalues(model.op(), degree);
  Report r;
  r.as_json = [&] { return spectrum_to_json(spec); };
  r.as_csv = [&] {
    std::string s = "degree,eigenvalue,exact,multiplicity,source\n";
    for (const auto& d : spec.degrees)
      for (const auto& e : d.values)
        s += std::to_string(d.degree) + "," + fmt(e.value) + "," + (e.exact ? to_string(*e.exact) : "") + "," +
             std::to_string(e.multiplicity) + "," + e.source + "\n";
    return s;
  };
  r.as_pretty = [&] {
    std::ostringstream s;
    s << model.name << " (d=" << spec.dim << ")\n";
    for (const auto& d : spec.degrees) {
      s << "degree " << d.degree << ":";
      for (const auto& e : d.values) {
        s << ' ' << (e.exact ? to_string(*e.exact) : fmt(e.value));
        if (e.imag != 0.0) s << (e.imag > 0 ? "+" : "") << fmt(e.imag) << "i";
        if (e.multiplicity > 1) s << " (x" << e.multiplicity << ")";
      }
      s << "\n";
    }
    return s.str();
  };
  emit(c, r, out);
  return kOk;
}

std::string pretty_checks(const ModelReport& m) {
  std::ostringstream s;
  s << m.model << (m.measure.empty() ? "" : " measure=" + m.measure) << ": " << (m.ok() ? "ok" : "FAILED") << "\n";
  for (const auto& c : m.checks)
    s << "  " << status_tag(c.status) << ' ' << c.name << (c.gating ? "" : " (informational)")
      << (c.message.empty() ? "" : ": " + c.message) << "\n";
  for (const auto& cl : m.claims)
    s << "  " << status_tag(to_string(cl.status)) << ' ' << cl.id << (cl.message.empty() ? "" : ": " + cl.message)
      << "\n";
  return s.str();
}

std::string csv_checks(const ModelReport& m) {
  std::string s;
  for (const auto& c : m.checks)
    s += m.model + ",check," + c.name + "," + c.status + "," + (c.gating ? "true" : "false") + "," +
         csv_field(c.message) + "\n";
  for (const auto& cl : m.claims)
    s += m.model + ",claim," + cl.id + "," + to_string(cl.status) + ",true," + csv_field(cl.message) + "\n";
  return s;
}

struct VerifyArgs {
  ModelArgs m;
  std::size_t samples = 1000000;
  int nodes = 32;
};

int cmd_verify(const Common& c, const VerifyArgs& a, std::ostream& out) {
  VerifyOptions opt;
  opt.seed = parse_seed(c.seed_text);
  opt.mc_samples = a.samples;
  opt.gauss_nodes = a.nodes;
  if (a.samples == 0) throw parameter_error("--samples must be positive");
  if (a.nodes < 1) throw parameter_error("--nodes must be positive");
  if (a.m.model == "all") {
    if (!a.m.params.empty() || !a.m.measure.empty())
      throw parameter_error("--param and --measure need a single model");
    const VerifyReport rep = verify_all(opt);
    Report r;
    r.as_json = [&] { return to_json(rep); };
    r.as_csv = [&] {
      std::string s = "model,type,name,status,gating,message\n";
      for (const auto& m : rep.models) s += csv_checks(m);
      for (const auto& cl : rep.global_claims)
        s += ",claim," + cl.id + "," + to_string(cl.status) + ",true," + csv_field(cl.message) + "\n";
      return s;
    };
    r.as_pretty = [&] {
      std::string s;
      for (const auto& m : rep.models) s += pretty_checks(m);
      s += "global claims:\n";
      for (const auto& cl : rep.global_claims)
        s += "  " + status_tag(to_string(cl.status)) + " " + cl.id + (cl.message.empty() ? "" : ": " + cl.message) +
             "\n";
      s += std::string("overall: ") + (rep.ok() ? "ok" : "FAILED") + "\n";
      return s;
    };
    emit(c, r, out);
    return rep.ok() ? kOk : kVerificationFailure;
  }
  const ParamMap params = parse_param_assignments(a.m.params);
  // Validates the name, parameters and measure text before the battery runs.
  find_model(a.m.model);
  resolve_params(find_model(a.m.model), params);
  const ModelReport rep = verify_model(a.m.model, params, opt_string(a.m.measure), opt);
  Report r;
  r.as_json = [&] { return to_json(rep); };
  r.as_csv = [&] { return "model,type,name,status,gating,message\n" + csv_checks(rep); };
  r.as_pretty = [&] { return pretty_checks(rep); };
  emit(c, r, out);
  return rep.ok() ? kOk : kVerificationFailure;
}

int cmd_curvature(const Common& c, const ModelArgs& m, std::size_t points, std::ostream& out) {
  Model model = get_model(m.model, parse_param_assignments(m.params), opt_string(m.measure));
  if (model.dim() != 2) throw dimension_error("curvature is defined here for d = 2 models only");
  if (points == 0) throw parameter_error("--points must be positive");
  const CurvatureReport rep = curvature_constancy(model, points);
  Report r;
  r.as_json = [&] {
    json pts = json::array();
    for (std::size_t i = 0; i < rep.points.size(); ++i)
      pts.push_back({rep.points[i][0], rep.points[i][1], rep.values[i]});
    return json{{"model", rep.model},
                {"params", params_to_json(model.params)},
                {"count", rep.points.size()},
                {"mean", rep.mean},
                {"min", rep.min},
                {"max", rep.max},
                {"spread", rep.spread()},
                {"max_deviation", rep.max_deviation},
                {"constant", rep.constant},
                {"samples", pts}};
  };
  r.as_csv = [&] { return curvature_csv(rep); };
  r.as_pretty = [&] {
    std::ostringstream s;
    s << rep.model << ": " << rep.points.size() << " interior points\n"
      << "  scalar curvature mean " << fmt(rep.mean) << ", min " << fmt(rep.min) << ", max " << fmt(rep.max) << "\n"
      << "  " << (rep.constant ? "constant" : "not constant") << " (max deviation " << fmt(rep.max_deviation)
      << ")\n";
    return s.str();
  };
  emit(c, r, out);
  return kOk;
}

struct OrthoArgs {
  ModelArgs m;
  int degree = 3;
  std::string sampler;
  std::size_t samples = 1000000;
  int nodes = 32;
};

int cmd_orthogonality(const Common& c, const OrthoArgs& a, std::ostream& out) {
  if (a.degree < 0) throw parameter_error("degree must be non-negative");
  if (a.samples == 0) throw parameter_error("--samples must be positive");
  if (a.nodes < 1) throw parameter_error("--nodes must be positive");
  Model model = get_model(a.m.model, parse_param_assignments(a.m.params), opt_string(a.m.measure));
  DomainSampler sampler = default_sampler(model);
  if (!a.sampler.empty()) sampler.kind = parse_sampler_kind(a.sampler);
  sampler.samples = a.samples;
  sampler.nodes = a.nodes;
  sampler.seed = parse_seed(c.seed_text);
  const PointSet pts = sample_domain(model, sampler);
  const SymmetryDefect d = symmetry_defect(model.op(), pts, a.degree);
  const MonomialBasis basis(model.dim(), a.degree);
  const std::string wk = basis.monomial(d.worst_k).str(), wl = basis.monomial(d.worst_l).str();
  Report r;
  r.as_json = [&] {
    return json{{"model", model.name},
                {"params", params_to_json(model.params)},
                {"degree", a.degree},
                {"sampler", to_string(sampler.kind)},
                {"points", pts.size()},
                {"seed", sampler.seed},
                {"defect", d.defect},
                {"worst_pair", {wk, wl}}};
  };
  r.as_csv = [&] {
    return "model,degree,sampler,points,defect,worst_k,worst_l\n" + model.name + "," + std::to_string(a.degree) + "," +
           to_string(sampler.kind) + "," + std::to_string(pts.size()) + "," + fmt(d.defect) + "," + csv_field(wk) +
           "," + csv_field(wl) + "\n";
  };
  r.as_pretty = [&] {
    std::ostringstream s;
    s << model.name << ": symmetry defect " << fmt(d.defect) << " at degree <= " << a.degree << " ("
      << to_string(sampler.kind) << ", " << pts.size() << " points)\n"
      << "  worst pair: " << wk << ", " << wl << "\n";
    return s.str();
  };
  emit(c, r, out);
  return kOk;
}

int cmd_boundary_points(const Common& c, const ModelArgs& m, std::size_t n, std::ostream& out) {
  Model model = get_model(m.model, parse_param_assignments(m.params));
  const auto pts = boundary_points(model, n);
  Report r;
  r.as_csv = [&] { return boundary_points_csv(pts); };
  r.as_pretty = r.as_csv;
  r.as_json = [&] {
    json a = json::array();
    for (const auto& p : pts) a.push_back({{"factor", p.factor}, {"x", p.x}, {"y", p.y}});
    return a;
  };
  emit(c, r, out);
  return kOk;
}

int cmd_claims(const Common& c, const std::string& filter, bool manifest, std::ostream& out) {
  if (manifest) {
    Report r;
    r.as_pretty = [] { return claims_manifest(); };
    r.as_csv = r.as_pretty;
    r.as_json = [] {
      json a = json::array();
      for (const auto& e : claim_registry())
        a.push_back({{"id", e.id}, {"label", e.label}, {"kind", e.kind}, {"category", e.category}, {"model", e.model}});
      return a;
    };
    emit(c, r, out);
    return kOk;
  }
  VerifyOptions opt;
  opt.seed = parse_seed(c.seed_text);
  const ClaimReport rep = run_claims(filter, opt);
  Report r;
  r.as_json = [&] { return to_json(rep); };
  r.as_csv = [&] {
    std::string s = "id,kind,category,model,status,message\n";
    for (const auto& cl : rep.results)
      s += cl.id + "," + cl.kind + "," + cl.category + "," + cl.model + "," + to_string(cl.status) + "," +
           csv_field(cl.message) + "\n";
    return s;
  };
  r.as_pretty = [&] {
    std::ostringstream s;
    for (const auto& cl : rep.results)
      s << status_tag(to_string(cl.status)) << ' ' << cl.id << "  " << cl.label
        << (cl.message.empty() ? "" : "\n    " + cl.message) << "\n";
    s << rep.passed << " passed, " << rep.failed << " failed, " << rep.expected_failures << " failed as expected, "
      << rep.skipped << " skipped\n";
    return s.str();
  };
  emit(c, r, out);
  return rep.ok() ? kOk : kVerificationFailure;
}

void diagnose(std::ostream& err, const std::string& type, const std::string& message) {
  err << json{{"error", type}, {"message", message}}.dump() << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Diffusion operators with orthogonal polynomial eigenfunctions", "dop"};
  app.require_subcommand(1);

  Common common;

  auto* models = app.add_subcommand("models", "Catalog of models");
  models->require_subcommand(1);
  auto* models_list = models->add_subcommand("list", "List catalog models");
  add_common(models_list, common, false);

  AdmissibleArgs adm;
  auto* admissible = app.add_subcommand("admissible", "Solve the boundary equations for a factored boundary");
  admissible->add_option("--factor", adm.factors, "Boundary factor (repeatable)")->required();
  admissible->add_option("--witness", adm.witness, "Interior point, comma separated")->required();
  admissible->add_option("--directions", adm.directions, "Sampled directions for the ellipticity verdict");
  add_common(admissible, common, true);

  ModelArgs spec_args;
  int degree = 8;
  auto* spectrum = app.add_subcommand("spectrum", "Exact graded eigenvalues");
  spectrum->add_option("--model", spec_args.model, "Model name")->required();
  spectrum->add_option("--param", spec_args.params, "name=value (repeatable)");
  spectrum->add_option("--measure", spec_args.measure, "Measure override det^<e>");
  spectrum->add_option("--degree", degree, "Maximum degree");
  add_common(spectrum, common, false);

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Run the per-model invariant battery");
  verify->add_option("--model", ver.m.model, "Model name or all")->required();
  verify->add_option("--param", ver.m.params, "name=value (repeatable)");
  verify->add_option("--measure", ver.m.measure, "Measure override det^<e>");
  verify->add_option("--samples", ver.samples, "Monte Carlo proposals");
  verify->add_option("--nodes", ver.nodes, "Gauss nodes per axis");
  add_common(verify, common, true);

  ModelArgs curv_args;
  std::size_t curv_points = 100;
  auto* curvature = app.add_subcommand("curvature", "Scalar curvature over interior points");
  curvature->add_option("--model", curv_args.model, "Model name")->required();
  curvature->add_option("--param", curv_args.params, "name=value (repeatable)");
  curvature->add_option("--points", curv_points, "Minimum number of interior points");
  add_common(curvature, common, false);

  OrthoArgs ortho;
  auto* orthogonality = app.add_subcommand("orthogonality", "Numeric self-adjointness defect");
  orthogonality->add_option("--model", ortho.m.model, "Model name")->required();
  orthogonality->add_option("--param", ortho.m.params, "name=value (repeatable)");
  orthogonality->add_option("--measure", ortho.m.measure, "Measure override det^<e>");
  orthogonality->add_option("--degree", ortho.degree, "Maximum monomial degree");
  orthogonality->add_option("--sampler", ortho.sampler, "Sampler kind override");
  orthogonality->add_option("--samples", ortho.samples, "Monte Carlo proposals");
  orthogonality->add_option("--nodes", ortho.nodes, "Gauss nodes per axis");
  add_common(orthogonality, common, true);

  ModelArgs bp_args;
  std::size_t bp_n = 200;
  auto* bpoints = app.add_subcommand("boundary-points", "CSV of boundary curve points");
  bpoints->add_option("--model", bp_args.model, "Model name")->required();
  bpoints->add_option("--param", bp_args.params, "name=value (repeatable)");
  bpoints->add_option("-n", bp_n, "Number of scan lines");
  add_common(bpoints, common, false);

  std::string claim_filter = "all";
  bool manifest = false;
  auto* claims = app.add_subcommand("claims", "Run registered claims");
  claims->add_option("--filter", claim_filter, "all, model, claim id, kind or category");
  claims->add_flag("--manifest", manifest, "Print the claim manifest instead of running");
  add_common(claims, common, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    diagnose(err, "usage", e.what());
    return kUsageError;
  }

  try {
    if (models_list->parsed()) return cmd_models_list(common, out);
    if (admissible->parsed()) return cmd_admissible(common, adm, out);
    if (spectrum->parsed()) return cmd_spectrum(common, spec_args, degree, out);
    if (verify->parsed()) return cmd_verify(common, ver, out);
    if (curvature->parsed()) return cmd_curvature(common, curv_args, curv_points, out);
    if (orthogonality->parsed()) return cmd_orthogonality(common, ortho, out);
    if (bpoints->parsed()) return cmd_boundary_points(common, bp_args, bp_n, out);
    if (claims->parsed()) return cmd_claims(common, claim_filter, manifest, out);
  } catch (const parse_error& e) {
    diagnose(err, "parse_error", e.what());
    return kDataError;
  } catch (const parameter_error& e) {
    diagnose(err, "parameter_error", e.what());
    return kDataError;
  } catch (const dimension_error& e) {
    diagnose(err, "dimension_error", e.what());
    return kDataError;
  } catch (const inadmissible_measure& e) {
    diagnose(err, "inadmissible_measure", e.what());
    return kDataError;
  } catch (const numeric_error& e) {
    diagnose(err, "numeric_error", e.what());
    return kDataError;
  } catch (const inconsistency_error& e) {
    diagnose(err, "inconsistency_error", e.what());
    return kVerificationFailure;
  } catch (const std::exception& e) {
    diagnose(err, "internal_error", e.what());
    return kDataError;
  }
  diagnose(err, "usage", "no subcommand");
  return kUsageError;
}

}  // namespace dop::cli
