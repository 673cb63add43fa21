#include "dop/catalog.hpp"


#include "dop/error.hpp"

namespace dop {

namespace detail {
extern const std::string_view kCatalogJson;
}

using nlohmann::json;

void ParamSpec::check(const Rational& v) const {
  auto fail = [&](const char* op, const Rational& b) {
    throw parameter_error("parameter " + name + " = " + to_string(v) + " must be " + op + " " + to_string(b));
  };
  if (gt && !(v > *gt)) fail(">", *gt);
  if (ge && !(v >= *ge)) fail(">=", *ge);
  if (lt && !(v < *lt)) fail("<", *lt);
  if (le && !(v <= *le)) fail("<=", *le);
}

std::string ParamSpec::range_text() const {
  std::string out;
  auto add = [&](const char* op, const std::optional<Rational>& b) {
    if (!b) return;
    if (!out.empty()) out += ", ";
    out += op + to_string(*b);
  };
  add(">", gt);
  add(">=", ge);
  add("<", lt);
  add("<=", le);
  return out.empty() ? "any" : out;
}

int ModelDescriptor::boundary_degree() const {
  int total = 0;
  ParamMap defaults;
  for (const auto& p : params) defaults[p.name] = p.default_value;
  for (const auto& f : factors) total += parse_polynomial(f, dim, defaults).total_degree();
  return total;
}

namespace {

std::optional<Rational> opt_rational(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return parse_rational(j.at(key).get<std::string>());
}

std::vector<std::string> strings(const json& j) {
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(e.get<std::string>());
  return out;
}

ClaimSpec parse_claim(const json& c) {
  ClaimSpec s;
  s.id = c.at("id").get<std::string>();
  s.kind = c.at("kind").get<std::string>();
  s.label = c.at("label").get<std::string>();
  s.data = c;
  return s;
}

ModelDescriptor parse_descriptor(const json& m) {
  ModelDescriptor d;
  d.name = m.at("name").get<std::string>();
  d.dim = m.at("dim").get<int>();
  d.compact = m.at("compact").get<bool>();
  d.label = m.value("label", "");
  for (const auto& p : m.at("params")) {
    ParamSpec ps;
    ps.name = p.at("name").get<std::string>();
    ps.default_value = parse_rational(p.at("default").get<std::string>());
    ps.gt = opt_rational(p, "gt");
    ps.ge = opt_rational(p, "ge");
    ps.lt = opt_rational(p, "lt");
    ps.le = opt_rational(p, "le");
    d.params.push_back(std::move(ps));
  }
  if (m.contains("constraints")) d.constraints = strings(m.at("constraints"));
  d.factors = strings(m.at("factors"));
  d.witness = strings(m.at("witness"));
  if (m.contains("box")) {
    std::vector<std::pair<std::string, std::string>> box;
    for (const auto& iv : m.at("box")) box.emplace_back(iv.at(0).get<std::string>(), iv.at(1).get<std::string>());
    d.box = std::move(box);
  }
  for (const auto& row : m.at("cometric")) d.cometric.push_back(strings(row));
  const auto& meas = m.at("measure");
  d.exponents = strings(meas.at("exponents"));
  if (meas.contains("exp") && !meas.at("exp").is_null()) d.exp_poly = meas.at("exp").get<std::string>();
  d.sampler_kind = m.at("sampler").at("kind").get<std::string>();
  for (const auto& c : m.at("claims")) d.claims.push_back(parse_claim(c));
  if (d.exponents.size() != d.factors.size())
    throw parse_error("model " + d.name + ": measure exponents must align with factors");
  return d;
}

struct Registry {
  std::vector<ModelDescriptor> models;
  std::vector<ClaimSpec> global;
};

const Registry& load() {
  static const Registry reg = [] {
    Registry r;
    json doc;
    try {
      doc = json::parse(detail::kCatalogJson);
    } catch (const json::exception& e) {
      throw parse_error(std::string("embedded catalog: ") + e.what());
    }
    for (const auto& m : doc.at("models")) r.models.push_back(parse_descriptor(m));
    if (doc.contains("global_claims"))
      for (const auto& c : doc.at("global_claims")) r.global.push_back(parse_claim(c));
    return r;
  }();
  return reg;
}

}  // namespace

const std::vector<ModelDescriptor>& registry() { return load().models; }
const std::vector<ClaimSpec>& global_claims() { return load().global; }

const ModelDescriptor& find_model(std::string_view name) {
  for (const auto& d : registry())
    if (d.name == name) return d;
  throw parameter_error("unknown model '" + std::string(name) + "'");
}

ParamMap resolve_params(const ModelDescriptor& d, const ParamMap& overrides) {
  ParamMap out;
  for (const auto& p : d.params) out[p.name] = p.default_value;
  for (const auto& [k, v] : overrides) {
    if (!out.count(k)) throw parameter_error("model " + d.name + " has no parameter '" + k + "'");
    out[k] = v;
  }
  for (const auto& p : d.params) p.check(out[p.name]);
  for (const auto& c : d.constraints)
    if (parse_constant(c, out) <= 0) throw parameter_error("model " + d.name + " requires " + c + " > 0");
  return out;
}

ParamMap parse_param_assignments(const std::vector<std::string>& items) {
  ParamMap out;
  for (const auto& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      std::size_t end = item.find(',', start);
      if (end == std::string::npos) end = item.size();
      std::string part = item.substr(start, end - start);
      auto eq = part.find('=');
      if (eq == std::string::npos || eq == 0) throw parse_error("parameter assignment '" + part + "' must be name=value");
      out[part.substr(0, eq)] = parse_rational(part.substr(eq + 1));
      start = end + 1;
    }
  }
  return out;
}

MeasureSpec det_power_measure(const CoMetric& g, const BoundarySpec& boundary, const Rational& e) {
  MeasureSpec m;
  auto div = det_divisibility_check(g, boundary);
  if (!div.divides) throw inadmissible_measure("det(g) is not divisible by the boundary product");
  for (const auto& f : boundary.factors) m.factors.push_back({f, e});
  if (div.quotient.total_degree() >= 1) {
    // Orient the quotient so it is positive at the witness.
    Polynomial q = div.quotient;
    if (q.eval(boundary.witness) < 0) q = -q;
    m.factors.push_back({q, e});
  }
  m.label = "det^" + to_string(e);
  return m;
}

const DiffusionOperator& Model::op() const {
  if (!op_) throw inadmissible_measure("model " + name + ": " + op_error_);
  return *op_;
}

Box Model::grid_box() const { return box ? *box : default_box(boundary); }

Model get_model(std::string_view name, const ParamMap& overrides, const std::optional<std::string>& measure_override) {
  const ModelDescriptor& d = find_model(name);
  Model m;
  m.descriptor = &d;
  m.name = d.name;
  m.params = resolve_params(d, overrides);
  m.boundary.dim = d.dim;
  for (const auto& f : d.factors) m.boundary.factors.push_back(parse_polynomial(f, d.dim, m.params));
  for (const auto& w : d.witness) m.boundary.witness.push_back(parse_constant(w, m.params));
  m.boundary.validate();
  if (d.box) {
    Box b;
    for (const auto& [lo, hi] : *d.box) b.emplace_back(parse_constant(lo, m.params), parse_constant(hi, m.params));
    m.box = std::move(b);
  }
  std::vector<std::vector<Polynomial>> entries;
  for (const auto& row : d.cometric) {
    std::vector<Polynomial> r;
    for (const auto& e : row) r.push_back(parse_polynomial(e, d.dim, m.params));
    entries.push_back(std::move(r));
  }
  m.cometric = CoMetric(entries);
  m.sampler_kind = d.sampler_kind;
  if (measure_override) {
    const std::string& t = *measure_override;
    if (t.rfind("det^", 0) != 0) throw parse_error("measure override must have the form det^<rational>, got '" + t + "'");
    m.measure = det_power_measure(m.cometric, m.boundary, parse_rational(t.substr(4)));
    // Gauss rules assume the catalog weight; fall back to Monte Carlo.
    if (m.box) m.sampler_kind = "mc-rejection";
    else m.sampler_kind = "none";
  } else {
    for (std::size_t k = 0; k < d.factors.size(); ++k)
      m.measure.factors.push_back({m.boundary.factors[k], parse_constant(d.exponents[k], m.params)});
    if (d.exp_poly) m.measure.exp_poly = parse_polynomial(*d.exp_poly, d.dim, m.params);
    m.measure.label = "catalog";
  }
  try {
    m.op_ = make_operator(m.cometric, m.measure);
  } catch (const inadmissible_measure& e) {
    m.op_error_ = e.what();
  }
  return m;
}

std::vector<ModelInfo> list_models() {
  std::vector<ModelInfo> out;
  for (const auto& d : registry()) {
    ModelInfo i;
    i.name = d.name;
    i.dim = d.dim;
    for (const auto& p : d.params) i.params.push_back(p.name);
    i.boundary_degree = d.boundary_degree();
    i.compact = d.compact;
    i.label = d.label;
    out.push_back(std::move(i));
  }
  return out;
}

ClaimedDrift claimed_drift(const Model& model) {
  for (const auto& c : model.descriptor->claims) {
    if (c.kind != "drift") continue;
    ClaimedDrift out;
    for (const auto& ax : c.data.at("axes")) {
      if (ax.is_null()) {
        out.axes.push_back(std::nullopt);
        out.gating.push_back(false);
        continue;
      }
      out.axes.push_back(parse_polynomial(ax.at("expr").get<std::string>(), model.dim(), model.params));
      out.gating.push_back(ax.value("mode", "gating") == "gating");
    }
    return out;
  }
  throw parameter_error("model " + model.name + " has no transcribed drift claim");
}

}  // namespace dop
