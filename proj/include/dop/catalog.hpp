#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dop/boundary.hpp"
#include "dop/operator.hpp"
#include "dop/polynomial.hpp"

namespace dop {

struct ParamSpec {
  std::string name;
  Rational default_value;
  std::optional<Rational> gt, ge, lt, le;

  // Throws parameter_error when v violates a bound.
  void check(const Rational& v) const;
  std::string range_text() const;
};

struct ClaimSpec {
  std::string id;
  std::string kind;
  std::string label;
  nlohmann::json data;
};

// Parsed registry entry; all expressions still carry parameter names.
struct ModelDescriptor {
  std::string name;
  int dim = 2;
  bool compact = false;
  std::string label;
  std::vector<ParamSpec> params;
  std::vector<std::string> constraints;
  std::vector<std::string> factors;
  std::vector<std::string> witness;
  std::optional<std::vector<std::pair<std::string, std::string>>> box;
  std::vector<std::vector<std::string>> cometric;
  std::vector<std::string> exponents;
  std::optional<std::string> exp_poly;
  std::string sampler_kind;
  std::vector<ClaimSpec> claims;

  int boundary_degree() const;
};

// An instantiated model. The operator is built eagerly; when the measure is
// inadmissible `op()` rethrows the recorded error.
class Model {
 public:
  const ModelDescriptor* descriptor = nullptr;
  std::string name;
  ParamMap params;
  BoundarySpec boundary;
  std::optional<Box> box;
  CoMetric cometric;
  MeasureSpec measure;
  std::string sampler_kind;

  bool admissible() const { return op_.has_value(); }
  const DiffusionOperator& op() const;
  const std::string& measure_error() const { return op_error_; }
  int dim() const { return boundary.dim; }
  // Box used for grids: the catalog box when present, else the default box.
  Box grid_box() const;

 private:
  friend Model get_model(std::string_view, const ParamMap&, const std::optional<std::string>&);
  std::optional<DiffusionOperator> op_;
  std::string op_error_;
};

const std::vector<ModelDescriptor>& registry();
// Throws parameter_error for an unknown name.
const ModelDescriptor& find_model(std::string_view name);

// `measure_override` accepts "det^<rational>" and replaces the catalog measure.
// Throws parameter_error on unknown names or parameters and on range violations.
Model get_model(std::string_view name, const ParamMap& params = {},
                const std::optional<std::string>& measure_override = std::nullopt);

struct ModelInfo {
  std::string name;
  int dim = 0;
  std::vector<std::string> params;
  int boundary_degree = 0;
  bool compact = false;
  std::string label;
};

std::vector<ModelInfo> list_models();

// Measure |det g|^e, factored as boundary factors times the det quotient.
MeasureSpec det_power_measure(const CoMetric& g, const BoundarySpec& boundary, const Rational& e);

struct ClaimedDrift {
  std::vector<std::optional<Polynomial>> axes;
  // false for reconciliation axes, whose printed form is informational.
  std::vector<bool> gating;
};

// First drift claim with the model's parameters substituted. Throws
// parameter_error when the model carries none.
ClaimedDrift claimed_drift(const Model& model);

// Claims not bound to a single model.
const std::vector<ClaimSpec>& global_claims();

// Merge of defaults and overrides as a ParamMap, range-checked.
ParamMap resolve_params(const ModelDescriptor& d, const ParamMap& overrides);

// "a=1/2" or "a=1/2,b=3" -> map entries.
ParamMap parse_param_assignments(const std::vector<std::string>& items);

}  // namespace dop
