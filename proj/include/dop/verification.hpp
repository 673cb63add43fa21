#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dop/catalog.hpp"
#include "dop/quadrature.hpp"

namespace dop {

enum class ClaimStatus { pass, fail, expected_failure, skipped };
std::string to_string(ClaimStatus s);

// One registered claim. Categories: exact-polynomial-identity, exact-eigenvalue,
// numeric-tolerance, negative-control.
struct ClaimEntry {
  std::string id;
  std::string label;
  std::string kind;
  std::string category;
  std::string model;  // empty for claims spanning several models
  const ClaimSpec* spec = nullptr;
};

// Model claims in catalog order, then global claims.
const std::vector<ClaimEntry>& claim_registry();

// One line per claim: id, a tab, the label.
std::string claims_manifest();

struct ClaimResult {
  std::string id;
  std::string label;
  std::string kind;
  std::string category;
  std::string model;
  ClaimStatus status = ClaimStatus::skipped;
  std::string message;
  nlohmann::json detail = nlohmann::json::object();
  bool ok() const { return status == ClaimStatus::pass || status == ClaimStatus::expected_failure; }
};

struct VerifyOptions {
  std::uint64_t seed = kDefaultSeed;
  std::size_t mc_samples = 1000000;
  int gauss_nodes = 32;
  int graded_degree = 12;
  int numeric_degree = 6;        // symmetry, eigenbasis and cross-validation on Gauss domains
  int mc_symmetry_degree = 3;
  std::size_t pullback_points = 1000;
  bool numeric_checks = true;
};

ClaimResult run_claim(const ClaimEntry& entry, const VerifyOptions& opt = {});

struct ClaimReport {
  std::vector<ClaimResult> results;
  int passed = 0;
  int failed = 0;
  int expected_failures = 0;
  int skipped = 0;
  bool ok() const { return failed == 0; }
};

// filter: "all", a model name (its claims plus global claims naming it), a
// claim id, a claim kind or a category. Unknown filters throw parameter_error.
ClaimReport run_claims(const std::string& filter = "all", const VerifyOptions& opt = {});

// status: "pass", "fail", "info" (non-gating measurement) or "skip".
struct CheckResult {
  std::string name;
  std::string status;
  bool gating = true;
  std::string message;
  nlohmann::json detail = nlohmann::json::object();
};

struct ModelReport {
  std::string model;
  ParamMap params;
  std::string measure;
  std::vector<CheckResult> checks;
  std::vector<ClaimResult> claims;
  bool ok() const;
};

// The per-model battery: boundary residuals, determinant divisibility,
// ellipticity, measure admissibility, drift degree, degree preservation,
// numeric self-adjointness, eigenbasis and cross-validation, and the model's claims.
ModelReport verify_model(const std::string& name, const ParamMap& params = {},
                         const std::optional<std::string>& measure = std::nullopt, const VerifyOptions& opt = {});

struct VerifyReport {
  std::uint64_t seed = kDefaultSeed;
  std::vector<ModelReport> models;
  std::vector<ClaimResult> global_claims;
  bool ok() const;
};

// Every catalog model at defaults plus the global claims.
VerifyReport verify_all(const VerifyOptions& opt = {});

struct EllipticSearch {
  std::size_t directions = 0;
  std::size_t elliptic = 0;           // directions positive definite on the whole grid
  std::vector<double> first;          // coefficients of the first elliptic direction
};

// Gaussian directions in the span of sol.g_basis, each tested by Cholesky on
// the 10 x 10 interior grid of the default box.
EllipticSearch elliptic_search(const BoundarySpec& spec, const AdmissibilitySolution& sol, std::size_t directions,
                               std::uint64_t seed);

nlohmann::json to_json(const ClaimResult& r);
nlohmann::json to_json(const ClaimReport& r);
nlohmann::json to_json(const ModelReport& r);
nlohmann::json to_json(const VerifyReport& r);
nlohmann::json params_to_json(const ParamMap& p);

}  // namespace dop
