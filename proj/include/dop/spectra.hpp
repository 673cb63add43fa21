#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dop/catalog.hpp"
#include "dop/linsolve.hpp"
#include "dop/operator.hpp"
#include "dop/quadrature.hpp"

namespace dop {

// Eigenvalue of L (stored as L-eigenvalue, so <= 0 for admissible models).
struct EigenvalueEntry {
  double value = 0.0;
  std::optional<Rational> exact;
  double imag = 0.0;  // non-zero only for a numeric complex pair
  int multiplicity = 1;
  std::string source;  // "exact-graded" or "numeric-graded"
};

struct DegreeSpectrum {
  int degree = 0;
  std::vector<EigenvalueEntry> values;  // descending by value
  int count() const;
};

struct SpectrumResult {
  int dim = 0;
  std::vector<DegreeSpectrum> degrees;
  bool all_exact() const;
};

// Eigenvalues of a square rational block with algebraic multiplicities.
// Triangular blocks are read off the diagonal; otherwise the scaled integer
// characteristic polynomial is made square-free and its integer roots are
// confirmed exactly.
std::vector<EigenvalueEntry> block_eigenvalues(const RationalMatrix& block);

SpectrumResult graded_eigenvalues(const DiffusionOperator& op, int n);
SpectrumResult graded_eigenvalues(const GradedOperatorMatrix& m);

nlohmann::json spectrum_to_json(const SpectrumResult& s);
SpectrumResult spectrum_from_json(const nlohmann::json& j);

struct EigenVector {
  int degree = 0;
  double eigenvalue = 0.0;
  std::optional<Rational> exact;
  std::vector<double> coeffs;  // over MonomialBasis(dim, max_degree)
};

struct EigenBasis {
  int dim = 0;
  int max_degree = 0;
  std::vector<EigenVector> vectors;
  double gram_deviation = 0.0;  // max |V^T B V - I|
  double max_residual = 0.0;    // max |M v - l v| / |v| in the graded matrix
};

// Exact eigenvectors from ker(M_{<=k} - l I), B-orthogonalised against lower
// degree vectors of the same eigenvalue, B-orthonormal inside each eigenspace,
// canonicalised by diagonalising <x_1 P, Q> and a sign rule.
EigenBasis eigenbasis(const DiffusionOperator& op, const PointSet& points, int n);
EigenBasis eigenbasis(const Model& model, int n, const DomainSampler& sampler);

// Gamma form A[k][l] = integral of Gamma(m_k, m_l) over MonomialBasis(dim, n).
Matrix gamma_form(const DiffusionOperator& op, const PointSet& points, int n);

// L-eigenvalues (ascending) of the pencil (-A, B). Throws numeric_error when B
// is not positive definite and inconsistency_error when A has an eigenvalue
// below -1e-8 relative.
std::vector<double> generalized_spectrum(const DiffusionOperator& op, const PointSet& points, int n);

struct CrossCheck {
  int degree = 0;
  double max_relative = 0.0;
  bool ok = false;
};

// For each k <= n: pencil eigenvalues on P_k against the exact graded multiset.
std::vector<CrossCheck> cross_validate(const DiffusionOperator& op, const PointSet& points, int n, double tol);

struct ClosedFormCheck {
  int degree = 0;
  bool match = false;
  double max_discrepancy = 0.0;
  std::vector<Rational> expected;
};

// Formula over index tuples (one index per coordinate) of total degree k.
using ClosedForm = std::function<Rational(const std::vector<int>&)>;

std::vector<ClosedFormCheck> compare_closed_form(const SpectrumResult& s, const ClosedForm& formula, int indices);
// Uses the model's first spectrum claim. Throws parameter_error when it has none.
std::vector<ClosedFormCheck> compare_closed_form(const Model& model, int n);

// Index tuples (i_1..i_m), i >= 0, summing to k, lexicographically descending
// (the order of the degree-k monomials).
std::vector<std::vector<int>> index_tuples(int m, int k);

}  // namespace dop
