#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dop/linsolve.hpp"
#include "dop/operator.hpp"
#include "dop/polynomial.hpp"

namespace dop {

using Box = std::vector<std::pair<Rational, Rational>>;

// Factored boundary, each factor positive at the witness.
struct BoundarySpec {
  int dim = 2;
  std::vector<Polynomial> factors;
  std::vector<Rational> witness;

  // Throws parameter_error on: constant factor, factor not positive at the
  // witness, product degree above 2 * dim, dimension mismatches.
  void validate() const;
  Polynomial product() const;
};

// Unknown layout: for each entry (i <= j) the coefficients over
// MonomialBasis(d, 2); then for each factor and axis the coefficients over
// MonomialBasis(d, 1).
struct AdmissibilityLayout {
  int dim = 0;
  std::size_t factor_count = 0;
  std::size_t quad_size = 0;
  std::size_t lin_size = 0;
  std::size_t g_unknowns() const { return static_cast<std::size_t>(dim * (dim + 1) / 2) * quad_size; }
  std::size_t unknowns() const { return g_unknowns() + factor_count * dim * lin_size; }
};

AdmissibilityLayout admissibility_layout(const BoundarySpec& spec);
RationalMatrix build_admissibility_system(const BoundarySpec& spec);

struct AdmissibilitySolution {
  std::vector<CoMetric> g_basis;
  // s_for[b][k][i] = S_k^i for basis element b.
  std::vector<std::vector<std::vector<Polynomial>>> s_for;
};

// Basis: rows of the reduced echelon form of the projected nullspace, each
// scaled to primitive integer coefficients.
AdmissibilitySolution solve_admissibility(const BoundarySpec& spec);

// S_k^i by exact division; nullopt if some factor fails the boundary equation
// or yields S of degree > 1.
std::optional<std::vector<std::vector<Polynomial>>> boundary_s(const CoMetric& g, const BoundarySpec& spec);

// sum_j g^{ij} d_j F - S F.
Polynomial boundary_residual(const CoMetric& g, const Polynomial& factor, int axis, const Polynomial& s);

struct EllipticityReport {
  bool elliptic = false;
  std::optional<std::vector<Rational>> first_failure;
  std::size_t checked = 0;
};

// Leading principal minors > 0 at every sample, in exact arithmetic.
EllipticityReport check_ellipticity(const CoMetric& g, const std::vector<std::vector<Rational>>& samples);

// per_axis^d cell-centre grid over the box, keeping points with all factors > 0.
std::vector<std::vector<Rational>> interior_grid(const BoundarySpec& spec, const Box& box, int per_axis = 10);

// Box of half-width 1 around the witness, used when nothing better is known.
Box default_box(const BoundarySpec& spec);

struct DivisibilityReport {
  bool divides = false;
  int quotient_degree = 0;
  Polynomial quotient;
};

// Throws inconsistency_error when det(g) is identically zero.
DivisibilityReport det_divisibility_check(const CoMetric& g, const BoundarySpec& spec);

}  // namespace dop
