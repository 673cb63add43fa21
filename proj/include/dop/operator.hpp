#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dop/linsolve.hpp"
#include "dop/polynomial.hpp"

namespace dop {

// Symmetric matrix of polynomials of degree <= 2.
class CoMetric {
 public:
  explicit CoMetric(int dim = 1);
  // Rejects asymmetric input and entries of degree > 2.
  explicit CoMetric(const std::vector<std::vector<Polynomial>>& entries);

  int dim() const { return dim_; }
  const Polynomial& operator()(int i, int j) const { return a_[i * dim_ + j]; }
  void set(int i, int j, const Polynomial& p);

  Polynomial determinant() const;
  // Determinant of the upper-left k x k block.
  Polynomial leading_minor(int k) const;
  std::vector<std::vector<Rational>> eval(const std::vector<Rational>& point) const;
  CoMetric scaled(const Rational& c) const;
  bool operator==(const CoMetric& o) const { return dim_ == o.dim_ && a_ == o.a_; }

 private:
  int dim_;
  std::vector<Polynomial> a_;
};

CoMetric operator+(const CoMetric& a, const CoMetric& b);

struct MeasureFactor {
  Polynomial factor;
  Rational exponent;
};

// Evaluation-only component beta * arctan(I / R).
struct ArctanTerm {
  Polynomial numerator;
  Polynomial denominator;
  double coefficient = 0.0;
};

// rho = prod |F_k|^{a_k} * exp(Q) * exp(sum beta_j arctan(I_j / R_j)).
struct MeasureSpec {
  std::vector<MeasureFactor> factors;
  std::optional<Polynomial> exp_poly;
  std::vector<ArctanTerm> arctan_terms;
  std::string label;

  double log_density(const double* x) const;
  double density(const double* x) const;
};

// L f = sum g^{ij} d_ij f + sum b^i d_i f.
class DiffusionOperator {
 public:
  DiffusionOperator() = default;
  // Enforces deg b^i <= 1 and matching dimensions.
  DiffusionOperator(CoMetric g, std::vector<Polynomial> drift, std::optional<MeasureSpec> measure = std::nullopt);
  // No degree check; for negative controls only.
  static DiffusionOperator unchecked(CoMetric g, std::vector<Polynomial> drift);

  int dim() const { return g_.dim(); }
  const CoMetric& cometric() const { return g_; }
  const std::vector<Polynomial>& drift() const { return b_; }
  const std::optional<MeasureSpec>& measure() const { return measure_; }

 private:
  CoMetric g_;
  std::vector<Polynomial> b_;
  std::optional<MeasureSpec> measure_;
};

// b^i = sum_j d_j g^{ij} + sum_k a_k S_k^i + sum_j g^{ij} d_j Q. When
// `known_s` is given, known_s[k][i] is used for factor k instead of dividing.
// Throws inadmissible_measure when some b^i is not a polynomial of degree <= 1.
std::vector<Polynomial> drift_from_measure(const CoMetric& g, const MeasureSpec& rho,
                                           const std::vector<std::vector<Polynomial>>* known_s = nullptr);

DiffusionOperator make_operator(const CoMetric& g, const MeasureSpec& rho);

Polynomial apply_L(const DiffusionOperator& op, const Polynomial& f);
Polynomial gamma(const CoMetric& g, const Polynomial& f, const Polynomial& h);
// (L(fh) - f L(h) - h L(f)) / 2.
Polynomial gamma_from_L(const DiffusionOperator& op, const Polynomial& f, const Polynomial& h);

class GradedOperatorMatrix {
 public:
  GradedOperatorMatrix(MonomialBasis basis, RationalMatrix entries);

  const MonomialBasis& basis() const { return basis_; }
  int max_degree() const { return basis_.max_degree(); }
  // Column k holds the coordinates of L(m_k).
  const RationalMatrix& entries() const { return entries_; }
  // Action on degree-k monomials modulo lower degree.
  RationalMatrix diagonal_block(int k) const;
  // Restriction to P_k.
  RationalMatrix leading_block(int k) const;
  bool is_block_upper_triangular() const;

 private:
  MonomialBasis basis_;
  RationalMatrix entries_;
};

// Throws inconsistency_error if L raises the degree of some monomial.
GradedOperatorMatrix graded_matrix(const DiffusionOperator& op, int n);

DiffusionOperator product_operator(const DiffusionOperator& a, const DiffusionOperator& b);
DiffusionOperator operator_sum(const DiffusionOperator& a, const DiffusionOperator& b);
// V^2 for the first-order field V = sum v^i d_i: coefficients v^i v^j and V(v^i).
DiffusionOperator vector_field_square(const std::vector<Polynomial>& v);

}  // namespace dop
