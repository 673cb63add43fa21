#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dop/rational.hpp"

namespace dop {

using Exponent = std::vector<int>;

int exponent_degree(const Exponent& e);

// Graded order: total degree ascending, then lexicographically descending on
// the exponent vector, so that degree 1 lists x before y before z.
struct GradedOrder {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

// Sparse d-variate polynomial with exact rational coefficients.
// No stored coefficient is zero.
class Polynomial {
 public:
  using TermMap = std::map<Exponent, Rational, GradedOrder>;
  static constexpr int kZeroDegree = std::numeric_limits<int>::min();

  explicit Polynomial(int dim = 1);
  Polynomial(int dim, const Rational& c);

  static Polynomial variable(int dim, int axis);
  static Polynomial monomial(const Exponent& e, const Rational& c = Rational(1));

  int dim() const { return dim_; }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // kZeroDegree for the zero polynomial.
  int total_degree() const;
  Rational coeff(const Exponent& e) const;
  Rational constant_term() const;

  // Adds c to the coefficient of e, pruning a resulting zero.
  void add_term(const Exponent& e, const Rational& c);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);

  Polynomial operator-() const;
  Polynomial pow(int k) const;

  Polynomial derivative(int axis) const;
  Rational eval(const std::vector<Rational>& point) const;
  double eval(const double* point) const;
  Polynomial compose(const std::vector<Polynomial>& substitution) const;
  // Sum of the terms of total degree exactly k.
  Polynomial homogeneous_part(int k) const;
  // Same coefficients, embedded in a larger variable set at offset.
  Polynomial embed(int new_dim, int offset) const;

  bool operator==(const Polynomial& o) const;
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  // Text format: terms by decreasing degree, x before y within a degree,
  // e.g. "-2*x^2 + x*y - 1/2".
  std::string str() const;

 private:
  void check_dim(const Polynomial& o) const;

  int dim_;
  TermMap terms_;
};

Polynomial operator+(Polynomial a, const Polynomial& b);
Polynomial operator-(Polynomial a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(Polynomial a, const Rational& c);
Polynomial operator*(const Rational& c, Polynomial a);

enum class ArithOp { add, sub, mul, scale };
// Dispatch form of the ring operations; rhs for scale must be constant.
Polynomial poly_arith(ArithOp op, const Polynomial& lhs, const Polynomial& rhs);

struct DivisionResult {
  Polynomial quotient;
  Polynomial remainder;
};

// Multivariate division by a single divisor under the graded order. The
// remainder is zero iff divisor divides dividend.
DivisionResult divide(const Polynomial& dividend, const Polynomial& divisor);
std::optional<Polynomial> exact_quotient(const Polynomial& dividend, const Polynomial& divisor);

// Variable names: x, y, z for d <= 3, x1 ... xd beyond.
std::vector<std::string> variable_names(int dim);

using ParamMap = std::map<std::string, Rational>;

// Parses sums, products, quotients by constants, non-negative integer powers
// and parentheses over the variables of `dim` and the named parameters.
Polynomial parse_polynomial(std::string_view text, int dim, const ParamMap& params = {});
// Same grammar; the result must be constant.
Rational parse_constant(std::string_view text, const ParamMap& params = {});

// All exponents with total degree <= max_degree, in graded order.
class MonomialBasis {
 public:
  MonomialBasis(int dim, int max_degree);

  int dim() const { return dim_; }
  int max_degree() const { return max_degree_; }
  std::size_t size() const { return exps_.size(); }
  const Exponent& operator[](std::size_t k) const { return exps_[k]; }
  const std::vector<Exponent>& exponents() const { return exps_; }
  // Index of e, or size() if absent.
  std::size_t index_of(const Exponent& e) const;
  // First index of degree k; block_start(max_degree + 1) == size().
  std::size_t block_start(int k) const { return starts_[k]; }
  Polynomial monomial(std::size_t k) const { return Polynomial::monomial(exps_[k]); }
  // Coordinates of p in this basis; p must lie in the span.
  std::vector<Rational> coordinates(const Polynomial& p) const;
  Polynomial combine(const std::vector<Rational>& coords) const;

 private:
  int dim_;
  int max_degree_;
  std::vector<Exponent> exps_;
  std::vector<std::size_t> starts_;
  std::map<Exponent, std::size_t, GradedOrder> index_;
};

Integer binomial(int n, int k);

// Floating-point evaluator sharing a power table across many polynomials.
class NumericPolynomial {
 public:
  NumericPolynomial() = default;
  explicit NumericPolynomial(const Polynomial& p);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  double operator()(const double* x) const;
  // powers[axis * (stride) + k] = x_axis^k for k <= stride - 1.
  double eval_powers(const double* powers, int stride) const;

 private:
  int dim_ = 1;
  int degree_ = 0;
  std::vector<double> coeffs_;
  std::vector<int> exps_;
};

// powers for eval_powers, stride = max_degree + 1.
void fill_powers(const double* x, int dim, int max_degree, double* powers);

}  // namespace dop
