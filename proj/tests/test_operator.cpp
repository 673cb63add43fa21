#include "doctest.h"

#include "dop/error.hpp"
#include "dop/operator.hpp"

using namespace dop;

namespace {

Polynomial P(const char* s, int d = 2) { return parse_polynomial(s, d); }

CoMetric cm2(const char* a, const char* b, const char* c) { return CoMetric({{P(a), P(b)}, {P(b), P(c)}}); }

DiffusionOperator jacobi1d(const Rational& a, const Rational& b) {
  CoMetric g({{P("1 - x^2", 1)}});
  MeasureSpec m;
  m.factors = {{P("1 - x", 1), a - 1}, {P("1 + x", 1), b - 1}};
  return make_operator(g, m);
}

DiffusionOperator ou1d() {
  MeasureSpec m;
  m.exp_poly = P("-x^2/2", 1);
  return make_operator(CoMetric({{P("1", 1)}}), m);
}

}  // namespace

TEST_CASE("Jacobi drift from the measure") {
  auto op = jacobi1d(Rational(3), Rational(1, 2));
  // (b - a) - (a + b) x
  CHECK(op.drift()[0] == P("-5/2 - 7/2 x", 1));
}

TEST_CASE("apply_L basics") {
  auto op = ou1d();
  CHECK(apply_L(op, P("1", 1)).is_zero());
  CHECK(apply_L(op, P("x", 1)) == P("-x", 1));
  CHECK(apply_L(op, P("x^2", 1)) == P("2 - 2x^2", 1));
}

TEST_CASE("deltoid drift at the Laplace exponent") {
  auto g = cm2("9 + 6x + y^2 - 3x^2", "-2y(2x + 3)", "9 - 6x + x^2 - 3y^2");
  MeasureSpec m;
  m.factors = {{P("27 - (x^2+y^2)^2 - 18(x^2+y^2) + 8x^3 - 24x y^2"), Rational(-1, 2)}};
  auto op = make_operator(g, m);
  // -2(5 + 6p) X at p = -1/2
  CHECK(apply_L(op, P("x")) == P("-4x"));
  CHECK(apply_L(op, P("y")) == P("-4y"));
}

TEST_CASE("nodal cubic drift and the rejected det^{-1/2} measure") {
  auto g = cm2("4x(1-x)", "2y(2-3x)", "4x - 3x^2 - 9y^2");
  const Polynomial nodal = P("x^2(1-x) - y^2");
  MeasureSpec m;
  m.factors = {{nodal, Rational(-1, 2)}};
  auto op = make_operator(g, m);
  // 8(p+1) - 2(7+6p) X and -6(4+3p) Y at p = -1/2
  CHECK(op.drift()[0] == P("4 - 8x"));
  CHECK(op.drift()[1] == P("-15y"));

  MeasureSpec bad;
  bad.factors = {{g.determinant(), Rational(-1, 2)}};
  CHECK_THROWS_AS(drift_from_measure(g, bad), inadmissible_measure);
}

TEST_CASE("exponential parts of too high degree are rejected") {
  MeasureSpec m;
  m.exp_poly = P("-x^4", 1);
  CHECK_THROWS_AS(drift_from_measure(CoMetric({{P("1", 1)}}), m), inadmissible_measure);
  MeasureSpec at;
  at.arctan_terms.push_back({P("y"), P("x"), 1.0});
  CHECK_THROWS_AS(drift_from_measure(cm2("1", "0", "1"), at), parameter_error);
}

TEST_CASE("cometric invariants") {
  CHECK_THROWS_AS(CoMetric({{P("1"), P("x")}, {P("y"), P("1")}}), inconsistency_error);
  CHECK_THROWS_AS(cm2("x^3", "0", "1"), inconsistency_error);
  auto g = cm2("1 - x^2", "-x y", "1 - y^2");
  CHECK(g.determinant() == P("1 - x^2 - y^2"));
  CHECK(g.leading_minor(1) == P("1 - x^2"));
  CHECK_THROWS_AS(DiffusionOperator(g, {P("x^2"), P("0")}), inconsistency_error);
}

TEST_CASE("gamma on the sphere chart") {
  auto g = cm2("1 - x^2", "-x y", "1 - y^2");
  CHECK(gamma(g, P("x"), P("x")) == P("1 - x^2"));
  CHECK(gamma(g, P("x^2 + y"), P("3")).is_zero());
}

TEST_CASE("gamma agrees with the carre du champ identity") {
  CoMetric g({{P("1 - x^2"), P("0")}, {P("0"), P("1 - y^2")}});
  MeasureSpec m;
  m.factors = {{P("1 - x"), Rational(1, 3)}, {P("1 + y"), Rational(-1, 4)}};
  auto op = make_operator(g, m);
  auto f = P("x^3 - 2x y + 1/2");
  auto h = P("y^2 x + 3y - x^2");
  CHECK(gamma(g, f * h, f) == gamma_from_L(op, f * h, f));
  CHECK(gamma(g, f, h) == gamma_from_L(op, f, h));
}

TEST_CASE("graded matrix of the 1D OU operator") {
  auto gm = graded_matrix(ou1d(), 2);
  CHECK(gm.is_block_upper_triangular());
  CHECK(gm.entries()(0, 0) == 0);
  CHECK(gm.entries()(1, 1) == -1);
  CHECK(gm.entries()(2, 2) == -2);
  CHECK(gm.entries()(0, 2) == 2);
  auto bad = DiffusionOperator::unchecked(CoMetric({{P("1", 1)}}), {P("x^2", 1)});
  CHECK_THROWS_AS(graded_matrix(bad, 2), inconsistency_error);
}

TEST_CASE("product of two Jacobi operators is the square model") {
  auto prod = product_operator(jacobi1d(Rational(1, 2), Rational(1, 2)), jacobi1d(Rational(2), Rational(3)));
  CHECK(prod.dim() == 2);
  CHECK(prod.cometric()(0, 0) == P("1 - x^2"));
  CHECK(prod.cometric()(1, 1) == P("1 - y^2"));
  CHECK(prod.cometric()(0, 1).is_zero());
  CHECK(prod.drift()[0] == P("-x"));
  CHECK(prod.drift()[1] == P("1 - 5y"));
  auto ou2 = product_operator(ou1d(), ou1d());
  CHECK(apply_L(ou2, P("x y")) == P("-2 x y"));
}

TEST_CASE("rotation square") {
  auto v = vector_field_square({P("y"), P("-x")});
  CHECK(v.cometric()(0, 0) == P("y^2"));
  CHECK(v.cometric()(0, 1) == P("-x y"));
  CHECK(v.drift()[0] == P("-x"));
  CHECK(v.drift()[1] == P("-y"));
  CHECK(apply_L(v, P("x^2 + y^2")).is_zero());
}
