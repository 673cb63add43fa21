#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "dop/boundary.hpp"
#include "dop/catalog.hpp"
#include "dop/geometry.hpp"
#include "dop/linsolve.hpp"
#include "dop/operator.hpp"
#include "dop/quadrature.hpp"
#include "dop/spectra.hpp"

using namespace dop;

namespace {

// Random small rational in [-span, span] with denominator <= 4.
Rational rnd_rational(SplitMix64& r, long span = 5) {
  const long num = static_cast<long>(r.next() % (2 * span * 4 + 1)) - span * 4;
  const long den = 1 + static_cast<long>(r.next() % 4);
  return ratio(num, den);
}

Polynomial rnd_poly(SplitMix64& r, int dim, int max_degree, int terms) {
  MonomialBasis basis(dim, max_degree);
  Polynomial p(dim);
  for (int t = 0; t < terms; ++t) p.add_term(basis[r.next() % basis.size()], rnd_rational(r));
  return p;
}

Polynomial nonzero_poly(SplitMix64& r, int dim, int max_degree, int terms) {
  for (;;) {
    Polynomial p = rnd_poly(r, dim, max_degree, terms);
    if (!p.is_zero()) return p;
  }
}

std::vector<std::string> bounded_models() {
  std::vector<std::string> out;
  for (const auto& d : registry())
    if (d.compact) out.push_back(d.name);
  return out;
}

}  // namespace

TEST_CASE("ring axioms on random polynomials") {
  SplitMix64 r(11);
  for (int trial = 0; trial < 60; ++trial) {
    const int dim = 1 + trial % 3;
    auto a = rnd_poly(r, dim, 8 / 3 + trial % 3, 6), b = rnd_poly(r, dim, 3, 6), c = rnd_poly(r, dim, 2, 6);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK(a - a == Polynomial(dim));
  }
}

TEST_CASE("derivative and evaluation are linear") {
  SplitMix64 r(12);
  for (int trial = 0; trial < 60; ++trial) {
    const int dim = 1 + trial % 3;
    auto a = rnd_poly(r, dim, 8, 8), b = rnd_poly(r, dim, 8, 8);
    const Rational k = rnd_rational(r);
    std::vector<Rational> pt;
    for (int i = 0; i < dim; ++i) pt.push_back(rnd_rational(r));
    for (int ax = 0; ax < dim; ++ax) {
      CHECK((a + b).derivative(ax) == a.derivative(ax) + b.derivative(ax));
      CHECK((a * k).derivative(ax) == a.derivative(ax) * k);
    }
    CHECK((a + b).eval(pt) == a.eval(pt) + b.eval(pt));
    CHECK((a * k).eval(pt) == k * a.eval(pt));
  }
}

TEST_CASE("total degree is additive under multiplication") {
  SplitMix64 r(13);
  for (int trial = 0; trial < 80; ++trial) {
    const int dim = 1 + trial % 3;
    auto a = nonzero_poly(r, dim, 4, 5), b = nonzero_poly(r, dim, 4, 5);
    CHECK((a * b).total_degree() == a.total_degree() + b.total_degree());
  }
}

TEST_CASE("monomial basis sizes") {
  for (int d = 1; d <= 3; ++d)
    for (int n = 0; n <= 12; ++n) CHECK(Integer(MonomialBasis(d, n).size()) == binomial(n + d, d));
}

TEST_CASE("nullspace vectors are exact kernel elements") {
  SplitMix64 r(14);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t rows = 3 + trial % 4, cols = 6 + trial % 3;
    RationalMatrix a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) a(i, j) = rnd_rational(r, 3);
    // Force a dependent row.
    for (std::size_t j = 0; j < cols; ++j) a(rows - 1, j) = a(0, j) * 2 - a(1, j);
    auto ker = rational_nullspace(a);
    CHECK(ker.size() == cols - rational_rank(a));
    for (const auto& v : ker)
      for (const auto& x : a.apply(v)) CHECK(x == 0);
  }
}

TEST_CASE("symmetric eigenpairs reconstruct the matrix") {
  SplitMix64 r(15);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + trial % 8;
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = r.normal();
    auto e = sym_eig(a);
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = e.eigenvalues[i];
    Matrix back = e.eigenvectors * d * e.eigenvectors.transpose();
    CHECK((back - a).frobenius() <= 1e-9 * a.frobenius());
  }
}

TEST_CASE("generalized eigenvalues are invariant under congruence") {
  SplitMix64 r(16);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + trial % 6;
    Matrix a(n, n), m(n, n), p(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        m(i, j) = r.normal();
        p(i, j) = (i == j ? 2.0 : 0.0) + 0.3 * r.normal();
      }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = r.normal();
    Matrix b = m.transpose() * m;
    for (std::size_t i = 0; i < n; ++i) b(i, i) += 1.0;
    auto e1 = generalized_sym_eig(a, b);
    auto e2 = generalized_sym_eig(p.transpose() * a * p, p.transpose() * b * p);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(e2.eigenvalues[i] == doctest::Approx(e1.eigenvalues[i]).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("every solution element satisfies the boundary equations exactly") {
  for (const auto& d : registry()) {
    Model m = get_model(d.name);
    if (m.boundary.factors.empty()) continue;
    auto sol = solve_admissibility(m.boundary);
    INFO(d.name);
    REQUIRE_FALSE(sol.g_basis.empty());
    for (std::size_t b = 0; b < sol.g_basis.size(); ++b)
      for (std::size_t k = 0; k < m.boundary.factors.size(); ++k)
        for (int i = 0; i < m.dim(); ++i)
          CHECK(boundary_residual(sol.g_basis[b], m.boundary.factors[k], i, sol.s_for[b][k][i]).is_zero());
  }
}

TEST_CASE("catalog cometrics satisfy the boundary equations exactly") {
  for (const auto& d : registry()) {
    Model m = get_model(d.name);
    INFO(d.name);
    auto s = boundary_s(m.cometric, m.boundary);
    REQUIRE(s.has_value());
    for (std::size_t k = 0; k < m.boundary.factors.size(); ++k)
      for (int i = 0; i < m.dim(); ++i)
        CHECK(boundary_residual(m.cometric, m.boundary.factors[k], i, (*s)[k][i]).is_zero());
  }
}

TEST_CASE("summed boundary equation holds for the product") {
  for (const auto& d : registry()) {
    Model m = get_model(d.name);
    if (m.boundary.factors.empty()) continue;
    auto s = boundary_s(m.cometric, m.boundary);
    REQUIRE(s.has_value());
    const Polynomial f = m.boundary.product();
    for (int i = 0; i < m.dim(); ++i) {
      Polynomial total(m.dim());
      for (const auto& per : *s) total += per[i];
      INFO(d.name);
      CHECK(boundary_residual(m.cometric, f, i, total).is_zero());
    }
  }
}

TEST_CASE("solution dimension is invariant under rational affine maps") {
  SplitMix64 r(17);
  for (const char* n : {"disk", "triangle", "deltoid", "nodal_cubic", "parabola_tangent_secant", "swallowtail"}) {
    Model m = get_model(n);
    const std::size_t base = solve_admissibility(m.boundary).g_basis.size();
    for (int trial = 0; trial < 2; ++trial) {
      // x -> A x + t with A invertible and rational.
      Rational a00 = 1 + rnd_rational(r, 1), a01 = rnd_rational(r, 1), a10 = rnd_rational(r, 1), a11 = 2;
      if (a00 * a11 - a01 * a10 == 0) a00 += 1;
      Rational t0 = rnd_rational(r, 1), t1 = rnd_rational(r, 1);
      auto x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
      std::vector<Polynomial> sub = {a00 * x + a01 * y + Polynomial(2, t0), a10 * x + a11 * y + Polynomial(2, t1)};
      // The witness moves by the inverse map.
      const Rational det = a00 * a11 - a01 * a10;
      const Rational wx = m.boundary.witness[0] - t0, wy = m.boundary.witness[1] - t1;
      BoundarySpec moved;
      moved.dim = 2;
      moved.witness = {(a11 * wx - a01 * wy) / det, (-a10 * wx + a00 * wy) / det};
      for (const auto& f : m.boundary.factors) moved.factors.push_back(f.compose(sub));
      INFO(n);
      CHECK(solve_admissibility(moved).g_basis.size() == base);
    }
  }
}

TEST_CASE("diffusion chain rule") {
  SplitMix64 r(18);
  for (const char* n : {"deltoid", "disk", "nodal_cubic", "gaussian_plane", "triangle_cover_3d"}) {
    Model m = get_model(n);
    const auto& op = m.op();
    for (int trial = 0; trial < 5; ++trial) {
      Polynomial f = rnd_poly(r, m.dim(), 2, 4);
      std::vector<Rational> c = {rnd_rational(r), rnd_rational(r), rnd_rational(r), rnd_rational(r)};
      // phi(t) = c0 + c1 t + c2 t^2 + c3 t^3.
      auto phi = [&](const Polynomial& t) {
        return Polynomial(m.dim(), c[0]) + c[1] * t + c[2] * t.pow(2) + c[3] * t.pow(3);
      };
      Polynomial d1 = Polynomial(m.dim(), c[1]) + Rational(2) * c[2] * f + Rational(3) * c[3] * f.pow(2);
      Polynomial d2 = Polynomial(m.dim(), 2 * c[2]) + Rational(6) * c[3] * f;
      INFO(n);
      CHECK(apply_L(op, phi(f)) == d2 * gamma(m.cometric, f, f) + d1 * apply_L(op, f));
    }
  }
}

TEST_CASE("catalog operators have the degree bounds") {
  for (const auto& d : registry()) {
    Model m = get_model(d.name);
    INFO(d.name);
    for (int i = 0; i < m.dim(); ++i) {
      CHECK(m.op().drift()[i].total_degree() <= 1);
      // The measure part of the drift alone is of degree <= 1.
      Polynomial div(m.dim());
      for (int j = 0; j < m.dim(); ++j) {
        CHECK(m.cometric(i, j).total_degree() <= 2);
        div += m.cometric(i, j).derivative(j);
      }
      CHECK((m.op().drift()[i] - div).total_degree() <= 1);
    }
  }
}

TEST_CASE("bounded catalog models pass the structural battery") {
  for (const auto& n : bounded_models()) {
    Model m = get_model(n);
    INFO(n);
    CHECK(det_divisibility_check(m.cometric, m.boundary).divides);
    CHECK(check_ellipticity(m.cometric, interior_grid(m.boundary, m.grid_box(), 10)).elliptic);
    CHECK(graded_matrix(m.op(), 12).is_block_upper_triangular());
  }
}

TEST_CASE("nodal cubic cover satisfies the boundary equations for every A") {
  SplitMix64 r(19);
  for (int trial = 0; trial < 6; ++trial) {
    Rational a = -rnd_rational(r, 3);
    if (a > 0) a = -a;
    Model m = get_model("nodal_cubic_cover_3d", {{"A", a}});
    INFO(to_string(a));
    auto s = boundary_s(m.cometric, m.boundary);
    CHECK(s.has_value());
  }
}

TEST_CASE("gaussian plane decomposes into OU plus a rotation square") {
  SplitMix64 r(20);
  int done = 0;
  while (done < 3) {
    const Rational a0 = rnd_rational(r), b0 = rnd_rational(r), c0 = rnd_rational(r);
    if (a0 <= 0 || a0 * c0 <= b0 * b0) continue;
    ++done;
    Model m = get_model("gaussian_plane", {{"A0", a0}, {"B0", b0}, {"C0", c0}});
    auto x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
    CoMetric ou({{Polynomial(2, a0), Polynomial(2, b0)}, {Polynomial(2, b0), Polynomial(2, c0)}});
    DiffusionOperator ou_op(ou, {-(a0 * x + b0 * y), -(b0 * x + c0 * y)});
    DiffusionOperator sum = operator_sum(ou_op, vector_field_square({y, -x}));
    CHECK(sum.cometric() == m.cometric);
    CHECK(sum.drift() == m.op().drift());
  }
}

TEST_CASE("Gauss rules are exact on random polynomials") {
  SplitMix64 r(21);
  auto gamma_half = [](int k) { return std::tgamma((k + 1) / 2.0); };
  struct Case {
    const char* name;
    ParamMap params;
    std::function<double(int, int)> moment;
  };
  std::vector<Case> cases = {
      {"square",
       {{"a", Rational(0)}, {"b", Rational(0)}, {"c", Rational(0)}, {"d", Rational(0)}},
       [](int i, int j) { return (i % 2 ? 0.0 : 2.0 / (i + 1)) * (j % 2 ? 0.0 : 2.0 / (j + 1)); }},
      {"disk",
       {{"p", Rational(0)}},
       [&](int i, int j) {
         if (i % 2 || j % 2) return 0.0;
         return 2 * gamma_half(i) * gamma_half(j) / ((i + j + 2) * std::tgamma((i + j + 2) / 2.0));
       }},
      {"triangle",
       {{"p", Rational(0)}, {"q", Rational(0)}, {"r", Rational(0)}},
       [](int i, int j) { return std::tgamma(i + 1) * std::tgamma(j + 1) / std::tgamma(i + j + 3); }},
  };
  for (const auto& c : cases) {
    Model m = get_model(c.name, c.params);
    PointSet pts = sample_domain(m, default_sampler(m));
    for (int trial = 0; trial < 5; ++trial) {
      Polynomial p = rnd_poly(r, 2, 20, 10);
      double exact = 0.0, scale = 0.0;
      for (const auto& [e, k] : p.terms()) {
        exact += to_double(k) * c.moment(e[0], e[1]);
        scale += std::abs(to_double(k) * c.moment(e[0], e[1]));
      }
      auto est = integrate([&](const double* x) { return p.eval(x); }, pts);
      INFO(c.name);
      CHECK(std::abs(est.value - exact) <= 1e-12 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("Monte Carlo standard error halves every two doublings") {
  Model disk = get_model("disk", {{"p", ratio(1, 2)}});
  DomainSampler s = default_sampler(disk);
  s.kind = SamplerKind::mc_rejection;
  double prev = 0.0;
  for (std::size_t n = 50000; n <= 800000; n *= 2) {
    s.samples = n;
    auto est = integrate([](const double* x) { return 1.0 + x[0] * x[0]; }, disk, s);
    if (prev > 0.0) {
      const double shrink = prev / est.error_estimate;
      CHECK(shrink >= 1.2);
      CHECK(shrink <= 1.7);
    }
    prev = est.error_estimate;
  }
}

TEST_CASE("stored eigenvalues are non-positive") {
  for (const auto& d : registry()) {
    SpectrumResult s = graded_eigenvalues(get_model(d.name).op(), 8);
    INFO(d.name);
    for (const auto& deg : s.degrees)
      for (const auto& e : deg.values) CHECK(e.value <= 1e-9);
  }
}

TEST_CASE("product law on random Jacobi parameters") {
  SplitMix64 r(22);
  for (int trial = 0; trial < 3; ++trial) {
    const Rational a = ratio(1 + static_cast<long>(r.next() % 12), 4), b = ratio(1 + static_cast<long>(r.next() % 12), 3);
    auto ja = get_model("jacobi1d", {{"a", a}, {"b", b}});
    auto herm = get_model("hermite1d");
    SpectrumResult s = graded_eigenvalues(product_operator(ja.op(), herm.op()), 6);
    SpectrumResult sa = graded_eigenvalues(ja.op(), 6), sb = graded_eigenvalues(herm.op(), 6);
    for (const auto& d : s.degrees) {
      std::vector<Rational> got, want;
      for (const auto& e : d.values)
        for (int k = 0; k < e.multiplicity; ++k) got.push_back(*e.exact);
      for (int i = 0; i <= d.degree; ++i)
        want.push_back(*sa.degrees[i].values[0].exact + *sb.degrees[d.degree - i].values[0].exact);
      std::sort(got.begin(), got.end());
      std::sort(want.begin(), want.end());
      CHECK(got == want);
    }
  }
}

TEST_CASE("full-degree boundaries with det^-1/2 have non-negative constant curvature") {
  for (const char* n : {"coaxial_parabolas", "parabola_tangent_secant", "parabola_two_tangents",
                        "cuspidal_cubic_secant", "cuspidal_cubic_tangent", "swallowtail", "deltoid", "square"}) {
    auto rep = curvature_constancy(get_model(n), 100);
    INFO(n);
    CHECK(rep.constant);
    CHECK(rep.mean >= -1e-6);
  }
}
