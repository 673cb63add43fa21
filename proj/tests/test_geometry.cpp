#include "doctest.h"

#include <cmath>

#include "dop/catalog.hpp"
#include "dop/error.hpp"
#include "dop/geometry.hpp"

using namespace dop;

namespace {

CoMetric cm2(const char* a, const char* b, const char* c) {
  return CoMetric({{parse_polynomial(a, 2), parse_polynomial(b, 2)}, {parse_polynomial(b, 2), parse_polynomial(c, 2)}});
}

double R(const CoMetric& g, double x, double y) {
  const double p[2] = {x, y};
  return scalar_curvature_at(g, p);
}

double mean_curvature(const std::string& name, const ParamMap& params = {}) {
  auto rep = curvature_constancy(get_model(name, params), 100);
  CHECK(rep.points.size() >= 100);
  CHECK(rep.constant);
  return rep.mean;
}

}  // namespace

// Point values frozen from the sympy Christoffel-route oracle.
TEST_CASE("scalar curvature at oracle points") {
  auto coax1 = cm2("1 - x^2", "-2x y", "4(1 - x^2 - y^2)");
  CHECK(R(coax1, 0, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(R(coax1, 1.0 / 3, 0.2) == doctest::Approx(2.0).epsilon(1e-12));
  auto nodal = cm2("4x(1-x)", "2y(2-3x)", "4x - 3x^2 - 9y^2");
  CHECK(R(nodal, 0.5, 0) == doctest::Approx(146.0 / 25).epsilon(1e-12));
  CHECK(R(nodal, 0.75, 0.125) == doctest::Approx(482.0 / 49).epsilon(1e-12));
  auto disk = cm2("2 - 2x^2 - y^2", "-x y", "2 - x^2 - 2y^2");
  CHECK(R(disk, 0, 0) == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(R(disk, 0.5, 0.25) == doctest::Approx(-256.0 / 243).epsilon(1e-12));
  auto tri = cm2("x(1-x)", "-x y", "y(1-y)");
  CHECK(R(tri, 0.25, 0.25) == doctest::Approx(0.5).epsilon(1e-12));
  auto deltoid = cm2("9 + 6x + y^2 - 3x^2", "-2y(2x + 3)", "9 - 6x + x^2 - 3y^2");
  CHECK(std::abs(R(deltoid, 1, 0.5)) < 1e-10);
}

TEST_CASE("curvature is invariant under an affine change of chart") {
  // u = 2x + y, v = x - y maps the swallowtail cometric to J g J^T.
  Model m = get_model("swallowtail");
  const auto& g = m.cometric;
  auto x = Polynomial::variable(2, 0), y = Polynomial::variable(2, 1);
  // Inverse map: x = (u + v) / 3, y = (u - 2v) / 3.
  std::vector<Polynomial> inv = {(x + y) * ratio(1, 3), (x - Rational(2) * y) * ratio(1, 3)};
  const Rational J[2][2] = {{2, 1}, {1, -1}};
  std::vector<std::vector<Polynomial>> h(2, std::vector<Polynomial>(2, Polynomial(2)));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) h[i][j] += J[i][a] * J[j][b] * g(a, b).compose(inv);
  CoMetric gh(h);
  for (const auto& p : interior_samples(m, 20)) {
    const double q[2] = {2 * p[0] + p[1], p[0] - p[1]};
    CHECK(scalar_curvature_at(gh, q) == doctest::Approx(scalar_curvature_at(g, p.data())).epsilon(1e-8));
  }
}

TEST_CASE("constant curvature verdicts") {
  CHECK(mean_curvature("coaxial_parabolas", {{"a", Rational(0)}}) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(mean_curvature("coaxial_parabolas", {{"a", Rational(1)}}) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(mean_curvature("coaxial_parabolas", {{"a", Rational(3)}}) == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(mean_curvature("parabola_tangent_secant") == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(mean_curvature("cuspidal_cubic_secant") == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(mean_curvature("cuspidal_cubic_tangent") == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(mean_curvature("swallowtail") == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(std::abs(mean_curvature("deltoid")) < 1e-6);
  CHECK(std::abs(mean_curvature("parabola_two_tangents")) < 1e-6);
  CHECK(mean_curvature("disk") == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(mean_curvature("triangle") == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("non-constant curvature is detected") {
  auto nodal = curvature_constancy(get_model("nodal_cubic"), 100);
  CHECK_FALSE(nodal.constant);
  CHECK(nodal.spread() > 1e-3);
  auto disk = curvature_constancy(get_model("disk", {{"a", Rational(1)}, {"b", Rational(1)}}), 100);
  CHECK_FALSE(disk.constant);
  CHECK(disk.spread() > 1e-3);
}

TEST_CASE("curvature rejects other dimensions") {
  Model m = get_model("triangle_cover_3d");
  const double p[3] = {0.2, 0.2, 0.0};
  CHECK_THROWS_AS(scalar_curvature_at(m.cometric, p), dimension_error);
}

TEST_CASE("interior samples stay inside") {
  Model m = get_model("cuspidal_cubic_tangent");
  auto pts = interior_samples(m, 150);
  CHECK(pts.size() >= 150);
  for (const auto& p : pts)
    for (const auto& f : m.boundary.factors) CHECK(f.eval(p.data()) > 0.0);
}

TEST_CASE("pullbacks") {
  for (const auto& map : pullback_maps()) {
    auto rep = verify_pullback(map, 1000, kDefaultSeed);
    INFO(map);
    CHECK(rep.ok);
    CHECK(rep.points == 1000);
    CHECK(rep.scale == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.max_gamma_residual < 1e-6);
    CHECK(rep.max_L_residual < 1e-6);
    CHECK(rep.max_sphere_identity < 1e-14);
  }
  CHECK_THROWS_AS(verify_pullback("torus"), parameter_error);
}

TEST_CASE("boundary points lie on the boundary") {
  for (const char* n : {"deltoid", "nodal_cubic", "triangle", "parabola_tangent_secant"}) {
    Model m = get_model(n);
    auto pts = boundary_points(m, 60);
    INFO(n);
    CHECK(pts.size() >= 60);
    for (const auto& p : pts) {
      const double q[2] = {p.x, p.y};
      CHECK(std::abs(m.boundary.factors[p.factor].eval(q)) < 1e-9);
      for (const auto& f : m.boundary.factors) CHECK(f.eval(q) > -1e-9);
    }
  }
  CHECK_THROWS_AS(boundary_points(get_model("jacobi1d"), 10), dimension_error);
}

TEST_CASE("curvature CSV") {
  auto rep = curvature_constancy(get_model("deltoid"), 100);
  const std::string csv = curvature_csv(rep);
  CHECK(csv.rfind("x,y,curvature\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == rep.points.size() + 1);
}
