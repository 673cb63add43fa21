#include "doctest.h"

#include <cmath>
#include <cstdlib>

#include "dop/catalog.hpp"
#include "dop/error.hpp"
#include "dop/pushforward.hpp"
#include "dop/quadrature.hpp"

using namespace dop;

namespace {

const double kPi = std::acos(-1.0);

double mass(const std::string& name, const ParamMap& params = {}) {
  Model m = get_model(name, params);
  return integrate([](const double*) { return 1.0; }, m, default_sampler(m)).value;
}

}  // namespace

TEST_CASE("splitmix64 reference stream") {
  SplitMix64 r(0);
  CHECK(r.next() == 0xE220A8397B1DCDAFull);
  CHECK(r.next() == 0x6E789E6AA1B965F4ull);
  SplitMix64 u(kDefaultSeed);
  for (int i = 0; i < 1000; ++i) {
    double v = u.uniform();
    CHECK((v >= 0.0 && v < 1.0));
  }
  CHECK(chunk_seed(7, 3) == chunk_seed(7, 3));
  CHECK(chunk_seed(7, 3) != chunk_seed(7, 4));
}

TEST_CASE("one-dimensional Gauss rules") {
  auto j = gauss_jacobi(8, 0.0, 0.0);
  double s = 0.0;
  for (std::size_t i = 0; i < j.nodes.size(); ++i) s += j.weights[i] * std::pow(j.nodes[i], 14);
  CHECK(s == doctest::Approx(2.0 / 15.0).epsilon(1e-13));

  auto h = gauss_hermite(10);
  double m4 = 0.0;
  for (std::size_t i = 0; i < h.nodes.size(); ++i) m4 += h.weights[i] * std::pow(h.nodes[i], 4);
  CHECK(m4 == doctest::Approx(3.0 * std::sqrt(2.0 * kPi)).epsilon(1e-12));

  auto l = gauss_laguerre(10, 1.0);
  double m3 = 0.0;
  for (std::size_t i = 0; i < l.nodes.size(); ++i) m3 += l.weights[i] * std::pow(l.nodes[i], 3);
  CHECK(m3 == doctest::Approx(24.0).epsilon(1e-12));
}

TEST_CASE("total masses of the Gauss domains") {
  CHECK(mass("square") == doctest::Approx(kPi * kPi).epsilon(1e-12));
  CHECK(mass("disk") == doctest::Approx(2 * kPi).epsilon(1e-12));
  CHECK(mass("triangle") == doctest::Approx(2 * kPi).epsilon(1e-12));
  CHECK(mass("jacobi1d") == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(mass("laguerre1d") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mass("hermite1d") == doctest::Approx(std::sqrt(2 * kPi)).epsilon(1e-12));
  CHECK(mass("gaussian_plane") == doctest::Approx(2 * kPi).epsilon(1e-12));
}

TEST_CASE("mapped Gauss rules integrate polynomial moments") {
  Model sq = get_model("square");
  auto v = integrate([](const double* x) { return std::pow(x[0], 4) * x[1] * x[1]; }, sq, default_sampler(sq));
  CHECK(v.value == doctest::Approx(3 * kPi * kPi / 16).epsilon(1e-12));
  // Disk, p = 0: integral of x^2 y^2 is pi / 24.
  Model disk = get_model("disk", {{"p", Rational(0)}});
  auto d = integrate([](const double* x) { return x[0] * x[0] * x[1] * x[1]; }, disk, default_sampler(disk));
  CHECK(d.value == doctest::Approx(kPi / 24).epsilon(1e-12));
  // Triangle, p = q = r = 0: integral of x^2 y is 2! 1! / 5! = 1/60.
  Model tri = get_model("triangle", {{"p", Rational(0)}, {"q", Rational(0)}, {"r", Rational(0)}});
  auto t = integrate([](const double* x) { return x[0] * x[0] * x[1]; }, tri, default_sampler(tri));
  CHECK(t.value == doctest::Approx(1.0 / 60).epsilon(1e-12));
}

TEST_CASE("Monte Carlo mass on a smooth density") {
  Model disk = get_model("disk", {{"p", ratio(1, 2)}});
  DomainSampler s = default_sampler(disk);
  s.kind = SamplerKind::mc_rejection;
  s.samples = 400000;
  auto est = integrate([](const double*) { return 1.0; }, disk, s);
  CHECK(est.value == doctest::Approx(2 * kPi / 3).epsilon(0.01));
  CHECK(est.error_estimate > 0.0);
  CHECK(std::abs(est.value - 2 * kPi / 3) < 5 * est.error_estimate);
}

TEST_CASE("Monte Carlo sample sets do not depend on the thread count") {
  Model m = get_model("deltoid");
  for (SamplerKind kind : {SamplerKind::mc_rejection, SamplerKind::mc_pushforward}) {
    DomainSampler s = default_sampler(m);
    s.kind = kind;
    s.samples = 200000;
    s.seed = 7;
    setenv("DOP_THREADS", "1", 1);
    PointSet one = sample_domain(m, s);
    setenv("DOP_THREADS", "5", 1);
    PointSet five = sample_domain(m, s);
    unsetenv("DOP_THREADS");
    INFO(to_string(kind));
    CHECK(one.coords == five.coords);
    CHECK(one.weights == five.weights);
    CHECK(one.density == five.density);
    s.seed = 8;
    CHECK(sample_domain(m, s).coords != one.coords);
  }
}

// Map masses are frozen from the mpmath oracle's direct integrals. Rejection
// estimates of these singular densities converge slowly, so they only serve
// as a coarse second opinion.
TEST_CASE("pushforward samplers") {
  for (const auto& map : pushforward_maps()) {
    Model m = get_model(map.model);
    INFO(map.name);
    DomainSampler s = default_sampler(m);
    REQUIRE(s.kind == SamplerKind::mc_pushforward);
    s.samples = 100000;
    PointSet p = sample_domain(m, s);
    CHECK(p.size() > 99900);
    for (std::size_t i = 0; i < p.size(); ++i)
      for (const auto& f : m.boundary.factors) REQUIRE(f.eval(p.point(i)) > 0.0);
    CHECK(integrate([](const double*) { return 1.0; }, p).value == doctest::Approx(map.mass).epsilon(1e-3));

    DomainSampler r = s;
    r.kind = SamplerKind::mc_rejection;
    r.samples = 1000000;
    CHECK(integrate([](const double*) { return 1.0; }, m, r).value == doctest::Approx(map.mass).epsilon(0.05));
  }
  CHECK(default_sampler(get_model("deltoid", {{"p", Rational(0)}})).kind == SamplerKind::mc_rejection);
  CHECK(default_sampler(get_model("deltoid", {}, std::string("det^-1/2"))).kind == SamplerKind::mc_rejection);
  CHECK(default_sampler(get_model("swallowtail")).kind == SamplerKind::mc_rejection);
  DomainSampler bad = default_sampler(get_model("deltoid", {{"p", Rational(0)}}));
  bad.kind = SamplerKind::mc_pushforward;
  CHECK_THROWS_AS(sample_domain(get_model("deltoid", {{"p", Rational(0)}}), bad), parameter_error);
  CHECK(parse_sampler_kind("mc-pushforward") == SamplerKind::mc_pushforward);
}

TEST_CASE("pushforward moment against the sphere moment") {
  // X = z on S^2 has E[z^2] = 1/3, and the coaxial mass is 2 pi.
  Model m = get_model("coaxial_parabolas");
  auto x2 = integrate([](const double* x) { return x[0] * x[0]; }, m, default_sampler(m));
  CHECK(x2.error_estimate > 0.0);
  CHECK(std::abs(x2.value - 2 * kPi / 3) < 5 * x2.error_estimate);
}

TEST_CASE("sampler validation") {
  Model sq = get_model("square");
  DomainSampler s = default_sampler(sq);
  s.kind = SamplerKind::polar_gauss_disk;
  CHECK_THROWS_AS(sample_domain(sq, s), parameter_error);
  CHECK_THROWS_AS(default_sampler(get_model("noncompact_strip")), parameter_error);
  Model d = get_model("deltoid");
  Box small{{Rational(-1), Rational(1)}, {Rational(-1), Rational(1)}};
  CHECK_THROWS_AS(check_box_encloses(d.boundary, small), parameter_error);
  CHECK(parse_sampler_kind("mc-rejection") == SamplerKind::mc_rejection);
  CHECK_THROWS_AS(parse_sampler_kind("simpson"), parameter_error);
}

TEST_CASE("points and matrices round-trip through CSV") {
  Model m = get_model("triangle");
  PointSet p = sample_domain(m, default_sampler(m));
  PointSet q = parse_points_csv(points_csv(p));
  CHECK(q.dim == p.dim);
  CHECK(q.coords == p.coords);
  CHECK(q.weights == p.weights);
  CHECK(q.density == p.density);
  Matrix g = gram_matrix(p, 2, 3);
  Matrix h = parse_matrix_csv(matrix_csv(g));
  REQUIRE(h.rows() == g.rows());
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) CHECK(h(i, j) == g(i, j));
  CHECK_THROWS_AS(parse_points_csv("x,y,weight\n1,2"), parse_error);
}

TEST_CASE("Gram matrices are symmetric positive definite") {
  Model m = get_model("disk");
  Matrix g = gram_matrix(m, 4, default_sampler(m));
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j) CHECK(g(i, j) == doctest::Approx(g(j, i)).epsilon(1e-14));
  CHECK_NOTHROW(cholesky(g));
}

TEST_CASE("self-adjointness on the Gauss domains") {
  for (const char* n : {"square", "disk", "triangle", "jacobi1d", "laguerre1d", "hermite1d", "gaussian_plane"}) {
    Model m = get_model(n);
    INFO(n);
    CHECK(symmetry_defect(m, 6, default_sampler(m)).defect < 1e-8);
  }
}
