#include "dop/pushforward.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dop/error.hpp"

namespace dop {

namespace {

constexpr double kPi = std::numbers::pi;

Polynomial euler(const Polynomial& p) {
  Polynomial e(p.dim());
  for (int i = 0; i < p.dim(); ++i) e += Polynomial::variable(p.dim(), i) * p.derivative(i);
  return e;
}

Polynomial laplacian(const Polynomial& p) {
  Polynomial l(p.dim());
  for (int i = 0; i < p.dim(); ++i) l += p.derivative(i).derivative(i);
  return l;
}

// On S^{n-1}: Gamma_S = Gamma_E - E(.)E(.), Delta_S f = Delta_E f - E(E f) - (n - 2) E f.
double sphere_gamma(const Polynomial& f, const Polynomial& h, const double* x) {
  double g = 0.0;
  for (int i = 0; i < f.dim(); ++i) g += f.derivative(i).eval(x) * h.derivative(i).eval(x);
  return g - euler(f).eval(x) * euler(h).eval(x);
}

double sphere_laplacian(const Polynomial& f, const double* x) {
  const Polynomial e = euler(f);
  return laplacian(f).eval(x) - euler(e).eval(x) - (f.dim() - 2) * e.eval(x);
}

constexpr double kSqrt3 = std::numbers::sqrt3;
constexpr double kSqrt2 = std::numbers::sqrt2;

AmbientSample deltoid_sample(const double* z) {
  const double w[3][2] = {{2.0, 0.0}, {-1.0, kSqrt3}, {-1.0, -kSqrt3}};
  AmbientSample s;
  double dX[2] = {0, 0}, dY[2] = {0, 0};
  for (const auto& wk : w) {
    const double t = wk[0] * z[0] + wk[1] * z[1];
    const double c = std::cos(t), sn = std::sin(t);
    const double n2 = wk[0] * wk[0] + wk[1] * wk[1];
    s.X += c;
    s.Y += sn;
    for (int i = 0; i < 2; ++i) {
      dX[i] -= sn * wk[i];
      dY[i] += c * wk[i];
    }
    s.lx -= n2 * c;
    s.ly -= n2 * sn;
  }
  s.gxx = dX[0] * dX[0] + dX[1] * dX[1];
  s.gxy = dX[0] * dY[0] + dX[1] * dY[1];
  s.gyy = dY[0] * dY[0] + dY[1] * dY[1];
  return s;
}

AmbientSample two_tangents_sample(const double* z) {
  const double cu = std::cos(kSqrt2 * z[0]), su = std::sin(kSqrt2 * z[0]);
  const double cv = std::cos(kSqrt2 * z[1]), sv = std::sin(kSqrt2 * z[1]);
  AmbientSample s;
  s.X = (cu + cv) / 2;
  s.Y = cu * cv;
  const double dX[2] = {-kSqrt2 * su / 2, -kSqrt2 * sv / 2};
  const double dY[2] = {-kSqrt2 * su * cv, -kSqrt2 * cu * sv};
  s.gxx = dX[0] * dX[0] + dX[1] * dX[1];
  s.gxy = dX[0] * dY[0] + dX[1] * dY[1];
  s.gyy = dY[0] * dY[0] + dY[1] * dY[1];
  s.lx = -2.0 * s.X;
  s.ly = -4.0 * s.Y;
  return s;
}

}  // namespace

PushforwardMap PushforwardMap::sphere(std::string name, std::string model, ParamMap params, double mass, int n,
                                      const char* X, const char* Y) {
  PushforwardMap m;
  m.name = std::move(name);
  m.model = std::move(model);
  m.params = std::move(params);
  m.source = Source::sphere;
  m.source_dim = n;
  m.mass = mass;
  m.X_ = parse_polynomial(X, n);
  m.Y_ = parse_polynomial(Y, n);
  m.nX_ = NumericPolynomial(m.X_);
  m.nY_ = NumericPolynomial(m.Y_);
  return m;
}

PushforwardMap PushforwardMap::torus(std::string name, std::string model, ParamMap params, double mass, Torus kind) {
  PushforwardMap m;
  m.name = std::move(name);
  m.model = std::move(model);
  m.params = std::move(params);
  m.source = Source::torus;
  m.source_dim = 2;
  m.mass = mass;
  m.torus_ = kind;
  return m;
}

void PushforwardMap::draw(SplitMix64& rng, double* src) const {
  if (source == Source::sphere) {
    double n2 = 0.0;
    do {
      n2 = 0.0;
      for (int i = 0; i < source_dim; ++i) {
        src[i] = rng.normal();
        n2 += src[i] * src[i];
      }
    } while (n2 < 1e-12);
    const double r = std::sqrt(n2);
    for (int i = 0; i < source_dim; ++i) src[i] /= r;
    return;
  }
  const double u = rng.uniform(), v = rng.uniform();
  // Period cells: u (pi, pi / sqrt3) + v (0, 2 pi / sqrt3) and [0, sqrt2 pi)^2.
  if (torus_ == Torus::deltoid) {
    src[0] = kPi * u;
    src[1] = kPi * (u + 2.0 * v) / kSqrt3;
  } else {
    src[0] = kSqrt2 * kPi * u;
    src[1] = kSqrt2 * kPi * v;
  }
}

std::array<double, 2> PushforwardMap::image(const double* src) const {
  if (source == Source::sphere) return {nX_(src), nY_(src)};
  if (torus_ == Torus::deltoid) {
    const double a = 2.0 * src[0], b = -src[0] + kSqrt3 * src[1], c = -src[0] - kSqrt3 * src[1];
    return {std::cos(a) + std::cos(b) + std::cos(c), std::sin(a) + std::sin(b) + std::sin(c)};
  }
  const double cu = std::cos(kSqrt2 * src[0]), cv = std::cos(kSqrt2 * src[1]);
  return {(cu + cv) / 2, cu * cv};
}

AmbientSample PushforwardMap::ambient(const double* src) const {
  if (source == Source::torus) return torus_ == Torus::deltoid ? deltoid_sample(src) : two_tangents_sample(src);
  AmbientSample s;
  s.X = X_.eval(src);
  s.Y = Y_.eval(src);
  s.gxx = sphere_gamma(X_, X_, src);
  s.gxy = sphere_gamma(X_, Y_, src);
  s.gyy = sphere_gamma(Y_, Y_, src);
  s.lx = sphere_laplacian(X_, src);
  s.ly = sphere_laplacian(Y_, src);
  for (int i = 0; i < source_dim; ++i)
    for (int j = 0; j < source_dim; ++j) {
      const double want = (i == j ? 1.0 : 0.0) - src[i] * src[j];
      const double got =
          sphere_gamma(Polynomial::variable(source_dim, i), Polynomial::variable(source_dim, j), src);
      s.sphere_identity = std::max(s.sphere_identity, std::abs(got - want));
    }
  return s;
}

// Masses from the mpmath oracle, which also checks them against sheet counts:
// a k-sheeted map pushes the uniform measure to k det(G)^(-1/2) dx.
const std::vector<PushforwardMap>& pushforward_maps() {
  static const std::vector<PushforwardMap> maps = [] {
    const Rational h = ratio(-1, 2);
    std::vector<PushforwardMap> v;
    v.push_back(PushforwardMap::sphere("coaxial_s2", "coaxial_parabolas",
                                       {{"a", Rational(1)}, {"p", Rational(0)}, {"q", Rational(0)}}, 2 * kPi, 3, "z",
                                       "2*x*y"));
    v.push_back(PushforwardMap::sphere("cusp_secant_s2", "cuspidal_cubic_secant", {{"p1", h}, {"p2", h}}, 2 * kPi, 3,
                                       "x^2 + y^2", "x^3 - 3*x*y^2"));
    v.push_back(PushforwardMap::sphere("tangent_secant_s2", "parabola_tangent_secant",
                                       {{"p", h}, {"q", h}, {"r", h}}, 2 * kPi, 3, "x^2 + y^2", "4*x^2*y^2"));
    // t_i = 3 (x^i)^2 - 1, X = -(t1 t2 + t2 t3 + t3 t1) / 3, Y = t1 t2 t3 / 2.
    v.push_back(PushforwardMap::sphere(
        "cusp_tangent_s2", "cuspidal_cubic_tangent", {{"p", h}, {"q", h}}, kPi, 3,
        "-((3x^2-1)(3y^2-1) + (3y^2-1)(3z^2-1) + (3z^2-1)(3x^2-1)) / 3", "(3x^2-1)(3y^2-1)(3z^2-1) / 2"));
    // X = |z1|^2, Y = Re(z1^2 conj z2) with z1 = x1 + i x2, z2 = x3 + i x4.
    v.push_back(PushforwardMap::sphere("nodal_s3", "nodal_cubic", {{"p", h}}, kPi, 4, "x1^2 + x2^2",
                                       "(x1^2 - x2^2) x3 + 2 x1 x2 x4"));
    v.push_back(
        PushforwardMap::torus("deltoid_trig", "deltoid", {{"p", h}}, kPi * kPi / 3, PushforwardMap::Torus::deltoid));
    v.push_back(PushforwardMap::torus("two_tangents_trig", "parabola_two_tangents", {{"p1", h}, {"p2", h}, {"p3", h}},
                                      kPi * kPi / 2, PushforwardMap::Torus::two_tangents));
    return v;
  }();
  return maps;
}

const PushforwardMap& pushforward_map(const std::string& name) {
  for (const auto& m : pushforward_maps())
    if (m.name == name) return m;
  throw parameter_error("unknown pushforward map '" + name + "'");
}

const PushforwardMap* pushforward_for(const Model& model) {
  if (model.measure.label != "catalog") return nullptr;
  for (const auto& m : pushforward_maps())
    if (m.model == model.name && m.params == model.params) return &m;
  return nullptr;
}

}  // namespace dop
