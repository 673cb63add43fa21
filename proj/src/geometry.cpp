#include "dop/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <sstream>

#include "dop/error.hpp"
#include "dop/pushforward.hpp"

namespace dop {

namespace {

// f = N / D with first and second partials, from exact polynomial partials.
struct Jet {
  double f, fu, fv, fuu, fuv, fvv;
};

Jet quotient_jet(const Polynomial& n, const Polynomial& d, const double* x) {
  auto ev = [&](const Polynomial& p) { return p.eval(x); };
  const Polynomial nu = n.derivative(0), nv = n.derivative(1);
  const Polynomial du = d.derivative(0), dv = d.derivative(1);
  const double N = ev(n), Nu = ev(nu), Nv = ev(nv);
  const double Nuu = ev(nu.derivative(0)), Nuv = ev(nu.derivative(1)), Nvv = ev(nv.derivative(1));
  const double D = ev(d), Du = ev(du), Dv = ev(dv);
  const double Duu = ev(du.derivative(0)), Duv = ev(du.derivative(1)), Dvv = ev(dv.derivative(1));
  Jet j;
  j.f = N / D;
  const double au = Nu * D - N * Du, av = Nv * D - N * Dv;
  j.fu = au / (D * D);
  j.fv = av / (D * D);
  j.fuu = (Nuu * D + Nu * Du - Nu * Du - N * Duu) / (D * D) - 2.0 * au * Du / (D * D * D);
  j.fuv = (Nuv * D + Nu * Dv - Nv * Du - N * Duv) / (D * D) - 2.0 * au * Dv / (D * D * D);
  j.fvv = (Nvv * D + Nv * Dv - Nv * Dv - N * Dvv) / (D * D) - 2.0 * av * Dv / (D * D * D);
  return j;
}

double det3(const double m[3][3]) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double scalar_curvature_at(const CoMetric& g, const double* point) {
  if (g.dim() != 2) throw dimension_error("scalar curvature is implemented for d = 2 only");
  const Polynomial det = g.determinant();
  if (!(det.eval(point) > 0)) throw numeric_error("degenerate metric at the curvature sample point");
  // g_11 = g^{22} / det, g_12 = -g^{12} / det, g_22 = g^{11} / det.
  const Jet E = quotient_jet(g(1, 1), det, point);
  const Jet F = quotient_jet(-g(0, 1), det, point);
  const Jet G = quotient_jet(g(0, 0), det, point);
  const double a[3][3] = {{-E.fvv / 2 + F.fuv - G.fuu / 2, E.fu / 2, F.fu - E.fv / 2},
                          {F.fv - G.fu / 2, E.f, F.f},
                          {G.fv / 2, F.f, G.f}};
  const double b[3][3] = {{0.0, E.fv / 2, G.fu / 2}, {E.fv / 2, E.f, F.f}, {G.fu / 2, F.f, G.f}};
  const double w = E.f * G.f - F.f * F.f;
  return 2.0 * (det3(a) - det3(b)) / (w * w);
}

std::vector<std::array<double, 2>> interior_samples(const Model& model, std::size_t min_points, double margin) {
  if (model.dim() != 2) throw dimension_error("interior samples are implemented for d = 2 only");
  const Box box = model.grid_box();
  std::vector<NumericPolynomial> factors;
  std::vector<double> floor_value;
  for (const auto& f : model.boundary.factors) {
    factors.emplace_back(f);
    floor_value.push_back(margin * to_double(f.eval(model.boundary.witness)));
  }
  const double x0 = to_double(box[0].first), wx = to_double(box[0].second) - x0;
  const double y0 = to_double(box[1].first), wy = to_double(box[1].second) - y0;
  for (int m = 16; m <= 4096; m *= 2) {
    std::vector<std::array<double, 2>> out;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        std::array<double, 2> p{x0 + wx * (i + 0.5) / m, y0 + wy * (j + 0.5) / m};
        bool ok = true;
        for (std::size_t k = 0; k < factors.size() && ok; ++k) ok = factors[k](p.data()) > floor_value[k];
        if (ok) out.push_back(p);
      }
    if (out.size() >= min_points) return out;
  }
  throw numeric_error("could not place " + std::to_string(min_points) + " interior samples for model " + model.name);
}

CurvatureReport curvature_constancy(const Model& model, std::size_t min_points) {
  CurvatureReport r;
  r.model = model.name;
  r.points = interior_samples(model, min_points);
  double sum = 0.0;
  for (const auto& p : r.points) {
    double v = scalar_curvature_at(model.cometric, p.data());
    r.values.push_back(v);
    sum += v;
  }
  r.mean = sum / static_cast<double>(r.values.size());
  r.min = r.max = r.values.front();
  for (double v : r.values) {
    r.min = std::min(r.min, v);
    r.max = std::max(r.max, v);
    r.max_deviation = std::max(r.max_deviation, std::abs(v - r.mean));
  }
  r.constant = r.max_deviation <= 1e-6 * (1.0 + std::abs(r.mean));
  return r;
}

std::string curvature_csv(const CurvatureReport& r) {
  std::ostringstream os;
  os << "x,y,curvature\n";
  for (std::size_t i = 0; i < r.points.size(); ++i)
    os << fmt(r.points[i][0]) << ',' << fmt(r.points[i][1]) << ',' << fmt(r.values[i]) << '\n';
  return os.str();
}

// ---- pullbacks ----

const std::vector<std::string>& pullback_maps() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& m : pushforward_maps()) v.push_back(m.name);
    return v;
  }();
  return names;
}

PullbackReport verify_pullback(const std::string& map, std::size_t points, std::uint64_t seed) {
  if (points == 0) throw parameter_error("pullback check needs at least one sample point");
  const PushforwardMap& pf = pushforward_map(map);
  PullbackReport r;
  r.map = map;
  r.model = pf.model;
  r.params = pf.params;
  r.points = points;
  const Model model = get_model(r.model, r.params);
  const DiffusionOperator& op = model.op();
  SplitMix64 rng(seed);
  std::vector<AmbientSample> samples;
  std::vector<double> src(pf.source_dim);
  for (std::size_t i = 0; i < points; ++i) {
    pf.draw(rng, src.data());
    samples.push_back(pf.ambient(src.data()));
  }

  struct Target {
    double gxx, gxy, gyy, bx, by;
  };
  std::vector<Target> targets;
  double num = 0.0, den = 0.0;
  for (const auto& s : samples) {
    const double pt[2] = {s.X, s.Y};
    Target t{op.cometric()(0, 0).eval(pt), op.cometric()(0, 1).eval(pt), op.cometric()(1, 1).eval(pt),
             op.drift()[0].eval(pt), op.drift()[1].eval(pt)};
    num += s.gxx * t.gxx + 2.0 * s.gxy * t.gxy + s.gyy * t.gyy;
    den += s.gxx * s.gxx + 2.0 * s.gxy * s.gxy + s.gyy * s.gyy;
    targets.push_back(t);
    r.max_sphere_identity = std::max(r.max_sphere_identity, s.sphere_identity);
  }
  if (!(den > 0)) throw numeric_error("ambient Gamma vanishes at every sample");
  r.scale = num / den;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const auto& t = targets[i];
    r.max_gamma_residual = std::max({r.max_gamma_residual, std::abs(t.gxx - r.scale * s.gxx),
                                     std::abs(t.gxy - r.scale * s.gxy), std::abs(t.gyy - r.scale * s.gyy)});
    r.max_L_residual =
        std::max({r.max_L_residual, std::abs(t.bx - r.scale * s.lx), std::abs(t.by - r.scale * s.ly)});
  }
  r.ok = r.max_gamma_residual < 1e-6 && r.max_L_residual < 1e-6;
  return r;
}

// ---- boundary tracing ----

namespace {

// Real roots in [lo, hi] of a univariate polynomial given low to high.
std::vector<double> real_roots(std::vector<double> c, double lo, double hi) {
  double scale = 0.0;
  for (double v : c) scale = std::max(scale, std::abs(v));
  while (!c.empty() && std::abs(c.back()) <= 1e-14 * scale) c.pop_back();
  std::vector<double> out;
  if (c.size() < 2) return out;
  const std::size_t m = c.size() - 1;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t i = 1; i < m; ++i) comp(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < m; ++i) comp(i, m - 1) = -c[i] / c.back();
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    auto z = es.eigenvalues()[i];
    if (std::abs(z.imag()) > 1e-9 * (1.0 + std::abs(z.real()))) continue;
    if (z.real() >= lo && z.real() <= hi) out.push_back(z.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<BoundaryPoint> boundary_points(const Model& model, std::size_t n) {
  if (model.dim() != 2) throw dimension_error("boundary points are implemented for d = 2 only");
  if (n < 2) throw parameter_error("boundary tracing needs at least two scan lines");
  const Box box = model.grid_box();
  const double lo[2] = {to_double(box[0].first), to_double(box[1].first)};
  const double hi[2] = {to_double(box[0].second), to_double(box[1].second)};
  std::vector<NumericPolynomial> numeric;
  for (const auto& f : model.boundary.factors) numeric.emplace_back(f);
  std::vector<BoundaryPoint> out;
  for (std::size_t k = 0; k < model.boundary.factors.size(); ++k) {
    const Polynomial& f = model.boundary.factors[k];
    for (int fixed = 0; fixed < 2; ++fixed) {
      const int free = 1 - fixed;
      const std::size_t lines = fixed == 0 ? n / 2 : n - n / 2;
      for (std::size_t i = 0; i < lines; ++i) {
        const double t = lo[fixed] + (hi[fixed] - lo[fixed]) * (static_cast<double>(i) + 0.5) / static_cast<double>(lines);
        std::vector<Polynomial> sub(2, Polynomial(1));
        sub[fixed] = Polynomial(1, rational_from_double(t));
        sub[free] = Polynomial::variable(1, 0);
        Polynomial line = f.compose(sub);
        if (line.is_zero()) continue;
        std::vector<double> coeffs(std::max(line.total_degree(), 0) + 1, 0.0);
        for (const auto& [e, c] : line.terms()) coeffs[e[0]] = to_double(c);
        for (double r : real_roots(coeffs, lo[free], hi[free])) {
          double pt[2];
          pt[fixed] = t;
          pt[free] = r;
          bool on_closure = true;
          for (std::size_t j = 0; j < numeric.size() && on_closure; ++j)
            if (j != k && numeric[j](pt) < -1e-9) on_closure = false;
          if (on_closure) out.push_back({k, pt[0], pt[1]});
        }
      }
    }
  }
  return out;
}

std::string boundary_points_csv(const std::vector<BoundaryPoint>& pts) {
  std::ostringstream os;
  os << "factor,x,y\n";
  for (const auto& p : pts) os << p.factor << ',' << fmt(p.x) << ',' << fmt(p.y) << '\n';
  return os.str();
}

}  // namespace dop
