#include "dop/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <thread>

#include "dop/error.hpp"
#include "dop/pushforward.hpp"

namespace dop {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix64::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform(), u2 = uniform();
  // 1 - u1 lies in (0, 1], so the logarithm is finite.
  double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  double t = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) {
  SplitMix64 g(seed ^ (chunk * 0xD1B54A32D192ED03ull));
  return g.next();
}

unsigned worker_count() {
  if (const char* env = std::getenv("DOP_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : h;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  unsigned workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto run = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        body(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

struct KindName {
  SamplerKind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {SamplerKind::tensor_gauss_square, "tensor-gauss-square"},
    {SamplerKind::polar_gauss_disk, "polar-gauss-disk"},
    {SamplerKind::duffy_gauss_triangle, "duffy-gauss-triangle"},
    {SamplerKind::gauss_jacobi_interval, "gauss-jacobi-interval"},
    {SamplerKind::gauss_hermite_line, "gauss-hermite-line"},
    {SamplerKind::gauss_laguerre_halfline, "gauss-laguerre-halfline"},
    {SamplerKind::tensor_gauss_hermite_plane, "tensor-gauss-hermite-plane"},
    {SamplerKind::mc_rejection, "mc-rejection"},
    {SamplerKind::mc_pushforward, "mc-pushforward"},
};

}  // namespace

SamplerKind parse_sampler_kind(std::string_view text) {
  for (const auto& k : kKinds)
    if (text == k.name) return k.kind;
  if (text == "mc") return SamplerKind::mc_rejection;
  throw parameter_error("unknown sampler kind '" + std::string(text) + "'");
}

std::string to_string(SamplerKind k) {
  for (const auto& e : kKinds)
    if (e.kind == k) return e.name;
  return "unknown";
}

bool is_monte_carlo(SamplerKind k) { return k == SamplerKind::mc_rejection || k == SamplerKind::mc_pushforward; }

bool is_gauss(SamplerKind k) { return !is_monte_carlo(k); }

DomainSampler default_sampler(const Model& model) {
  if (model.sampler_kind == "none")
    throw parameter_error("model " + model.name + " has no domain sampler (unbounded domain without a classical rule)");
  DomainSampler s;
  s.kind = parse_sampler_kind(model.sampler_kind);
  if (s.kind == SamplerKind::mc_rejection) {
    s.box = model.box;
    if (pushforward_for(model)) s.kind = SamplerKind::mc_pushforward;
  }
  return s;
}

// ---- Gauss rules ----

namespace {

GaussRule golub_welsch(const std::vector<double>& diag, const std::vector<double>& off, double mu0) {
  const std::size_t n = diag.size();
  Matrix t(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    t(i, i) = diag[i];
    if (i + 1 < n) t(i, i + 1) = t(i + 1, i) = off[i];
  }
  auto e = sym_eig(t);
  GaussRule r;
  for (std::size_t k = 0; k < n; ++k) {
    r.nodes.push_back(e.eigenvalues[k]);
    double v0 = e.eigenvectors(0, k);
    r.weights.push_back(mu0 * v0 * v0);
  }
  return r;
}

}  // namespace

GaussRule gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw parameter_error("Gauss rule needs at least one node");
  if (a <= -1 || b <= -1) throw parameter_error("Jacobi weight exponents must exceed -1 for finite mass");
  std::vector<double> diag(n), off(n > 1 ? n - 1 : 0);
  for (int k = 0; k < n; ++k) {
    double s = 2.0 * k + a + b;
    diag[k] = (k == 0) ? (b - a) / (a + b + 2) : (b * b - a * a) / (s * (s + 2));
  }
  for (int k = 1; k < n; ++k) {
    double s = 2.0 * k + a + b;
    double v;
    if (k == 1) v = 4.0 * (1 + a) * (1 + b) / ((2 + a + b) * (2 + a + b) * (3 + a + b));
    else v = 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1) * (s - 1));
    off[k - 1] = std::sqrt(v);
  }
  double mu0 = std::exp((a + b + 1) * std::log(2.0) + std::lgamma(a + 1) + std::lgamma(b + 1) - std::lgamma(a + b + 2));
  return golub_welsch(diag, off, mu0);
}

GaussRule gauss_hermite(int n) {
  if (n < 1) throw parameter_error("Gauss rule needs at least one node");
  std::vector<double> diag(n, 0.0), off(n > 1 ? n - 1 : 0);
  for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(static_cast<double>(k));
  return golub_welsch(diag, off, std::sqrt(2.0 * std::numbers::pi));
}

GaussRule gauss_laguerre(int n, double a) {
  if (n < 1) throw parameter_error("Gauss rule needs at least one node");
  if (a <= -1) throw parameter_error("Laguerre weight exponent must exceed -1 for finite mass");
  std::vector<double> diag(n), off(n > 1 ? n - 1 : 0);
  for (int k = 0; k < n; ++k) diag[k] = 2.0 * k + a + 1;
  for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(k * (k + a));
  return golub_welsch(diag, off, std::exp(std::lgamma(a + 1)));
}

// ---- sampling ----

namespace {

// Exponents of the model measure in the order of `expected`; throws unless
// the measure factors are exactly these polynomials and exp(Q) matches.
std::vector<double> classical_exponents(const Model& m, const std::vector<std::string>& expected,
                                        const std::optional<std::string>& exp_poly, const char* kind) {
  const int d = m.dim();
  auto fail = [&](const std::string& why) {
    throw parameter_error(std::string("sampler ") + kind + " does not fit model " + m.name + ": " + why);
  };
  if (!m.measure.arctan_terms.empty()) fail("arctan terms are not supported");
  if (m.measure.factors.size() != expected.size()) fail("factor count differs");
  std::vector<double> out;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    if (m.measure.factors[k].factor != parse_polynomial(expected[k], d)) fail("factor " + expected[k] + " expected");
    out.push_back(to_double(m.measure.factors[k].exponent));
  }
  Polynomial want = exp_poly ? parse_polynomial(*exp_poly, d) : Polynomial(d);
  Polynomial have = m.measure.exp_poly ? *m.measure.exp_poly : Polynomial(d);
  if (want != have) fail("exponential part must be " + (exp_poly ? *exp_poly : std::string("absent")));
  return out;
}

void push(PointSet& ps, std::initializer_list<double> x, double w) {
  for (double v : x) ps.coords.push_back(v);
  ps.weights.push_back(w);
  ps.density.push_back(1.0);
}

PointSet gauss_points(const Model& m, const DomainSampler& s) {
  PointSet ps;
  ps.dim = m.dim();
  const int n = s.nodes;
  switch (s.kind) {
    case SamplerKind::gauss_jacobi_interval: {
      auto e = classical_exponents(m, {"1-x", "1+x"}, std::nullopt, "gauss-jacobi-interval");
      auto r = gauss_jacobi(n, e[0], e[1]);
      for (int i = 0; i < n; ++i) push(ps, {r.nodes[i]}, r.weights[i]);
      break;
    }
    case SamplerKind::gauss_hermite_line: {
      classical_exponents(m, {}, std::string("-x^2/2"), "gauss-hermite-line");
      auto r = gauss_hermite(n);
      for (int i = 0; i < n; ++i) push(ps, {r.nodes[i]}, r.weights[i]);
      break;
    }
    case SamplerKind::gauss_laguerre_halfline: {
      auto e = classical_exponents(m, {"x"}, std::string("-x"), "gauss-laguerre-halfline");
      auto r = gauss_laguerre(n, e[0]);
      for (int i = 0; i < n; ++i) push(ps, {r.nodes[i]}, r.weights[i]);
      break;
    }
    case SamplerKind::tensor_gauss_square: {
      auto e = classical_exponents(m, {"1-x", "1+x", "1-y", "1+y"}, std::nullopt, "tensor-gauss-square");
      auto rx = gauss_jacobi(n, e[0], e[1]);
      auto ry = gauss_jacobi(n, e[2], e[3]);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) push(ps, {rx.nodes[i], ry.nodes[j]}, rx.weights[i] * ry.weights[j]);
      break;
    }
    case SamplerKind::tensor_gauss_hermite_plane: {
      classical_exponents(m, {}, std::string("-x^2/2 - y^2/2"), "tensor-gauss-hermite-plane");
      auto r = gauss_hermite(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) push(ps, {r.nodes[i], r.nodes[j]}, r.weights[i] * r.weights[j]);
      break;
    }
    case SamplerKind::polar_gauss_disk: {
      // u = 2 r^2 - 1: (1 - r^2)^p r dr = 2^{-p} / 4 (1 - u)^p du.
      auto e = classical_exponents(m, {"1-x^2-y^2"}, std::nullopt, "polar-gauss-disk");
      auto r = gauss_jacobi(n, e[0], 0.0);
      const int na = 2 * n;
      const double scale = std::pow(2.0, -e[0]) / 4.0 * (2.0 * std::numbers::pi / na);
      for (int i = 0; i < n; ++i) {
        double rad = std::sqrt((1.0 + r.nodes[i]) / 2.0);
        for (int j = 0; j < na; ++j) {
          double t = 2.0 * std::numbers::pi * (j + 0.5) / na;
          push(ps, {rad * std::cos(t), rad * std::sin(t)}, r.weights[i] * scale);
        }
      }
      break;
    }
    case SamplerKind::duffy_gauss_triangle: {
      // x = (1 - w) v, y = w: weight v^p (1-v)^r w^q (1-w)^{p+r+1} dv dw.
      auto e = classical_exponents(m, {"x", "y", "1-x-y"}, std::nullopt, "duffy-gauss-triangle");
      const double p = e[0], q = e[1], rr = e[2];
      auto rv = gauss_jacobi(n, rr, p);
      auto rw = gauss_jacobi(n, p + rr + 1, q);
      const double sv = std::pow(2.0, -(p + rr + 1)), sw = std::pow(2.0, -(p + q + rr + 2));
      for (int i = 0; i < n; ++i) {
        double v = (1.0 + rv.nodes[i]) / 2.0;
        for (int j = 0; j < n; ++j) {
          double w = (1.0 + rw.nodes[j]) / 2.0;
          push(ps, {(1.0 - w) * v, w}, rv.weights[i] * sv * rw.weights[j] * sw);
        }
      }
      break;
    }
    case SamplerKind::mc_rejection:
    case SamplerKind::mc_pushforward:
      break;
  }
  return ps;
}

std::vector<NumericPolynomial> numeric(const std::vector<Polynomial>& ps) {
  std::vector<NumericPolynomial> out;
  for (const auto& p : ps) out.emplace_back(p);
  return out;
}

bool inside(const std::vector<NumericPolynomial>& factors, const double* x, double tol) {
  for (const auto& f : factors)
    if (!(f(x) > tol)) return false;
  return true;
}

// Images of uniform source draws. Every point carries mass / N; images that
// round onto or past the boundary are dropped like rejected proposals.
PointSet pushforward_points(const Model& model, const DomainSampler& sampler) {
  const PushforwardMap* map = pushforward_for(model);
  if (!map)
    throw parameter_error("sampler mc-pushforward does not fit model " + model.name +
                          ": no pushforward map at these parameters and measure");
  auto factors = numeric(model.boundary.factors);
  const std::size_t n = sampler.samples;
  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<std::vector<double>> accepted(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    SplitMix64 rng(chunk_seed(sampler.seed, c));
    std::vector<double> src(map->source_dim);
    auto& out = accepted[c];
    for (std::size_t s = c * kChunkSize; s < std::min(n, (c + 1) * kChunkSize); ++s) {
      map->draw(rng, src.data());
      const auto x = map->image(src.data());
      if (inside(factors, x.data(), 0.0)) out.insert(out.end(), x.begin(), x.end());
    }
  });
  PointSet ps;
  ps.dim = 2;
  ps.monte_carlo = true;
  ps.proposals = n;
  ps.box_volume = map->mass;
  for (const auto& a : accepted) ps.coords.insert(ps.coords.end(), a.begin(), a.end());
  const std::size_t m = ps.coords.size() / 2;
  ps.weights.assign(m, map->mass / static_cast<double>(n));
  ps.density.assign(m, 1.0);
  return ps;
}

}  // namespace

void check_box_encloses(const BoundarySpec& boundary, const Box& box, int per_edge) {
  const int d = boundary.dim;
  if (static_cast<int>(box.size()) != d) throw dimension_error("box dimension mismatch");
  auto factors = numeric(boundary.factors);
  std::vector<double> lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = to_double(box[i].first);
    hi[i] = to_double(box[i].second);
    if (!(hi[i] > lo[i])) throw parameter_error("box interval must have positive length");
  }
  // Points per free axis on each face: per_edge for d = 2, sqrt(per_edge) for d = 3.
  int m = d <= 2 ? per_edge : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(per_edge))));
  std::vector<double> x(d);
  for (int axis = 0; axis < d; ++axis)
    for (int side = 0; side < 2; ++side) {
      std::vector<int> idx(d, 0);
      for (;;) {
        int k = 0;
        for (int i = 0; i < d; ++i) {
          if (i == axis) {
            x[i] = side ? hi[i] : lo[i];
            continue;
          }
          x[i] = lo[i] + (hi[i] - lo[i]) * (idx[k++] + 0.5) / m;
        }
        if (inside(factors, x.data(), 1e-9))
          throw parameter_error("bounding box does not enclose the domain: the box face meets the interior");
        int a = 0;
        while (a < d - 1 && ++idx[a] == m) idx[a++] = 0;
        if (a == d - 1 || d == 1) break;
      }
    }
}

PointSet sample_domain(const Model& model, const DomainSampler& sampler) {
  if (is_gauss(sampler.kind)) {
    if (sampler.nodes < 1) throw parameter_error("Gauss sampler needs at least one node");
    return gauss_points(model, sampler);
  }
  if (sampler.samples == 0) throw parameter_error("Monte Carlo sampler needs a positive sample count");
  if (sampler.kind == SamplerKind::mc_pushforward) return pushforward_points(model, sampler);
  const int d = model.dim();
  std::optional<Box> box = sampler.box ? sampler.box : model.box;
  if (!box) throw parameter_error("Monte Carlo sampling of model " + model.name + " needs a bounding box");
  check_box_encloses(model.boundary, *box);
  auto factors = numeric(model.boundary.factors);
  std::vector<double> lo(d), width(d);
  double volume = 1.0;
  for (int i = 0; i < d; ++i) {
    lo[i] = to_double((*box)[i].first);
    width[i] = to_double((*box)[i].second) - lo[i];
    volume *= width[i];
  }
  const std::size_t n = sampler.samples;
  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<std::vector<double>> accepted(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    SplitMix64 rng(chunk_seed(sampler.seed, c));
    std::size_t begin = c * kChunkSize, end = std::min(n, begin + kChunkSize);
    std::vector<double> x(d);
    auto& out = accepted[c];
    for (std::size_t s = begin; s < end; ++s) {
      for (int i = 0; i < d; ++i) x[i] = lo[i] + width[i] * rng.uniform();
      if (inside(factors, x.data(), 0.0)) out.insert(out.end(), x.begin(), x.end());
    }
  });
  PointSet ps;
  ps.dim = d;
  ps.monte_carlo = true;
  ps.proposals = n;
  ps.box_volume = volume;
  for (const auto& a : accepted) ps.coords.insert(ps.coords.end(), a.begin(), a.end());
  const std::size_t m = ps.coords.size() / d;
  ps.weights.assign(m, volume / static_cast<double>(n));
  ps.density.resize(m);
  for (std::size_t i = 0; i < m; ++i) ps.density[i] = model.measure.density(ps.point(i));
  return ps;
}

// ---- integration ----

namespace {

struct Sums {
  double s = 0.0, s2 = 0.0;
};

Sums weighted_sums(const std::function<double(const double*)>& f, const PointSet& ps) {
  const std::size_t n = ps.size();
  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<Sums> part(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    Sums acc;
    for (std::size_t i = c * kChunkSize; i < std::min(n, (c + 1) * kChunkSize); ++i) {
      double h = ps.density[i] * f(ps.point(i));
      acc.s += ps.weights[i] * h;
      acc.s2 += h * h;
    }
    part[c] = acc;
  });
  Sums total;
  for (const auto& p : part) {
    total.s += p.s;
    total.s2 += p.s2;
  }
  return total;
}

}  // namespace

IntegralEstimate integrate(const std::function<double(const double*)>& f, const PointSet& points) {
  Sums t = weighted_sums(f, points);
  IntegralEstimate est;
  est.value = t.s;
  if (points.monte_carlo) {
    // Proposals outside the domain contribute h = 0.
    const double n = static_cast<double>(points.proposals);
    const double mean = t.s / points.box_volume;
    const double var = std::max(0.0, t.s2 / n - mean * mean);
    est.error_estimate = points.box_volume * std::sqrt(var / n);
  }
  return est;
}

IntegralEstimate integrate(const std::function<double(const double*)>& f, const Model& model,
                           const DomainSampler& sampler) {
  PointSet ps = sample_domain(model, sampler);
  IntegralEstimate est = integrate(f, ps);
  if (is_gauss(sampler.kind)) {
    DomainSampler coarse = sampler;
    coarse.nodes = std::max(1, sampler.nodes / 2);
    est.error_estimate = std::abs(est.value - integrate(f, sample_domain(model, coarse)).value);
  }
  return est;
}

Matrix moment_matrix(const PointSet& ps, const std::vector<NumericPolynomial>& u,
                     const std::vector<NumericPolynomial>& v) {
  const std::size_t nu = u.size(), nv = v.size(), n = ps.size();
  const int d = ps.dim;
  int deg = 0;
  for (const auto& p : u) deg = std::max(deg, p.degree());
  for (const auto& p : v) deg = std::max(deg, p.degree());
  const int stride = deg + 1;
  const std::size_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<std::vector<double>> part(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    std::vector<double> acc(nu * nv, 0.0), pw(static_cast<std::size_t>(d * stride)), uv(nu), vv(nv);
    for (std::size_t i = c * kChunkSize; i < std::min(n, (c + 1) * kChunkSize); ++i) {
      fill_powers(ps.point(i), d, deg, pw.data());
      const double w = ps.weights[i] * ps.density[i];
      for (std::size_t k = 0; k < nu; ++k) uv[k] = w * u[k].eval_powers(pw.data(), stride);
      for (std::size_t l = 0; l < nv; ++l) vv[l] = v[l].eval_powers(pw.data(), stride);
      for (std::size_t k = 0; k < nu; ++k) {
        double* row = acc.data() + k * nv;
        for (std::size_t l = 0; l < nv; ++l) row[l] += uv[k] * vv[l];
      }
    }
    part[c] = std::move(acc);
  });
  Matrix m(nu, nv);
  for (const auto& p : part)
    for (std::size_t k = 0; k < nu; ++k)
      for (std::size_t l = 0; l < nv; ++l) m(k, l) += p[k * nv + l];
  return m;
}

Matrix gram_matrix(const PointSet& points, int dim, int n) {
  MonomialBasis basis(dim, n);
  std::vector<NumericPolynomial> monos;
  for (std::size_t k = 0; k < basis.size(); ++k) monos.emplace_back(basis.monomial(k));
  Matrix g = moment_matrix(points, monos, monos);
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = i + 1; j < g.cols(); ++j) g(i, j) = g(j, i) = 0.5 * (g(i, j) + g(j, i));
  return g;
}

Matrix gram_matrix(const Model& model, int n, const DomainSampler& sampler) {
  if (n < 0) throw parameter_error("degree must be non-negative");
  return gram_matrix(sample_domain(model, sampler), model.dim(), n);
}

SymmetryDefect symmetry_defect(const DiffusionOperator& op, const PointSet& points, int n) {
  MonomialBasis basis(op.dim(), n);
  std::vector<NumericPolynomial> monos, images;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    Polynomial m = basis.monomial(k);
    monos.emplace_back(m);
    images.emplace_back(apply_L(op, m));
  }
  Matrix a = moment_matrix(points, monos, images);
  SymmetryDefect out;
  for (std::size_t k = 0; k < basis.size(); ++k)
    for (std::size_t l = k + 1; l < basis.size(); ++l) {
      double scale = std::max({std::abs(a(k, l)), std::abs(a(l, k)), 1.0});
      double dft = std::abs(a(k, l) - a(l, k)) / scale;
      if (dft > out.defect) {
        out.defect = dft;
        out.worst_k = k;
        out.worst_l = l;
      }
    }
  return out;
}

SymmetryDefect symmetry_defect(const Model& model, int n, const DomainSampler& sampler) {
  if (n < 0) throw parameter_error("degree must be non-negative");
  return symmetry_defect(model.op(), sample_domain(model, sampler), n);
}

// ---- CSV ----

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t end = line.find(sep, start);
    out.emplace_back(line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (end == std::string_view::npos) return out;
    start = end + 1;
  }
}

std::vector<std::string> lines(std::string_view text) {
  std::vector<std::string> out;
  for (auto& l : split(text, '\n')) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
    if (!l.empty()) out.push_back(l);
  }
  return out;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw parse_error("malformed number '" + s + "' in CSV");
  return v;
}

}  // namespace

std::string points_csv(const PointSet& ps) {
  std::ostringstream os;
  auto names = variable_names(ps.dim);
  for (const auto& n : names) os << n << ',';
  os << "weight,density\n";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (int k = 0; k < ps.dim; ++k) os << fmt(ps.point(i)[k]) << ',';
    os << fmt(ps.weights[i]) << ',' << fmt(ps.density[i]) << '\n';
  }
  return os.str();
}

PointSet parse_points_csv(std::string_view text) {
  auto ls = lines(text);
  if (ls.empty()) throw parse_error("empty points CSV");
  auto header = split(ls[0], ',');
  if (header.size() < 3 || header[header.size() - 2] != "weight" || header.back() != "density")
    throw parse_error("points CSV header must end with weight,density");
  PointSet ps;
  ps.dim = static_cast<int>(header.size()) - 2;
  for (std::size_t r = 1; r < ls.size(); ++r) {
    auto cells = split(ls[r], ',');
    if (cells.size() != header.size()) throw parse_error("points CSV row " + std::to_string(r) + " has the wrong width");
    for (int k = 0; k < ps.dim; ++k) ps.coords.push_back(parse_double(cells[k]));
    ps.weights.push_back(parse_double(cells[ps.dim]));
    ps.density.push_back(parse_double(cells[ps.dim + 1]));
  }
  return ps;
}

std::string matrix_csv(const Matrix& m) {
  std::ostringstream os;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << fmt(m(i, j));
    os << '\n';
  }
  return os.str();
}

Matrix parse_matrix_csv(std::string_view text) {
  auto ls = lines(text);
  if (ls.empty()) return Matrix();
  std::size_t cols = split(ls[0], ',').size();
  Matrix m(ls.size(), cols);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    auto cells = split(ls[i], ',');
    if (cells.size() != cols) throw parse_error("ragged matrix CSV");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = parse_double(cells[j]);
  }
  return m;
}

}  // namespace dop
