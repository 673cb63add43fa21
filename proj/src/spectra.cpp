#include "dop/spectra.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "dop/error.hpp"

namespace dop {

int DegreeSpectrum::count() const {
  int c = 0;
  for (const auto& v : values) c += v.multiplicity;
  return c;
}

bool SpectrumResult::all_exact() const {
  for (const auto& d : degrees)
    for (const auto& v : d.values)
      if (!v.exact) return false;
  return true;
}

namespace {

// Univariate polynomial over Q, lowest degree first, no trailing zeros.
using UPoly = std::vector<Rational>;

void trim(UPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

UPoly deriv(const UPoly& p) {
  UPoly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<long>(k));
  trim(d);
  return d;
}

UPoly sub(UPoly a, const UPoly& b) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t k = 0; k < b.size(); ++k) a[k] -= b[k];
  trim(a);
  return a;
}

// Quotient and remainder; b must be non-zero.
std::pair<UPoly, UPoly> divmod(UPoly a, const UPoly& b) {
  trim(a);
  if (a.size() < b.size()) return {UPoly{}, a};
  UPoly q(a.size() - b.size() + 1);
  for (std::size_t k = q.size(); k-- > 0;) {
    Rational c = a[k + b.size() - 1] / b.back();
    q[k] = c;
    if (sgn(c) == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) a[k + j] -= c * b[j];
  }
  trim(a);
  trim(q);
  return {q, a};
}

UPoly monic(UPoly p) {
  trim(p);
  if (p.empty()) return p;
  Rational lead = p.back();
  for (auto& c : p) c /= lead;
  return p;
}

UPoly gcd(UPoly a, UPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

// Yun: f = prod a_i^i with a_i square-free and pairwise coprime.
std::vector<std::pair<UPoly, int>> square_free(const UPoly& f) {
  std::vector<std::pair<UPoly, int>> out;
  UPoly fp = deriv(f);
  UPoly a0 = gcd(f, fp);
  UPoly b = divmod(f, a0).first;
  UPoly c = divmod(fp, a0).first;
  UPoly d = sub(c, deriv(b));
  for (int i = 1; b.size() > 1; ++i) {
    UPoly a = gcd(b, d);
    b = divmod(b, a).first;
    c = divmod(d, a).first;
    d = sub(c, deriv(b));
    if (a.size() > 1) out.emplace_back(monic(a), i);
  }
  return out;
}

Rational eval(const UPoly& p, const Rational& x) {
  Rational acc = 0;
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
  return acc;
}

std::vector<std::complex<double>> numeric_roots(const UPoly& p) {
  const std::size_t m = p.size() - 1;
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t i = 1; i < m; ++i) c(i, i - 1) = 1.0;
  for (std::size_t i = 0; i < m; ++i) c(i, m - 1) = -to_double(p[i] / p.back());
  Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
  std::vector<std::complex<double>> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()[i]);
  return out;
}

void add_entry(std::vector<EigenvalueEntry>& out, const Rational& v, int mult) {
  for (auto& e : out)
    if (e.exact && *e.exact == v) {
      e.multiplicity += mult;
      return;
    }
  EigenvalueEntry e;
  e.exact = v;
  e.value = to_double(v);
  e.multiplicity = mult;
  e.source = "exact-graded";
  out.push_back(e);
}

void sort_desc(std::vector<EigenvalueEntry>& v) {
  std::stable_sort(v.begin(), v.end(), [](const EigenvalueEntry& a, const EigenvalueEntry& b) {
    if (a.value != b.value) return a.value > b.value;
    return a.imag > b.imag;
  });
}

}  // namespace

std::vector<EigenvalueEntry> block_eigenvalues(const RationalMatrix& block) {
  const std::size_t n = block.rows();
  if (block.cols() != n) throw dimension_error("eigenvalues need a square block");
  std::vector<EigenvalueEntry> out;
  bool upper = true, lower = true;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i > j && sgn(block(i, j)) != 0) upper = false;
      if (i < j && sgn(block(i, j)) != 0) lower = false;
    }
  if (upper || lower) {
    for (std::size_t i = 0; i < n; ++i) add_entry(out, block(i, i), 1);
    sort_desc(out);
    return out;
  }
  // D * block is an integer matrix, so its monic characteristic polynomial has
  // integer coefficients and every rational root is an integer.
  Integer den = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), block(i, j).get_den_mpz_t());
  RationalMatrix c(n, n);
  Eigen::MatrixXd cd(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      c(i, j) = block(i, j) * den;
      cd(i, j) = to_double(c(i, j));
    }
  Eigen::EigenSolver<Eigen::MatrixXd> es(cd, false);
  std::vector<double> guesses;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) guesses.push_back(es.eigenvalues()[i].real());
  const Rational dq(den);
  for (auto [factor, mult] : square_free(characteristic_polynomial(c))) {
    UPoly rem = factor;
    for (double g : guesses) {
      if (rem.size() <= 1) break;
      if (!std::isfinite(g) || std::abs(g) > 1e15) continue;
      long base = std::lround(g);
      for (long cand : {base, base - 1, base + 1}) {
        if (rem.size() <= 1) break;
        Rational r(cand);
        if (sgn(eval(rem, r)) != 0) continue;
        add_entry(out, r / dq, mult);
        rem = divmod(rem, UPoly{-r, Rational(1)}).first;
      }
    }
    if (rem.size() > 1) {
      for (auto z : numeric_roots(rem)) {
        EigenvalueEntry e;
        e.value = z.real() / to_double(dq);
        e.imag = std::abs(z.imag()) > 1e-9 * (1.0 + std::abs(z.real())) ? z.imag() / to_double(dq) : 0.0;
        e.multiplicity = mult;
        e.source = "numeric-graded";
        out.push_back(e);
      }
    }
  }
  sort_desc(out);
  return out;
}

SpectrumResult graded_eigenvalues(const GradedOperatorMatrix& m) {
  SpectrumResult s;
  s.dim = m.basis().dim();
  for (int k = 0; k <= m.max_degree(); ++k) {
    DegreeSpectrum d;
    d.degree = k;
    d.values = block_eigenvalues(m.diagonal_block(k));
    s.degrees.push_back(std::move(d));
  }
  return s;
}

SpectrumResult graded_eigenvalues(const DiffusionOperator& op, int n) {
  if (n < 0) throw parameter_error("degree must be non-negative");
  return graded_eigenvalues(graded_matrix(op, n));
}

nlohmann::json spectrum_to_json(const SpectrumResult& s) {
  nlohmann::json j;
  j["dim"] = s.dim;
  j["degrees"] = nlohmann::json::array();
  for (const auto& d : s.degrees) {
    nlohmann::json dj;
    dj["n"] = d.degree;
    dj["eigenvalues"] = nlohmann::json::array();
    dj["multiplicities"] = nlohmann::json::array();
    dj["sources"] = nlohmann::json::array();
    for (const auto& v : d.values) {
      if (v.exact) dj["eigenvalues"].push_back(to_string(*v.exact));
      else dj["eigenvalues"].push_back(v.value);
      dj["multiplicities"].push_back(v.multiplicity);
      dj["sources"].push_back(v.source);
      if (v.imag != 0.0) dj["imag"][std::to_string(dj["eigenvalues"].size() - 1)] = v.imag;
    }
    j["degrees"].push_back(dj);
  }
  return j;
}

SpectrumResult spectrum_from_json(const nlohmann::json& j) {
  SpectrumResult s;
  try {
    s.dim = j.at("dim").get<int>();
    for (const auto& dj : j.at("degrees")) {
      DegreeSpectrum d;
      d.degree = dj.at("n").get<int>();
      const auto& ev = dj.at("eigenvalues");
      for (std::size_t i = 0; i < ev.size(); ++i) {
        EigenvalueEntry e;
        if (ev[i].is_string()) {
          e.exact = parse_rational(ev[i].get<std::string>());
          e.value = to_double(*e.exact);
        } else {
          e.value = ev[i].get<double>();
        }
        e.multiplicity = dj.at("multiplicities").at(i).get<int>();
        e.source = dj.at("sources").at(i).get<std::string>();
        if (dj.contains("imag") && dj["imag"].contains(std::to_string(i))) e.imag = dj["imag"][std::to_string(i)].get<double>();
        d.values.push_back(e);
      }
      s.degrees.push_back(std::move(d));
    }
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("spectrum JSON: ") + e.what());
  }
  return s;
}

// ---- eigenbasis ----

namespace {

Matrix to_matrix(const RationalMatrix& r) {
  Matrix m(r.rows(), r.cols());
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j) m(i, j) = to_double(r(i, j));
  return m;
}

double bdot(const Matrix& b, const std::vector<double>& u, const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0) continue;
    double t = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) t += b(i, j) * v[j];
    s += u[i] * t;
  }
  return s;
}

bool same_value(const EigenVector& v, const EigenvalueEntry& e) {
  if (v.exact && e.exact) return *v.exact == *e.exact;
  return same_cluster(v.eigenvalue, e.value);
}

// Affine frame u = (x - c) / h with c the mean and h the spread of mu per axis.
// Moments are taken in u, where monomials are far better conditioned than in x.
struct Frame {
  std::vector<Rational> c, h;
  PointSet points;
  Matrix to_u;  // coordinates over u-monomials = to_u * coordinates over x-monomials
};

Rational dyadic(double v, bool up) {
  const double s = 64.0;
  return rational_from_double((up ? std::ceil(v * s) : std::round(v * s)) / s);
}

Frame make_frame(const PointSet& pts, const MonomialBasis& basis) {
  const int d = pts.dim;
  Frame f;
  // Centre and spread of mu along each axis.
  std::vector<double> s0(1, 0.0), s1(d, 0.0), s2(d, 0.0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double w = pts.weights[i] * pts.density[i];
    s0[0] += w;
    for (int k = 0; k < d; ++k) {
      s1[k] += w * pts.point(i)[k];
      s2[k] += w * pts.point(i)[k] * pts.point(i)[k];
    }
  }
  for (int k = 0; k < d; ++k) {
    double mean = s0[0] > 0 ? s1[k] / s0[0] : 0.0;
    double var = s0[0] > 0 ? std::max(0.0, s2[k] / s0[0] - mean * mean) : 1.0;
    f.c.push_back(dyadic(mean, false));
    Rational h = dyadic(std::sqrt(var), true);
    f.h.push_back(h < ratio(1, 64) ? ratio(1, 64) : h);
  }
  f.points = pts;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (int k = 0; k < d; ++k)
      f.points.coords[i * d + k] = (pts.point(i)[k] - to_double(f.c[k])) / to_double(f.h[k]);
  // x_k = c_k + h_k u_k, substituted into every x-monomial.
  std::vector<Polynomial> sub;
  for (int k = 0; k < d; ++k) sub.push_back(Polynomial(d, f.c[k]) + f.h[k] * Polynomial::variable(d, k));
  const std::size_t nb = basis.size();
  f.to_u = Matrix(nb, nb);
  for (std::size_t k = 0; k < nb; ++k) {
    auto coords = basis.coordinates(basis.monomial(k).compose(sub));
    for (std::size_t r = 0; r < nb; ++r) f.to_u(r, k) = to_double(coords[r]);
  }
  return f;
}

// Gamma form over u-monomials: g^{ij}(x(u)) / (h_i h_j) d_{u_i} m d_{u_j} m'.
Matrix frame_gamma_form(const CoMetric& g, const Frame& f, int n) {
  const int d = g.dim();
  MonomialBasis basis(d, n);
  const std::size_t nb = basis.size();
  std::vector<Polynomial> sub;
  for (int k = 0; k < d; ++k) sub.push_back(Polynomial(d, f.c[k]) + f.h[k] * Polynomial::variable(d, k));
  Matrix a(nb, nb);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (g(i, j).is_zero()) continue;
      Polynomial gij = g(i, j).compose(sub) * (Rational(1) / (f.h[i] * f.h[j]));
      std::vector<NumericPolynomial> u, v;
      for (std::size_t k = 0; k < nb; ++k) {
        Polynomial m = basis.monomial(k);
        u.emplace_back(gij * m.derivative(i));
        v.emplace_back(m.derivative(j));
      }
      Matrix part = moment_matrix(f.points, u, v);
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) a(k, l) += part(k, l);
    }
  for (std::size_t k = 0; k < nb; ++k)
    for (std::size_t l = k + 1; l < nb; ++l) a(k, l) = a(l, k) = 0.5 * (a(k, l) + a(l, k));
  return a;
}

Matrix leading(const Matrix& m, std::size_t n) {
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = m(i, j);
  return out;
}

std::vector<double> pencil(const Matrix& a, const Matrix& b) {
  SymmetricEigenResult e;
  try {
    e = generalized_sym_eig(a, b);
  } catch (const numeric_error& err) {
    throw numeric_error(std::string("Gram matrix not positive definite at this quadrature resolution: ") + err.what());
  }
  std::vector<double> out;
  for (double m : e.eigenvalues) out.push_back(-m);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Matrix gamma_form(const DiffusionOperator& op, const PointSet& points, int n) {
  const int d = op.dim();
  MonomialBasis basis(d, n);
  const std::size_t nb = basis.size();
  Matrix a(nb, nb);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Polynomial& gij = op.cometric()(i, j);
      if (gij.is_zero()) continue;
      std::vector<NumericPolynomial> u, v;
      for (std::size_t k = 0; k < nb; ++k) {
        Polynomial m = basis.monomial(k);
        u.emplace_back(gij * m.derivative(i));
        v.emplace_back(m.derivative(j));
      }
      Matrix part = moment_matrix(points, u, v);
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) a(k, l) += part(k, l);
    }
  for (std::size_t k = 0; k < nb; ++k)
    for (std::size_t l = k + 1; l < nb; ++l) a(k, l) = a(l, k) = 0.5 * (a(k, l) + a(l, k));
  return a;
}

std::vector<double> generalized_spectrum(const DiffusionOperator& op, const PointSet& points, int n) {
  MonomialBasis basis(op.dim(), n);
  Frame f = make_frame(points, basis);
  auto out = pencil(frame_gamma_form(op.cometric(), f, n), gram_matrix(f.points, op.dim(), n));
  double top = 1.0;
  for (double m : out) top = std::max(top, std::abs(m));
  for (double m : out)
    if (m > 1e-8 * top) throw inconsistency_error("Gamma form has a negative pencil eigenvalue " + std::to_string(-m));
  return out;
}

std::vector<CrossCheck> cross_validate(const DiffusionOperator& op, const PointSet& points, int n, double tol) {
  SpectrumResult exact = graded_eigenvalues(op, n);
  MonomialBasis basis(op.dim(), n);
  Frame f = make_frame(points, basis);
  Matrix a = frame_gamma_form(op.cometric(), f, n);
  Matrix b = gram_matrix(f.points, op.dim(), n);
  std::vector<CrossCheck> out;
  std::vector<double> expected;
  for (int k = 0; k <= n; ++k) {
    for (const auto& v : exact.degrees[k].values)
      for (int r = 0; r < v.multiplicity; ++r) expected.push_back(v.value);
    std::sort(expected.begin(), expected.end());
    // u-monomials of degree <= k span P_k, so the leading block is the pencil on P_k.
    const std::size_t nk = basis.block_start(k + 1);
    auto got = pencil(leading(a, nk), leading(b, nk));
    CrossCheck c;
    c.degree = k;
    for (std::size_t i = 0; i < got.size(); ++i)
      c.max_relative = std::max(c.max_relative, std::abs(got[i] - expected[i]) / std::max(1.0, std::abs(expected[i])));
    c.ok = c.max_relative <= tol;
    out.push_back(c);
  }
  return out;
}

EigenBasis eigenbasis(const DiffusionOperator& op, const PointSet& points, int n) {
  if (n < 0) throw parameter_error("degree must be non-negative");
  const int d = op.dim();
  GradedOperatorMatrix gm = graded_matrix(op, n);
  const MonomialBasis& basis = gm.basis();
  const std::size_t nb = basis.size();
  Frame f = make_frame(points, basis);
  Matrix b = gram_matrix(f.points, d, n);
  try {
    cholesky(b);
  } catch (const numeric_error&) {
    throw numeric_error("Gram matrix not positive definite at this quadrature resolution");
  }
  std::vector<NumericPolynomial> monos, xmonos;
  for (std::size_t k = 0; k < nb; ++k) {
    monos.emplace_back(basis.monomial(k));
    xmonos.emplace_back(Polynomial::variable(d, 0) * basis.monomial(k));
  }
  // <x_1 P, Q> = c_1 <P, Q> + h_1 <u_1 P, Q>; inside an orthonormal eigenspace
  // both give the same eigenvectors in the same order since h_1 > 0.
  Matrix u1 = moment_matrix(f.points, xmonos, monos);
  Matrix mfull = to_matrix(gm.entries());
  SpectrumResult spec = graded_eigenvalues(gm);
  auto to_u = [&](const std::vector<double>& v) {
    std::vector<double> w(nb, 0.0);
    for (std::size_t r = 0; r < nb; ++r)
      for (std::size_t c = 0; c <= r && c < nb; ++c) w[r] += f.to_u(r, c) * v[c];
    for (std::size_t r = 0; r < nb; ++r)
      for (std::size_t c = r + 1; c < nb; ++c) w[r] += f.to_u(r, c) * v[c];
    return w;
  };

  EigenBasis out;
  out.dim = d;
  out.max_degree = n;
  std::vector<std::vector<double>> framed;  // u-coordinates of out.vectors
  for (int k = 0; k <= n; ++k) {
    const std::size_t nk = basis.block_start(k + 1);
    const std::size_t lo = basis.block_start(k);
    RationalMatrix mk = gm.leading_block(k);
    for (const auto& ev : spec.degrees[k].values) {
      const int mult = ev.multiplicity;
      std::vector<std::vector<double>> cand;
      if (ev.exact) {
        RationalMatrix shifted = mk;
        for (std::size_t i = 0; i < nk; ++i) shifted(i, i) -= *ev.exact;
        for (const auto& v : rational_nullspace(shifted)) {
          std::vector<double> w(nb, 0.0);
          for (std::size_t i = 0; i < nk; ++i) w[i] = to_double(v[i]);
          cand.push_back(std::move(w));
        }
      } else {
        Matrix md = to_matrix(mk);
        for (std::size_t i = 0; i < nk; ++i) md(i, i) -= ev.value;
        auto e = sym_eig(md.transpose() * md);
        std::size_t prev = 0;
        for (const auto& v : out.vectors)
          if (same_value(v, ev)) ++prev;
        for (std::size_t c = 0; c < std::min(nk, prev + mult); ++c) {
          std::vector<double> w(nb, 0.0);
          for (std::size_t i = 0; i < nk; ++i) w[i] = e.eigenvectors(i, c);
          cand.push_back(std::move(w));
        }
      }
      std::vector<std::vector<double>> cand_u;
      for (const auto& v : cand) cand_u.push_back(to_u(v));
      // Remove components along lower-degree eigenvectors of the same eigenvalue.
      for (std::size_t p = 0; p < out.vectors.size(); ++p) {
        if (!same_value(out.vectors[p], ev)) continue;
        for (std::size_t c = 0; c < cand.size(); ++c) {
          double t = bdot(b, framed[p], cand_u[c]);
          for (std::size_t i = 0; i < nb; ++i) {
            cand[c][i] -= t * out.vectors[p].coeffs[i];
            cand_u[c][i] -= t * framed[p][i];
          }
        }
      }
      const std::size_t r = cand.size();
      if (static_cast<int>(r) < mult)
        throw inconsistency_error("eigenspace of dimension " + std::to_string(r) + " below multiplicity " +
                                  std::to_string(mult) + " at degree " + std::to_string(k));
      Matrix g(r, r);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i; j < r; ++j) g(i, j) = g(j, i) = bdot(b, cand_u[i], cand_u[j]);
      auto ge = sym_eig(g);
      std::vector<std::vector<double>> v(mult, std::vector<double>(nb, 0.0)), w = v;
      for (int c = 0; c < mult; ++c) {
        const std::size_t col = r - mult + c;
        const double s = std::sqrt(std::max(ge.eigenvalues[col], 1e-300));
        for (std::size_t i = 0; i < r; ++i)
          for (std::size_t t = 0; t < nb; ++t) {
            v[c][t] += ge.eigenvectors(i, col) * cand[i][t] / s;
            w[c][t] += ge.eigenvectors(i, col) * cand_u[i][t] / s;
          }
      }
      // Canonical rotation: diagonalise <x_1 P, Q> inside the eigenspace.
      if (mult > 1) {
        Matrix cm(mult, mult);
        for (int i = 0; i < mult; ++i)
          for (int j = i; j < mult; ++j) cm(i, j) = cm(j, i) = 0.5 * (bdot(u1, w[i], w[j]) + bdot(u1, w[j], w[i]));
        auto ce = sym_eig(cm);
        std::vector<std::vector<double>> rv(mult, std::vector<double>(nb, 0.0)), rw = rv;
        for (int c = 0; c < mult; ++c)
          for (int i = 0; i < mult; ++i)
            for (std::size_t t = 0; t < nb; ++t) {
              rv[c][t] += ce.eigenvectors(i, c) * v[i][t];
              rw[c][t] += ce.eigenvectors(i, c) * w[i][t];
            }
        v = std::move(rv);
        w = std::move(rw);
      }
      for (int c = 0; c < mult; ++c) {
        std::size_t best = lo;
        for (std::size_t t = lo; t < nk; ++t)
          if (std::abs(v[c][t]) > std::abs(v[c][best]) * (1 + 1e-12)) best = t;
        if (v[c][best] < 0) {
          for (auto& x : v[c]) x = -x;
          for (auto& x : w[c]) x = -x;
        }
        EigenVector ev_out;
        ev_out.degree = k;
        ev_out.eigenvalue = ev.value;
        ev_out.exact = ev.exact;
        ev_out.coeffs = std::move(v[c]);
        out.vectors.push_back(std::move(ev_out));
        framed.push_back(std::move(w[c]));
      }
    }
  }
  for (std::size_t i = 0; i < out.vectors.size(); ++i) {
    for (std::size_t j = i; j < out.vectors.size(); ++j) {
      double g = bdot(b, framed[i], framed[j]) - (i == j ? 1.0 : 0.0);
      out.gram_deviation = std::max(out.gram_deviation, std::abs(g));
    }
    const auto& vi = out.vectors[i].coeffs;
    double num = 0.0, den = 0.0;
    for (std::size_t r = 0; r < nb; ++r) {
      double s = -out.vectors[i].eigenvalue * vi[r];
      for (std::size_t c = 0; c < nb; ++c) s += mfull(r, c) * vi[c];
      num += s * s;
      den += vi[r] * vi[r];
    }
    out.max_residual = std::max(out.max_residual, std::sqrt(num / den));
  }
  return out;
}

EigenBasis eigenbasis(const Model& model, int n, const DomainSampler& sampler) {
  return eigenbasis(model.op(), sample_domain(model, sampler), n);
}

// ---- closed forms ----

std::vector<std::vector<int>> index_tuples(int m, int k) {
  std::vector<std::vector<int>> out;
  if (m == 1) return {{k}};
  for (int first = k; first >= 0; --first)
    for (auto rest : index_tuples(m - 1, k - first)) {
      rest.insert(rest.begin(), first);
      out.push_back(std::move(rest));
    }
  return out;
}

std::vector<ClosedFormCheck> compare_closed_form(const SpectrumResult& s, const ClosedForm& formula, int indices) {
  std::vector<ClosedFormCheck> out;
  for (const auto& d : s.degrees) {
    ClosedFormCheck c;
    c.degree = d.degree;
    for (const auto& t : index_tuples(indices, d.degree)) c.expected.push_back(formula(t));
    std::sort(c.expected.begin(), c.expected.end());
    std::vector<EigenvalueEntry> got;
    for (const auto& v : d.values)
      for (int r = 0; r < v.multiplicity; ++r) got.push_back(v);
    std::sort(got.begin(), got.end(), [](const EigenvalueEntry& a, const EigenvalueEntry& b) { return a.value < b.value; });
    if (got.size() != c.expected.size()) {
      c.match = false;
      c.max_discrepancy = std::numeric_limits<double>::infinity();
      out.push_back(c);
      continue;
    }
    // Exact entries are sorted by exact value; ties in double cannot reorder distinct rationals here
    // because both lists are compared entrywise after sorting by the exact key when available.
    bool all_exact = std::all_of(got.begin(), got.end(), [](const EigenvalueEntry& e) { return e.exact.has_value(); });
    if (all_exact)
      std::sort(got.begin(), got.end(), [](const EigenvalueEntry& a, const EigenvalueEntry& b) { return *a.exact < *b.exact; });
    c.match = true;
    for (std::size_t i = 0; i < got.size(); ++i) {
      double diff;
      if (all_exact) {
        diff = std::abs(to_double(*got[i].exact - c.expected[i]));
        if (*got[i].exact != c.expected[i]) c.match = false;
      } else {
        double e = to_double(c.expected[i]);
        diff = std::abs(got[i].value - e);
        if (diff > 1e-8 * std::max(1.0, std::abs(e))) c.match = false;
      }
      c.max_discrepancy = std::max(c.max_discrepancy, diff);
    }
    out.push_back(c);
  }
  return out;
}

std::vector<ClosedFormCheck> compare_closed_form(const Model& model, int n) {
  for (const auto& c : model.descriptor->claims) {
    if (c.kind != "spectrum") continue;
    std::vector<std::string> names;
    for (const auto& i : c.data.at("indices")) names.push_back(i.get<std::string>());
    for (const auto& nm : names)
      if (model.params.count(nm)) throw parameter_error("spectrum index '" + nm + "' collides with a parameter");
    const std::string formula = c.data.at("formula").get<std::string>();
    int top = std::min(n, c.data.value("max_degree", n));
    auto spec = graded_eigenvalues(model.op(), top);
    ParamMap base = model.params;
    return compare_closed_form(
        spec,
        [&](const std::vector<int>& t) {
          ParamMap pm = base;
          for (std::size_t i = 0; i < t.size(); ++i) pm[names[i]] = Rational(t[i]);
          return parse_constant(formula, pm);
        },
        static_cast<int>(names.size()));
  }
  throw parameter_error("model " + model.name + " carries no closed-form spectrum");
}

}  // namespace dop
