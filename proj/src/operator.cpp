#include "dop/operator.hpp"

#include <cmath>

#include "dop/error.hpp"

namespace dop {

CoMetric::CoMetric(int dim) : dim_(dim), a_(static_cast<std::size_t>(dim * dim), Polynomial(dim)) {
  if (dim < 1) throw dimension_error("cometric dimension must be positive");
}

CoMetric::CoMetric(const std::vector<std::vector<Polynomial>>& entries)
    : CoMetric(static_cast<int>(entries.size())) {
  for (int i = 0; i < dim_; ++i) {
    if (static_cast<int>(entries[i].size()) != dim_) throw dimension_error("cometric must be square");
    for (int j = 0; j < dim_; ++j) {
      if (entries[i][j].dim() != dim_) throw dimension_error("cometric entry dimension mismatch");
      if (entries[i][j] != entries[j][i]) throw inconsistency_error("cometric is not symmetric");
      if (entries[i][j].total_degree() > 2) throw inconsistency_error("cometric entry of degree > 2");
      a_[i * dim_ + j] = entries[i][j];
    }
  }
}

void CoMetric::set(int i, int j, const Polynomial& p) {
  if (p.dim() != dim_) throw dimension_error("cometric entry dimension mismatch");
  if (p.total_degree() > 2) throw inconsistency_error("cometric entry of degree > 2");
  a_[i * dim_ + j] = p;
  a_[j * dim_ + i] = p;
}

namespace {

Polynomial det_rec(const std::vector<Polynomial>& m, int n, int dim) {
  if (n == 1) return m[0];
  if (n == 2) return m[0] * m[3] - m[1] * m[2];
  Polynomial sum(dim);
  for (int c = 0; c < n; ++c) {
    if (m[c].is_zero()) continue;
    std::vector<Polynomial> minor;
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (j != c) minor.push_back(m[i * n + j]);
    Polynomial t = m[c] * det_rec(minor, n - 1, dim);
    if (c % 2) sum -= t;
    else sum += t;
  }
  return sum;
}

}  // namespace

Polynomial CoMetric::leading_minor(int k) const {
  if (k < 1 || k > dim_) throw dimension_error("minor size out of range");
  std::vector<Polynomial> m;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) m.push_back((*this)(i, j));
  return det_rec(m, k, dim_);
}

Polynomial CoMetric::determinant() const { return leading_minor(dim_); }

std::vector<std::vector<Rational>> CoMetric::eval(const std::vector<Rational>& point) const {
  std::vector<std::vector<Rational>> out(dim_, std::vector<Rational>(dim_));
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) out[i][j] = out[j][i] = (*this)(i, j).eval(point);
  return out;
}

CoMetric CoMetric::scaled(const Rational& c) const {
  CoMetric r(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) r.set(i, j, (*this)(i, j) * c);
  return r;
}

CoMetric operator+(const CoMetric& a, const CoMetric& b) {
  if (a.dim() != b.dim()) throw dimension_error("cometric dimension mismatch");
  CoMetric r(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i; j < a.dim(); ++j) r.set(i, j, a(i, j) + b(i, j));
  return r;
}

double MeasureSpec::log_density(const double* x) const {
  double s = 0.0;
  for (const auto& f : factors) {
    if (sgn(f.exponent) == 0) continue;
    s += f.exponent.get_d() * std::log(std::abs(f.factor.eval(x)));
  }
  if (exp_poly) s += exp_poly->eval(x);
  for (const auto& t : arctan_terms) s += t.coefficient * std::atan(t.numerator.eval(x) / t.denominator.eval(x));
  return s;
}

double MeasureSpec::density(const double* x) const { return std::exp(log_density(x)); }

DiffusionOperator::DiffusionOperator(CoMetric g, std::vector<Polynomial> drift, std::optional<MeasureSpec> measure)
    : g_(std::move(g)), b_(std::move(drift)), measure_(std::move(measure)) {
  if (static_cast<int>(b_.size()) != g_.dim()) throw dimension_error("drift length must equal dimension");
  for (const auto& b : b_) {
    if (b.dim() != g_.dim()) throw dimension_error("drift dimension mismatch");
    if (b.total_degree() > 1) throw inconsistency_error("drift component of degree > 1: " + b.str());
  }
}

DiffusionOperator DiffusionOperator::unchecked(CoMetric g, std::vector<Polynomial> drift) {
  DiffusionOperator op;
  op.g_ = std::move(g);
  op.b_ = std::move(drift);
  return op;
}

std::vector<Polynomial> drift_from_measure(const CoMetric& g, const MeasureSpec& rho,
                                           const std::vector<std::vector<Polynomial>>* known_s) {
  const int d = g.dim();
  if (!rho.arctan_terms.empty())
    throw parameter_error("arctan measure parts are evaluation-only and cannot enter the exact drift");
  if (known_s && known_s->size() != rho.factors.size())
    throw dimension_error("known S data must match the measure factors");
  std::vector<Polynomial> b(d, Polynomial(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) b[i] += g(i, j).derivative(j);
  for (std::size_t k = 0; k < rho.factors.size(); ++k) {
    const auto& [f, a] = rho.factors[k];
    if (sgn(a) == 0) continue;
    if (f.dim() != d) throw dimension_error("measure factor dimension mismatch");
    for (int i = 0; i < d; ++i) {
      Polynomial s(d);
      if (known_s) {
        s = (*known_s)[k][i];
      } else {
        Polynomial num(d);
        for (int j = 0; j < d; ++j) num += g(i, j) * f.derivative(j);
        auto q = exact_quotient(num, f);
        if (!q)
          throw inadmissible_measure("factor " + f.str() + " does not satisfy the boundary equation along axis " +
                                     std::to_string(i) + ": its log-gradient is not polynomial");
        s = std::move(*q);
      }
      if (s.total_degree() > 1)
        throw inadmissible_measure("factor " + f.str() + " has S of degree > 1 along axis " + std::to_string(i));
      b[i] += s * a;
    }
  }
  if (rho.exp_poly) {
    if (rho.exp_poly->dim() != d) throw dimension_error("exponential part dimension mismatch");
    for (int i = 0; i < d; ++i) {
      Polynomial t(d);
      for (int j = 0; j < d; ++j) t += g(i, j) * rho.exp_poly->derivative(j);
      if (t.total_degree() > 1)
        throw inadmissible_measure("exponential part yields a drift term of degree > 1 along axis " +
                                   std::to_string(i) + ": " + t.str());
      b[i] += t;
    }
  }
  for (int i = 0; i < d; ++i)
    if (b[i].total_degree() > 1)
      throw inadmissible_measure("drift component " + std::to_string(i) + " has degree > 1: " + b[i].str());
  return b;
}

DiffusionOperator make_operator(const CoMetric& g, const MeasureSpec& rho) {
  return DiffusionOperator(g, drift_from_measure(g, rho), rho);
}

Polynomial apply_L(const DiffusionOperator& op, const Polynomial& f) {
  const int d = op.dim();
  if (f.dim() != d) throw dimension_error("operator/polynomial dimension mismatch");
  Polynomial r(d);
  std::vector<Polynomial> grad;
  for (int i = 0; i < d; ++i) grad.push_back(f.derivative(i));
  for (int i = 0; i < d; ++i) {
    if (grad[i].is_zero()) continue;
    r += op.drift()[i] * grad[i];
    for (int j = 0; j < d; ++j) {
      const Polynomial& gij = op.cometric()(i, j);
      if (gij.is_zero()) continue;
      r += gij * grad[i].derivative(j);
    }
  }
  return r;
}

Polynomial gamma(const CoMetric& g, const Polynomial& f, const Polynomial& h) {
  const int d = g.dim();
  if (f.dim() != d || h.dim() != d) throw dimension_error("gamma dimension mismatch");
  Polynomial r(d);
  for (int i = 0; i < d; ++i) {
    Polynomial fi = f.derivative(i);
    if (fi.is_zero()) continue;
    for (int j = 0; j < d; ++j) {
      if (g(i, j).is_zero()) continue;
      r += g(i, j) * fi * h.derivative(j);
    }
  }
  return r;
}

Polynomial gamma_from_L(const DiffusionOperator& op, const Polynomial& f, const Polynomial& h) {
  Polynomial t = apply_L(op, f * h) - f * apply_L(op, h) - h * apply_L(op, f);
  return t * Rational(1, 2);
}

GradedOperatorMatrix::GradedOperatorMatrix(MonomialBasis basis, RationalMatrix entries)
    : basis_(std::move(basis)), entries_(std::move(entries)) {}

RationalMatrix GradedOperatorMatrix::diagonal_block(int k) const {
  std::size_t s = basis_.block_start(k), e = basis_.block_start(k + 1);
  return entries_.submatrix(s, s, e - s, e - s);
}

RationalMatrix GradedOperatorMatrix::leading_block(int k) const {
  std::size_t e = basis_.block_start(k + 1);
  return entries_.submatrix(0, 0, e, e);
}

bool GradedOperatorMatrix::is_block_upper_triangular() const {
  for (std::size_t c = 0; c < basis_.size(); ++c) {
    int dc = exponent_degree(basis_[c]);
    for (std::size_t r = basis_.block_start(dc + 1); r < basis_.size(); ++r)
      if (sgn(entries_(r, c)) != 0) return false;
  }
  return true;
}

GradedOperatorMatrix graded_matrix(const DiffusionOperator& op, int n) {
  if (n < 0) throw dimension_error("degree must be non-negative");
  MonomialBasis basis(op.dim(), n);
  RationalMatrix m(basis.size(), basis.size());
  for (std::size_t c = 0; c < basis.size(); ++c) {
    Polynomial lm = apply_L(op, basis.monomial(c));
    if (lm.total_degree() > exponent_degree(basis[c]))
      throw inconsistency_error("operator raises the degree of monomial " + basis.monomial(c).str());
    for (const auto& [e, v] : lm.terms()) m(basis.index_of(e), c) = v;
  }
  GradedOperatorMatrix g(std::move(basis), std::move(m));
  if (!g.is_block_upper_triangular()) throw inconsistency_error("graded matrix is not block upper triangular");
  return g;
}

DiffusionOperator product_operator(const DiffusionOperator& a, const DiffusionOperator& b) {
  const int d1 = a.dim(), d2 = b.dim(), d = d1 + d2;
  CoMetric g(d);
  for (int i = 0; i < d1; ++i)
    for (int j = i; j < d1; ++j) g.set(i, j, a.cometric()(i, j).embed(d, 0));
  for (int i = 0; i < d2; ++i)
    for (int j = i; j < d2; ++j) g.set(d1 + i, d1 + j, b.cometric()(i, j).embed(d, d1));
  std::vector<Polynomial> drift;
  for (const auto& p : a.drift()) drift.push_back(p.embed(d, 0));
  for (const auto& p : b.drift()) drift.push_back(p.embed(d, d1));
  return DiffusionOperator(std::move(g), std::move(drift));
}

DiffusionOperator operator_sum(const DiffusionOperator& a, const DiffusionOperator& b) {
  if (a.dim() != b.dim()) throw dimension_error("operator dimension mismatch");
  std::vector<Polynomial> drift;
  for (int i = 0; i < a.dim(); ++i) drift.push_back(a.drift()[i] + b.drift()[i]);
  return DiffusionOperator(a.cometric() + b.cometric(), std::move(drift));
}

DiffusionOperator vector_field_square(const std::vector<Polynomial>& v) {
  const int d = static_cast<int>(v.size());
  CoMetric g(d);
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) g.set(i, j, v[i] * v[j]);
  std::vector<Polynomial> drift(d, Polynomial(d));
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) drift[i] += v[j] * v[i].derivative(j);
  return DiffusionOperator(std::move(g), std::move(drift));
}

}  // namespace dop
