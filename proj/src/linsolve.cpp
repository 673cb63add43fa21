#include "dop/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dop/error.hpp"

namespace dop {

RationalMatrix::RationalMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), a_(rows * cols) {}

std::vector<Rational> RationalMatrix::apply(const std::vector<Rational>& v) const {
  if (v.size() != cols_) throw dimension_error("matrix-vector size mismatch");
  std::vector<Rational> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if (sgn((*this)(i, j)) != 0 && sgn(v[j]) != 0) out[i] += (*this)(i, j) * v[j];
  return out;
}

RationalMatrix RationalMatrix::submatrix(std::size_t r0, std::size_t c0, std::size_t nr,
                                         std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw dimension_error("submatrix out of range");
  RationalMatrix s(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) s(i, j) = (*this)(r0 + i, c0 + j);
  return s;
}

namespace {

// Integer row-echelon form by Bareiss elimination; returns pivot columns.
std::vector<std::size_t> bareiss_echelon(std::vector<std::vector<Integer>>& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  const std::size_t rows = m.size();
  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        Integer t = m[r][c] * m[i][j] - m[i][c] * m[r][j];
        mpz_divexact(m[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev = m[r][c];
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::vector<std::vector<Integer>> integer_rows(const RationalMatrix& a) {
  std::vector<std::vector<Integer>> m(a.rows(), std::vector<Integer>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Integer l = 1;
    for (std::size_t j = 0; j < a.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
    for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = a(i, j).get_num() * (l / a(i, j).get_den());
  }
  return m;
}

}  // namespace

std::vector<std::vector<Rational>> rational_nullspace(const RationalMatrix& a) {
  auto m = integer_rows(a);
  const std::size_t n = a.cols();
  auto pivots = bareiss_echelon(m, n);
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivots) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> x(n);
    x[f] = 1;
    for (std::size_t r = pivots.size(); r-- > 0;) {
      std::size_t c = pivots[r];
      Rational s = 0;
      for (std::size_t j = c + 1; j < n; ++j)
        if (m[r][j] != 0 && sgn(x[j]) != 0) s += Rational(m[r][j]) * x[j];
      x[c] = -s / Rational(m[r][c]);
    }
    basis.push_back(std::move(x));
  }
  for (const auto& x : basis)
    for (const auto& v : a.apply(x))
      if (sgn(v) != 0) throw inconsistency_error("nullspace vector fails A x = 0");
  return basis;
}

std::size_t rational_rank(const RationalMatrix& a) {
  auto m = integer_rows(a);
  return bareiss_echelon(m, a.cols()).size();
}

RrefResult rref(const RationalMatrix& a) {
  RationalMatrix m = a;
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (sgn(m(r, j)) != 0) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

namespace {

using UPoly = std::vector<Rational>;

void trim(UPoly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

void axpy(UPoly& y, const Rational& a, const UPoly& x) {
  if (y.size() < x.size()) y.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace

std::vector<Rational> characteristic_polynomial(const RationalMatrix& a) {
  if (a.rows() != a.cols()) throw dimension_error("characteristic polynomial needs a square matrix");
  const std::size_t n = a.rows();
  RationalMatrix h = a;
  // Similarity reduction to upper Hessenberg form.
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t p = j + 1;
    while (p < n && sgn(h(p, j)) == 0) ++p;
    if (p == n) continue;
    if (p != j + 1) {
      for (std::size_t k = 0; k < n; ++k) std::swap(h(p, k), h(j + 1, k));
      for (std::size_t k = 0; k < n; ++k) std::swap(h(k, p), h(k, j + 1));
    }
    for (std::size_t i = j + 2; i < n; ++i) {
      if (sgn(h(i, j)) == 0) continue;
      Rational u = h(i, j) / h(j + 1, j);
      for (std::size_t k = 0; k < n; ++k)
        if (sgn(h(j + 1, k)) != 0) h(i, k) -= u * h(j + 1, k);
      for (std::size_t k = 0; k < n; ++k)
        if (sgn(h(k, i)) != 0) h(k, j + 1) += u * h(k, i);
    }
  }
  // p_m = (x - h_mm) p_{m-1} - sum_{i<m} h_{im} (prod_{j=i+1}^{m} h_{j,j-1}) p_{i-1}, 1-based.
  auto H = [&](std::size_t i, std::size_t j) -> const Rational& { return h(i - 1, j - 1); };
  std::vector<UPoly> p(n + 1);
  p[0] = {Rational(1)};
  for (std::size_t m = 1; m <= n; ++m) {
    UPoly next(p[m - 1].size() + 1);
    for (std::size_t k = 0; k < p[m - 1].size(); ++k) {
      next[k + 1] += p[m - 1][k];
      next[k] -= H(m, m) * p[m - 1][k];
    }
    Rational t = 1;
    for (std::size_t i = m - 1; i >= 1; --i) {
      t *= H(i + 1, i);
      if (sgn(t) == 0) break;
      if (sgn(H(i, m)) != 0) axpy(next, -(t * H(i, m)), p[i - 1]);
    }
    trim(next);
    p[m] = std::move(next);
  }
  return p[n];
}

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill) : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::frobenius() const {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw dimension_error("matrix product size mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      double v = a(i, k);
      if (v == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += v * b(k, j);
    }
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw dimension_error("matrix difference size mismatch");
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

Matrix cholesky(const Matrix& b) {
  const std::size_t n = b.rows();
  if (b.cols() != n) throw dimension_error("Cholesky needs a square matrix");
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = b(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw numeric_error("matrix is not positive definite (Cholesky pivot " + std::to_string(j) + ")");
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = b(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

SymmetricEigenResult sym_eig(const Matrix& input) {
  const std::size_t n = input.rows();
  if (input.cols() != n) throw dimension_error("eigenproblem needs a square matrix");
  Matrix a = input;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (a(i, j) + a(j, i));
  Matrix v = Matrix::identity(n);
  const double scale = std::max(a.frobenius(), 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (std::sqrt(off) <= 1e-15 * scale) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymmetricEigenResult r;
  r.eigenvectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    r.eigenvalues.push_back(a(order[k], order[k]));
    for (std::size_t i = 0; i < n; ++i) r.eigenvectors(i, k) = v(i, order[k]);
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = -r.eigenvalues[k] * r.eigenvectors(i, k);
      for (std::size_t j = 0; j < n; ++j) s += input(i, j) * r.eigenvectors(j, k);
      res += s * s;
    }
    worst = std::max(worst, std::sqrt(res) / scale);
  }
  r.residual_norm = worst;
  return r;
}

SymmetricEigenResult generalized_sym_eig(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != n) throw dimension_error("generalized eigenproblem size mismatch");
  const double na = std::max(a.frobenius(), 1e-300);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-12 * na) throw numeric_error("A is not symmetric");
  Matrix l = cholesky(b);
  // C = L^{-1} A L^{-T} by forward substitution on columns then rows.
  Matrix y(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = 0; i < n; ++i) {
      double s = a(i, c);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y(k, c);
      y(i, c) = s / l(i, i);
    }
  Matrix cm(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t i = 0; i < n; ++i) {
      double s = y(r, i);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * cm(r, k);
      cm(r, i) = s / l(i, i);
    }
  SymmetricEigenResult e = sym_eig(cm);
  // v = L^{-T} w.
  Matrix v(n, n);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t i = n; i-- > 0;) {
      double s = e.eigenvectors(i, c);
      for (std::size_t k = i + 1; k < n; ++k) s -= l(k, i) * v(k, c);
      v(i, c) = s / l(i, i);
    }
  e.eigenvectors = v;
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += (a(i, j) - e.eigenvalues[k] * b(i, j)) * v(j, k);
      res += s * s;
    }
    worst = std::max(worst, std::sqrt(res) / na);
  }
  e.residual_norm = worst;
  return e;
}

bool same_cluster(double l, double m) { return std::abs(l - m) <= 1e-7 * (1.0 + std::abs(l)); }

}  // namespace dop
