#pragma once

#include <cstddef>
#include <vector>

#include "dop/rational.hpp"

namespace dop {

class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Rational& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::vector<Rational> apply(const std::vector<Rational>& v) const;
  RationalMatrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> a_;
};

// Basis of ker(A): one vector per free column, equal to 1 there and 0 on the
// other free columns. Fraction-free elimination with left-to-right pivots.
std::vector<std::vector<Rational>> rational_nullspace(const RationalMatrix& a);

std::size_t rational_rank(const RationalMatrix& a);

struct RrefResult {
  RationalMatrix reduced;
  std::vector<std::size_t> pivots;
};
RrefResult rref(const RationalMatrix& a);

// Coefficients, lowest degree first, of det(x I - A).
std::vector<Rational> characteristic_polynomial(const RationalMatrix& a);

// Dense row-major floating matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  const std::vector<double>& data() const { return a_; }

  Matrix transpose() const;
  double frobenius() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

// Lower triangular L with B = L L^T; throws numeric_error if B is not SPD.
Matrix cholesky(const Matrix& b);

struct SymmetricEigenResult {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // columns, B-orthonormal
  double residual_norm = 0.0;       // max_k |A v - l B v| / |A|
};

// Cyclic Jacobi on a symmetric matrix; eigenvectors orthonormal.
SymmetricEigenResult sym_eig(const Matrix& a);

// A v = l B v through Cholesky of B and cyclic Jacobi.
SymmetricEigenResult generalized_sym_eig(const Matrix& a, const Matrix& b);

// Cluster rule for multiplicities: |l - m| <= 1e-7 (1 + |l|).
bool same_cluster(double l, double m);

}  // namespace dop
