#ifndef LOGCAVE_LINALG_HPP
#define LOGCAVE_LINALG_HPP

#include <cstddef>
#include <vector>

namespace logcave {

// Dense row-major matrix; just enough linear algebra for whitening and
// rotations in small dimension.
struct Matrix {
  std::size_t rows = 0, cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  static Matrix identity(std::size_t n);
};

Matrix matmul(const Matrix& x, const Matrix& y);
Matrix transpose(const Matrix& x);

// Sample covariance (1/n, around the column means) of an n x d data matrix.
Matrix covariance(const Matrix& x);

// Jacobi eigendecomposition of a symmetric matrix: s = v diag(w) v^T.
void sym_eigen(const Matrix& s, Matrix& eigvecs, std::vector<double>& eigvals);

// Inverse square root of a symmetric positive-definite matrix; throws
// std::domain_error when an eigenvalue is below 1e-12 times the largest.
Matrix sym_inv_sqrt(const Matrix& s);

// Gauss-Jordan inverse with partial pivoting; throws std::domain_error on
// (near-)singular input.
Matrix inverse(const Matrix& x);

}  // namespace logcave

#endif
