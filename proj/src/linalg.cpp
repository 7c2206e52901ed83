#include "logcave/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace logcave {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix matmul(const Matrix& x, const Matrix& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matmul: shape mismatch");
  Matrix out(x.rows, y.cols);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t k = 0; k < x.cols; ++k) {
      const double v = x(i, k);
      if (v == 0.0) continue;
      for (std::size_t j = 0; j < y.cols; ++j) out(i, j) += v * y(k, j);
    }
  return out;
}

Matrix transpose(const Matrix& x) {
  Matrix out(x.cols, x.rows);
  for (std::size_t i = 0; i < x.rows; ++i)
    for (std::size_t j = 0; j < x.cols; ++j) out(j, i) = x(i, j);
  return out;
}

Matrix covariance(const Matrix& x) {
  const std::size_t n = x.rows, d = x.cols;
  if (n < 2) throw std::invalid_argument("covariance: need at least two rows");
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) mean[j] += x(i, j);
  for (double& m : mean) m /= static_cast<double>(n);
  Matrix cov(d, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = 0; p < d; ++p) {
      const double dp = x(i, p) - mean[p];
      for (std::size_t q = p; q < d; ++q)
        cov(p, q) += dp * (x(i, q) - mean[q]);
    }
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = p; q < d; ++q) {
      cov(p, q) /= static_cast<double>(n);
      cov(q, p) = cov(p, q);
    }
  return cov;
}

void sym_eigen(const Matrix& s, Matrix& eigvecs, std::vector<double>& eigvals) {
  const std::size_t n = s.rows;
  Matrix a = s;
  eigvecs = Matrix::identity(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = 0.5 * (a(q, q) - a(p, p)) / a(p, q);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = eigvecs(k, p), vkq = eigvecs(k, q);
          eigvecs(k, p) = c * vkp - sn * vkq;
          eigvecs(k, q) = sn * vkp + c * vkq;
        }
      }
  }
  eigvals.resize(n);
  for (std::size_t i = 0; i < n; ++i) eigvals[i] = a(i, i);
}

Matrix sym_inv_sqrt(const Matrix& s) {
  Matrix v;
  std::vector<double> w;
  sym_eigen(s, v, w);
  const double wmax = *std::max_element(w.begin(), w.end());
  Matrix d(s.rows, s.rows);
  for (std::size_t i = 0; i < s.rows; ++i) {
    if (!(w[i] > 1e-12 * std::max(wmax, 1e-300)))
      throw std::domain_error("sym_inv_sqrt: matrix is singular");
    d(i, i) = 1.0 / std::sqrt(w[i]);
  }
  return matmul(matmul(v, d), transpose(v));
}

Matrix inverse(const Matrix& x) {
  if (x.rows != x.cols) throw std::invalid_argument("inverse: square matrix required");
  const std::size_t n = x.rows;
  Matrix a = x;
  Matrix inv = Matrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (std::abs(a(piv, c)) < 1e-300)
      throw std::domain_error("inverse: singular matrix");
    if (piv != c)
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(c, j), a(piv, j));
        std::swap(inv(c, j), inv(piv, j));
      }
    const double p = a(c, c);
    for (std::size_t j = 0; j < n; ++j) {
      a(c, j) /= p;
      inv(c, j) /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a(r, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

}  // namespace logcave
