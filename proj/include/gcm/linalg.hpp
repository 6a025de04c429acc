#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "gcm/error.hpp"

namespace gcm {

// Small dense row-major matrix; the block count b stays in single digits.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::vector<double> operator*(const std::vector<double>& v) const {
    std::vector<double> out(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k)
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += a(i, k) * b(k, j);
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Solves A x = rhs by Gaussian elimination with partial pivoting; nullopt if singular.
inline std::optional<std::vector<double>> solve_linear(Matrix a, std::vector<double> rhs) {
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) < 1e-300) return std::nullopt;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      std::swap(rhs[col], rhs[piv]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

/// Characteristic polynomial coefficients c_0..c_n of det(lambda I - A), monic (c_n = 1),
/// by the Faddeev-LeVerrier recursion.
inline std::vector<double> characteristic_polynomial(const Matrix& a) {
  const std::size_t n = a.rows();
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  Matrix m(n, n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix am = a * m;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = am(i, j) + (i == j ? c[n - k + 1] : 0.0);
    Matrix am2 = a * m;
    double tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += am2(i, i);
    c[n - k] = -tr / double(k);
  }
  return c;
}

/// All eigenvalues of a small matrix: Durand-Kerner iteration on the characteristic polynomial.
inline std::vector<std::complex<double>> eigenvalues(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n == 0) return {};
  const auto c = characteristic_polynomial(a);
  auto poly = [&](std::complex<double> z) {
    std::complex<double> v = c[n];
    for (std::size_t k = n; k-- > 0;) v = v * z + c[k];
    return v;
  };
  double radius = 0.0;  // Cauchy bound
  for (std::size_t k = 0; k < n; ++k) radius = std::max(radius, std::abs(c[k]));
  radius += 1.0;
  std::vector<std::complex<double>> z(n);
  const std::complex<double> seed(0.4, 0.9);
  for (std::size_t k = 0; k < n; ++k) z[k] = radius * std::pow(seed, double(k));
  for (int it = 0; it < 5000; ++it) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::complex<double> den = 1.0;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) den *= (z[i] - z[j]);
      if (std::abs(den) < 1e-300) den = 1e-300;
      const auto step = poly(z[i]) / den;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15 * radius) break;
  }
  return z;
}

struct PerronPair {
  double lambda = 0.0;
  std::vector<double> vector;  // positive, max-norm 1
  int iterations = 0;
};

/// Dominant eigenpair of an entrywise-positive matrix by power iteration with max-norm scaling.
inline PerronPair dominant_eig(const Matrix& a, double tol = 1e-12, int max_iter = 100'000) {
  const std::size_t n = a.rows();
  if (n == 0 || a.cols() != n) throw config_error("dominant_eig needs a non-empty square matrix");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!(a(i, j) > 0.0)) throw config_error("dominant_eig needs an entrywise positive matrix");

  std::vector<double> v(n, 1.0);
  double lambda = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    auto w = a * v;
    const double norm = *std::max_element(w.begin(), w.end());
    for (double& x : w) x /= norm;
    const bool done = std::abs(norm - lambda) < tol * norm;
    lambda = norm;
    v = std::move(w);
    if (done) return {lambda, v, it};
  }
  throw convergence_error("power iteration did not converge", v);
}

}  // namespace gcm
