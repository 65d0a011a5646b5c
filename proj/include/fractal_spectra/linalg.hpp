#pragma once

#include <cmath>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

namespace fractal_spectra {

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Minimal row-major dense matrix. Sized for the small systems this library
/// solves (boundary blocks, absorbing chains); not a general linear-algebra
/// package.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T aik = a(i, k);
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    Matrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
    return c;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    Matrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
    return c;
  }
  friend Matrix operator*(const T& s, const Matrix& a) {
    Matrix c = a;
    for (auto& v : c.data_) v = s * v;
    return c;
  }

  double max_abs() const {
    double m = 0;
    for (const auto& v : data_) m = std::max(m, pivot_size(v));
    return m;
  }

  static double pivot_size(const T& v) {
    if constexpr (std::is_floating_point_v<T>) {
      return std::fabs(static_cast<double>(v));
    } else {
      return std::fabs(v.to_double());
    }
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Solves A X = B by Gaussian elimination with partial pivoting. Works for
/// floating point and for exact field types (Rational); throws
/// SingularMatrixError when no usable pivot remains.
template <typename T>
Matrix<T> solve(Matrix<T> a, Matrix<T> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n) throw std::invalid_argument("solve: shape mismatch");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = Matrix<T>::pivot_size(a(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double s = Matrix<T>::pivot_size(a(r, col));
      if (s > best) {
        best = s;
        piv = r;
      }
    }
    if (best == 0.0) throw SingularMatrixError("solve: singular matrix");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(col, j), b(piv, j));
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      if (Matrix<T>::pivot_size(a(r, col)) == 0.0) continue;
      const T f = a(r, col) / a(col, col);
      a(r, col) = T{};
      for (std::size_t j = col + 1; j < n; ++j) a(r, j) -= f * a(col, j);
      for (std::size_t j = 0; j < b.cols(); ++j) b(r, j) -= f * b(col, j);
    }
  }
  Matrix<T> x(n, b.cols());
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      T s = b(i, j);
      for (std::size_t k = i + 1; k < n; ++k) s -= a(i, k) * x(k, j);
      x(i, j) = s / a(i, i);
    }
  }
  return x;
}

template <typename T>
std::vector<T> solve(const Matrix<T>& a, const std::vector<T>& rhs) {
  Matrix<T> b(rhs.size(), 1);
  for (std::size_t i = 0; i < rhs.size(); ++i) b(i, 0) = rhs[i];
  Matrix<T> x = solve(a, std::move(b));
  std::vector<T> out(rhs.size());
  for (std::size_t i = 0; i < rhs.size(); ++i) out[i] = x(i, 0);
  return out;
}

/// Thomas sweep for a tridiagonal system with constant bands. The matrices
/// that arise here are strictly diagonally dominant after the first
/// elimination step, so no pivoting is performed.
template <typename T>
std::vector<T> solve_tridiagonal_constant(T lower, T diag, T upper, std::vector<T> rhs) {
  const std::size_t n = rhs.size();
  if (n == 0) return rhs;
  std::vector<T> c(n, T{});
  c[0] = upper / diag;
  rhs[0] = rhs[0] / diag;
  for (std::size_t i = 1; i < n; ++i) {
    const T denom = diag - lower * c[i - 1];
    c[i] = upper / denom;
    rhs[i] = (rhs[i] - lower * rhs[i - 1]) / denom;
  }
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= c[i] * rhs[i + 1];
  return rhs;
}

}  // namespace fractal_spectra
