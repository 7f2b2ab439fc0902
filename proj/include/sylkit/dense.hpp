#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "sylkit/errors.hpp"

namespace sylkit::la {

using cplx = std::complex<double>;

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};
template <typename T>
inline constexpr bool is_complex_v = is_complex<T>::value;

template <typename T>
concept Scalar = std::is_same_v<T, double> || std::is_same_v<T, cplx>;

template <Scalar T>
inline T conj_if(T v) {
  if constexpr (is_complex_v<T>) {
    return std::conj(v);
  } else {
    return v;
  }
}

/// Dense column-major matrix. Real and complex instantiations are distinct
/// types; conversions go through to_complex / real_part.
template <Scalar T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  /// Column vector from values.
  static Matrix column(std::span<const T> values) {
    Matrix m(values.size(), 1);
    std::copy(values.begin(), values.end(), m.data_.begin());
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i + j * rows_]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i + j * rows_];
  }

  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }

  std::span<T> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const T> col(std::size_t j) const {
    return {data_.data() + j * rows_, rows_};
  }

  std::vector<T>& storage() noexcept { return data_; }
  const std::vector<T>& storage() const noexcept { return data_; }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr,
               std::size_t nc) const {
    Matrix out(nr, nc);
    for (std::size_t j = 0; j < nc; ++j)
      std::copy_n(data_.data() + r0 + (c0 + j) * rows_, nr,
                  out.data_.data() + j * nr);
    return out;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    for (std::size_t j = 0; j < b.cols(); ++j)
      std::copy_n(b.data() + j * b.rows(), b.rows(),
                  data_.data() + r0 + (c0 + j) * rows_);
  }

  /// Grows (or shrinks) the matrix keeping the overlapping leading block.
  void conservative_resize(std::size_t rows, std::size_t cols) {
    if (rows == rows_ && cols == cols_) return;
    Matrix out(rows, cols);
    const std::size_t nr = std::min(rows, rows_);
    const std::size_t nc = std::min(cols, cols_);
    for (std::size_t j = 0; j < nc; ++j)
      std::copy_n(data_.data() + j * rows_, nr, out.data_.data() + j * rows);
    *this = std::move(out);
  }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(T s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, T s) { return a *= s; }
  friend Matrix operator*(T s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) { return a *= T{-1}; }

  bool operator==(const Matrix&) const = default;

 private:
  void check_same(const Matrix& o) const {
    if (o.rows_ != rows_ || o.cols_ != cols_)
      throw DimensionMismatch("matrix shapes differ: " + std::to_string(rows_) +
                              "x" + std::to_string(cols_) + " vs " +
                              std::to_string(o.rows_) + "x" +
                              std::to_string(o.cols_));
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using DenseMat = Matrix<double>;
using CDenseMat = Matrix<cplx>;

// ---------------------------------------------------------------------------
// Elementwise helpers and norms

template <Scalar T>
double frobenius_norm(const Matrix<T>& m) {
  // scaled sum of squares to avoid overflow on extreme entries
  double scale = 0.0, ssq = 1.0;
  for (const T& v : m.storage()) {
    const double a = std::abs(v);
    if (a == 0.0) continue;
    if (scale < a) {
      ssq = 1.0 + ssq * (scale / a) * (scale / a);
      scale = a;
    } else {
      ssq += (a / scale) * (a / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

template <Scalar T>
double max_abs(const Matrix<T>& m) {
  double out = 0.0;
  for (const T& v : m.storage()) out = std::max(out, std::abs(v));
  return out;
}

/// Largest absolute column sum.
template <Scalar T>
double norm1(const Matrix<T>& m) {
  double out = 0.0;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double s = 0.0;
    for (const T& v : m.col(j)) s += std::abs(v);
    out = std::max(out, s);
  }
  return out;
}

template <Scalar T>
Matrix<T> transpose(const Matrix<T>& m) {
  Matrix<T> out(m.cols(), m.rows());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) out(j, i) = m(i, j);
  return out;
}

template <Scalar T>
Matrix<T> adjoint(const Matrix<T>& m) {
  Matrix<T> out(m.cols(), m.rows());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) out(j, i) = conj_if(m(i, j));
  return out;
}

inline CDenseMat to_complex(const DenseMat& m) {
  CDenseMat out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.size(); ++i) out.data()[i] = m.data()[i];
  return out;
}

inline DenseMat real_part(const CDenseMat& m) {
  DenseMat out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.size(); ++i) out.data()[i] = m.data()[i].real();
  return out;
}

inline double max_imag(const CDenseMat& m) {
  double out = 0.0;
  for (const cplx& v : m.storage()) out = std::max(out, std::abs(v.imag()));
  return out;
}

inline CDenseMat conjugate(const CDenseMat& m) {
  CDenseMat out = m;
  for (auto& v : out.storage()) v = std::conj(v);
  return out;
}

template <Scalar T>
Matrix<T> hstack(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.rows() != b.rows()) throw DimensionMismatch("hstack: row counts differ");
  Matrix<T> out(a.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  return out;
}

// ---------------------------------------------------------------------------
// Products. Column-major loop orders throughout.

/// C = A * B
template <Scalar T>
Matrix<T> mul(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows())
    throw DimensionMismatch("mul: inner dimensions " + std::to_string(a.cols()) +
                            " vs " + std::to_string(b.rows()));
  Matrix<T> c(a.rows(), b.cols());
  const std::size_t m = a.rows();
  for (std::size_t j = 0; j < b.cols(); ++j) {
    T* cj = c.data() + j * m;
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const T bpj = b(p, j);
      if (bpj == T{}) continue;
      const T* ap = a.data() + p * m;
      for (std::size_t i = 0; i < m; ++i) cj[i] += ap[i] * bpj;
    }
  }
  return c;
}

/// C = A^H * B (A^T for real)
template <Scalar T>
Matrix<T> adjoint_mul(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows()) throw DimensionMismatch("adjoint_mul: row counts differ");
  Matrix<T> c(a.cols(), b.cols());
  const std::size_t n = a.rows();
  for (std::size_t j = 0; j < b.cols(); ++j) {
    const T* bj = b.data() + j * n;
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const T* ai = a.data() + i * n;
      T s{};
      for (std::size_t p = 0; p < n; ++p) s += conj_if(ai[p]) * bj[p];
      c(i, j) = s;
    }
  }
  return c;
}

/// C = A * B^H (A * B^T for real)
template <Scalar T>
Matrix<T> mul_adjoint(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.cols()) throw DimensionMismatch("mul_adjoint: column counts differ");
  Matrix<T> c(a.rows(), b.rows());
  const std::size_t m = a.rows();
  for (std::size_t p = 0; p < a.cols(); ++p) {
    const T* ap = a.data() + p * m;
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const T bjp = conj_if(b(j, p));
      if (bjp == T{}) continue;
      T* cj = c.data() + j * m;
      for (std::size_t i = 0; i < m; ++i) cj[i] += ap[i] * bjp;
    }
  }
  return c;
}

/// C -= A * B, in place.
template <Scalar T>
void sub_mul(Matrix<T>& c, const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows() || c.rows() != a.rows() || c.cols() != b.cols())
    throw DimensionMismatch("sub_mul: shapes do not conform");
  const std::size_t m = a.rows();
  for (std::size_t j = 0; j < b.cols(); ++j) {
    T* cj = c.data() + j * m;
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const T bpj = b(p, j);
      if (bpj == T{}) continue;
      const T* ap = a.data() + p * m;
      for (std::size_t i = 0; i < m; ++i) cj[i] -= ap[i] * bpj;
    }
  }
}

/// C += A * B, in place.
template <Scalar T>
void add_mul(Matrix<T>& c, const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows() || c.rows() != a.rows() || c.cols() != b.cols())
    throw DimensionMismatch("add_mul: shapes do not conform");
  const std::size_t m = a.rows();
  for (std::size_t j = 0; j < b.cols(); ++j) {
    T* cj = c.data() + j * m;
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const T bpj = b(p, j);
      if (bpj == T{}) continue;
      const T* ap = a.data() + p * m;
      for (std::size_t i = 0; i < m; ++i) cj[i] += ap[i] * bpj;
    }
  }
}

/// ||A^H A - I||_F
template <Scalar T>
double orthogonality_error(const Matrix<T>& q) {
  Matrix<T> g = adjoint_mul(q, q);
  for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= T{1};
  return frobenius_norm(g);
}

// ---------------------------------------------------------------------------
// Triangular solves

/// X = R^{-1} B with R upper triangular.
template <Scalar T>
Matrix<T> solve_upper(const Matrix<T>& r, Matrix<T> b) {
  const std::size_t n = r.rows();
  if (!r.is_square() || b.rows() != n) throw DimensionMismatch("solve_upper: shapes");
  for (std::size_t j = 0; j < b.cols(); ++j) {
    T* x = b.data() + j * n;
    for (std::size_t ii = n; ii-- > 0;) {
      x[ii] /= r(ii, ii);
      const T xi = x[ii];
      for (std::size_t k = 0; k < ii; ++k) x[k] -= r(k, ii) * xi;
    }
  }
  return b;
}

/// X = B R^{-1} with R upper triangular. Used for basis normalisation where the
/// identical operation must be replayable bit for bit.
template <Scalar T>
Matrix<T> solve_upper_right(Matrix<T> b, const Matrix<T>& r) {
  const std::size_t n = r.rows();
  if (!r.is_square() || b.cols() != n) throw DimensionMismatch("solve_upper_right: shapes");
  const std::size_t m = b.rows();
  for (std::size_t j = 0; j < n; ++j) {
    T* bj = b.data() + j * m;
    for (std::size_t k = 0; k < j; ++k) {
      const T rkj = r(k, j);
      if (rkj == T{}) continue;
      const T* bk = b.data() + k * m;
      for (std::size_t i = 0; i < m; ++i) bj[i] -= bk[i] * rkj;
    }
    const T inv = T{1} / r(j, j);
    for (std::size_t i = 0; i < m; ++i) bj[i] *= inv;
  }
  return b;
}

template <Scalar T>
Matrix<T> inverse_upper(const Matrix<T>& r) {
  return solve_upper(r, Matrix<T>::identity(r.rows()));
}

}  // namespace sylkit::la
