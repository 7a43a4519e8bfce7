#pragma once

// Dense complex matrices with Hilbert-Schmidt geometry, Kronecker products
// and partial traces. Desk scale only (dimensions <= 64), row-major storage,
// value semantics throughout. Hilbert-space vectors are n-by-1 matrices so
// one type carries operators and states alike.

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "errors.hpp"

namespace ssr {

using cplx = std::complex<double>;

inline constexpr std::size_t kMaxDim = 64;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  // Matrix unit E_ij (1 in slot (i,j), zero elsewhere).
  static Matrix unit(std::size_t rows, std::size_t cols, std::size_t i, std::size_t j) {
    Matrix m(rows, cols);
    m(i, j) = 1.0;
    return m;
  }

  static Matrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c) throw ShapeError("from_rows: ragged row lengths");
      std::size_t j = 0;
      for (const cplx& v : row) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  static Matrix column(std::initializer_list<cplx> entries) {
    Matrix m(entries.size(), 1);
    std::size_t i = 0;
    for (const cplx& v : entries) m(i++, 0) = v;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return a_.size(); }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return a_.empty(); }

  cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::vector<cplx>& data() { return a_; }
  const std::vector<cplx>& data() const { return a_; }

  Matrix& operator+=(const Matrix& o) {
    require_same_shape(o, "operator+=");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    require_same_shape(o, "operator-=");
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  Matrix& operator*=(cplx s) {
    for (auto& v : a_) v *= s;
    return *this;
  }

  bool is_finite() const {
    for (const cplx& v : a_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

  void require_same_shape(const Matrix& o, const char* where) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeError(std::string(where) + ": shape mismatch");
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<cplx> a_;
};

inline Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
inline Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
inline Matrix operator*(cplx s, Matrix a) { return a *= s; }
inline Matrix operator*(Matrix a, cplx s) { return a *= s; }
inline Matrix operator*(double s, Matrix a) { return a *= cplx(s, 0.0); }
inline Matrix operator*(Matrix a, double s) { return a *= cplx(s, 0.0); }

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("operator*: inner dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline Matrix adjoint(const Matrix& m) {
  Matrix r(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(j, i) = std::conj(m(i, j));
  return r;
}

inline Matrix transpose(const Matrix& m) {
  Matrix r(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(j, i) = m(i, j);
  return r;
}

inline cplx trace(const Matrix& m) {
  if (!m.is_square()) throw ShapeError("trace: matrix not square");
  cplx t{};
  for (std::size_t i = 0; i < m.rows(); ++i) t += m(i, i);
  return t;
}

// Hilbert-Schmidt inner product Tr(A^dagger B), conjugate-linear in A.
inline cplx hs_inner(const Matrix& a, const Matrix& b) {
  a.require_same_shape(b, "hs_inner");
  cplx t{};
  for (std::size_t k = 0; k < a.size(); ++k) t += std::conj(a.data()[k]) * b.data()[k];
  return t;
}

inline double hs_norm(const Matrix& a) {
  double s = 0.0;
  for (const cplx& v : a.data()) s += std::norm(v);
  return std::sqrt(s);
}

inline double max_abs(const Matrix& a) {
  double s = 0.0;
  for (const cplx& v : a.data()) s = std::max(s, std::abs(v));
  return s;
}

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i1 = 0; i1 < a.rows(); ++i1)
    for (std::size_t j1 = 0; j1 < a.cols(); ++j1) {
      const cplx v = a(i1, j1);
      if (v == cplx{}) continue;
      for (std::size_t i2 = 0; i2 < b.rows(); ++i2)
        for (std::size_t j2 = 0; j2 < b.cols(); ++j2)
          r(i1 * b.rows() + i2, j1 * b.cols() + j2) = v * b(i2, j2);
    }
  return r;
}

// Trace out one tensor factor of an operator on H_1 (x) H_2, with the
// subsystem-1-first index convention used everywhere in this library.
inline Matrix partial_trace(const Matrix& m, std::size_t d1, std::size_t d2, int which) {
  if (!m.is_square() || m.rows() != d1 * d2) throw ShapeError("partial_trace: dimension mismatch");
  if (which == 2) {
    Matrix r(d1, d1);
    for (std::size_t i = 0; i < d1; ++i)
      for (std::size_t j = 0; j < d1; ++j)
        for (std::size_t k = 0; k < d2; ++k) r(i, j) += m(i * d2 + k, j * d2 + k);
    return r;
  }
  if (which == 1) {
    Matrix r(d2, d2);
    for (std::size_t i = 0; i < d2; ++i)
      for (std::size_t j = 0; j < d2; ++j)
        for (std::size_t k = 0; k < d1; ++k) r(i, j) += m(k * d2 + i, k * d2 + j);
    return r;
  }
  throw ShapeError("partial_trace: subsystem index must be 1 or 2");
}

inline Matrix col(const Matrix& m, std::size_t j) {
  Matrix v(m.rows(), 1);
  for (std::size_t i = 0; i < m.rows(); ++i) v(i, 0) = m(i, j);
  return v;
}

inline void set_col(Matrix& m, std::size_t j, const Matrix& v) {
  if (v.rows() != m.rows() || v.cols() != 1) throw ShapeError("set_col: column shape mismatch");
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = v(i, 0);
}

inline Matrix hstack(const std::vector<Matrix>& columns) {
  if (columns.empty()) return Matrix();
  Matrix r(columns.front().rows(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) set_col(r, j, columns[j]);
  return r;
}

inline Matrix normalized(const Matrix& v) {
  const double n = hs_norm(v);
  if (n == 0.0) throw NumericalError("normalized: zero vector");
  return v * (1.0 / n);
}

inline Matrix pauli_x() { return Matrix::from_rows({{0, 1}, {1, 0}}); }
inline Matrix pauli_y() { return Matrix::from_rows({{0, cplx(0, -1)}, {cplx(0, 1), 0}}); }
inline Matrix pauli_z() { return Matrix::from_rows({{1, 0}, {0, -1}}); }

// Block-diagonal embedding diag(blocks...).
inline Matrix direct_sum(const std::vector<Matrix>& blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) {
    if (!b.is_square()) throw ShapeError("direct_sum: blocks must be square");
    n += b.rows();
  }
  Matrix r(n, n);
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) r(off + i, off + j) = b(i, j);
    off += b.rows();
  }
  return r;
}

}  // namespace ssr
