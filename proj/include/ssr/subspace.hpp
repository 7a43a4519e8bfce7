#pragma once

// Subspaces of matrix space under the Hilbert-Schmidt inner product:
// orthonormalization, column-stacking vectorization, principal-angle
// comparison and intersection. vec is column-stacking, so
// vec(A X B) = (B^T (x) A) vec(X).

#include <vector>

#include "eig.hpp"
#include "matrix.hpp"

namespace ssr {

struct MatrixSubspace {
  std::size_t ambient_dim = 0;       // matrices are ambient_dim x ambient_dim
  std::vector<Matrix> basis;         // orthonormal under hs_inner
  std::size_t dim() const { return basis.size(); }
};

inline Matrix vec(const Matrix& m) {
  Matrix v(m.rows() * m.cols(), 1);
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) v(i + m.rows() * j, 0) = m(i, j);
  return v;
}

inline Matrix unvec(const Matrix& v, std::size_t rows, std::size_t cols) {
  if (v.cols() != 1 || v.rows() != rows * cols) throw ShapeError("unvec: size mismatch");
  Matrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = v(i + rows * j, 0);
  return m;
}

// Component of m orthogonal to the (orthonormal) basis; two projection
// passes so the residual is orthogonal to working precision.
inline Matrix project_out(const std::vector<Matrix>& basis, Matrix m) {
  for (int pass = 0; pass < 2; ++pass)
    for (const Matrix& b : basis) m -= hs_inner(b, m) * b;
  return m;
}

inline Matrix project_onto(const std::vector<Matrix>& basis, const Matrix& m) {
  Matrix p = Matrix::zero(m.rows(), m.cols());
  for (const Matrix& b : basis) p += hs_inner(b, m) * b;
  return p;
}

// Appends the normalized residual of m if it sticks out of the span by more
// than tol (relative to max(1, ||m||)). Returns true when the basis grew.
inline bool append_orthonormal(std::vector<Matrix>& basis, const Matrix& m, double tol = 1e-8) {
  const Matrix r = project_out(basis, m);
  if (hs_norm(r) <= tol * std::max(1.0, hs_norm(m))) return false;
  basis.push_back(normalized(r));
  return true;
}

inline MatrixSubspace orthonormalize(const std::vector<Matrix>& mats, double tol = 1e-8) {
  MatrixSubspace s;
  for (const Matrix& m : mats) {
    if (!m.is_square()) throw ShapeError("orthonormalize: matrices must be square");
    if (s.ambient_dim == 0)
      s.ambient_dim = m.rows();
    else if (m.rows() != s.ambient_dim)
      throw ShapeError("orthonormalize: mixed dimensions");
    append_orthonormal(s.basis, m, tol);
  }
  return s;
}

inline double residual_outside(const MatrixSubspace& s, const Matrix& m) {
  return hs_norm(project_out(s.basis, m));
}

inline bool subspace_contains(const MatrixSubspace& outer, const MatrixSubspace& inner, double tol = 1e-8) {
  for (const Matrix& b : inner.basis)
    if (residual_outside(outer, b) > tol) return false;
  return true;
}

// sin of the largest principal angle, computed from projection residuals
// so small angles keep full precision; 1 when dimensions differ.
inline double subspace_distance(const MatrixSubspace& a, const MatrixSubspace& b) {
  if (a.dim() != b.dim()) return 1.0;
  if (a.dim() == 0) return 0.0;
  auto one_sided = [](const MatrixSubspace& from, const MatrixSubspace& onto) {
    std::vector<Matrix> residuals;
    for (const Matrix& m : from.basis) residuals.push_back(vec(project_out(onto.basis, m)));
    const auto svd = jacobi_svd(hstack(residuals));
    return std::clamp(svd.singular_values.empty() ? 0.0 : svd.singular_values.front(), 0.0, 1.0);
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

// Intersection via the nullspace of [vec(basis_a) | -vec(basis_b)].
inline MatrixSubspace subspace_intersection(const MatrixSubspace& a, const MatrixSubspace& b, double tol = 1e-8) {
  if (a.ambient_dim != b.ambient_dim) throw ShapeError("subspace_intersection: ambient dimension mismatch");
  const std::size_t n = a.ambient_dim;
  MatrixSubspace out;
  out.ambient_dim = n;
  if (a.dim() == 0 || b.dim() == 0) return out;

  Matrix k(n * n, a.dim() + b.dim());
  for (std::size_t j = 0; j < a.dim(); ++j) set_col(k, j, vec(a.basis[j]));
  for (std::size_t j = 0; j < b.dim(); ++j) set_col(k, a.dim() + j, -1.0 * vec(b.basis[j]));

  std::vector<Matrix> members;
  for (const Matrix& z : nullspace(k, tol)) {
    Matrix m = Matrix::zero(n, n);
    for (std::size_t j = 0; j < a.dim(); ++j) m += z(j, 0) * a.basis[j];
    members.push_back(m);
  }
  return orthonormalize(members, tol);
}

}  // namespace ssr
