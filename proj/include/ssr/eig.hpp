#pragma once

// Hermitian eigensolver (cyclic complex Jacobi rotations), one-sided Jacobi
// SVD, nullspace/rank decisions and spectral matrix functions. Jacobi keeps
// the whole toolkit self-contained and delivers high relative accuracy at
// the dimensions in scope.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "matrix.hpp"

namespace ssr {

struct EigResult {
  std::vector<double> eigenvalues;  // ascending
  Matrix vectors;                   // unitary, columns match eigenvalues
};

namespace detail {

// Unitary 2x2 rotation J = [[c, s*u], [-s*conj(u), c]] annihilating the
// off-diagonal entry of the Hermitian block [[app, apq], [conj(apq), aqq]].
struct JacobiRotation {
  double c = 1.0, s = 0.0;
  cplx u = 1.0;  // phase of the pivot entry
};

inline JacobiRotation make_rotation(double app, double aqq, cplx apq) {
  JacobiRotation j;
  const double r = std::abs(apq);
  if (r == 0.0) return j;
  j.u = apq / r;
  const double tau = (aqq - app) / (2.0 * r);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
  j.c = 1.0 / std::sqrt(1.0 + t * t);
  j.s = t * j.c;
  return j;
}

inline double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

// Eigendecomposition of a Hermitian matrix. The input must be Hermitian to
// within herm_tol (relative to its norm); the hermitized average is what
// gets diagonalized.
inline EigResult hermitian_eig(const Matrix& h, double herm_tol = 1e-8) {
  if (!h.is_square()) throw ShapeError("hermitian_eig: matrix not square");
  const std::size_t n = h.rows();
  if (n == 0) return {{}, Matrix()};
  const double scale = hs_norm(h);
  const double defect = hs_norm(h - adjoint(h));
  if (defect > herm_tol * std::max(1.0, scale))
    throw NumericalError("hermitian_eig: input not Hermitian, ||H - H^dagger|| = " + std::to_string(defect));

  Matrix a = 0.5 * (h + adjoint(h));
  Matrix v = Matrix::identity(n);
  const double target = 1e-14 * std::max(scale, 1e-300);

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (detail::off_diagonal_norm(a) <= target) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        if (std::abs(apq) <= 1e-300) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const auto j = detail::make_rotation(a(p, p).real(), a(q, q).real(), apq);
        // columns p,q: A <- A J
        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = j.c * akp - j.s * std::conj(j.u) * akq;
          a(k, q) = j.s * j.u * akp + j.c * akq;
        }
        // rows p,q: A <- J^dagger A
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = j.c * apk - j.s * j.u * aqk;
          a(q, k) = j.s * std::conj(j.u) * apk + j.c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = j.c * vkp - j.s * std::conj(j.u) * vkq;
          v(k, q) = j.s * j.u * vkp + j.c * vkq;
        }
      }
  }
  if (detail::off_diagonal_norm(a) > 1e-10 * std::max(scale, 1.0))
    throw NumericalError("hermitian_eig: Jacobi sweeps did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigResult res;
  res.eigenvalues.resize(n);
  res.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    res.eigenvalues[j] = a(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) res.vectors(i, j) = v(i, order[j]);
  }
  return res;
}

struct SvdResult {
  std::vector<double> singular_values;  // descending
  Matrix left;   // m x n, columns for zero singular values are zero
  Matrix right;  // n x n unitary
};

// One-sided Jacobi: orthogonalize the columns of A by right rotations.
// Avoids forming A^dagger A, so small singular values keep full accuracy.
inline SvdResult jacobi_svd(const Matrix& a_in) {
  const std::size_t m = a_in.rows(), n = a_in.cols();
  Matrix a = a_in;
  Matrix v = Matrix::identity(n);

  auto col_inner = [&](std::size_t p, std::size_t q) {
    cplx t{};
    for (std::size_t k = 0; k < m; ++k) t += std::conj(a(k, p)) * a(k, q);
    return t;
  };

  bool converged = n <= 1;
  for (int sweep = 0; sweep < 60 && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double hpp = std::real(col_inner(p, p));
        const double hqq = std::real(col_inner(q, q));
        const cplx hpq = col_inner(p, q);
        if (std::abs(hpq) <= 1e-15 * std::sqrt(hpp * hqq) + 1e-300) continue;
        converged = false;
        const auto j = detail::make_rotation(hpp, hqq, hpq);
        for (std::size_t k = 0; k < m; ++k) {
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = j.c * akp - j.s * std::conj(j.u) * akq;
          a(k, q) = j.s * j.u * akp + j.c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p), vkq = v(k, q);
          v(k, p) = j.c * vkp - j.s * std::conj(j.u) * vkq;
          v(k, q) = j.s * j.u * vkp + j.c * vkq;
        }
      }
  }
  if (!converged) throw NumericalError("jacobi_svd: sweeps did not converge");

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += std::norm(a(k, j));
    sigma[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  SvdResult res;
  res.singular_values.resize(n);
  res.left = Matrix(m, n);
  res.right = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t src = order[j];
    res.singular_values[j] = sigma[src];
    for (std::size_t i = 0; i < n; ++i) res.right(i, j) = v(i, src);
    if (sigma[src] > 0.0)
      for (std::size_t i = 0; i < m; ++i) res.left(i, j) = a(i, src) / sigma[src];
  }
  return res;
}

// Rank with the relative threshold tol * sigma_max.
inline std::size_t rank(const Matrix& a, double tol = 1e-8) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  const auto svd = jacobi_svd(a);
  const double smax = svd.singular_values.empty() ? 0.0 : svd.singular_values.front();
  if (smax <= 0.0) return 0;
  std::size_t r = 0;
  for (double s : svd.singular_values)
    if (s > tol * smax) ++r;
  return r;
}

// Orthonormal basis of {v : Lv = 0}, cut at singular values <= tol * sigma_max.
inline std::vector<Matrix> nullspace(const Matrix& l, double tol = 1e-8) {
  const std::size_t n = l.cols();
  std::vector<Matrix> basis;
  if (n == 0) return basis;
  if (l.rows() == 0) {
    for (std::size_t j = 0; j < n; ++j) basis.push_back(Matrix::unit(n, 1, j, 0));
    return basis;
  }
  const auto svd = jacobi_svd(l);
  const double smax = svd.singular_values.front();
  for (std::size_t j = 0; j < n; ++j)
    if (svd.singular_values[j] <= tol * smax) basis.push_back(col(svd.right, j));
  return basis;
}

// V f(Lambda) V^dagger for Hermitian input.
template <class Fn>
inline Matrix hermitian_function(const Matrix& h, Fn&& f, double herm_tol = 1e-8) {
  const auto eig = hermitian_eig(h, herm_tol);
  const std::size_t n = h.rows();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = f(eig.eigenvalues[i]);
  return eig.vectors * d * adjoint(eig.vectors);
}

// exp(-i H t) for Hermitian H.
inline Matrix evolution_unitary(const Matrix& h, double t, double herm_tol = 1e-8) {
  return hermitian_function(h, [t](double lam) { return std::exp(cplx(0.0, -lam * t)); }, herm_tol);
}

// Closest unitary to a square matrix (polar factor); rank-deficient
// directions are completed by pairing leftover singular directions.
inline Matrix polar_unitary(const Matrix& a) {
  if (!a.is_square()) throw ShapeError("polar_unitary: matrix not square");
  const std::size_t n = a.rows();
  auto svd = jacobi_svd(a);
  const double smax = svd.singular_values.empty() ? 0.0 : svd.singular_values.front();
  const double cut = 1e-13 * std::max(smax, 1.0);
  // complete zero left columns against the kept ones
  std::vector<Matrix> left;
  for (std::size_t j = 0; j < n; ++j)
    if (svd.singular_values[j] > cut) left.push_back(col(svd.left, j));
  for (std::size_t e = 0; e < n && left.size() < n; ++e) {
    Matrix c = Matrix::unit(n, 1, e, 0);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : left) c -= hs_inner(u, c) * u;
    if (hs_norm(c) > 1e-8) left.push_back(normalized(c));
  }
  if (left.size() != n) throw NumericalError("polar_unitary: completion failed");
  Matrix u(n, n);
  for (std::size_t j = 0; j < n; ++j) set_col(u, j, left[j]);
  return u * adjoint(svd.right);
}

}  // namespace ssr
