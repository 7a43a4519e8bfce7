#pragma once

// Quantum channels in Kraus form, CPTP verification through the Choi
// matrix, covariance under a finite unitary group representation, group
// twirling and projection onto the invariant (commutant) sector. An
// optional sign per Kraus term admits difference-of-CP maps, so non-CP
// probes like the transpose can run through the same checks.

#include <cstdint>
#include <vector>

#include "algebra.hpp"
#include "eig.hpp"
#include "group.hpp"
#include "sectors.hpp"

namespace ssr {

struct QuantumChannel {
  std::size_t dim_in = 0, dim_out = 0;
  std::vector<Matrix> kraus;
  std::vector<double> signs;  // +1/-1 per Kraus term; all +1 for a genuine channel

  static QuantumChannel from_kraus(std::vector<Matrix> ks, std::vector<double> signs = {}) {
    if (ks.empty()) throw ShapeError("channel: at least one Kraus operator required");
    QuantumChannel c;
    c.dim_out = ks.front().rows();
    c.dim_in = ks.front().cols();
    for (const Matrix& k : ks)
      if (k.rows() != c.dim_out || k.cols() != c.dim_in) throw ShapeError("channel: mixed Kraus dimensions");
    if (signs.empty()) signs.assign(ks.size(), 1.0);
    if (signs.size() != ks.size()) throw ShapeError("channel: one sign per Kraus operator required");
    for (double s : signs)
      if (s != 1.0 && s != -1.0) throw std::invalid_argument("channel: signs must be +1 or -1");
    c.kraus = std::move(ks);
    c.signs = std::move(signs);
    return c;
  }
};

inline Matrix apply_channel(const QuantumChannel& e, const Matrix& rho) {
  if (!rho.is_square() || rho.rows() != e.dim_in) throw ShapeError("apply_channel: dimension mismatch");
  Matrix out(e.dim_out, e.dim_out);
  for (std::size_t a = 0; a < e.kraus.size(); ++a) out += e.signs[a] * (e.kraus[a] * rho * adjoint(e.kraus[a]));
  return out;
}

inline DensityMatrix apply_channel(const QuantumChannel& e, const DensityMatrix& rho) {
  return DensityMatrix{apply_channel(e, rho.rho)};
}

// J = sum_ij E_ij (x) E(E_ij); positive semidefinite iff E is CP.
inline Matrix choi_matrix(const QuantumChannel& e) {
  const std::size_t d = e.dim_in;
  Matrix j(d * e.dim_out, d * e.dim_out);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c)
      j += kron(Matrix::unit(d, d, r, c), apply_channel(e, Matrix::unit(d, d, r, c)));
  return j;
}

struct CptpReport {
  double tp_defect = 0.0;         // ||sum K^dagger K - I||
  double min_choi_eigenvalue = 0.0;
  bool trace_preserving = false;
  bool completely_positive = false;
  bool pass = false;
};

inline CptpReport is_cptp(const QuantumChannel& e, double tol = 1e-9) {
  CptpReport rep;
  Matrix acc(e.dim_in, e.dim_in);
  for (std::size_t a = 0; a < e.kraus.size(); ++a) acc += e.signs[a] * (adjoint(e.kraus[a]) * e.kraus[a]);
  rep.tp_defect = hs_norm(acc - Matrix::identity(e.dim_in));
  const Matrix j = choi_matrix(e);
  rep.min_choi_eigenvalue = hermitian_eig(0.5 * (j + adjoint(j)), 1e-8).eigenvalues.front();
  rep.trace_preserving = rep.tp_defect <= tol;
  rep.completely_positive = rep.min_choi_eigenvalue >= -tol;
  rep.pass = rep.trace_preserving && rep.completely_positive;
  return rep;
}

struct UnitaryGroupRep {
  FiniteGroup group;
  std::size_t dim = 0;
  std::vector<Matrix> unitaries;

  // Proper representation: U(g)U(h) = U(gh) with no multiplier.
  static UnitaryGroupRep from_unitaries(const FiniteGroup& g, std::vector<Matrix> us, double tol = 1e-9) {
    if (us.size() != g.order) throw ShapeError("group rep: one unitary per element required");
    const std::size_t d = us.front().rows();
    for (const Matrix& u : us) {
      if (!u.is_square() || u.rows() != d) throw ShapeError("group rep: mixed dimensions");
      if (hs_norm(adjoint(u) * u - Matrix::identity(d)) > 1e-10 * std::max(1.0, static_cast<double>(d)))
        throw std::invalid_argument("group rep: element is not unitary");
    }
    for (std::size_t a = 0; a < g.order; ++a)
      for (std::size_t b = 0; b < g.order; ++b)
        if (hs_norm(us[a] * us[b] - us[g.mul(a, b)]) > tol)
          throw std::invalid_argument("group rep: not a proper representation (multiplier detected)");
    UnitaryGroupRep r;
    r.group = g;
    r.dim = d;
    r.unitaries = std::move(us);
    return r;
  }
};

struct CovarianceReport {
  double max_residual = 0.0;
  std::size_t worst_element = 0;
  bool pass = false;
};

// E(U(g) rho U(g)^dagger) = U(g) E(rho) U(g)^dagger, probed on the full
// matrix-unit basis; linearity makes the probe complete.
inline CovarianceReport is_covariant(const QuantumChannel& e, const UnitaryGroupRep& rep, double tol = 1e-9) {
  if (e.dim_in != e.dim_out || e.dim_in != rep.dim) throw ShapeError("is_covariant: dimension mismatch");
  CovarianceReport out;
  const std::size_t d = e.dim_in;
  for (std::size_t g = 0; g < rep.group.order; ++g) {
    const Matrix& u = rep.unitaries[g];
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) {
        const Matrix probe = Matrix::unit(d, d, r, c);
        const double res = hs_norm(apply_channel(e, u * probe * adjoint(u)) - u * apply_channel(e, probe) * adjoint(u));
        if (res > out.max_residual) {
          out.max_residual = res;
          out.worst_element = g;
        }
      }
  }
  out.pass = out.max_residual <= tol;
  return out;
}

// Group average (1/|G|) sum_g U^dagger(g) E(U(g) . U^dagger(g)) U(g),
// realized on the Kraus set; the result is covariant and twirling is
// idempotent as a map.
inline QuantumChannel twirl(const QuantumChannel& e, const UnitaryGroupRep& rep) {
  if (e.dim_in != e.dim_out || e.dim_in != rep.dim) throw ShapeError("twirl: dimension mismatch");
  const double scale = 1.0 / std::sqrt(static_cast<double>(rep.group.order));
  std::vector<Matrix> ks;
  std::vector<double> signs;
  ks.reserve(e.kraus.size() * rep.group.order);
  for (std::size_t g = 0; g < rep.group.order; ++g)
    for (std::size_t a = 0; a < e.kraus.size(); ++a) {
      ks.push_back(scale * (adjoint(rep.unitaries[g]) * e.kraus[a] * rep.unitaries[g]));
      signs.push_back(e.signs[a]);
    }
  return QuantumChannel::from_kraus(std::move(ks), std::move(signs));
}

// (1/|G|) sum_g U(g) X U^dagger(g): the conditional expectation onto the
// commutant of the representation.
inline Matrix project_to_invariant(const Matrix& x, const UnitaryGroupRep& rep) {
  if (!x.is_square() || x.rows() != rep.dim) throw ShapeError("project_to_invariant: dimension mismatch");
  Matrix acc(rep.dim, rep.dim);
  for (const Matrix& u : rep.unitaries) acc += u * x * adjoint(u);
  return acc * (1.0 / static_cast<double>(rep.group.order));
}

// Physical observables as the commutant of the gauge group, then the usual
// sector extraction on that algebra.
inline SectorDecomposition gauge_sectors(const UnitaryGroupRep& rep, std::uint64_t seed = 0, int repeats = 3) {
  const OperatorAlgebra n = commutant(rep.dim, rep.unitaries);
  return sectors_from_algebra(n, seed, repeats);
}

inline QuantumChannel dephasing_channel(std::size_t dim) {
  std::vector<Matrix> ks;
  for (std::size_t i = 0; i < dim; ++i) ks.push_back(Matrix::unit(dim, dim, i, i));
  return QuantumChannel::from_kraus(std::move(ks));
}

inline QuantumChannel unitary_channel(const Matrix& u) { return QuantumChannel::from_kraus({u}); }

inline QuantumChannel amplitude_damping_channel(double gamma) {
  const Matrix k0 = Matrix::from_rows({{1, 0}, {0, std::sqrt(1.0 - gamma)}});
  const Matrix k1 = Matrix::from_rows({{0, std::sqrt(gamma)}, {0, 0}});
  return QuantumChannel::from_kraus({k0, k1});
}

inline QuantumChannel depolarizing_channel(double p) {
  const double a = std::sqrt(1.0 - 0.75 * p), b = std::sqrt(0.25 * p);
  return QuantumChannel::from_kraus({a * Matrix::identity(2), b * pauli_x(), b * pauli_y(), b * pauli_z()});
}

// rho -> rho^T on a qubit as a signed Kraus sum: (rho + X rho X + Z rho Z
// - Y rho Y) / 2. Trace-preserving but not completely positive; its Choi
// matrix is the swap with eigenvalue -1.
inline QuantumChannel transpose_pseudo_channel() {
  const double r = 1.0 / std::sqrt(2.0);
  return QuantumChannel::from_kraus({r * Matrix::identity(2), r * pauli_x(), r * pauli_z(), r * pauli_y()},
                                    {1.0, 1.0, 1.0, -1.0});
}

}  // namespace ssr
