#pragma once

// Superselection sectors: minimal central projectors of an observable
// algebra, state reduction rho = sum_i P_i rho P_i, purity classification,
// the superposition-inhibition check and a dephasing einselection model.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "algebra.hpp"

namespace ssr {

struct SectorDecomposition {
  std::size_t ambient_dim = 0;
  std::vector<Matrix> projectors;      // Hermitian, idempotent, orthogonal, exhaustive
  std::vector<std::size_t> sector_dims;
  std::size_t count() const { return projectors.size(); }
};

namespace detail {

// Clusters ascending eigenvalues with the gap threshold 1e-6 * spread.
// Gaps near the threshold are ambiguous and reported as numerical failure.
inline std::vector<std::vector<std::size_t>> cluster_eigenvalues(const std::vector<double>& lam) {
  const std::size_t n = lam.size();
  std::vector<std::vector<std::size_t>> clusters;
  if (n == 0) return clusters;
  double spread = lam.back() - lam.front();
  // inputs are HS-normalized, so a noise-level spread means one component
  if (spread <= 1e-9) spread = 0.0;
  const double thr = 1e-6 * spread;
  clusters.push_back({0});
  for (std::size_t i = 1; i < n; ++i) {
    const double gap = lam[i] - lam[i - 1];
    if (spread > 0.0 && gap > thr / 8.0 && gap < 8.0 * thr)
      throw NumericalError("sector clustering ambiguous: eigenvalue gap " + std::to_string(gap) +
                           " near threshold " + std::to_string(thr));
    if (spread > 0.0 && gap > thr)
      clusters.push_back({});
    clusters.back().push_back(i);
  }
  return clusters;
}

inline std::vector<Matrix> spectral_projectors(const EigResult& eig) {
  const auto clusters = cluster_eigenvalues(eig.eigenvalues);
  const std::size_t n = eig.vectors.rows();
  std::vector<Matrix> ps;
  for (const auto& cl : clusters) {
    Matrix p = Matrix::zero(n, n);
    for (std::size_t idx : cl) {
      const Matrix v = col(eig.vectors, idx);
      p += v * adjoint(v);
    }
    ps.push_back(0.5 * (p + adjoint(p)));
  }
  return ps;
}

inline std::size_t first_support_index(const Matrix& p) {
  for (std::size_t k = 0; k < p.rows(); ++k)
    if (p(k, k).real() > 1e-8) return k;
  return p.rows();
}

inline void validate_projector_family(const std::vector<Matrix>& ps, std::size_t n, double tol) {
  Matrix sum = Matrix::zero(n, n);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (hs_norm(ps[i] * ps[i] - ps[i]) > tol) throw NumericalError("projector family: idempotence defect beyond tolerance");
    if (hs_norm(ps[i] - adjoint(ps[i])) > tol) throw NumericalError("projector family: hermiticity defect beyond tolerance");
    for (std::size_t j = i + 1; j < ps.size(); ++j)
      if (hs_norm(ps[i] * ps[j]) > tol) throw NumericalError("projector family: orthogonality defect beyond tolerance");
    sum += ps[i];
  }
  if (hs_norm(sum - Matrix::identity(n)) > tol) throw NumericalError("projector family: not exhaustive");
}

}  // namespace detail

// Minimal central projectors of N. A random self-adjoint central element
// separates the minimal components with probability one; `repeats` fresh
// draws are intersected into a common refinement to guard against
// near-degenerate draws. Deterministic order: descending trace, ties by
// first supported basis index.
inline SectorDecomposition sectors_from_algebra(const OperatorAlgebra& n, std::uint64_t seed = 0, int repeats = 3) {
  const std::size_t dim = n.ambient_dim;
  const OperatorAlgebra z = centre(n);
  const auto herm = detail::hermitian_spanning_set(z.basis.basis);

  std::vector<Matrix> family = {Matrix::identity(dim)};
  for (int rep = 0; rep < std::max(1, repeats); ++rep) {
    Rng rng(seed + 1000003ULL * static_cast<std::uint64_t>(rep));
    std::vector<Matrix> draw;
    std::string last_error;
    for (int attempt = 0; attempt < 5 && draw.empty(); ++attempt) {
      Matrix x = Matrix::zero(dim, dim);
      for (const Matrix& h : herm) x += rng.gaussian() * h;
      if (hs_norm(x) < 1e-12) {
        draw = {Matrix::identity(dim)};
        break;
      }
      x *= 1.0 / hs_norm(x);
      try {
        draw = detail::spectral_projectors(hermitian_eig(x, 1e-7));
      } catch (const NumericalError& e) {
        last_error = e.what();
      }
    }
    if (draw.empty()) throw NumericalError(last_error.empty() ? "sectors_from_algebra: no usable central draw" : last_error);

    std::vector<Matrix> refined;
    for (const Matrix& p : family)
      for (const Matrix& q : draw) {
        Matrix r = p * q;
        const double t = trace(r).real();
        if (t < 0.5) continue;
        if (std::abs(t - std::round(t)) > 1e-6)
          throw NumericalError("sectors_from_algebra: non-integral projector trace " + std::to_string(t));
        r = 0.5 * (r + adjoint(r));
        if (hs_norm(r * r - r) > 1e-8)
          throw NumericalError("sectors_from_algebra: refinement product is not a projector");
        refined.push_back(r);
      }
    family = std::move(refined);
  }

  std::sort(family.begin(), family.end(), [](const Matrix& a, const Matrix& b) {
    const double ta = trace(a).real(), tb = trace(b).real();
    if (std::abs(ta - tb) > 0.5) return ta > tb;
    return detail::first_support_index(a) < detail::first_support_index(b);
  });

  detail::validate_projector_family(family, dim, 1e-9);
  // observables must act block-diagonally across the family
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = 0; j < family.size(); ++j) {
      if (i == j) continue;
      for (const Matrix& b : n.basis.basis)
        if (hs_norm(family[i] * b * family[j]) > 1e-8)
          throw NumericalError("sectors_from_algebra: observable leaks across candidate sectors");
    }

  SectorDecomposition d;
  d.ambient_dim = dim;
  d.projectors = std::move(family);
  std::size_t total = 0;
  for (const Matrix& p : d.projectors) {
    const auto t = static_cast<std::size_t>(std::llround(trace(p).real()));
    d.sector_dims.push_back(t);
    total += t;
  }
  if (total != dim) throw NumericalError("sectors_from_algebra: sector dimensions do not sum to n");
  return d;
}

// Wraps user-supplied projectors after validating the family axioms.
inline SectorDecomposition decomposition_from_projectors(std::vector<Matrix> ps, double tol = 1e-9) {
  if (ps.empty()) throw ShapeError("decomposition_from_projectors: empty family");
  const std::size_t n = ps.front().rows();
  for (const Matrix& p : ps)
    if (!p.is_square() || p.rows() != n) throw ShapeError("decomposition_from_projectors: mixed dimensions");
  detail::validate_projector_family(ps, n, tol);
  SectorDecomposition d;
  d.ambient_dim = n;
  for (const Matrix& p : ps) d.sector_dims.push_back(static_cast<std::size_t>(std::llround(trace(p).real())));
  d.projectors = std::move(ps);
  return d;
}

struct DensityMatrix {
  Matrix rho;
};

// Validates Hermiticity, positivity and unit trace before wrapping.
inline DensityMatrix make_density(const Matrix& m, double tol = 1e-10) {
  if (!m.is_square()) throw ShapeError("make_density: matrix not square");
  if (hs_norm(m - adjoint(m)) > tol * std::max(1.0, hs_norm(m)))
    throw NumericalError("make_density: state is not Hermitian");
  if (std::abs(trace(m).real() - 1.0) > 1e-8 || std::abs(trace(m).imag()) > 1e-8)
    throw NumericalError("make_density: trace differs from one");
  const auto eig = hermitian_eig(m, tol);
  if (eig.eigenvalues.front() < -1e-8)
    throw NumericalError("make_density: negative eigenvalue " + std::to_string(eig.eigenvalues.front()));
  return DensityMatrix{m};
}

struct StateReduction {
  std::vector<double> weights;          // lambda_i = Tr(rho P_i), all sectors
  std::vector<std::size_t> support;     // indices with lambda_i > cutoff
  std::vector<Matrix> components;       // P_i rho P_i / lambda_i, per support index
  double coherence_defect = 0.0;        // ||rho - sum_i P_i rho P_i||
};

inline StateReduction reduce_state(const DensityMatrix& rho, const SectorDecomposition& d, double cutoff = 1e-12) {
  if (rho.rho.rows() != d.ambient_dim) throw ShapeError("reduce_state: dimension mismatch");
  StateReduction r;
  Matrix dephased = Matrix::zero(d.ambient_dim, d.ambient_dim);
  for (std::size_t i = 0; i < d.count(); ++i) {
    const Matrix& p = d.projectors[i];
    const Matrix block = p * rho.rho * p;
    const double lam = trace(block).real();
    r.weights.push_back(lam);
    dephased += block;
    if (lam > cutoff) {
      r.support.push_back(i);
      r.components.push_back(block * (1.0 / lam));
    }
  }
  r.coherence_defect = hs_norm(rho.rho - dephased);
  return r;
}

enum class PurityClass { pure_in_sector, mixed_across_sectors, mixed_within_sector, coherent_violation };

inline const char* to_string(PurityClass c) {
  switch (c) {
    case PurityClass::pure_in_sector: return "pure_in_sector";
    case PurityClass::mixed_across_sectors: return "mixed_across_sectors";
    case PurityClass::mixed_within_sector: return "mixed_within_sector";
    case PurityClass::coherent_violation: return "coherent_violation";
  }
  return "?";
}

inline PurityClass classify_purity(const DensityMatrix& rho, const SectorDecomposition& d) {
  const StateReduction r = reduce_state(rho, d, 1e-8);
  if (r.coherence_defect > 1e-8) return PurityClass::coherent_violation;
  const bool pure = hs_norm(rho.rho * rho.rho - rho.rho) <= 1e-8;
  if (pure && r.support.size() == 1) return PurityClass::pure_in_sector;
  return r.support.size() > 1 ? PurityClass::mixed_across_sectors : PurityClass::mixed_within_sector;
}

// sum_i a_i P_i: the classical (superselection) observables.
inline Matrix classical_observable(const SectorDecomposition& d, const std::vector<double>& coefficients) {
  if (coefficients.size() != d.count()) throw ShapeError("classical_observable: one coefficient per sector required");
  Matrix z = Matrix::zero(d.ambient_dim, d.ambient_dim);
  for (std::size_t i = 0; i < d.count(); ++i) z += coefficients[i] * d.projectors[i];
  return z;
}

struct SuperpositionReport {
  std::size_t sector_1 = 0, sector_2 = 0;
  int samples = 0;
  double max_mixture_residual = 0.0;   // |<psi+|A|psi+> - (.<psi1|A|psi1> + <psi2|A|psi2>)/2|
  double max_trace_residual = 0.0;     // |<psi+|A|psi+> - Tr(rho A)|
  cplx witness_element;                // <psi1|W|psi2> for W = |psi1><psi2| + h.c.
  double witness_outside_algebra = 0.0;  // HS distance of W from span(N)
  bool pass = false;
};

// For sector-supported unit vectors psi1, psi2 in distinct sectors, checks
// that every sampled observable of N sees the superposition as the mixture
// rho = (|psi1><psi1| + |psi2><psi2|)/2, and exhibits a self-adjoint
// operator outside N coupling the two sectors.
inline SuperpositionReport superposition_inhibition_report(const Matrix& psi1, const Matrix& psi2,
                                                           const OperatorAlgebra& n, const SectorDecomposition& d,
                                                           int samples = 100, std::uint64_t seed = 0) {
  if (psi1.rows() != d.ambient_dim || psi2.rows() != d.ambient_dim || psi1.cols() != 1 || psi2.cols() != 1)
    throw ShapeError("superposition_inhibition_report: vector shape mismatch");
  if (d.count() < 2) throw std::invalid_argument("superposition_inhibition_report: fewer than two sectors");

  auto locate = [&](const Matrix& psi) -> std::size_t {
    for (std::size_t i = 0; i < d.count(); ++i)
      if (hs_norm(d.projectors[i] * psi - psi) <= 1e-9) return i;
    throw std::invalid_argument("superposition_inhibition_report: vector is not supported in a single sector");
  };
  SuperpositionReport rep;
  rep.sector_1 = locate(normalized(psi1));
  rep.sector_2 = locate(normalized(psi2));
  if (rep.sector_1 == rep.sector_2)
    throw std::invalid_argument("superposition_inhibition_report: vectors lie in the same sector");

  const Matrix v1 = normalized(psi1), v2 = normalized(psi2);
  const Matrix plus = normalized(v1 + v2);
  const Matrix rho = 0.5 * (v1 * adjoint(v1) + v2 * adjoint(v2));

  const auto herm = detail::hermitian_spanning_set(n.basis.basis);
  Rng rng(seed ^ 0x73757065ULL);
  rep.samples = samples;
  for (int s = 0; s < samples; ++s) {
    Matrix a = Matrix::zero(d.ambient_dim, d.ambient_dim);
    for (const Matrix& h : herm) a += rng.gaussian() * h;
    if (hs_norm(a) < 1e-12) continue;
    a *= 1.0 / hs_norm(a);
    const double lhs = hs_inner(plus, a * plus).real();
    const double mix = 0.5 * (hs_inner(v1, a * v1).real() + hs_inner(v2, a * v2).real());
    const double tr = trace(rho * a).real();
    rep.max_mixture_residual = std::max(rep.max_mixture_residual, std::abs(lhs - mix));
    rep.max_trace_residual = std::max(rep.max_trace_residual, std::abs(lhs - tr));
  }

  const Matrix w = v1 * adjoint(v2) + v2 * adjoint(v1);
  rep.witness_element = hs_inner(v1, w * v2);
  rep.witness_outside_algebra = residual_outside(n.basis, w);
  rep.pass = rep.max_mixture_residual <= 1e-9 && rep.max_trace_residual <= 1e-9 &&
             std::abs(std::abs(rep.witness_element) - 1.0) <= 1e-9;
  return rep;
}

struct EinselectionPoint {
  int step = 0;
  double coherence_defect = 0.0;
  std::vector<double> weights;
};

// rho <- (1 - damping) rho + damping * sum_i P_i rho P_i, one step per entry.
// The off-block part decays geometrically while sector weights stay fixed.
inline std::vector<EinselectionPoint> einselection_sim(const DensityMatrix& rho0, const SectorDecomposition& d,
                                                       double damping, int steps) {
  if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("einselection_sim: damping must lie in (0, 1]");
  if (rho0.rho.rows() != d.ambient_dim) throw ShapeError("einselection_sim: dimension mismatch");

  auto dephase = [&](const Matrix& rho) {
    Matrix s = Matrix::zero(d.ambient_dim, d.ambient_dim);
    for (const Matrix& p : d.projectors) s += p * rho * p;
    return s;
  };
  std::vector<EinselectionPoint> traj;
  Matrix rho = rho0.rho;
  for (int k = 0; k <= steps; ++k) {
    EinselectionPoint pt;
    pt.step = k;
    pt.coherence_defect = hs_norm(rho - dephase(rho));
    for (const Matrix& p : d.projectors) pt.weights.push_back(trace(p * rho).real());
    traj.push_back(std::move(pt));
    if (k < steps) rho = (1.0 - damping) * rho + damping * dephase(rho);
  }
  return traj;
}

}  // namespace ssr
