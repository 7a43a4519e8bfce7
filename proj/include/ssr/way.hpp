#pragma once

// Conserved additive charges Q = Q_S (x) 1 + 1 (x) Q_A: persistence of the
// induced superselection constraint under composition, reduction and
// conserving evolution, plus the Wigner-Araki-Yanase obstruction for exact
// von Neumann measurements. Tensor order is system first, apparatus second.

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eig.hpp"
#include "rng.hpp"
#include "sectors.hpp"

namespace ssr {

struct AdditiveCharge {
  std::size_t dim_s = 0, dim_a = 0;
  Matrix q_s, q_a, q_total;
};

inline AdditiveCharge compose_charge(const Matrix& q_s, const Matrix& q_a, double herm_tol = 1e-10) {
  if (!q_s.is_square() || !q_a.is_square()) throw ShapeError("compose_charge: charges must be square");
  if (hs_norm(q_s - adjoint(q_s)) > herm_tol * std::max(1.0, hs_norm(q_s)) ||
      hs_norm(q_a - adjoint(q_a)) > herm_tol * std::max(1.0, hs_norm(q_a)))
    throw std::invalid_argument("compose_charge: charges must be Hermitian");
  AdditiveCharge c;
  c.dim_s = q_s.rows();
  c.dim_a = q_a.rows();
  c.q_s = q_s;
  c.q_a = q_a;
  c.q_total = kron(q_s, Matrix::identity(c.dim_a)) + kron(Matrix::identity(c.dim_s), q_a);
  return c;
}

struct PersistenceReport {
  bool precondition_ok = false;
  bool pass = false;
  double input_defect_1 = 0.0;   // commutator norm of the first precondition
  double input_defect_2 = 0.0;   // and of the second, when there is one
  double output_defect = 0.0;    // commutator norm the statement bounds
  double bound = 0.0;            // c * tol actually used
  std::string note;
};

namespace detail {
inline double persistence_constant(std::size_t total_dim) { return 10.0 * static_cast<double>(total_dim); }
}

// [rho1, Q_S] ~ 0 and [rho2, Q_A] ~ 0 imply [rho1 (x) rho2, Q] ~ 0.
inline PersistenceReport persistence_under_composition(const DensityMatrix& rho1, const DensityMatrix& rho2,
                                                       const AdditiveCharge& charge, double tol = 1e-9) {
  if (rho1.rho.rows() != charge.dim_s || rho2.rho.rows() != charge.dim_a)
    throw ShapeError("persistence_under_composition: dimension mismatch");
  PersistenceReport r;
  r.input_defect_1 = hs_norm(commutator(rho1.rho, charge.q_s));
  r.input_defect_2 = hs_norm(commutator(rho2.rho, charge.q_a));
  r.precondition_ok = r.input_defect_1 <= tol && r.input_defect_2 <= tol;
  r.output_defect = hs_norm(commutator(kron(rho1.rho, rho2.rho), charge.q_total));
  r.bound = detail::persistence_constant(charge.dim_s * charge.dim_a) * tol;
  r.pass = r.precondition_ok && r.output_defect <= r.bound;
  if (!r.precondition_ok) r.note = "inputs do not commute with their charges; diagnostic only";
  return r;
}

// [rho, Q] ~ 0 implies both reduced states commute with their local charges.
inline PersistenceReport persistence_under_reduction(const DensityMatrix& rho, const AdditiveCharge& charge,
                                                     double tol = 1e-9) {
  if (rho.rho.rows() != charge.dim_s * charge.dim_a) throw ShapeError("persistence_under_reduction: dimension mismatch");
  PersistenceReport r;
  r.input_defect_1 = hs_norm(commutator(rho.rho, charge.q_total));
  r.precondition_ok = r.input_defect_1 <= tol;
  const Matrix rho_s = partial_trace(rho.rho, charge.dim_s, charge.dim_a, 2);
  const Matrix rho_a = partial_trace(rho.rho, charge.dim_s, charge.dim_a, 1);
  r.output_defect = std::max(hs_norm(commutator(rho_s, charge.q_s)), hs_norm(commutator(rho_a, charge.q_a)));
  r.bound = detail::persistence_constant(charge.dim_s * charge.dim_a) * tol;
  r.pass = r.precondition_ok && r.output_defect <= r.bound;
  if (!r.precondition_ok) r.note = "state does not commute with the total charge; diagnostic only";
  return r;
}

// Conserving evolution keeps the constraint: rho(t) = e^{-iHt} rho e^{iHt}.
// A Hamiltonian that fails to conserve Q is rejected outright.
inline PersistenceReport persistence_under_evolution(const DensityMatrix& rho, const Matrix& h,
                                                     const AdditiveCharge& charge, double t, double tol = 1e-9) {
  if (rho.rho.rows() != charge.dim_s * charge.dim_a || h.rows() != rho.rho.rows() || !h.is_square())
    throw ShapeError("persistence_under_evolution: dimension mismatch");
  const double h_defect = hs_norm(commutator(h, charge.q_total));
  if (h_defect > tol) {
    std::ostringstream os;
    os << "persistence_under_evolution: Hamiltonian does not conserve the charge, ||[H,Q]|| = " << h_defect;
    throw std::invalid_argument(os.str());
  }
  PersistenceReport r;
  r.input_defect_1 = hs_norm(commutator(rho.rho, charge.q_total));
  r.input_defect_2 = h_defect;
  r.precondition_ok = r.input_defect_1 <= tol;
  const Matrix u = evolution_unitary(h, t);
  const Matrix evolved = u * rho.rho * adjoint(u);
  r.output_defect = hs_norm(commutator(evolved, charge.q_total));
  r.bound = detail::persistence_constant(charge.dim_s * charge.dim_a) * tol;
  r.pass = r.precondition_ok && r.output_defect <= r.bound;
  if (!r.precondition_ok) r.note = "state does not commute with the total charge; diagnostic only";
  return r;
}

// ||[P, Q_S]||_HS; zero means no obstruction to an exact measurement of P.
inline double way_obstruction(const Matrix& p, const Matrix& q_s) {
  if (!p.is_square() || !q_s.is_square() || p.rows() != q_s.rows())
    throw ShapeError("way_obstruction: dimension mismatch");
  return hs_norm(commutator(p, q_s));
}

struct MeasurementModel {
  Matrix observable;                  // P, Hermitian on the system
  std::vector<Matrix> system_states;  // orthonormal eigenstates |s_n>
  std::vector<double> eigenvalues;    // p_n
  std::vector<Matrix> pointer_states; // |a_n>
  Matrix neutral_pointer;             // |a_0>
  Matrix u;                           // unitary on system (x) apparatus
};

// Checks the structural invariants: U unitary, the measurement relation
// U(|s_n>|a_0>) = |s_n>|a_n>, eigenstate property, normalization.
inline void validate_measurement_model(const MeasurementModel& m, double tol = 1e-9) {
  const std::size_t ds = m.observable.rows();
  if (!m.observable.is_square()) throw ShapeError("measurement model: observable not square");
  if (m.system_states.empty() || m.system_states.size() != m.pointer_states.size() ||
      m.system_states.size() != m.eigenvalues.size())
    throw ShapeError("measurement model: state/eigenvalue list sizes disagree");
  const std::size_t da = m.neutral_pointer.rows();
  if (m.u.rows() != ds * da || !m.u.is_square()) throw ShapeError("measurement model: evolution dimension mismatch");

  for (std::size_t i = 0; i < m.system_states.size(); ++i) {
    if (m.system_states[i].rows() != ds || m.system_states[i].cols() != 1)
      throw ShapeError("measurement model: system state shape");
    if (m.pointer_states[i].rows() != da || m.pointer_states[i].cols() != 1)
      throw ShapeError("measurement model: pointer state shape");
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(hs_inner(m.system_states[j], m.system_states[i])) > tol)
        throw std::invalid_argument("measurement model: system states are not orthonormal");
    if (std::abs(hs_norm(m.system_states[i]) - 1.0) > tol || std::abs(hs_norm(m.pointer_states[i]) - 1.0) > tol)
      throw std::invalid_argument("measurement model: states must be unit vectors");
    if (hs_norm(m.observable * m.system_states[i] - m.eigenvalues[i] * m.system_states[i]) > tol)
      throw std::invalid_argument("measurement model: |s_n> is not a P-eigenstate at the stated eigenvalue");
  }
  if (std::abs(hs_norm(m.neutral_pointer) - 1.0) > tol)
    throw std::invalid_argument("measurement model: neutral pointer must be a unit vector");
  if (hs_norm(adjoint(m.u) * m.u - Matrix::identity(ds * da)) > tol)
    throw std::invalid_argument("measurement model: U is not unitary");
  for (std::size_t i = 0; i < m.system_states.size(); ++i) {
    const Matrix lhs = m.u * kron(m.system_states[i], m.neutral_pointer);
    const Matrix rhs = kron(m.system_states[i], m.pointer_states[i]);
    if (hs_norm(lhs - rhs) > tol)
      throw std::invalid_argument("measurement model: measurement relation violated for outcome " + std::to_string(i));
  }
}

enum class CompletionStrategy { gram_schmidt, conserving };

struct BuiltUnitary {
  Matrix u;
  double relation_residual = 0.0;     // worst Eq-13-style defect
  double unitarity_defect = 0.0;
  double feasibility_defect = 0.0;    // conserving strategy: Gram mismatch across charge blocks
  double conservation_defect = 0.0;   // ||[U, Q]|| of the result
  bool feasible = true;
};

namespace detail {

// Orthonormal completion of `have` inside the span of `columns` (Gram-
// Schmidt over the given order).
inline std::vector<Matrix> complete_within(std::vector<Matrix> have, const std::vector<Matrix>& columns,
                                           std::size_t target) {
  for (const Matrix& c : columns) {
    if (have.size() == target) break;
    Matrix r = c;
    for (int pass = 0; pass < 2; ++pass)
      for (const Matrix& u : have) r -= hs_inner(u, r) * u;
    if (hs_norm(r) > 1e-10) have.push_back(normalized(r));
  }
  if (have.size() != target) throw NumericalError("unitary completion: could not complete an orthonormal set");
  return have;
}

inline std::vector<Matrix> standard_columns(std::size_t n) {
  std::vector<Matrix> cols;
  cols.reserve(n);
  for (std::size_t j = 0; j < n; ++j) cols.push_back(Matrix::unit(n, 1, j, 0));
  return cols;
}

// Isometry sending the columns of d to the columns of t, defined on
// span(d) and completed inside C^k; requires Gram(d) = Gram(t).
inline Matrix isometry_between_families(const Matrix& d, const Matrix& t, std::size_t k) {
  const auto svd = jacobi_svd(d);
  const double smax = svd.singular_values.empty() ? 0.0 : svd.singular_values.front();
  const double cut = 1e-10 * std::max(smax, 1.0);
  std::vector<Matrix> dom, img;
  for (std::size_t j = 0; j < svd.singular_values.size(); ++j) {
    if (svd.singular_values[j] <= cut) continue;
    // when the Gram matrices disagree (infeasible block) the image may
    // collapse; leave such directions to the completion
    const Matrix w = t * col(svd.right, j) * (1.0 / svd.singular_values[j]);
    if (hs_norm(w) <= 1e-8) continue;
    dom.push_back(col(svd.left, j));
    img.push_back(normalized(w));
  }
  dom = complete_within(dom, standard_columns(k), k);
  img = complete_within(img, standard_columns(k), k);
  Matrix w = Matrix::zero(k, k);
  for (std::size_t j = 0; j < k; ++j) w += img[j] * adjoint(dom[j]);
  return w;
}

}  // namespace detail

// Extends the partial isometry |s_n>|a_0> -> |s_n>|a_n> to a unitary.
// gram_schmidt: deterministic completion over the standard basis order.
// conserving: block completion inside each eigenspace of Q, which succeeds
// exactly when the projected Gram matrices of domain and image slices agree
// per charge eigenspace; the worst Gram mismatch is reported as the
// feasibility defect.
inline BuiltUnitary build_measurement_unitary(const std::vector<Matrix>& system_states,
                                              const std::vector<Matrix>& pointer_states,
                                              const Matrix& neutral_pointer,
                                              CompletionStrategy strategy = CompletionStrategy::gram_schmidt,
                                              const AdditiveCharge* charge = nullptr) {
  if (system_states.empty() || system_states.size() != pointer_states.size())
    throw ShapeError("build_measurement_unitary: state list sizes disagree");
  const std::size_t ds = system_states.front().rows();
  const std::size_t da = neutral_pointer.rows();
  const std::size_t n = ds * da;

  std::vector<Matrix> dom, img;
  for (std::size_t i = 0; i < system_states.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(hs_inner(system_states[j], system_states[i])) > 1e-9)
        throw std::invalid_argument("build_measurement_unitary: system states must be orthonormal");
    if (std::abs(hs_norm(pointer_states[i]) - 1.0) > 1e-9 || std::abs(hs_norm(system_states[i]) - 1.0) > 1e-9)
      throw std::invalid_argument("build_measurement_unitary: states must be unit vectors");
    dom.push_back(kron(system_states[i], neutral_pointer));
    img.push_back(kron(system_states[i], pointer_states[i]));
  }
  // the image family inherits orthonormality from the system states
  for (std::size_t i = 0; i < img.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(hs_inner(img[j], img[i])) > 1e-9)
        throw std::invalid_argument("build_measurement_unitary: dependent image vectors");

  BuiltUnitary out;
  if (strategy == CompletionStrategy::gram_schmidt) {
    const auto dom_full = detail::complete_within(dom, detail::standard_columns(n), n);
    const auto img_full = detail::complete_within(img, detail::standard_columns(n), n);
    Matrix u = Matrix::zero(n, n);
    for (std::size_t j = 0; j < n; ++j) u += img_full[j] * adjoint(dom_full[j]);
    out.u = std::move(u);
  } else {
    if (charge == nullptr) throw std::invalid_argument("build_measurement_unitary: conserving strategy needs a charge");
    if (charge->q_total.rows() != n) throw ShapeError("build_measurement_unitary: charge dimension mismatch");
    const auto eig = hermitian_eig(charge->q_total, 1e-8);

    // group eigenvectors into charge eigenspaces
    std::vector<std::pair<std::size_t, std::size_t>> blocks;  // [begin, end)
    const double spread = eig.eigenvalues.back() - eig.eigenvalues.front();
    const double gap_thr = 1e-7 * std::max(1.0, spread);
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= eig.eigenvalues.size(); ++i) {
      if (i == eig.eigenvalues.size() || eig.eigenvalues[i] - eig.eigenvalues[i - 1] > gap_thr) {
        blocks.emplace_back(begin, i);
        begin = i;
      }
    }

    Matrix u = Matrix::zero(n, n);
    for (const auto& [b, e] : blocks) {
      const std::size_t k = e - b;
      Matrix basis(n, k);
      for (std::size_t j = 0; j < k; ++j) set_col(basis, j, col(eig.vectors, b + j));
      Matrix d_loc(k, dom.size()), m_loc(k, dom.size());
      for (std::size_t c = 0; c < dom.size(); ++c) {
        const Matrix dc = adjoint(basis) * dom[c];
        const Matrix mc = adjoint(basis) * img[c];
        set_col(d_loc, c, dc);
        set_col(m_loc, c, mc);
      }
      out.feasibility_defect =
          std::max(out.feasibility_defect, hs_norm(adjoint(d_loc) * d_loc - adjoint(m_loc) * m_loc));
      const Matrix w = detail::isometry_between_families(d_loc, m_loc, k);
      u += basis * w * adjoint(basis);
    }
    out.feasible = out.feasibility_defect <= 1e-9;
    out.u = std::move(u);
    out.conservation_defect = hs_norm(commutator(out.u, charge->q_total));
  }

  out.unitarity_defect = hs_norm(adjoint(out.u) * out.u - Matrix::identity(n));
  for (std::size_t i = 0; i < dom.size(); ++i)
    out.relation_residual = std::max(out.relation_residual, hs_norm(out.u * dom[i] - img[i]));
  return out;
}

struct WayPairCheck {
  std::size_t n = 0, m = 0;
  double eigenvalue_gap = 0.0;
  double pointer_overlap = 0.0;  // |<a_n|a_m>|
  cplx chain[4] = {};            // the four expressions of the proof chain
  double chain_spread = 0.0;     // worst pairwise disagreement
  cplx charge_element;           // <s_n|Q_S|s_m>
  bool constrained = false;      // p_n != p_m and overlap < 1 - 1e-6
};

struct WayReport {
  double conservation_defect = 0.0;  // ||[U, Q]||
  std::vector<WayPairCheck> pairs;
  bool chain_consistent = false;
  bool qs_block_diagonal = false;    // all constrained charge elements vanish
  double max_constrained_element = 0.0;
  double obstruction_norm = 0.0;     // ||[P, Q_S]|| cross-check
  bool cross_check_agrees = false;
  bool vacuous = false;              // zero charge
};

// Evaluates the four expressions of the measurement-theorem chain
//   (p_n - p_m) <s_n a_0| Q |s_m a_0>
//   (p_n - p_m) <s_n a_0| U^dagger Q U |s_m a_0>
//   (p_n - p_m) <s_n a_n| Q |s_m a_m>
//   <a_n|a_m> (p_n - p_m) <s_n| Q_S |s_m>
// for every outcome pair, reports their mutual agreement, and draws the
// conclusion: distinct eigenvalues with non-parallel pointers force the
// off-diagonal charge elements to vanish.
inline WayReport verify_way_theorem(const MeasurementModel& model, const AdditiveCharge& charge, double tol = 1e-9) {
  validate_measurement_model(model);
  if (charge.dim_s != model.observable.rows() || charge.dim_a != model.neutral_pointer.rows())
    throw ShapeError("verify_way_theorem: charge dimensions do not match the model");

  WayReport rep;
  rep.conservation_defect = hs_norm(commutator(model.u, charge.q_total));
  if (rep.conservation_defect > tol) {
    std::ostringstream os;
    os << "verify_way_theorem: U does not conserve Q, ||[U,Q]|| = " << rep.conservation_defect;
    throw std::invalid_argument(os.str());
  }
  rep.vacuous = hs_norm(charge.q_total) <= 1e-12;

  const double scale = std::max(1.0, hs_norm(charge.q_total));
  const double c_bound = detail::persistence_constant(charge.dim_s * charge.dim_a) * tol;
  double worst_spread = 0.0;
  bool all_constrained_vanish = true;

  for (std::size_t n = 0; n < model.system_states.size(); ++n)
    for (std::size_t m = 0; m < model.system_states.size(); ++m) {
      if (n == m) continue;
      WayPairCheck pc;
      pc.n = n;
      pc.m = m;
      pc.eigenvalue_gap = model.eigenvalues[n] - model.eigenvalues[m];
      pc.pointer_overlap = std::abs(hs_inner(model.pointer_states[n], model.pointer_states[m]));

      if (std::abs(pc.eigenvalue_gap) > 1e-9 && pc.pointer_overlap >= 1.0 - 1e-12)
        throw std::invalid_argument("verify_way_theorem: parallel pointers for distinct outcomes, not a measurement");

      const Matrix dn = kron(model.system_states[n], model.neutral_pointer);
      const Matrix dm = kron(model.system_states[m], model.neutral_pointer);
      const Matrix in = kron(model.system_states[n], model.pointer_states[n]);
      const Matrix im = kron(model.system_states[m], model.pointer_states[m]);
      const cplx gap = pc.eigenvalue_gap;

      pc.charge_element = hs_inner(model.system_states[n], charge.q_s * model.system_states[m]);
      pc.chain[0] = gap * hs_inner(dn, charge.q_total * dm);
      pc.chain[1] = gap * hs_inner(model.u * dn, charge.q_total * (model.u * dm));
      pc.chain[2] = gap * hs_inner(in, charge.q_total * im);
      pc.chain[3] = hs_inner(model.pointer_states[n], model.pointer_states[m]) * gap * pc.charge_element;
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) pc.chain_spread = std::max(pc.chain_spread, std::abs(pc.chain[i] - pc.chain[j]));
      worst_spread = std::max(worst_spread, pc.chain_spread);

      pc.constrained = std::abs(pc.eigenvalue_gap) > 1e-9 && pc.pointer_overlap < 1.0 - 1e-6;
      if (pc.constrained) {
        rep.max_constrained_element = std::max(rep.max_constrained_element, std::abs(pc.charge_element));
        if (std::abs(pc.charge_element) > c_bound) all_constrained_vanish = false;
      }
      rep.pairs.push_back(std::move(pc));
    }

  rep.chain_consistent = worst_spread <= 1e-8 * scale;
  rep.qs_block_diagonal = all_constrained_vanish;
  rep.obstruction_norm = way_obstruction(model.observable, charge.q_s);

  // the cross-check is exact when the listed eigenstates exhaust the system
  const bool spanning = model.system_states.size() == charge.dim_s;
  if (spanning)
    rep.cross_check_agrees = rep.qs_block_diagonal == (rep.obstruction_norm <= c_bound);
  else
    rep.cross_check_agrees = true;
  return rep;
}

// Reference conserving model: P = Q_S = Q_A = sigma_z, neutral pointer |+>,
// pointer kick U = diag(1,1,-1,1). Conservation and the measurement
// relation hold exactly; the pointers |+>, |-> are orthogonal.
inline MeasurementModel builtin_conserving_model() {
  MeasurementModel m;
  m.observable = pauli_z();
  m.system_states = {Matrix::column({1, 0}), Matrix::column({0, 1})};
  m.eigenvalues = {1.0, -1.0};
  const double r = 1.0 / std::sqrt(2.0);
  m.neutral_pointer = Matrix::column({r, r});
  m.pointer_states = {Matrix::column({r, r}), Matrix::column({-r, r})};
  m.u = Matrix::from_rows({{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, -1, 0}, {0, 0, 0, 1}});
  return m;
}

// Seeded family of conserving measurement models used by the property and
// acceptance suites. U = sum_j Pi_j (x) W_j over the eigenspaces Pi_j of P,
// with one pointer kick per eigenvalue and every W_j commuting with Q_A,
// so [U, Q] = 0 holds by construction while Q_S may act nontrivially
// inside degenerate eigenspaces of P.
inline std::pair<MeasurementModel, AdditiveCharge> random_conserving_model(std::uint64_t seed) {
  Rng rng(seed ^ 0x77617963ULL);
  const std::size_t ds = 2 + rng.index(3);  // 2..4
  const std::size_t da = 2 + rng.index(3);

  // eigenvalues of P with possible repeats, separated by at least 1
  std::vector<double> eigs(ds);
  std::vector<std::size_t> group_of(ds);
  std::size_t groups = 1 + rng.index(ds);
  if (groups < 2) groups = 2;
  std::vector<double> values(groups);
  for (std::size_t g = 0; g < groups; ++g) values[g] = static_cast<double>(g) + 0.5 * rng.uniform();
  for (std::size_t i = 0; i < ds; ++i) {
    group_of[i] = (i < groups) ? i : rng.index(groups);  // every value used at least once
    eigs[i] = values[group_of[i]];
  }

  const Matrix v = rng.unitary(ds);
  std::vector<Matrix> s_states;
  for (std::size_t i = 0; i < ds; ++i) s_states.push_back(col(v, i));

  Matrix p = Matrix::zero(ds, ds);
  for (std::size_t i = 0; i < ds; ++i) p += eigs[i] * (s_states[i] * adjoint(s_states[i]));
  p = 0.5 * (p + adjoint(p));

  // Q_S block-random inside each P-eigenspace (compressions of a random
  // Hermitian), so the WAY conclusion is not imposed entry-by-entry
  const Matrix raw = rng.hermitian(ds);
  Matrix q_s = Matrix::zero(ds, ds);
  for (std::size_t g = 0; g < groups; ++g) {
    Matrix proj = Matrix::zero(ds, ds);
    for (std::size_t i = 0; i < ds; ++i)
      if (group_of[i] == g) proj += s_states[i] * adjoint(s_states[i]);
    q_s += proj * raw * proj;
  }
  q_s = 0.5 * (q_s + adjoint(q_s));

  // Q_A diagonal; pointer kicks W_g = exp(i H_g) with [H_g, Q_A] = 0
  Matrix q_a = Matrix::zero(da, da);
  std::vector<double> qa_vals(da);
  for (std::size_t i = 0; i < da; ++i) {
    qa_vals[i] = (rng.index(3) == 0 && i > 0) ? qa_vals[i - 1] : static_cast<double>(i) + rng.uniform();
    q_a(i, i) = qa_vals[i];
  }

  std::vector<Matrix> kicks(groups);
  for (std::size_t g = 0; g < groups; ++g) {
    Matrix h = rng.hermitian(da);
    // dephase h onto the Q_A eigenspaces so it commutes with Q_A
    Matrix hd = Matrix::zero(da, da);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < da; ++j)
        if (std::abs(qa_vals[i] - qa_vals[j]) < 1e-12) hd(i, j) = h(i, j);
    kicks[g] = evolution_unitary(hd, 1.0);
  }

  MeasurementModel m;
  m.observable = p;
  m.system_states = s_states;
  m.eigenvalues = eigs;
  m.neutral_pointer = rng.unit_vector(da);
  Matrix u = Matrix::zero(ds * da, ds * da);
  for (std::size_t i = 0; i < ds; ++i)
    u += kron(s_states[i] * adjoint(s_states[i]), kicks[group_of[i]]);
  m.u = u;
  for (std::size_t i = 0; i < ds; ++i) m.pointer_states.push_back(kicks[group_of[i]] * m.neutral_pointer);

  return {std::move(m), compose_charge(q_s, q_a)};
}

}  // namespace ssr
