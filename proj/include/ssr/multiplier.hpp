#pragma once

// Multipliers (U(1)-valued 2-cocycles) of finite groups and projective
// unitary representations: cocycle validation, coboundary retwisting, the
// commutator-phase similarity invariant, similarity/triviality decisions
// with explicit coboundary witnesses, and the direct-sum obstruction that
// produces symmetry-induced superselection rules.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "group.hpp"
#include "matrix.hpp"

namespace ssr {

struct Multiplier {
  FiniteGroup group;
  std::vector<std::vector<cplx>> values;  // values[g][h] = omega(g, h), unit modulus

  cplx operator()(std::size_t g, std::size_t h) const { return values[g][h]; }

  static Multiplier trivial(const FiniteGroup& g) {
    Multiplier m;
    m.group = g;
    m.values.assign(g.order, std::vector<cplx>(g.order, cplx(1.0, 0.0)));
    return m;
  }

  static Multiplier from_values(const FiniteGroup& g, std::vector<std::vector<cplx>> vals) {
    if (vals.size() != g.order) throw ShapeError("multiplier: table size mismatch");
    for (const auto& row : vals) {
      if (row.size() != g.order) throw ShapeError("multiplier: table size mismatch");
      for (const cplx& v : row)
        if (std::abs(std::abs(v) - 1.0) > 1e-12)
          throw std::invalid_argument("multiplier: values must have unit modulus");
    }
    Multiplier m;
    m.group = g;
    m.values = std::move(vals);
    return m;
  }
};

struct CocycleReport {
  bool ok = false;
  double worst_residual = 0.0;
  std::array<std::size_t, 3> worst_triple = {0, 0, 0};
};

// omega(g1,g2) omega(g1g2,g3) = omega(g1,g2g3) omega(g2,g3) over all triples.
inline CocycleReport check_cocycle(const Multiplier& m, double tol = 1e-10) {
  CocycleReport rep;
  const auto& g = m.group;
  for (std::size_t a = 0; a < g.order; ++a)
    for (std::size_t b = 0; b < g.order; ++b)
      for (std::size_t c = 0; c < g.order; ++c) {
        const double res = std::abs(m(a, b) * m(g.mul(a, b), c) - m(a, g.mul(b, c)) * m(b, c));
        if (res > rep.worst_residual) {
          rep.worst_residual = res;
          rep.worst_triple = {a, b, c};
        }
      }
  rep.ok = rep.worst_residual <= tol;
  return rep;
}

// omega'(g,h) = alpha(g) alpha(h) / alpha(gh) * omega(g,h).
inline Multiplier retwist(const Multiplier& m, const std::vector<cplx>& alpha) {
  if (alpha.size() != m.group.order) throw ShapeError("retwist: one phase per group element required");
  for (const cplx& a : alpha)
    if (std::abs(std::abs(a) - 1.0) > 1e-12) throw std::invalid_argument("retwist: phases must have unit modulus");
  Multiplier out = m;
  for (std::size_t g = 0; g < m.group.order; ++g)
    for (std::size_t h = 0; h < m.group.order; ++h)
      out.values[g][h] = alpha[g] * alpha[h] / alpha[m.group.mul(g, h)] * m(g, h);
  return out;
}

struct CommutingPhase {
  std::size_t g = 0, h = 0;
  cplx beta;  // omega(g,h) / omega(h,g)
};

// The coboundary factors cancel in omega(g,h)/omega(h,g) whenever g and h
// commute, so this table is a similarity invariant (complete for abelian
// groups, necessary in general).
inline std::vector<CommutingPhase> commutator_phase_invariant(const Multiplier& m) {
  std::vector<CommutingPhase> out;
  for (const auto& [g, h] : m.group.commuting_pairs()) out.push_back({g, h, m(g, h) / m(h, g)});
  return out;
}

enum class SimilarityKind { similar, not_similar, inconclusive };

struct SimilarityVerdict {
  SimilarityKind kind = SimilarityKind::inconclusive;
  std::vector<cplx> alpha;  // explicit coboundary witness when similar
  std::optional<CommutingPhase> witness_pair;  // beta disagreement when not similar
  cplx witness_beta_1, witness_beta_2;
  std::string note;
  std::size_t candidates_checked = 0;
};

enum class SimilarityMethod { invariant, exhaustive };

namespace detail {

inline bool ratio_in_roots_of_unity(const Multiplier& a, const Multiplier& b, std::size_t root_order, double tol) {
  for (std::size_t g = 0; g < a.group.order; ++g)
    for (std::size_t h = 0; h < a.group.order; ++h) {
      const cplx d = a(g, h) / b(g, h);
      bool hit = false;
      for (std::size_t k = 0; k < root_order && !hit; ++k) {
        const double ang = 2.0 * 3.14159265358979323846 * static_cast<double>(k) / static_cast<double>(root_order);
        hit = std::abs(d - cplx(std::cos(ang), std::sin(ang))) <= tol;
      }
      if (!hit) return false;
    }
  return true;
}

// Odometer search over alpha : G -> root_order-th roots of unity.
inline std::optional<std::vector<cplx>> exhaustive_alpha_search(const Multiplier& m1, const Multiplier& m2,
                                                                std::size_t root_order, double tol,
                                                                std::size_t& candidates) {
  const std::size_t n = m1.group.order;
  std::vector<cplx> roots(root_order);
  for (std::size_t k = 0; k < root_order; ++k) {
    const double ang = 2.0 * 3.14159265358979323846 * static_cast<double>(k) / static_cast<double>(root_order);
    roots[k] = cplx(std::cos(ang), std::sin(ang));
  }
  std::vector<std::size_t> idx(n, 0);
  candidates = 0;
  for (;;) {
    ++candidates;
    std::vector<cplx> alpha(n);
    for (std::size_t g = 0; g < n; ++g) alpha[g] = roots[idx[g]];
    bool ok = true;
    for (std::size_t g = 0; g < n && ok; ++g)
      for (std::size_t h = 0; h < n && ok; ++h)
        ok = std::abs(alpha[g] * alpha[h] / alpha[m1.group.mul(g, h)] * m2(g, h) - m1(g, h)) <= tol;
    if (ok) return alpha;
    // increment odometer
    std::size_t pos = 0;
    while (pos < n && ++idx[pos] == root_order) idx[pos++] = 0;
    if (pos == n) return std::nullopt;
  }
}

inline double feasible_candidate_count(std::size_t root_order, std::size_t order) {
  return std::pow(static_cast<double>(root_order), static_cast<double>(order));
}

inline std::vector<std::vector<cplx>> ratio_table(const Multiplier& a, const Multiplier& b) {
  const std::size_t n = a.group.order;
  std::vector<std::vector<cplx>> d(n, std::vector<cplx>(n));
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) d[g][h] = a(g, h) / b(g, h);
  return d;
}

// f(g) = prod_h delta(g, h) has coboundary delta^|G| (the torsion identity
// for 2-cocycles), so beta = f^{1/|G|} strips the continuous part of an
// exact delta and leaves a root-of-unity-valued cocycle for finite search.
inline std::vector<cplx> torsion_primitive(const FiniteGroup& g, const std::vector<std::vector<cplx>>& delta) {
  std::vector<cplx> beta(g.order);
  for (std::size_t a = 0; a < g.order; ++a) {
    cplx f(1.0, 0.0);
    for (std::size_t h = 0; h < g.order; ++h) f *= delta[a][h];
    beta[a] = std::polar(1.0, std::arg(f) / static_cast<double>(g.order));
  }
  return beta;
}

}  // namespace detail

// Decides whether omega1 = coboundary(alpha) * omega2 for some phase
// function alpha; a returned alpha always satisfies that equation to 1e-9.
// A disagreement of the commutator-phase invariant is conclusive for
// not_similar. Witness recovery splits the ratio into a torsion primitive
// (continuous part) times a root-of-unity-valued cocycle that an
// exhaustive search trivializes; an undecided case stays inconclusive
// rather than guessing. root_order = 0 picks the default 2|G|.
inline SimilarityVerdict is_similar(const Multiplier& m1, const Multiplier& m2,
                                    SimilarityMethod method = SimilarityMethod::invariant,
                                    std::size_t root_order = 0) {
  if (!m1.group.same_as(m2.group)) throw std::invalid_argument("is_similar: multipliers live on different groups");
  const FiniteGroup& grp = m1.group;
  if (root_order == 0) root_order = 2 * grp.order;

  SimilarityVerdict v;
  const auto b1 = commutator_phase_invariant(m1);
  const auto b2 = commutator_phase_invariant(m2);
  bool invariant_mismatch = false;
  for (std::size_t i = 0; i < b1.size() && !invariant_mismatch; ++i)
    if (std::abs(b1[i].beta - b2[i].beta) > 1e-9) {
      invariant_mismatch = true;
      v.witness_pair = b1[i];
      v.witness_beta_1 = b1[i].beta;
      v.witness_beta_2 = b2[i].beta;
    }

  auto verified = [&](const std::vector<cplx>& alpha) {
    double worst = 0.0;
    for (std::size_t g = 0; g < grp.order; ++g)
      for (std::size_t h = 0; h < grp.order; ++h)
        worst = std::max(worst, std::abs(alpha[g] * alpha[h] / alpha[grp.mul(g, h)] * m2(g, h) - m1(g, h)));
    return worst <= 1e-9;
  };

  if (method == SimilarityMethod::exhaustive) {
    if (!detail::ratio_in_roots_of_unity(m1, m2, root_order, 1e-9))
      throw std::invalid_argument(
          "is_similar: exhaustive search requires omega1/omega2 valued in the chosen roots of unity");
    if (detail::feasible_candidate_count(root_order, grp.order) > 1e7) {
      v.kind = SimilarityKind::inconclusive;
      v.note = "candidate space exceeds the exhaustive-search budget";
      return v;
    }
    const auto alpha = detail::exhaustive_alpha_search(m1, m2, root_order, 1e-9, v.candidates_checked);
    if (alpha && verified(*alpha)) {
      v.kind = SimilarityKind::similar;
      v.alpha = *alpha;
      v.note = "explicit coboundary found by exhaustive search";
    } else {
      v.kind = SimilarityKind::not_similar;
      v.note = invariant_mismatch ? "exhaustive search exhausted; commutator-phase invariant also differs"
                                  : "exhaustive search over all root-of-unity coboundaries found none";
    }
    return v;
  }

  if (invariant_mismatch) {
    v.kind = SimilarityKind::not_similar;
    v.note = "commutator-phase invariant differs on a commuting pair";
    return v;
  }

  // torsion reduction: delta = beta-coboundary * chi with chi valued in
  // |G|-th roots of unity whenever delta is exact
  const auto delta = detail::ratio_table(m1, m2);
  const auto beta = detail::torsion_primitive(grp, delta);
  Multiplier chi = m1;
  for (std::size_t g = 0; g < grp.order; ++g)
    for (std::size_t h = 0; h < grp.order; ++h) {
      cplx c = delta[g][h] * beta[grp.mul(g, h)] / (beta[g] * beta[h]);
      chi.values[g][h] = c / std::abs(c);
    }
  const auto trivial = Multiplier::trivial(grp);
  if (detail::ratio_in_roots_of_unity(chi, trivial, root_order, 1e-9) &&
      detail::feasible_candidate_count(root_order, grp.order) <= 1e7) {
    const auto alpha_root = detail::exhaustive_alpha_search(chi, trivial, root_order, 1e-9, v.candidates_checked);
    if (alpha_root) {
      std::vector<cplx> alpha(grp.order);
      for (std::size_t g = 0; g < grp.order; ++g) alpha[g] = beta[g] * (*alpha_root)[g];
      if (verified(alpha)) {
        v.kind = SimilarityKind::similar;
        v.alpha = std::move(alpha);
        v.note = "explicit coboundary recovered via torsion reduction";
        return v;
      }
    }
  }

  v.kind = SimilarityKind::inconclusive;
  v.note = grp.is_abelian()
               ? "invariants agree (complete for abelian groups) but no coboundary recovered at this root order"
               : "invariants agree; incomplete for nonabelian groups";
  return v;
}

inline SimilarityVerdict is_trivial(const Multiplier& m, SimilarityMethod method = SimilarityMethod::invariant,
                                    std::size_t root_order = 0) {
  return is_similar(m, Multiplier::trivial(m.group), method, root_order);
}

struct ProjectiveRep {
  FiniteGroup group;
  std::size_t dim = 0;
  std::vector<Matrix> unitaries;  // one per group element

  static ProjectiveRep from_unitaries(const FiniteGroup& g, std::vector<Matrix> us, double tol = 1e-10) {
    if (us.size() != g.order) throw ShapeError("projective rep: one unitary per group element required");
    const std::size_t d = us.front().rows();
    for (const Matrix& u : us) {
      if (!u.is_square() || u.rows() != d) throw ShapeError("projective rep: mixed dimensions");
      if (hs_norm(adjoint(u) * u - Matrix::identity(d)) > tol)
        throw std::invalid_argument("projective rep: element is not unitary");
    }
    ProjectiveRep r;
    r.group = g;
    r.dim = d;
    r.unitaries = std::move(us);
    return r;
  }
};

// omega(g,h) = Tr(U(g) U(h) U(gh)^dagger) / dim, renormalized to unit
// modulus; rejects input whose products are not scalar multiples of U(gh).
inline Multiplier extract_multiplier(const ProjectiveRep& rep, double tol = 1e-9) {
  const auto& g = rep.group;
  std::vector<std::vector<cplx>> vals(g.order, std::vector<cplx>(g.order));
  for (std::size_t a = 0; a < g.order; ++a)
    for (std::size_t b = 0; b < g.order; ++b) {
      const Matrix prod = rep.unitaries[a] * rep.unitaries[b] * adjoint(rep.unitaries[g.mul(a, b)]);
      cplx w = trace(prod) / static_cast<double>(rep.dim);
      if (std::abs(w) < 0.5) throw std::invalid_argument("extract_multiplier: input is not projective (vanishing scalar part)");
      w /= std::abs(w);
      if (hs_norm(prod - w * Matrix::identity(rep.dim)) > tol * std::sqrt(static_cast<double>(rep.dim)))
        throw std::invalid_argument("extract_multiplier: non-scalar defect beyond tolerance");
      vals[a][b] = w;
    }
  return Multiplier::from_values(g, std::move(vals));
}

enum class ObstructionKind { combinable, obstructed, inconclusive };

struct ObstructionVerdict {
  ObstructionKind kind = ObstructionKind::inconclusive;
  SimilarityVerdict similarity;
  std::optional<ProjectiveRep> joint;   // block rep diag(U1, alpha U2) when combinable
  double joint_defect = 0.0;            // worst non-scalar defect of the joint rep
  double naive_defect = 0.0;            // worst non-scalar defect of diag(U1, U2) when obstructed
};

namespace detail {
inline double nonscalar_defect(const Matrix& m) {
  const cplx s = trace(m) / static_cast<double>(m.rows());
  return hs_norm(m - s * Matrix::identity(m.rows()));
}
}  // namespace detail

// Two projective representations extend to the direct sum iff their
// multipliers are similar; a similarity witness alpha twists the second
// block into matching phases, a beta disagreement obstructs any extension.
inline ObstructionVerdict direct_sum_obstruction(const ProjectiveRep& r1, const ProjectiveRep& r2,
                                                 std::size_t root_order = 0) {
  if (!r1.group.same_as(r2.group)) throw std::invalid_argument("direct_sum_obstruction: different groups");
  const auto w1 = extract_multiplier(r1);
  const auto w2 = extract_multiplier(r2);

  ObstructionVerdict v;
  v.similarity = is_similar(w1, w2, SimilarityMethod::invariant, root_order);

  const auto& g = r1.group;
  if (v.similarity.kind == SimilarityKind::similar) {
    std::vector<Matrix> joint;
    for (std::size_t i = 0; i < g.order; ++i)
      joint.push_back(direct_sum({r1.unitaries[i], v.similarity.alpha[i] * r2.unitaries[i]}));
    v.joint = ProjectiveRep::from_unitaries(g, std::move(joint));
    const auto wj = extract_multiplier(*v.joint);  // validates scalar defects
    for (std::size_t a = 0; a < g.order; ++a)
      for (std::size_t b = 0; b < g.order; ++b)
        v.joint_defect = std::max(v.joint_defect, std::abs(wj(a, b) - w1(a, b)));
    v.kind = ObstructionKind::combinable;
    return v;
  }
  if (v.similarity.kind == SimilarityKind::not_similar) {
    for (std::size_t a = 0; a < g.order; ++a)
      for (std::size_t b = 0; b < g.order; ++b) {
        const Matrix ua = direct_sum({r1.unitaries[a], r2.unitaries[a]});
        const Matrix ub = direct_sum({r1.unitaries[b], r2.unitaries[b]});
        const Matrix uab = direct_sum({r1.unitaries[g.mul(a, b)], r2.unitaries[g.mul(a, b)]});
        v.naive_defect = std::max(v.naive_defect, detail::nonscalar_defect(ua * ub * adjoint(uab)));
      }
    v.kind = ObstructionKind::obstructed;
    return v;
  }
  return v;
}

struct CatalogEntry {
  std::string name;
  std::string description;
  FiniteGroup group;
  Multiplier multiplier;
  std::optional<ProjectiveRep> rep;
};

// Built-in corpus: the Klein four-group with trivial multiplier and a
// one-dimensional representation, the same group with the Pauli multiplier
// and its two-dimensional projective representation (the finite shadow of
// the integer/half-integer spin dichotomy), and cyclic groups where every
// cocycle trivializes.
inline std::vector<CatalogEntry> builtin_examples() {
  std::vector<CatalogEntry> cat;

  const FiniteGroup klein = FiniteGroup::klein_four();
  {
    CatalogEntry e;
    e.name = "klein_trivial_1d";
    e.description = "Klein four-group, trivial multiplier, 1-dim character";
    e.group = klein;
    e.multiplier = Multiplier::trivial(klein);
    std::vector<Matrix> us = {Matrix::from_rows({{1}}), Matrix::from_rows({{1}}), Matrix::from_rows({{-1}}),
                              Matrix::from_rows({{-1}})};
    e.rep = ProjectiveRep::from_unitaries(klein, std::move(us));
    cat.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    e.name = "klein_pauli_2d";
    e.description = "Klein four-group with the Pauli multiplier and its 2-dim projective rep";
    e.group = klein;
    std::vector<Matrix> us = {Matrix::identity(2), pauli_x(), pauli_z(), pauli_x() * pauli_z()};
    e.rep = ProjectiveRep::from_unitaries(klein, std::move(us));
    e.multiplier = extract_multiplier(*e.rep);
    cat.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    const FiniteGroup z3 = FiniteGroup::cyclic(3);
    e.name = "cyclic3_trivial_1d";
    e.description = "Z_3, trivial second cohomology: every cocycle is a coboundary";
    e.group = z3;
    e.multiplier = Multiplier::trivial(z3);
    const cplx w = std::polar(1.0, 2.0 * 3.14159265358979323846 / 3.0);
    std::vector<Matrix> us;
    for (std::size_t k = 0; k < 3; ++k) us.push_back(Matrix::from_rows({{std::pow(w, static_cast<double>(k))}}));
    e.rep = ProjectiveRep::from_unitaries(z3, std::move(us));
    cat.push_back(std::move(e));
  }
  {
    CatalogEntry e;
    const FiniteGroup z4 = FiniteGroup::cyclic(4);
    e.name = "cyclic4_trivial_1d";
    e.description = "Z_4, trivial second cohomology: every cocycle is a coboundary";
    e.group = z4;
    e.multiplier = Multiplier::trivial(z4);
    std::vector<Matrix> us;
    for (std::size_t k = 0; k < 4; ++k) us.push_back(Matrix::from_rows({{std::pow(cplx(0, 1), static_cast<double>(k))}}));
    e.rep = ProjectiveRep::from_unitaries(z4, std::move(us));
    cat.push_back(std::move(e));
  }
  return cat;
}

}  // namespace ssr
