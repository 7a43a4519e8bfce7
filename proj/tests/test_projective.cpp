#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <ssr/eig.hpp>
#include <ssr/multiplier.hpp>
#include <ssr/rng.hpp>

using namespace ssr;

namespace {

Multiplier pauli_klein_multiplier() {
  for (const auto& e : builtin_examples())
    if (e.name == "klein_pauli_2d") return e.multiplier;
  throw std::logic_error("catalog entry missing");
}

ProjectiveRep pauli_klein_rep() {
  for (const auto& e : builtin_examples())
    if (e.name == "klein_pauli_2d") return *e.rep;
  throw std::logic_error("catalog entry missing");
}

std::vector<cplx> random_phases(Rng& rng, std::size_t n) {
  std::vector<cplx> a(n);
  for (auto& v : a) v = std::polar(1.0, 2.0 * 3.14159265358979323846 * rng.uniform());
  return a;
}

}  // namespace

TEST_CASE("group construction: tables validated, factories consistent") {
  const auto z4 = FiniteGroup::cyclic(4);
  CHECK(z4.identity == 0);
  CHECK(z4.inverse[1] == 3);
  CHECK(z4.is_abelian());

  const auto klein = FiniteGroup::klein_four();
  CHECK(klein.order == 4);
  CHECK(klein.is_abelian());
  for (std::size_t g = 0; g < 4; ++g) CHECK(klein.mul(g, g) == klein.identity);

  const auto s3 = FiniteGroup::symmetric3();
  CHECK_FALSE(s3.is_abelian());
  CHECK(s3.commuting_pairs().size() < 15);

  // broken tables are rejected
  CHECK_THROWS_AS(FiniteGroup::from_table({{0, 1}, {1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(FiniteGroup::from_table({{1, 0}, {1, 0}}), std::invalid_argument);
}

TEST_CASE("check_cocycle: trivial, Pauli multiplier, constructed violation") {
  const auto klein = FiniteGroup::klein_four();
  CHECK(check_cocycle(Multiplier::trivial(klein)).ok);

  const auto pk = pauli_klein_multiplier();
  const auto rep = check_cocycle(pk);
  CHECK(rep.ok);
  CHECK(rep.worst_residual == 0.0);  // exact +-1/+-i arithmetic over all 64 triples

  // flip one entry of the trivial multiplier: some triple must fail
  auto broken = Multiplier::trivial(klein);
  broken.values[1][2] = -1.0;
  const auto bad = check_cocycle(broken);
  CHECK_FALSE(bad.ok);
  CHECK(bad.worst_residual > 1.0);
}

TEST_CASE("extract_multiplier: proper rep, Pauli assignment, 1-dim coboundary") {
  for (const auto& e : builtin_examples()) {
    if (!e.rep) continue;
    const auto w = extract_multiplier(*e.rep);
    CHECK(check_cocycle(w).ok);
  }

  const auto pk = pauli_klein_multiplier();
  // omega(a,b)/omega(b,a) = -1 for the anticommuting pair (a=1, b=2)
  CHECK(std::abs(pk(1, 2) / pk(2, 1) - cplx(-1.0, 0.0)) <= 1e-12);

  // a 1-dim rep with arbitrary phases extracts the corresponding coboundary
  const auto z4 = FiniteGroup::cyclic(4);
  Rng rng(12);
  const auto alpha = random_phases(rng, 4);
  std::vector<Matrix> us;
  for (std::size_t k = 0; k < 4; ++k) us.push_back(Matrix::from_rows({{alpha[k]}}));
  const auto w = extract_multiplier(ProjectiveRep::from_unitaries(z4, us));
  for (std::size_t g = 0; g < 4; ++g)
    for (std::size_t h = 0; h < 4; ++h)
      CHECK(std::abs(w(g, h) - alpha[g] * alpha[h] / alpha[z4.mul(g, h)]) <= 1e-12);

  // non-projective input is rejected
  const auto klein = FiniteGroup::klein_four();
  std::vector<Matrix> not_proj = {Matrix::identity(2), pauli_x(), pauli_z(),
                                  evolution_unitary(pauli_y(), 0.3)};
  CHECK_THROWS_AS(extract_multiplier(ProjectiveRep::from_unitaries(klein, not_proj)), std::invalid_argument);
}

TEST_CASE("retwist: identity, coboundary generation, group action") {
  const auto klein = FiniteGroup::klein_four();
  const auto pk = pauli_klein_multiplier();
  Rng rng(31);

  const std::vector<cplx> ones(4, cplx(1.0, 0.0));
  const auto same = retwist(pk, ones);
  for (std::size_t g = 0; g < 4; ++g)
    for (std::size_t h = 0; h < 4; ++h) CHECK(std::abs(same(g, h) - pk(g, h)) <= 1e-12);

  const auto alpha = random_phases(rng, 4);
  const auto cob = retwist(Multiplier::trivial(klein), alpha);
  CHECK(check_cocycle(cob).ok);
  CHECK(is_trivial(cob, SimilarityMethod::invariant, 8).kind != SimilarityKind::not_similar);

  // retwisting by alpha then beta equals retwisting by alpha*beta
  const auto beta = random_phases(rng, 4);
  std::vector<cplx> prod(4);
  for (std::size_t g = 0; g < 4; ++g) prod[g] = alpha[g] * beta[g];
  const auto two_step = retwist(retwist(pk, alpha), beta);
  const auto one_step = retwist(pk, prod);
  for (std::size_t g = 0; g < 4; ++g)
    for (std::size_t h = 0; h < 4; ++h) CHECK(std::abs(two_step(g, h) - one_step(g, h)) <= 1e-12);

  CHECK_THROWS_AS(retwist(pk, std::vector<cplx>(4, cplx(2.0, 0.0))), std::invalid_argument);
}

TEST_CASE("commutator_phase_invariant: trivial, Pauli, coboundary, retwist invariance") {
  const auto klein = FiniteGroup::klein_four();
  const auto pk = pauli_klein_multiplier();

  for (const auto& cp : commutator_phase_invariant(Multiplier::trivial(klein)))
    CHECK(std::abs(cp.beta - cplx(1.0, 0.0)) <= 1e-12);

  bool saw_minus_one = false;
  for (const auto& cp : commutator_phase_invariant(pk))
    if (cp.g == 1 && cp.h == 2) {
      saw_minus_one = true;
      CHECK(std::abs(cp.beta - cplx(-1.0, 0.0)) <= 1e-12);
    }
  CHECK(saw_minus_one);

  Rng rng(8);
  for (int k = 0; k < 50; ++k) {
    const auto alpha = random_phases(rng, 4);
    const auto before = commutator_phase_invariant(pk);
    const auto after = commutator_phase_invariant(retwist(pk, alpha));
    REQUIRE(before.size() == after.size());
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(std::abs(before[i].beta - after[i].beta) <= 1e-10);
  }

  // any coboundary of the trivial multiplier has beta identically one
  const auto cob = retwist(Multiplier::trivial(klein), random_phases(rng, 4));
  for (const auto& cp : commutator_phase_invariant(cob)) CHECK(std::abs(cp.beta - cplx(1.0, 0.0)) <= 1e-12);
}

TEST_CASE("is_similar: recovered witnesses, invariant refutations, exhaustive search") {
  const auto klein = FiniteGroup::klein_four();
  const auto pk = pauli_klein_multiplier();
  Rng rng(77);

  // a multiplier is similar to its own retwist, with a validated witness
  const auto alpha = random_phases(rng, 4);
  const auto twisted = retwist(pk, alpha);
  const auto verdict = is_similar(pk, twisted, SimilarityMethod::invariant, 8);
  REQUIRE(verdict.kind == SimilarityKind::similar);
  const auto rebuilt = retwist(twisted, verdict.alpha);
  for (std::size_t g = 0; g < 4; ++g)
    for (std::size_t h = 0; h < 4; ++h) CHECK(std::abs(rebuilt(g, h) - pk(g, h)) <= 1e-9);

  // trivial vs Pauli: refuted by the beta invariant and by exhaustive search
  const auto not_sim = is_similar(Multiplier::trivial(klein), pk);
  REQUIRE(not_sim.kind == SimilarityKind::not_similar);
  REQUIRE(not_sim.witness_pair.has_value());
  CHECK(std::abs(not_sim.witness_beta_1 - cplx(1.0, 0.0)) <= 1e-12);
  CHECK(std::abs(not_sim.witness_beta_2 - cplx(-1.0, 0.0)) <= 1e-12);

  const auto trivial_verdict = is_trivial(pk, SimilarityMethod::exhaustive, 4);
  CHECK(trivial_verdict.kind == SimilarityKind::not_similar);

  // two coboundaries of the trivial multiplier are similar
  const auto c1 = retwist(Multiplier::trivial(klein), random_phases(rng, 4));
  const auto c2 = retwist(Multiplier::trivial(klein), random_phases(rng, 4));
  CHECK(is_similar(c1, c2, SimilarityMethod::invariant, 0).kind != SimilarityKind::not_similar);

  CHECK_THROWS_AS(is_similar(pk, Multiplier::trivial(FiniteGroup::cyclic(4))), std::invalid_argument);
}

TEST_CASE("is_trivial: catalog verdicts including the exhaustive 256-candidate search") {
  const auto klein = FiniteGroup::klein_four();
  CHECK(is_trivial(Multiplier::trivial(klein)).kind == SimilarityKind::similar);

  const auto pk = pauli_klein_multiplier();
  auto verdict = is_trivial(pk, SimilarityMethod::exhaustive, 4);
  CHECK(verdict.kind == SimilarityKind::not_similar);
  CHECK(verdict.candidates_checked == 256);  // all Z_4-phase assignments on four elements

  // a random Z_4-valued coboundary on the cyclic group trivializes with a
  // recovered witness
  const auto z4 = FiniteGroup::cyclic(4);
  std::vector<cplx> alpha;
  Rng rng(3);
  for (int k = 0; k < 4; ++k) alpha.push_back(std::pow(cplx(0, 1), static_cast<double>(rng.index(4))));
  const auto cob = retwist(Multiplier::trivial(z4), alpha);
  const auto v = is_trivial(cob, SimilarityMethod::exhaustive, 4);
  REQUIRE(v.kind == SimilarityKind::similar);
  // v.alpha twists the trivial multiplier into cob; its conjugate undoes it
  std::vector<cplx> inv;
  for (const cplx& a : v.alpha) inv.push_back(std::conj(a));
  const auto undone = retwist(cob, inv);
  for (std::size_t g = 0; g < 4; ++g)
    for (std::size_t h = 0; h < 4; ++h) CHECK(std::abs(undone(g, h) - cplx(1.0, 0.0)) <= 1e-9);
}

TEST_CASE("is_similar is an equivalence relation on the catalog closure") {
  const auto klein = FiniteGroup::klein_four();
  const auto pk = pauli_klein_multiplier();
  Rng rng(55);
  std::vector<Multiplier> family = {Multiplier::trivial(klein), pk, retwist(pk, random_phases(rng, 4)),
                                    retwist(Multiplier::trivial(klein), random_phases(rng, 4))};
  // reflexive
  for (const auto& m : family) CHECK(is_similar(m, m).kind == SimilarityKind::similar);
  // symmetric and transitive on decided pairs
  for (std::size_t i = 0; i < family.size(); ++i)
    for (std::size_t j = 0; j < family.size(); ++j) {
      const auto vij = is_similar(family[i], family[j]);
      const auto vji = is_similar(family[j], family[i]);
      if (vij.kind == SimilarityKind::similar) CHECK(vji.kind == SimilarityKind::similar);
      if (vij.kind == SimilarityKind::not_similar) CHECK(vji.kind == SimilarityKind::not_similar);
      for (std::size_t k = 0; k < family.size(); ++k) {
        const auto vjk = is_similar(family[j], family[k]);
        const auto vik = is_similar(family[i], family[k]);
        if (vij.kind == SimilarityKind::similar && vjk.kind == SimilarityKind::similar)
          CHECK(vik.kind == SimilarityKind::similar);
      }
    }
}

TEST_CASE("direct_sum_obstruction: self-sum, retwisted copy, univalence shadow") {
  const auto catalog = builtin_examples();
  const ProjectiveRep trivial_1d = *catalog[0].rep;
  const ProjectiveRep pauli_2d = pauli_klein_rep();

  // identical reps combine
  auto self = direct_sum_obstruction(pauli_2d, pauli_2d);
  CHECK(self.kind == ObstructionKind::combinable);
  CHECK(self.joint_defect <= 1e-9);
  REQUIRE(self.joint.has_value());
  CHECK(self.joint->dim == 4);

  // a phase-retwisted copy combines through the recovered coboundary
  Rng rng(21);
  std::vector<Matrix> twisted;
  std::vector<cplx> alpha = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), std::polar(1.0, 0.77)};
  for (std::size_t g = 0; g < 4; ++g) twisted.push_back(alpha[g] * pauli_2d.unitaries[g]);
  const auto twisted_rep = ProjectiveRep::from_unitaries(pauli_2d.group, twisted);
  auto combined = direct_sum_obstruction(pauli_2d, twisted_rep, 16);
  CHECK(combined.kind == ObstructionKind::combinable);
  CHECK(combined.joint_defect <= 1e-8);

  // trivial 1-dim against the Pauli rep: obstructed with a nonzero naive defect
  auto blocked = direct_sum_obstruction(trivial_1d, pauli_2d);
  CHECK(blocked.kind == ObstructionKind::obstructed);
  CHECK(blocked.naive_defect > 0.5);
  REQUIRE(blocked.similarity.witness_pair.has_value());
}

TEST_CASE("builtin_examples: every entry passes its own invariants") {
  const auto catalog = builtin_examples();
  CHECK(catalog.size() >= 3);
  for (const auto& e : catalog) {
    CHECK(check_cocycle(e.multiplier).ok);
    if (e.rep) {
      const auto w = extract_multiplier(*e.rep);
      for (std::size_t g = 0; g < e.group.order; ++g)
        for (std::size_t h = 0; h < e.group.order; ++h) CHECK(std::abs(w(g, h) - e.multiplier(g, h)) <= 1e-9);
    }
    const auto v = is_trivial(e.multiplier);
    if (e.name == "klein_pauli_2d")
      CHECK(v.kind == SimilarityKind::not_similar);
    else
      CHECK(v.kind == SimilarityKind::similar);
  }
}
