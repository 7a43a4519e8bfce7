#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <ssr/eig.hpp>
#include <ssr/matrix.hpp>
#include <ssr/rng.hpp>
#include <ssr/subspace.hpp>

using namespace ssr;

namespace {
const Matrix kSx = pauli_x();
const Matrix kSy = pauli_y();
const Matrix kSz = pauli_z();
}  // namespace

TEST_CASE("adjoint: involution and fixed points") {
  CHECK(hs_norm(adjoint(Matrix::identity(2)) - Matrix::identity(2)) == 0.0);
  const Matrix n = Matrix::from_rows({{0, 1}, {0, 0}});
  CHECK(hs_norm(adjoint(n) - Matrix::from_rows({{0, 0}, {1, 0}})) == 0.0);
  CHECK(hs_norm(adjoint(kSy) - kSy) == 0.0);
  Rng rng(7);
  const Matrix a = rng.gaussian_matrix(3, 5);
  CHECK(hs_norm(adjoint(adjoint(a)) - a) == 0.0);
}

TEST_CASE("hs_inner: frozen 2x2 values and conjugate symmetry") {
  CHECK(hs_inner(Matrix::identity(2), Matrix::identity(2)).real() == doctest::Approx(2.0));
  CHECK(std::abs(hs_inner(kSx, kSz)) == doctest::Approx(0.0));
  CHECK(hs_inner(kSx, kSx).real() == doctest::Approx(2.0));
  Rng rng(11);
  const Matrix a = rng.gaussian_matrix(3, 3), b = rng.gaussian_matrix(3, 3);
  CHECK(std::abs(hs_inner(a, b) - std::conj(hs_inner(b, a))) < 1e-14);
  CHECK_THROWS_AS(hs_inner(a, rng.gaussian_matrix(2, 2)), ShapeError);
}

TEST_CASE("hermitian_eig: diagonal, pauli_x, zero") {
  const Matrix d = Matrix::from_rows({{3, 0, 0}, {0, 1, 0}, {0, 0, 2}});
  auto eig = hermitian_eig(d);
  CHECK(eig.eigenvalues == std::vector<double>{1.0, 2.0, 3.0});

  eig = hermitian_eig(kSx);
  CHECK(eig.eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(eig.eigenvalues[1] == doctest::Approx(1.0));

  eig = hermitian_eig(Matrix::zero(4, 4));
  for (double lam : eig.eigenvalues) CHECK(lam == 0.0);

  CHECK_THROWS_AS(hermitian_eig(Matrix::from_rows({{0, 1}, {0, 0}})), NumericalError);
}

TEST_CASE("hermitian_eig: reconstruction on seeded random Hermitian inputs") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const std::size_t n = 2 + seed % 7;
    const Matrix h = rng.hermitian(n);
    const auto eig = hermitian_eig(h);
    Matrix lam(n, n);
    for (std::size_t i = 0; i < n; ++i) lam(i, i) = eig.eigenvalues[i];
    CHECK(hs_norm(h - eig.vectors * lam * adjoint(eig.vectors)) <= 1e-9 * hs_norm(h));
    CHECK(hs_norm(adjoint(eig.vectors) * eig.vectors - Matrix::identity(n)) <= 1e-12);
    for (std::size_t i = 0; i + 1 < n; ++i) CHECK(eig.eigenvalues[i] <= eig.eigenvalues[i + 1]);
  }
}

TEST_CASE("nullspace: frozen cases") {
  CHECK(nullspace(Matrix::identity(3)).empty());
  CHECK(nullspace(Matrix::zero(2, 2)).size() == 2);

  const auto ns = nullspace(Matrix::from_rows({{1, 1}, {1, 1}}));
  REQUIRE(ns.size() == 1);
  const Matrix expect = normalized(Matrix::column({1, -1}));
  CHECK(std::abs(std::abs(hs_inner(ns[0], expect)) - 1.0) < 1e-12);
}

TEST_CASE("nullspace: orthogonal to the row space on random inputs") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    Rng rng(100 + seed);
    const std::size_t m = 2 + seed % 4, n = 2 + (seed * 3) % 5;
    // force rank deficiency by repeating a row
    Matrix a = rng.gaussian_matrix(m + 1, n);
    for (std::size_t j = 0; j < n; ++j) a(m, j) = a(0, j);
    const auto ns = nullspace(a, 1e-8);
    const auto svd = jacobi_svd(a);
    for (const auto& v : ns) {
      CHECK(hs_norm(a * v) <= 1e-8 * std::max(1.0, hs_norm(a)));
      for (std::size_t j = 0; j < svd.singular_values.size(); ++j)
        if (svd.singular_values[j] > 1e-8 * svd.singular_values.front())
          CHECK(std::abs(hs_inner(col(svd.right, j), v)) <= 1e-9);
    }
    CHECK(ns.size() + rank(a, 1e-8) == n);
  }
}

TEST_CASE("orthonormalize: dependence, HS-orthogonal pair, empty input") {
  const auto dep = orthonormalize({Matrix::identity(2), 2.0 * Matrix::identity(2)});
  CHECK(dep.dim() == 1);

  const auto pair = orthonormalize({kSx, kSz});
  REQUIRE(pair.dim() == 2);
  CHECK(std::abs(hs_inner(pair.basis[0], pair.basis[1])) < 1e-12);
  for (const auto& b : pair.basis) CHECK(hs_norm(b) == doctest::Approx(1.0));

  CHECK(orthonormalize({}).dim() == 0);
}

TEST_CASE("orthonormalize: projection property on random spans") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Rng rng(200 + seed);
    std::vector<Matrix> mats;
    const std::size_t count = 1 + seed % 5;
    for (std::size_t k = 0; k < count; ++k) mats.push_back(rng.gaussian_matrix(3, 3));
    mats.push_back(mats.front() + mats.back());  // a dependent element
    const auto s1 = orthonormalize(mats);
    const auto s2 = orthonormalize(s1.basis);
    CHECK(s1.dim() == s2.dim());
    CHECK(subspace_distance(s1, s2) <= 1e-10);
  }
}

TEST_CASE("kron and partial_trace: frozen cases") {
  CHECK(hs_norm(kron(Matrix::identity(2), Matrix::identity(2)) - Matrix::identity(4)) == 0.0);

  Rng rng(5);
  const Matrix rho = rng.density(2);
  CHECK(hs_norm(partial_trace(kron(kSz, rho), 2, 2, 2) - kSz) <= 1e-12);
  CHECK(hs_norm(partial_trace(kron(kSz, rho), 2, 2, 1) - rho * trace(kSz)) <= 1e-12);

  // Bell projector: reduced state is maximally mixed
  const double r = 1.0 / std::sqrt(2.0);
  const Matrix bell = Matrix::column({r, 0, 0, r});
  const Matrix proj = bell * adjoint(bell);
  CHECK(hs_norm(partial_trace(proj, 2, 2, 1) - 0.5 * Matrix::identity(2)) <= 1e-12);
  CHECK(hs_norm(partial_trace(proj, 2, 2, 2) - 0.5 * Matrix::identity(2)) <= 1e-12);

  CHECK_THROWS_AS(partial_trace(Matrix::identity(6), 2, 2, 1), ShapeError);
}

TEST_CASE("partial_trace: linearity and trace preservation on random inputs") {
  Rng rng(42);
  for (int k = 0; k < 10; ++k) {
    const Matrix a = rng.gaussian_matrix(6, 6), b = rng.gaussian_matrix(6, 6);
    const cplx c = rng.cgaussian();
    for (int which : {1, 2}) {
      const Matrix lhs = partial_trace(a + c * b, 2, 3, which);
      const Matrix rhs = partial_trace(a, 2, 3, which) + c * partial_trace(b, 2, 3, which);
      CHECK(hs_norm(lhs - rhs) <= 1e-12 * std::max(1.0, hs_norm(lhs)));
      CHECK(std::abs(trace(partial_trace(a, 2, 3, which)) - trace(a)) <= 1e-12 * std::abs(trace(a)));
    }
  }
}

TEST_CASE("vec convention: vec(AXB) = (B^T kron A) vec(X)") {
  Rng rng(77);
  const Matrix a = rng.gaussian_matrix(3, 3), x = rng.gaussian_matrix(3, 3), b = rng.gaussian_matrix(3, 3);
  const Matrix lhs = vec(a * x * b);
  const Matrix rhs = kron(transpose(b), a) * vec(x);
  CHECK(hs_norm(lhs - rhs) <= 1e-12 * hs_norm(lhs));
  CHECK(hs_norm(unvec(vec(x), 3, 3) - x) == 0.0);
}

TEST_CASE("subspace distance and intersection") {
  const auto sx = orthonormalize({kSx});
  const auto sx2 = orthonormalize({2.0 * kSx});
  CHECK(subspace_distance(sx, sx2) <= 1e-12);
  CHECK(subspace_distance(sx, orthonormalize({kSz})) == doctest::Approx(1.0));

  const auto span_xz = orthonormalize({kSx, kSz});
  const auto span_xy = orthonormalize({kSx, kSy});
  const auto inter = subspace_intersection(span_xz, span_xy);
  REQUIRE(inter.dim() == 1);
  CHECK(std::abs(std::abs(hs_inner(inter.basis[0], normalized(kSx))) - 1.0) < 1e-9);
}

TEST_CASE("evolution_unitary and polar_unitary") {
  Rng rng(17);
  const Matrix h = rng.hermitian(4);
  const Matrix u = evolution_unitary(h, 0.7);
  CHECK(hs_norm(adjoint(u) * u - Matrix::identity(4)) <= 1e-11);

  const Matrix v = rng.unitary(3);
  CHECK(hs_norm(polar_unitary(v) - v) <= 1e-11);
  const Matrix p = polar_unitary(rng.gaussian_matrix(3, 3));
  CHECK(hs_norm(adjoint(p) * p - Matrix::identity(3)) <= 1e-11);
}
