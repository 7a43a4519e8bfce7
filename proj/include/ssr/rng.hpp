#pragma once

// Seeded random generation for the randomized algorithms (central-element
// sampling, cyclic-vector search, property tests). Box-Muller on top of
// mt19937_64 keeps streams identical across platforms, which the CLI's
// byte-identical-report contract relies on.

#include <cstdint>
#include <random>

#include "matrix.hpp"

namespace ssr {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed ^ 0x9e3779b97f4a7c15ULL) {}

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  cplx cgaussian() { return {gaussian(), gaussian()}; }

  std::size_t index(std::size_t bound) { return static_cast<std::size_t>(eng_() % bound); }

  Matrix gaussian_matrix(std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (auto& v : m.data()) v = cgaussian();
    return m;
  }

  Matrix hermitian(std::size_t n) {
    Matrix a = gaussian_matrix(n, n);
    return 0.5 * (a + adjoint(a));
  }

  Matrix unit_vector(std::size_t n) { return normalized(gaussian_matrix(n, 1)); }

  // Haar-ish unitary: modified Gram-Schmidt of a Gaussian matrix.
  Matrix unitary(std::size_t n) {
    Matrix a = gaussian_matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      Matrix v = col(a, j);
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t k = 0; k < j; ++k) {
          Matrix u = col(a, k);
          v -= hs_inner(u, v) * u;
        }
      set_col(a, j, normalized(v));
    }
    return a;
  }

  Matrix density(std::size_t n) {
    Matrix b = gaussian_matrix(n, n);
    Matrix rho = b * adjoint(b);
    return rho * (1.0 / trace(rho).real());
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ssr
