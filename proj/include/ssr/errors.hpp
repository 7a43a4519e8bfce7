#pragma once

#include <stdexcept>
#include <string>

namespace ssr {

// Dimension or layout inconsistency between operands.
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical procedure could not certify its result: non-Hermitian input,
// ambiguous eigenvalue clustering, failure to converge. The message carries
// the diagnostic (residual norms, gaps).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ssr
