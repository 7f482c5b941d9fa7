#pragma once

#include <stdexcept>

namespace doseopt {

// Design matrix (including the implicit intercept) is numerically rank
// deficient, so the conjugate fit is undefined.
struct SingularModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Response carries no usable signal for the requested fit (e.g. constant y
// with active slope columns).
struct DegenerateDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterative optimizer stopped without meeting its gradient tolerance.
struct NonConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every candidate model was invalid; there is nothing to average over.
struct InfeasibleModelSpaceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Matrix of values expected to agree with a trained fit has the wrong shape.
struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A benchmark cell required by an evaluation is absent from the records.
struct MissingCellError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Linear algebra failed in a way that jitter or clamping could not absorb.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace doseopt
