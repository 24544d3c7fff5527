#pragma once

#include <stdexcept>
#include <string>

namespace lagrising {

// Malformed instance text, CSV, or JSON input.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Vector/matrix sizes that do not agree.
struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad argument values (empty weight set, zero bits, ...).
struct ArgumentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation requested on an instance that does not support it.
struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exponential-cost guard tripped (brute force beyond the size limit).
struct SizeGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A trajectory or iteration produced non-finite or out-of-bound values.
// `index` is the offending component, `step` the step count when known.
struct DivergenceError : std::runtime_error {
  long index = -1;
  long step = -1;
  DivergenceError(const std::string& msg, long index_ = -1, long step_ = -1)
      : std::runtime_error(msg), index(index_), step(step_) {}
};

// J + alpha*M has a negative eigenvalue; reports the smallest alpha that
// would make the shifted matrix positive semidefinite (for M = I).
struct NotPsdError : std::runtime_error {
  double min_eigenvalue;
  double min_alpha;
  NotPsdError(const std::string& msg, double min_eig, double min_alpha_)
      : std::runtime_error(msg), min_eigenvalue(min_eig), min_alpha(min_alpha_) {}
};

}  // namespace lagrising
