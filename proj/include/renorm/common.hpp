// common.hpp: shared error types and small numeric helpers.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace renorm {

// ---------------------------------------------------------------------------
// Error hierarchy.  Every failure mode the pipeline can hit maps to one of
// these; the CLI translates them to exit codes.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : Error {       // bad scalar arguments
  using Error::Error;
};
struct EvalError : Error {         // evaluation outside a representation
  using Error::Error;
};
struct CompositionError : Error {  // range escape in compose()
  using Error::Error;
};
struct PreconditionError : Error { // unresolved/mis-normalized inputs
  using Error::Error;
};
struct FrameError : Error {        // conjugation / frame construction
  using Error::Error;
};
struct RegimeError : Error {       // parameters inconsistent with regime
  using Error::Error;
};
struct FeasibilityError : Error {  // existence condition violated
  using Error::Error;
};
struct LinearizationError : Error {
  using Error::Error;
};
struct SolverError : Error {       // scalar root solve failed
  using Error::Error;
};
struct AttractorError : Error {
  using Error::Error;
};
struct BranchError : Error {       // fractional power of a negative value
  using Error::Error;
};
struct DivergenceError : Error {   // iteration left the admissible window
  using Error::Error;
};

inline bool is_finite(double x) { return std::isfinite(x); }

constexpr double kEps = std::numeric_limits<double>::epsilon();

// ---------------------------------------------------------------------------
// Scalar root finding: bisection on a bracket, optionally polished by secant
// steps.  f must be continuous with f(a) and f(b) of opposite sign.
// ---------------------------------------------------------------------------
double bisect(const std::function<double(double)>& f, double a, double b,
              double xtol, int max_iter = 200);

// Monotone increasing f: find x in [a,b] with f(x) = y.  Throws SolverError
// if y is outside [f(a), f(b)] beyond `slack`.
double solve_monotone(const std::function<double(double)>& f, double a,
                      double b, double y, double xtol, double slack = 0.0);

// ---------------------------------------------------------------------------
// Small dense linear algebra (sizes <= ~40; no external deps needed).
// ---------------------------------------------------------------------------

// Solves A x = b in place by Gaussian elimination with partial pivoting.
// A is row-major n x n.  Throws SolverError on singular systems.
std::vector<double> solve_linear(std::vector<double> A, std::vector<double> b,
                                 int n);

// Smallest eigenvalue of a symmetric n x n matrix (row-major), by cyclic
// Jacobi rotations.
double smallest_eigenvalue_sym(std::vector<double> A, int n);

// ---------------------------------------------------------------------------
// Grids.
// ---------------------------------------------------------------------------

// n Chebyshev-distributed points on [lo, hi], endpoints included.
std::vector<double> chebyshev_grid(double lo, double hi, int n);

// n uniformly spaced interior points of (lo, hi), endpoints excluded.
std::vector<double> interior_grid(double lo, double hi, int n);

}  // namespace renorm
