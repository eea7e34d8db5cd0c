// asymptotics.hpp: the derived functions that capture the large-degree
// structure of solutions (narrow-frame regimes with p >= 2), and the grid
// verification of every closed-form bound attached to them.
#pragma once

#include "renorm/fixpoint.hpp"
#include "renorm/verifier.hpp"

namespace renorm {
namespace asymptotics {

struct AsymptoticBundle {
  AnalyticFn V;        // outer factor of the doubled-step decomposition
  AnalyticFn W;        // V composed with itself, on [1, alpha]
  AnalyticFn H_plus;   // psi(exp(beta w))
  AnalyticFn H_minus;  // psi(-exp(beta w))
  AnalyticFn S_plus;   // rescaled inverse-branch carriers
  AnalyticFn S_minus;
  double alpha = 0;    // psi(-lambda) = V^{-1}(0)
  double beta = 0;     // log(1/lambda)
  double tau = 0;
  double y0 = 0;
  std::vector<double> w_orbit;  // log zeta_j / log(1/lambda), j = 0..p-1
  double zeta_max = 0;          // right end of the outer factor's domain

  SolutionBundle source;  // carriers the checks evaluate through
};

// Builds the derived functions.  Requires nu in (0,1] and p >= 2; other
// regimes are refused rather than guessed.
AsymptoticBundle build(const SolutionBundle& bundle, int degree = 128);

// Grid verification of the scalar and function bounds.
BoundsReport check_bounds(const AsymptoticBundle& ab, double tol = 1e-9);

// Sup-grid defect of the rescaled fixed-point equation.
double limit_residual(const AsymptoticBundle& ab);

// Brute-force verification of the cubic-inversion helper inequality over a
// grid of ~10^6 admissible triples; returns the minimum margin.
double remark81_scan_min(int n_zeta = 50, int n_y = 40, int n_a = 25,
                         int n_m = 20);
double remark81_scan_min_serial(int n_zeta = 50, int n_y = 40, int n_a = 25,
                                int n_m = 20);

// Sup distance between the rescaled carriers of two bundles on a common
// compact grid (monotone decreasing along a family of increasing degree).
double s_distance(const AsymptoticBundle& a, const AsymptoticBundle& b,
                  double lo = 0.2, double hi = 0.9, int n = 65);

}  // namespace asymptotics
}  // namespace renorm
