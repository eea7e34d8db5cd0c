// fixpoint.hpp: drives the renormalization step from the seed map to a
// numerical fixed point and assembles the solution data.
#pragma once

#include <optional>

#include "renorm/renorm_ops.hpp"

namespace renorm {

struct SolutionBundle {
  RegimeParams params;
  double lambda = 0;   // scaling constant
  double z1 = 0;
  double tau = 0;      // lambda^r
  double y0 = 0;       // z1^r
  AnalyticFn psi;      // normalized linearizer, extended to the full basin
  AnalyticFn u;        // u = z1 lambda^(1-nu) psi^(1/r) on [-1/lambda, 1]
  AnalyticFn phi;      // rebuilt one-step map
  std::vector<double> zeta;  // orbit zeta_0..zeta_{p+1}
  double xi_max = 0;   // analyticity endpoint of the basin
  std::vector<double> xi_chain;
  double residual = 0;  // sup-grid defect of the defining equations
  int iterations = 0;
  bool b_fixed_point = true;  // truncated branch quiet near convergence
  double a_frame = 0;

  // carriers kept for verification (not part of the serialized surface)
  AnalyticFn v;
  AnalyticFn Phi;

  double u_at(double z) const;        // u-evaluation via psi
  double ucheck_at(double w) const;   // u(-w)
};

struct IterationRecord {
  int iter = 0;
  double lambda = 0;
  double sup_change = 0;
  double damping = 1;
  bool truncated = false;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
};

struct NonConvergenceError : Error {
  IterationTrace trace;
  NonConvergenceError(const std::string& msg, IterationTrace t)
      : Error(msg), trace(std::move(t)) {}
};

struct IterateOptions {
  int max_iter = 500;
  double tol = 1e-12;      // sup-grid stagnation tolerance in the fixed frame
  double damping = 1.0;    // convex mixing weight on the fresh iterate
  std::optional<bool> use_N;
  int degree = 128;
  double fit_tol = 1e-13;
  bool verbose = false;
};

// The admissible seed map for the regime frame.
AnalyticFn seed(const RegimeParams& params, int degree = 128);

// Damped Picard iteration of the renormalization step from the seed.
// Throws NonConvergenceError (with the trace) or DivergenceError.
SolutionBundle iterate(const RegimeParams& params, const IterateOptions& opts,
                       IterationTrace* trace_out = nullptr);

// Max of the sup-grid defects of the two defining functional equations,
// measured on 257-point grids of the stored representations.
double residual(const SolutionBundle& bundle);

}  // namespace renorm
