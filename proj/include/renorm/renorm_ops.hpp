// renorm_ops.hpp: one renormalization step.  Conjugate the frame function
// into the lambda-frame, linearize at the fixed point, take the r-th root
// carrier, solve the orbit normalization, rebuild, conjugate back.
#pragma once

#include <optional>
#include <vector>

#include "renorm/analytic_core.hpp"
#include "renorm/regime.hpp"

namespace renorm {

struct FrameState {
  double lambda = 0;
  AnalyticFn phi0;      // conjugated input on the lambda-frame
  double a_frame = 0;   // right-end constant: domain is (-1/lambda, 1/a_frame)
};

struct StepOptions {
  int degree = 128;
  double fit_tol = 1e-13;
  bool check_class = true;   // cheap admissibility check of the input
  double class_tol = 1e-8;
};

// lambda = Phi'(1)^(1/(r nu)).  Throws RegimeError if the derivative leaves
// (0, b^(r nu)].
double extract_lambda(const AnalyticFn& Phi, const RegimeParams& params);

// phi0 = h_{b,lambda} . Phi . h_{b,lambda}^{-1}; identity when lambda = b.
FrameState conjugate_to_lambda(const AnalyticFn& Phi, double lambda,
                               const RegimeParams& params,
                               const StepOptions& opt = {});

// The normalized linearizer of phi0 at its fixed point 1: the unique psi
// with psi(phi0) = multiplier * psi, psi(1) = 0, psi(0) = 1.  On return
// *defect (if given) holds the sup-grid residual of that relation.
AnalyticFn koenigs_linearizer(const FrameState& frame, double multiplier,
                              const RegimeParams& params,
                              const StepOptions& opt = {},
                              double* defect = nullptr);

// v(z) = psi(-z)^(1/r) on [-1, 1/lambda], principal branch.
AnalyticFn build_v(const AnalyticFn& psi, double r,
                   const StepOptions& opt = {});

struct OrbitSolve {
  double z1 = 0;
  std::vector<double> zeta;  // zeta_0 .. zeta_{p+1}
  std::vector<double> s_chain;  // bracket chain of the wide-frame regime
};

// Unique z1 with (z1 lambda^(1-nu) v)^p(lambda) = lambda^(1-nu), plus the
// orbit of lambda under that map.
OrbitSolve solve_z1(const AnalyticFn& v, double lambda,
                    const RegimeParams& params);

// phi(z) = lambda^(nu-1) (z1 lambda^(1-nu) v)^p(lambda z) on the regime
// interval.
AnalyticFn build_phi(const AnalyticFn& v, double z1, double lambda,
                     const RegimeParams& params, const StepOptions& opt = {});

// A full pipeline pass with all intermediates kept.
struct BStep {
  double lambda = 0;
  double multiplier = 0;       // phi0'(1) used for the linearizer
  FrameState frame;
  AnalyticFn psi;              // linearizer (the truncated branch composes
                               // the pole-shift map on top)
  AnalyticFn v;
  double z1 = 0;
  std::vector<double> zeta;
  AnalyticFn phi;
  AnalyticFn Phi_next;
  double koenigs_defect = 0;
  bool truncated_branch = false;
  bool lambda_floor_flag = false;  // lambda fell below the regime floor
  double ell = 0;                  // analyticity constant of the truncated branch
};

BStep apply_B_full(const AnalyticFn& Phi, const RegimeParams& params,
                   const StepOptions& opt = {});
AnalyticFn apply_B(const AnalyticFn& Phi, const RegimeParams& params,
                   const StepOptions& opt = {});

// Truncated operator: clamps lambda at params.lambda1 when the input
// multiplier is below lambda1^(r nu), restoring compactness.
BStep apply_N_full(const AnalyticFn& Phi, const RegimeParams& params,
                   const StepOptions& opt = {});
AnalyticFn apply_N(const AnalyticFn& Phi, const RegimeParams& params,
                   const StepOptions& opt = {});

// Multiplier floor of the truncated branch.
double truncated_multiplier_floor(const RegimeParams& params);

// Analyticity endpoint of the rebuilt map: lambda^{-2} when the once-iterated
// carrier stays below 1/lambda, otherwise the first element of the descending
// inversion chain.  Needs only v, z1, lambda.
struct XiMax {
  double xi_max = 0;
  std::vector<double> chain;  // xi_1 < ... < xi_p (single entry when trivial)
};
XiMax xi_max_compute(const AnalyticFn& v, double z1, double lambda,
                     const RegimeParams& params);
// variant for a once-iterated-carrier evaluator w -> ucheck(w) on [-1, 1/lambda]
XiMax xi_max_compute_fn(const RealFn& ucheck, double lambda, int p);

// Derivative of the rebuilt map at 1 as the orbit chain product.
double multiplier_chain_product(const AnalyticFn& psi, double r,
                                const std::vector<double>& zeta, int p);

// Cheap admissibility check of a frame function (normalization, derivative
// window, positivity, monotonicity).  Throws PreconditionError on failure.
void check_frame_class(const AnalyticFn& Phi, const RegimeParams& params,
                       double tol);

}  // namespace renorm
