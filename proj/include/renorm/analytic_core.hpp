// analytic_core.hpp: closed-form maps shared by the whole pipeline and the
// positivity / envelope certification of the analytic carriers.
#pragma once

#include <string>

#include "renorm/cheb.hpp"
#include "renorm/homography.hpp"

namespace renorm {

// Schwarz-lemma bound on |f'(0)| for a map of the slit plane over (-A, B)
// into the one over (-A2, B2) fixing 0.
double schwarz_multiplier_bound(double A, double B, double A2, double B2);

// The Herglotz seed map on [-1/b, 1/b^2]: fixes nothing but satisfies
// chi(1) = 1 and chi'(1) = b^s, stays positive on the left end and below the
// diagonal on the right end.
double chi_eval(double b, double s, double z);
AnalyticFn make_chi(double b, double s, int degree = 128);

// Exact negation of a representation.
AnalyticFn negate(const AnalyticFn& f);

// spec-level fit / compose front-ends -----------------------------------

AnalyticFn fit(const RealFn& fn, DomainInterval domain, int degree);

// f(g(x)) refit over g's domain; the range of g is pre-checked against the
// domain of f on a dense grid with tail slack.
AnalyticFn compose(const AnalyticFn& f, const AnalyticFn& g, int degree = 128);

// Herglotz certification ---------------------------------------------------

struct CertifyOptions {
  int N = 4;                  // derivative-matrix size
  double tol = 1e-9;
  int matrix_samples = 33;    // points where the Hankel matrix is formed
  int grid_samples = 257;     // points for f' and log-derivative checks
  double end_margin_rel = 1e-4;  // relative margin excluded at interval ends
};

struct CertifyReport {
  bool pass = false;
  double min_matrix_eig = 0;   // most negative smallest-eigenvalue seen
  double min_deriv = 0;        // min of f' over the grid
  double min_logderiv_lo = 0;  // margin of f''/f' >= -2/(z-a)
  double min_logderiv_hi = 0;  // margin of f''/f' <= 2/(b-z)
  int skipped = 0;             // grid points skipped (vanishing f')
  std::string detail;
};

// Checks the positive-matrix consequence of the Herglotz property on sample
// points, plus monotonicity and the two-sided log-derivative window.
// Derivatives come from Cauchy sums on certified circles, never from finite
// differences.  Anti-Herglotz certification is the same applied to -f.
CertifyReport herglotz_certify(const AnalyticFn& f, int N, double tol);
CertifyReport herglotz_certify(const AnalyticFn& f, const CertifyOptions& opt);
CertifyReport anti_herglotz_certify(const AnalyticFn& f, int N, double tol);

// Envelope checks for normalized anti-Herglotz functions ------------------

struct EnvelopeReport {
  bool pass = false;
  double min_sandwich = 0;   // worst margin of the two-sided value envelope
  double min_logderiv = 0;   // worst margin of the log-derivative window
};

// psi must satisfy psi(0) = 1 and psi(1) = 0 within tol.  Verifies the
// two-sided envelope and log-derivative window with parameters
// (u_minus, u_plus) on a dense grid of the stored domain.
EnvelopeReport e0_envelope_check(const AnalyticFn& psi, double u_minus,
                                 double u_plus, double tol, int grid_n = 257);

// Concavity corollary: the interpolation lower bound for a Herglotz f
// holomorphic over (A, B), at A < a < z < b < B.  Returns the bound; the
// caller asserts f(z) >= bound.
double lemma_noses_bound(const AnalyticFn& f, double A, double a, double b,
                         double B, double z);
double lemma_noses_rhs(double fa, double fb, double A, double a, double b,
                       double B, double z);

}  // namespace renorm
