// verifier.hpp: every closed-form feasibility condition, bound, and identity
// the theory provides, checked against parameters or a converged bundle.
#pragma once

#include <complex>
#include <string>
#include <vector>

#include "renorm/fixpoint.hpp"

namespace renorm {

struct BoundEntry {
  std::string name;   // stable identifier of the inequality
  double lhs = 0;     // the two sides, oriented as lhs <= rhs (+ margin)
  double rhs = 0;
  double margin = 0;  // rhs - lhs in the natural orientation
  bool pass = false;
};

struct BoundsReport {
  std::vector<BoundEntry> entries;
  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& e : entries)
      if (!e.pass) out.push_back(e.name);
    return out;
  }
};

struct Feasibility {
  bool pass = false;
  double margin = 0;
};

// Existence condition on the raw parameters.
Feasibility feasibility(int p, double r, double nu);

// Full per-regime bound suite on a converged bundle.
BoundsReport check_bounds(const SolutionBundle& bundle, double tol = 1e-9);

// The strictly positive combination underlying the frame-threshold
// inequality; margin of the sweep over (0,1).
double appendix_inequality(double x);
double appendix_sweep_min(int n = 10000);         // OpenMP kernel
double appendix_sweep_min_serial(int n = 10000);  // reference

// Analyticity endpoint of the rebuilt map, with its inversion chain, plus
// the containment checks tying it to the orbit.
struct XiMaxReport {
  double xi_max = 0;
  std::vector<double> chain;
  BoundsReport checks;
};
XiMaxReport xi_max(const SolutionBundle& bundle, double tol = 1e-9);

// Commutation identities available when nu = 2.
struct CommutativityReport {
  double pairing_defect = 0;     // two-sided linearizer pairing on (-lambda, 1)
  double edge_value_defect = 0;  // psi at the basin edge vs -1/lambda^r
  double xbar = 0;               // interior fixed point of the flipped map
  double xbar_defect = 0;        // |xbar - lambda zeta_{p-1}|
  double kappa_defect = 0;       // |G0'(xbar)| vs tau
  double commute_defect = 0;     // eta . xi-ext vs xi . eta-ext
  int commute_skipped = 0;
  bool pass = false;
};
CommutativityReport lanford_commutativity(const SolutionBundle& bundle,
                                          double tol = 1e-8);

// Injectivity probe: real monotonicity plus a complex collision scan within
// the certified region.  A probe, not a proof.
struct UnivalenceReport {
  bool pass = false;
  int collisions = 0;
  double min_deriv = 0;
};
UnivalenceReport univalence_probe(const SolutionBundle& bundle, int samples);
UnivalenceReport univalence_probe_fn(const AnalyticFn& f, int samples);

// Limit of the even iterates of the once-folded map in the upper half
// plane, with the attached identities.
struct AttractorReport {
  std::complex<double> c;
  double multiplier_mod = 0;   // |dF^2/dz| at c
  double real_fp_defect = 0;   // F(u(0)) vs u(0)
  double real_fp_deriv_defect = 0;  // F'(u(0)) vs -1/lambda
  int iterations = 0;
  bool pass = false;
};
AttractorReport attractor_c(const SolutionBundle& bundle, double tol = 1e-8);

}  // namespace renorm
