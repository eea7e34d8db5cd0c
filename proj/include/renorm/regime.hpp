// regime.hpp: problem parameters (p, r, nu) and the regime-dependent frame
// constants that the operators need.
#pragma once

#include <string>

#include "renorm/cheb.hpp"

namespace renorm {

enum class Regime { LOW_NU, P1_HIGH_NU, PGE2_HIGH_NU };

std::string regime_name(Regime);

// Frame-constant thresholds, all as functions of s = r*nu > 1.
double b0_threshold(double s);  // (1/8)^(1/s)
double b1_threshold(double s);  // root of (1+b)(1+sqrt(b))^2 b^(s-1) = 1
double b2_threshold(double s);  // (1/2)^(1/s)
double b3_threshold(double s);  // root of (1+b) b^(s-1) = 1
double b5_threshold(double s);  // 0.479^(1/s)
double b6_threshold(double s);  // 0.803^(1/s)

// a(t) = min{ 2t/(1-t), (1+t)/2 }, the inner-radius function of the wide
// frame, continuous and increasing on [0,1].
double a_of(double t);

// Existence margin: r*nu - 1 - (p-1)(1-nu).  For nu <= 1 solutions exist iff
// this is > 0; for nu in (1,2] the requirement is just r > 1.
double feasibility_margin(int p, double r, double nu);
bool feasibility_pass(int p, double r, double nu);

struct RegimeParams {
  int p = 1;
  double r = 2.0;
  double nu = 1.0;
  double b = 0.0;        // frame constant, fixed by the regime threshold
  double lambda1 = 0.0;  // truncation parameter of the compactified operator
  Regime regime = Regime::LOW_NU;
  bool test_mode = false;  // admits r = 1 (affine anchor) when nu > 1

  double s() const { return r * nu; }
  double frame_lo() const { return -1.0 / b; }
  double frame_hi() const {
    return regime == Regime::PGE2_HIGH_NU ? 1.0 / a_of(b) : 1.0 / (b * b);
  }
  DomainInterval frame() const { return {frame_lo(), frame_hi()}; }
  double warp() const { return warp_exponent_for_degree(r); }

  // smallest admissible scaling constant, per regime
  double lambda_floor() const;
  // largest admissible scaling constant (the frame threshold itself)
  double lambda_cap() const { return b; }
};

// Validates (p, r, nu), picks the regime and its frame constant, and sets
// the default truncation parameter.  Throws FeasibilityError when the
// existence condition fails, DomainError on malformed input.
RegimeParams make_params(int p, double r, double nu, bool test_mode = false);

// Default truncation parameter: strictly inside the escape window so fixed
// points of the truncated operator are fixed points of the plain one.
double default_lambda1(int p, double r, double nu);

// Whether the truncated operator should drive the solve by default.
bool default_use_N(const RegimeParams& params);

}  // namespace renorm
