#include "renorm/regime.hpp"

#include <cmath>
#include <sstream>

namespace renorm {

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::LOW_NU:
      return "LOW_NU";
    case Regime::P1_HIGH_NU:
      return "P1_HIGH_NU";
    default:
      return "PGE2_HIGH_NU";
  }
}

double b0_threshold(double s) { return std::pow(0.125, 1.0 / s); }
double b2_threshold(double s) { return std::pow(0.5, 1.0 / s); }
double b5_threshold(double s) { return std::pow(0.479, 1.0 / s); }
double b6_threshold(double s) { return std::pow(0.803, 1.0 / s); }

namespace {
// roots of monotone maps g(b) = 1 on (0,1); bisection is safe because both
// maps increase strictly from 0 to a value > 1
double threshold_root(const std::function<double(double)>& g) {
  return bisect([&](double b) { return g(b) - 1.0; }, 1e-12, 1.0 - 1e-12,
                1e-14, 300);
}
}  // namespace

double b1_threshold(double s) {
  if (!(s > 1)) throw DomainError("b1_threshold: s must be > 1");
  return threshold_root([s](double b) {
    double t = 1 + std::sqrt(b);
    return (1 + b) * t * t * std::pow(b, s - 1);
  });
}

double b3_threshold(double s) {
  if (!(s > 1)) throw DomainError("b3_threshold: s must be > 1");
  return threshold_root([s](double b) { return (1 + b) * std::pow(b, s - 1); });
}

double a_of(double t) {
  if (t < 0 || t > 1) throw DomainError("a_of: t must be in [0,1]");
  if (t >= 1.0) return 1.0;
  return std::min(2 * t / (1 - t), (1 + t) / 2);
}

double feasibility_margin(int p, double r, double nu) {
  return r * nu - 1.0 - (p - 1) * (1.0 - nu);
}

bool feasibility_pass(int p, double r, double nu) {
  if (nu <= 1.0) return feasibility_margin(p, r, nu) > 0.0;
  return r > 1.0;
}

double default_lambda1(int p, double r, double nu) {
  double cap = std::pow(9.0 * r, -p / (r * nu - 1.0));
  return std::min(0.125, 0.5 * cap);
}

bool default_use_N(const RegimeParams& params) {
  return params.regime == Regime::PGE2_HIGH_NU && params.s() <= params.p;
}

double RegimeParams::lambda_floor() const {
  switch (regime) {
    case Regime::LOW_NU: {
      double c = (1 - b) * (1 - b) / (4 * r * (1 + b));
      double expo = p / feasibility_margin(p, r, nu);
      return std::pow(c, expo);
    }
    case Regime::P1_HIGH_NU: {
      double c = (1 - b) / (r * (1 + b) * (1 + b * b));
      return std::pow(c, 1.0 / (s() - 1.0));
    }
    default: {
      // valid for every fixed point of the operator, independent of r*nu > p
      return std::min(1.0 / 7.0, std::pow(6.0 * r, -p / (s() - 1.0)));
    }
  }
}

RegimeParams make_params(int p, double r, double nu, bool test_mode) {
  if (p < 1) throw DomainError("make_params: p must be >= 1");
  if (!(nu > 0 && nu <= 2)) throw DomainError("make_params: nu must be in (0,2]");
  bool r_ok = r > 1.0 || (test_mode && r >= 1.0 && nu > 1.0);
  if (!r_ok)
    throw DomainError(
        "make_params: r must be > 1 (r = 1 only in test mode with nu > 1)");
  if (!feasibility_pass(p, r, nu) && !(test_mode && r >= 1.0 && nu > 1.0)) {
    std::ostringstream os;
    os << "infeasible parameters (p=" << p << ", r=" << r << ", nu=" << nu
       << "): margin " << feasibility_margin(p, r, nu);
    throw FeasibilityError(os.str());
  }
  RegimeParams P;
  P.p = p;
  P.r = r;
  P.nu = nu;
  P.test_mode = test_mode;
  double s = r * nu;
  if (!(s > 1))
    throw FeasibilityError("make_params: r*nu must exceed 1");
  if (nu <= 1.0) {
    P.regime = Regime::LOW_NU;
    P.b = (p >= 2) ? b1_threshold(s) : b3_threshold(s);
  } else if (p == 1) {
    P.regime = Regime::P1_HIGH_NU;
    P.b = b5_threshold(s);
  } else {
    P.regime = Regime::PGE2_HIGH_NU;
    P.b = b6_threshold(s);
  }
  P.lambda1 = default_lambda1(p, r, nu);
  return P;
}

}  // namespace renorm
