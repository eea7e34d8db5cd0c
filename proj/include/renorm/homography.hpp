// homography.hpp: exact Moebius maps z -> (a z + b) / (c z + d).
#pragma once

#include <complex>

#include "renorm/common.hpp"

namespace renorm {

struct Homography {
  double a = 1, b = 0, c = 0, d = 1;

  Homography() = default;
  Homography(double a_, double b_, double c_, double d_)
      : a(a_), b(b_), c(c_), d(d_) {
    if (a * d - b * c == 0.0)
      throw DomainError("Homography: ad - bc must be nonzero");
  }

  double operator()(double z) const {
    double den = c * z + d;
    if (den == 0.0) throw EvalError("Homography: pole hit");
    return (a * z + b) / den;
  }
  std::complex<double> operator()(std::complex<double> z) const {
    std::complex<double> den = c * z + d;
    if (den == 0.0) throw EvalError("Homography: pole hit");
    return (a * z + b) / den;
  }
  double deriv(double z) const {
    double den = c * z + d;
    return (a * d - b * c) / (den * den);
  }
  Homography inverse() const { return Homography(d, -b, -c, a); }
  // H(z0 + delta) - H(z0), cancellation-free; exact offsets survive the map
  double image_offset(double z0, double delta) const {
    double d0 = c * z0 + d;
    double d1 = c * (z0 + delta) + d;
    if (d0 == 0.0 || d1 == 0.0) throw EvalError("Homography: pole hit");
    return delta * (a * d - b * c) / (d1 * d0);
  }
  Homography compose(const Homography& g) const {  // this after g
    return Homography(a * g.a + b * g.c, a * g.b + b * g.d,
                      c * g.a + d * g.c, c * g.b + d * g.d);
  }
  double pole() const {
    if (c == 0.0) throw DomainError("Homography: affine map has no pole");
    return -d / c;
  }
};

// The frame change fixing 0 and 1 and sending -1/s to -1/t, for s,t in (0,1).
// Its inverse is the map with s and t exchanged.
inline Homography make_h(double s, double t) {
  if (!(s > 0 && s < 1 && t > 0 && t < 1))
    throw DomainError("make_h: s and t must lie in (0,1)");
  return Homography(s + 1, 0, s - t, 1 + t);
}

// The homographic map fixing 0 and 1 and sending 1/sigma_pow to 1/tau1_pow,
// Herglotzian with a negative pole; requires 0 < sigma_pow < tau1_pow < 1.
inline Homography make_theta(double sigma_pow, double tau1_pow) {
  if (!(sigma_pow > 0 && sigma_pow < tau1_pow && tau1_pow < 1))
    throw DomainError("make_theta: need 0 < sigma_pow < tau1_pow < 1");
  return Homography(1 - sigma_pow, 0, tau1_pow - sigma_pow, 1 - tau1_pow);
}

}  // namespace renorm
