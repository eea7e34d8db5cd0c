// cheb.hpp: piecewise Chebyshev representation of real-analytic functions on
// a closed interval, with pure-power endpoint warps.
//
// The functions this library manipulates are analytic in the open interval
// but typically carry an algebraic branch point of exponent 1/r at one or
// both endpoints (they are built from r-th roots of functions with simple
// zeros there).  A plain Chebyshev fit of such a function converges only
// algebraically, so a terminal piece may substitute the variable
//     z = lo + (hi - lo) * s^g          (left warp, s in [0,1])
//     z = hi - (hi - lo) * (1 - s)^g    (right warp)
// with warp exponent g matched to r.  In the warped variable the local
// Puiseux strata become smooth and the coefficient tail decays geometrically
// again (exactly so whenever g is an integer multiple of r).
#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "renorm/common.hpp"

namespace renorm {

struct DomainInterval {
  double lo = -1.0;
  double hi = 1.0;
  DomainInterval() = default;
  DomainInterval(double l, double h) : lo(l), hi(h) {
    if (!(l < h) || !is_finite(l) || !is_finite(h))
      throw DomainError("DomainInterval: need lo < hi, finite");
  }
  double width() const { return hi - lo; }
};

enum class WarpSide : std::uint8_t { none, left, right };

using RealFn = std::function<double(double)>;

// Evaluator receiving exact distances to the domain endpoints.  Near a
// warped endpoint the collocation nodes sit far below floating-point
// resolution of z itself, so an evaluator that needs the local coordinate
// (fractional powers, functional-equation chains) must use dlo/dhi rather
// than reconstruct them from z.
using OffsetFn = std::function<double(double z, double dlo, double dhi)>;

struct FitSpec {
  int degree = 128;          // per-piece polynomial degree
  double tol_rel = 1e-13;    // relative tail tolerance
  double warp_left = 1.0;    // pure-power exponent at domain.lo (1 = none)
  double warp_right = 1.0;   // pure-power exponent at domain.hi (1 = none)
  bool split = true;         // allow adaptive bisection of unresolved pieces
  int max_pieces = 48;
  int max_depth = 9;
};

struct Piece {
  double lo = 0, hi = 1;
  WarpSide side = WarpSide::none;
  double g = 1.0;             // warp exponent (>= 1)
  std::vector<double> coef;   // Chebyshev T_k coefficients in t = 2s - 1
  double tail = 0;            // abs tail bound of this piece
  bool resolved = false;
  double rho = 1e6;           // measured decay base (Bernstein parameter)
  int kcut = 0;               // last coefficient index above the noise floor
  double eval_cap = 1.0;      // largest ellipse parameter for complex eval

  // derivative coefficient series in t, up to third order
  std::vector<double> dcoef1, dcoef2, dcoef3;

  double eval(double z) const;
  std::complex<double> eval_c(std::complex<double> z, double rho_cap) const;
  std::complex<double> deriv_c(std::complex<double> z, double rho_cap) const;
  // order-th derivative with respect to z, order in {1,2,3}
  double deriv(double z, int order) const;
  void finalize();  // builds dcoef*, rho

  // mapping helpers
  double s_from_z(double z) const;
  double z_from_s(double s) const;
  // dz/dt, d2z/dt2, d3z/dt3 at reference coordinate s
  void z_t_derivatives(double s, double& zt, double& ztt, double& zttt) const;
};

class AnalyticFn {
 public:
  AnalyticFn() = default;
  static AnalyticFn from_pieces(DomainInterval dom, std::vector<Piece> pieces,
                                double tol_rel);

  const DomainInterval& domain() const { return dom_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  double tail_bound() const { return tail_; }
  bool resolved() const { return resolved_; }
  double scale() const { return scale_; }
  double tol_rel() const { return tol_rel_; }

  double operator()(double z) const;
  std::complex<double> eval_c(std::complex<double> z) const;
  std::complex<double> deriv_c(std::complex<double> z) const;
  bool certified_at(std::complex<double> z) const;
  double deriv(double z, int order = 1) const;

  // evaluation at lo + dlo / hi - dhi with the offset taken exactly
  double eval_lo(double dlo) const;
  double eval_hi(double dhi) const;

  // batch evaluation; the OpenMP kernel and its serial reference
  void eval_many(std::span<const double> zs, std::span<double> out) const;
  void eval_many_serial(std::span<const double> zs, std::span<double> out) const;

  // Taylor coefficients a_0..a_order of f(x0 + d) = sum a_k d^k, computed by
  // trapezoidal Cauchy sums on a circle inside the certified region.  The
  // radius actually used is reported; the series is trustworthy only well
  // inside it.
  std::vector<double> taylor_at(double x0, int order, double radius = 0.0,
                                double* used_radius = nullptr) const;

  // largest radius around interior point x0 at which taylor_at may integrate
  double taylor_radius(double x0) const;

  // widths of the terminal pieces: the reach of eval_lo / eval_hi
  double lo_reach() const { return pieces_.front().hi - pieces_.front().lo; }
  double hi_reach() const { return pieces_.back().hi - pieces_.back().lo; }

 private:
  friend AnalyticFn fit_function(const RealFn&, DomainInterval, const FitSpec&);
  const Piece& locate(double z, double* zc) const;

  DomainInterval dom_;
  std::vector<Piece> pieces_;
  double scale_ = 0, tail_ = 0, tol_rel_ = 1e-13;
  bool resolved_ = false;
};

// Interpolates `f` on `dom` per `spec`.  Collocation values are matched
// exactly on every kept piece; tail_bound records the coefficient tail above
// the resolved cutoff.  Throws EvalError on non-finite samples.
AnalyticFn fit_function(const OffsetFn& f, DomainInterval dom,
                        const FitSpec& spec);
AnalyticFn fit_function(const RealFn& f, DomainInterval dom,
                        const FitSpec& spec);

// Warp exponent policy for functions with endpoint strata of exponent k/r:
// an integer multiple of r keeps the warped series geometric, and doubling
// small r keeps the analytic strata at least C^4-smooth.
inline double warp_exponent_for_degree(double r) {
  return (2.0 * r <= 9.0) ? 2.0 * r : r;
}

}  // namespace renorm
