#include "renorm/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace renorm {
namespace asymptotics {

namespace {

void add(BoundsReport& rep, const std::string& name, double lhs, double rhs,
         double tol) {
  BoundEntry e;
  e.name = name;
  e.lhs = lhs;
  e.rhs = rhs;
  e.margin = rhs - lhs;
  e.pass = e.margin >= -tol;
  rep.entries.push_back(e);
}

void add_eq(BoundsReport& rep, const std::string& name, double a, double b,
            double tol) {
  BoundEntry e;
  e.name = name;
  e.lhs = a;
  e.rhs = b;
  e.margin = tol - std::fabs(a - b);
  e.pass = e.margin >= 0;
  rep.entries.push_back(e);
}

constexpr double kE = 2.71828182845904523536;

// derivative triple of V at a point, for Schwarzian chains
struct D3 {
  double f, d1, d2, d3;
};

D3 eval3(const AnalyticFn& V, double z) {
  return {V(z), V.deriv(z, 1), V.deriv(z, 2), V.deriv(z, 3)};
}

// W = V o V and its first three derivatives at zeta
D3 W3(const AnalyticFn& V, double zeta) {
  D3 in = eval3(V, zeta);
  double arg = std::min(V.domain().hi, std::max(V.domain().lo, in.f));
  D3 out = eval3(V, arg);
  D3 w;
  w.f = out.f;
  w.d1 = out.d1 * in.d1;
  w.d2 = out.d2 * in.d1 * in.d1 + out.d1 * in.d2;
  w.d3 = out.d3 * in.d1 * in.d1 * in.d1 + 3 * out.d2 * in.d1 * in.d2 +
         out.d1 * in.d3;
  return w;
}

double schwarzian(const D3& w) {
  double q = w.d2 / w.d1;
  return w.d3 / w.d1 - 1.5 * q * q;
}

}  // namespace

AsymptoticBundle build(const SolutionBundle& B, int degree) {
  const auto& P = B.params;
  if (!(P.nu <= 1.0 && P.p >= 2))
    throw RegimeError(
        "asymptotics: derived functions are defined for nu <= 1 and p >= 2");
  const double lam = B.lambda, r = P.r, nu = P.nu, z1 = B.z1;
  const double mult_inv = std::pow(lam, -P.s());
  const double lam_pow = std::pow(lam, 1.0 - nu);  // lambda^(1-nu)
  const double u0 = z1 * lam_pow;

  AsymptoticBundle ab;
  ab.source = B;
  ab.beta = std::log(1.0 / lam);
  ab.tau = B.tau;
  ab.y0 = B.y0;
  ab.alpha = B.psi(-lam);
  ab.zeta_max = 1.0 / (B.y0 * std::pow(B.tau, 2.0 - nu));

  const auto& ud = B.u.domain();
  const auto& pd = B.psi.domain();

  // outer factor: V(zeta) = f(zeta^(1/r)) with f built from the carriers
  auto f_eval = [&](double x) {
    double w = u0 * x;
    for (int j = 0; j < P.p - 1; ++j) {
      w = std::min(ud.hi, std::max(ud.lo, -w));
      w = B.u(w);
    }
    double arg = std::pow(lam, nu - 1.0) * w;
    arg = std::min(pd.hi, std::max(pd.lo, arg));
    return mult_inv * B.psi(arg);
  };
  double V0 = f_eval(0.0);
  double v_hi = std::max({1.02 * V0, 1.001 / (B.y0 * std::pow(B.tau, 1.0 - nu)),
                          1.05 * ab.alpha});
  v_hi = std::min(v_hi, 0.995 * ab.zeta_max);
  {
    FitSpec spec;
    spec.degree = degree;
    spec.warp_left = r;  // exactly the pure-power structure at 0
    spec.max_depth = 24;
    spec.max_pieces = 64;
    ab.V = fit_function(
        [&](double, double dlo, double) {
          return f_eval(std::pow(dlo, 1.0 / r));
        },
        DomainInterval(0.0, v_hi), spec);
  }

  // the doubled map on [1, alpha]
  {
    FitSpec spec;
    spec.degree = degree;
    spec.warp_right = warp_exponent_for_degree(r);
    spec.max_depth = 24;
    spec.max_pieces = 64;
    ab.W = fit_function(
        [&](double zeta, double, double) {
          double a = ab.V(std::min(zeta, ab.V.domain().hi));
          a = std::min(ab.V.domain().hi, std::max(0.0, a));
          return ab.V(a);
        },
        DomainInterval(1.0, ab.alpha), spec);
  }

  // logarithmic-frame carriers
  const double beta = ab.beta;
  const double reach_psi = 0.999 * B.psi.lo_reach();
  {
    FitSpec spec;
    spec.degree = degree;
    spec.warp_right = warp_exponent_for_degree(r);
    spec.max_depth = 24;
    spec.max_pieces = 64;
    double w_hi = std::min(1.98, std::log(0.995 * pd.hi) / beta);
    ab.H_plus = fit_function(
        [&](double w, double, double) {
          double z = std::exp(beta * w);
          return B.psi(std::min(z, pd.hi));
        },
        DomainInterval(-4.0, w_hi), spec);
    ab.H_minus = fit_function(
        [&](double w, double, double dhi) {
          // 1/lambda - exp(beta w) without cancellation at the right end
          double off = -std::expm1(-beta * dhi) / lam;
          if (off < reach_psi) return B.psi.eval_lo(off);
          return B.psi(-std::exp(beta * w));
        },
        DomainInterval(-4.0, 1.0), spec);
  }

  // rescaled carriers in the tau-logarithm variable
  {
    const double c = B.y0 * std::pow(B.tau, 1.0 - nu);
    FitSpec spec;
    spec.degree = degree;
    spec.warp_left = r;
    spec.max_depth = 24;
    spec.max_pieces = 64;
    double lo = std::pow(B.tau, 3.5);
    ab.S_plus = fit_function(
        [&](double zeta, double, double) {
          return c * B.psi(std::min(std::pow(zeta, 1.0 / r), pd.hi));
        },
        DomainInterval(lo, 1.0), spec);
    ab.S_minus = fit_function(
        [&](double zeta, double, double) {
          return c * B.psi(std::max(-std::pow(zeta, 1.0 / r), pd.lo));
        },
        DomainInterval(lo, 1.0), spec);
  }

  ab.w_orbit.resize(P.p);
  for (int j = 0; j < P.p; ++j)
    ab.w_orbit[j] = std::log(B.zeta[j]) / std::log(1.0 / lam);
  return ab;
}

BoundsReport check_bounds(const AsymptoticBundle& ab, double tol) {
  const auto& B = ab.source;
  const auto& P = B.params;
  const double lam = B.lambda, r = P.r, nu = P.nu;
  const double alpha = ab.alpha, tau = ab.tau, y0 = ab.y0;
  const double kconst = 1.0 / (6 * kE + 3 * (2 * kE - 1) * (2 * kE - 1));
  double tol_eff = std::max(
      tol, 100 * (ab.V.tail_bound() / std::max(1.0, ab.V.scale()) +
                  B.psi.tail_bound() / std::max(1.0, B.psi.scale())));
  BoundsReport rep;

  add(rep, "alpha-window-lower", 1 + lam, alpha, tol_eff);
  add(rep, "alpha-window-lower-sharp", std::pow(1 + lam * nu, 1.0 / nu), alpha,
      tol_eff);
  add(rep, "alpha-window-upper", alpha, std::exp(lam), tol_eff);

  add_eq(rep, "V-fixes-one", ab.V(1.0), 1.0, tol_eff);
  add_eq(rep, "V-deriv-at-one", ab.V.deriv(1.0, 1), -1.0 / lam,
         tol_eff / lam * 10);
  add_eq(rep, "outer-deriv-at-one", r * ab.V.deriv(1.0, 1), -r / lam,
         tol_eff * 10 * r / lam);
  add_eq(rep, "V-vanishes-at-alpha", ab.V(alpha), 0.0,
         std::max(tol_eff, 1e-7) * std::max(1.0, ab.V.scale()));

  // hat-W cubic floor on (0,1) and its inverse bound
  auto hatW = [&](double zeta) {
    double a = ab.V(1.0 - zeta);
    a = std::min(ab.V.domain().hi, std::max(0.0, a));
    return 1.0 - ab.V(a);
  };
  {
    double worst = std::numeric_limits<double>::infinity();
    auto grid = interior_grid(0.0, 1.0, 257);
    for (double zeta : grid)
      worst = std::min(worst, hatW(zeta) - zeta * (1 + zeta * zeta / 6));
    add(rep, "hatW-cubic-floor", 0.0, worst, tol_eff);
  }
  {
    double top = hatW(1.0 - 1e-9);
    double worst = std::numeric_limits<double>::infinity();
    auto ygrid = interior_grid(0.0, std::min(0.999, top), 65);
    for (double y : ygrid) {
      double zeta = solve_monotone(hatW, 0.0, 1.0 - 1e-9, y, 1e-13, 1e-9);
      worst = std::min(worst, y * (1 - y * y / 9) - zeta);
    }
    add(rep, "hatW-inverse-cap", 0.0, worst, tol_eff);
  }

  // doubled-map cubic floor on (1, alpha) and the shifted inverse bound
  {
    double worst = std::numeric_limits<double>::infinity();
    auto grid = interior_grid(1.0, alpha, 257);
    for (double zeta : grid) {
      double d = zeta - 1;
      worst = std::min(worst,
                       ab.W(zeta) - 1 - d * (1 + d * d / (6 * kE)));
    }
    add(rep, "W-cubic-floor", 0.0, worst, tol_eff);
  }
  {
    double psi_m1 = B.psi(-1.0);
    add(rep, "psi-minus-one-doubling", psi_m1, 2 * B.psi(-lam), tol_eff);
    add(rep, "psi-minus-one-cap", psi_m1, 2 * std::exp(lam), tol_eff);
    double ytop = std::min(psi_m1 - 1, ab.W(alpha * (1 - 1e-9)) - 1) * (1 - 1e-9);
    auto under_w = [&](double x) { return ab.W(1 + x) - 1; };
    double worst = std::numeric_limits<double>::infinity();
    auto ygrid = interior_grid(0.0, ytop, 65);
    for (double y : ygrid) {
      double x = solve_monotone(under_w, 0.0, alpha - 1 - 1e-12, y, 1e-13,
                                1e-9);
      worst = std::min(worst, y * (1 - kconst * y * y) - x);
    }
    add(rep, "W-underline-inverse-cap", 0.0, worst, tol_eff);
  }

  add(rep, "y0-window-lower", 1.0 / (2 * kE), y0, tol_eff);
  add(rep, "y0-window-upper", y0, 1.0 / (1 + lam), tol_eff);

  // logarithmic-frame caps
  {
    double worst = std::numeric_limits<double>::infinity();
    auto grid = chebyshev_grid(-3.0, 0.0, 257);
    for (double w : grid) {
      double hat = 1.0 - ab.H_plus(w);
      worst = std::min(worst, std::pow(1 - w / 9.0, -0.5) - hat);
    }
    add(rep, "Hplus-hat-sqrt-cap", 0.0, worst, tol_eff);
  }
  {
    double floor_h9 = kconst * lam * lam * lam / (2 * (1 + lam));
    double worst = std::numeric_limits<double>::infinity();
    auto grid = chebyshev_grid(-1.0, -1e-6, 257);
    for (double w : grid) {
      double h = ab.H_minus(w);
      worst = std::min(worst, ab.H_minus.deriv(w, 1) / h - floor_h9);
    }
    add(rep, "Hminus-logderiv-floor", 0.0, worst, tol_eff);
  }
  {
    double worst = std::numeric_limits<double>::infinity();
    auto grid = chebyshev_grid(-3.0, -1e-6, 257);
    for (double w : grid) {
      double h = ab.H_minus(w);
      double gap = h - 1;
      worst = std::min(worst,
                       ab.H_minus.deriv(w, 1) - kconst * gap * gap * gap / 2);
    }
    add(rep, "Hminus-cubic-floor", 0.0, worst, tol_eff);
  }
  add_eq(rep, "Hminus-at-minus-one", ab.H_minus(-1.0), alpha, tol_eff * 10);

  if (r > 3 * P.p / nu) {
    double lhs = kconst / 4;
    double rhs = std::pow(tau, nu / P.p - 3 / r) * std::log(1 / tau);
    add(rep, "tau-floor", lhs, rhs, tol_eff);
  }

  // convexity and Schwarzian consequences of the outer factor
  {
    double conv_hi = std::min(1.0 / (y0 * std::pow(tau, 1 - nu)),
                              ab.V.domain().hi) * (1 - 1e-6);
    double worst_lo = std::numeric_limits<double>::infinity();
    auto grid = interior_grid(1e-4 * conv_hi, conv_hi, 129);
    for (double zeta : grid) {
      double q = -ab.V.deriv(zeta, 2) / ab.V.deriv(zeta, 1);
      worst_lo = std::min(worst_lo, q - (1 - nu) / zeta);
    }
    add(rep, "V-convexity-lower", 0.0, worst_lo, tol_eff * 100);
    double worst_hi = std::numeric_limits<double>::infinity();
    auto grid2 = interior_grid(1e-3, alpha * (1 - 1e-4), 129);
    for (double zeta : grid2) {
      double q = -ab.V.deriv(zeta, 2) / ab.V.deriv(zeta, 1);
      worst_hi = std::min(worst_hi, 1 / zeta - q);
    }
    add(rep, "V-convexity-upper", 0.0, worst_hi, tol_eff * 100);
    double worst_d = std::numeric_limits<double>::infinity();
    auto grid3 = interior_grid(1.0, alpha * (1 - 1e-4), 129);
    for (double zeta : grid3)
      worst_d = std::min(worst_d, -ab.V.deriv(zeta, 1) - 1 / (lam * zeta));
    add(rep, "V-deriv-floor", 0.0, worst_d, tol_eff * 100);
  }
  {
    double worst = std::numeric_limits<double>::infinity();
    auto grid = interior_grid(1.0 + 1e-4 * (alpha - 1),
                              alpha - 1e-4 * (alpha - 1), 129);
    for (double zeta : grid) {
      D3 w = W3(ab.V, zeta);
      worst = std::min(worst, schwarzian(w) - 1 / (zeta * zeta));
    }
    add(rep, "W-schwarzian-floor", 0.0, worst, tol_eff * 1000);
    double s_lam = 16 * lam / std::pow(1 + lam, 4.0);
    double worst2 = std::numeric_limits<double>::infinity();
    auto grid2 = interior_grid(1e-3, 1 - 1e-3, 129);
    for (double zeta : grid2) {
      D3 w = W3(ab.V, zeta);  // Schwarzian is affine-invariant
      worst2 = std::min(worst2, schwarzian(w) - s_lam);
    }
    add(rep, "hatW-schwarzian-floor", 0.0, worst2, tol_eff * 1000);
  }

  for (int j = 0; j < P.p; ++j) {
    add(rep, "w-orbit-lower-" + std::to_string(j), -1.0, ab.w_orbit[j],
        tol_eff);
    add(rep, "w-orbit-upper-" + std::to_string(j), ab.w_orbit[j], nu - 1.0,
        tol_eff);
  }

  // consistency of the logarithmic-frame carriers with V and the doubled map
  {
    double w1 = 0, w2 = 0;
    auto grid = chebyshev_grid(-1.8, 0.5, 65);
    for (double w : grid) {
      double hp = ab.H_plus(w);
      double hm = ab.H_minus(w - 1);
      double hp2 = ab.H_plus(w - 2);
      double vh = ab.V(std::min(std::max(hm, 0.0), ab.V.domain().hi));
      w1 = std::max(w1, std::fabs(hp - vh));
      double a = ab.V(std::min(std::max(hp2, 0.0), ab.V.domain().hi));
      double wv = ab.V(std::min(std::max(a, 0.0), ab.V.domain().hi));
      w2 = std::max(w2, std::fabs(hp - wv));
    }
    add_eq(rep, "H-step-consistency", w1, 0.0, std::max(tol_eff * 100, 1e-8));
    add_eq(rep, "H-double-step-consistency", w2, 0.0,
           std::max(tol_eff * 100, 1e-8));
  }

  add_eq(rep, "remark-inversion-scan", std::min(0.0, remark81_scan_min()), 0.0,
         1e-12);
  return rep;
}

double limit_residual(const AsymptoticBundle& ab) {
  const auto& B = ab.source;
  const auto& P = B.params;
  const double tau = ab.tau, nu = P.nu, r = P.r;
  const double c = ab.y0 * std::pow(tau, 1.0 - nu);
  const auto& pd = B.psi.domain();

  auto Sp = [&](double zeta) {
    double x = std::pow(zeta, 1.0 / r);
    if (x > pd.hi) throw EvalError("limit_residual: escape above");
    return c * B.psi(x);
  };
  auto Sm = [&](double zeta) {
    double x = -std::pow(zeta, 1.0 / r);
    if (x < pd.lo) throw EvalError("limit_residual: escape below");
    return c * B.psi(x);
  };

  double worst = 0;
  auto grid = chebyshev_grid(std::max(std::pow(tau, 0.9), 0.02), 0.98, 65);
  for (double zeta : grid) {
    for (int sign = 0; sign < 2; ++sign) {
      double inner = sign == 0 ? Sm(tau * zeta) : Sp(tau * zeta);
      for (int j = 0; j < P.p - 1; ++j) inner = Sm(inner);
      double rhs = std::pow(tau, -nu) * Sp(std::pow(tau, nu - 1.0) * inner);
      double lhs = sign == 0 ? Sp(zeta) : Sm(zeta);
      worst = std::max(worst, std::fabs(lhs - rhs));
    }
  }
  return worst;
}

namespace {

// margin of the cubic-inversion helper at one admissible triple
inline double remark_margin(double a1, double m, double zeta, double y) {
  double a = a1 / (1 + 3 * a1 * m * m);
  return y * (1 - a * y * y) - zeta;
}

template <bool Parallel>
double remark_scan(int n_zeta, int n_y, int n_a, int n_m) {
  double worst = std::numeric_limits<double>::infinity();
#pragma omp parallel for collapse(2) reduction(min : worst) if (Parallel)
  for (int ia = 0; ia < n_a; ++ia) {
    for (int im = 0; im < n_m; ++im) {
      double a1 =
          0.01 * std::pow(1000.0, static_cast<double>(ia) / (n_a - 1));
      double m = 0.2 + (3.0 - 0.2) * im / (n_m - 1);
      for (int iz = 1; iz <= n_zeta; ++iz) {
        // zeta must satisfy zeta (1 + a' zeta^2) <= m
        double zmax = m / (1 + a1 * m * m);
        double zeta = zmax * iz / (n_zeta + 1);
        double ylo = zeta * (1 + a1 * zeta * zeta);
        if (ylo > m) continue;
        for (int iy = 0; iy <= n_y; ++iy) {
          double y = ylo + (m - ylo) * iy / n_y;
          worst = std::min(worst, remark_margin(a1, m, zeta, y));
        }
      }
    }
  }
  return worst;
}

}  // namespace

double remark81_scan_min(int n_zeta, int n_y, int n_a, int n_m) {
  return remark_scan<true>(n_zeta, n_y, n_a, n_m);
}
double remark81_scan_min_serial(int n_zeta, int n_y, int n_a, int n_m) {
  return remark_scan<false>(n_zeta, n_y, n_a, n_m);
}

double s_distance(const AsymptoticBundle& a, const AsymptoticBundle& b,
                  double lo, double hi, int n) {
  double worst = 0;
  auto grid = chebyshev_grid(lo, hi, n);
  for (double zeta : grid) {
    worst = std::max(worst, std::fabs(a.S_plus(zeta) - b.S_plus(zeta)));
    worst = std::max(worst, std::fabs(a.S_minus(zeta) - b.S_minus(zeta)));
  }
  return worst;
}

}  // namespace asymptotics
}  // namespace renorm
