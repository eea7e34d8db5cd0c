#include "renorm/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace renorm {

Feasibility feasibility(int p, double r, double nu) {
  Feasibility f;
  f.margin = feasibility_margin(p, r, nu);
  f.pass = feasibility_pass(p, r, nu);
  return f;
}

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

// |a - b| <= tol entry
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

}  // namespace

BoundsReport check_bounds(const SolutionBundle& B, double tol) {
  const auto& P = B.params;
  const double lam = B.lambda, z1 = B.z1, r = P.r, nu = P.nu, s = P.s();
  const double mult = std::pow(lam, s);
  const double lam_pow = std::pow(lam, 1.0 - nu);
  const int p = P.p;
  // strict inequalities are tested as margin >= -tol, scaled by the carrier
  // tails so near-equalities stay visible
  double tails = B.psi.tail_bound() / std::max(1.0, B.psi.scale()) +
                 B.u.tail_bound() +
                 B.phi.tail_bound() / std::max(1.0, B.phi.scale());
  double tol_eff = std::max(tol, 100 * tails);
  BoundsReport rep;

  add(rep, "lambda-window-upper", lam, P.b, tol_eff);
  add(rep, "lambda-window-lower", P.lambda_floor(), lam, tol_eff);
  if (P.regime == Regime::PGE2_HIGH_NU && s > p) {
    double l29 = std::pow((1 - P.b) / (16 * r), p / (s - p));
    add(rep, "lambda-window-lower-operator", l29, lam, tol_eff);
  }
  add(rep, "multiplier-vs-lambda", mult, lam / (1 + lam), tol_eff);
  if (nu <= 1.0)
    add(rep, "multiplier-vs-lambda-sharp", mult,
        lam * (1 - std::pow(lam, nu)) / (1 - lam * lam), tol_eff);

  switch (P.regime) {
    case Regime::LOW_NU: {
      double sq = 1 + std::sqrt(lam);
      if (p >= 2) {
        add(rep, "multiplier-cap", mult, lam / ((1 + lam) * sq * sq), tol_eff);
        add(rep, "multiplier-eighth", mult, 0.125, tol_eff);
        add(rep, "degree-window", (1 + lam) / (1 - lam), s, tol_eff);
      } else {
        add(rep, "multiplier-cap", mult,
            lam * (1 - std::pow(lam, nu)) / (1 - lam * lam), tol_eff);
        add(rep, "multiplier-half", mult, 0.5, tol_eff);
      }
      break;
    }
    case Regime::P1_HIGH_NU:
      add(rep, "multiplier-cap", mult,
          std::log(1 / lam) / (2 * (1 - lam * lam)), tol_eff);
      break;
    case Regime::PGE2_HIGH_NU: {
      add(rep, "multiplier-cap", mult,
          (1 + 3 * lam) / (2 + 2 * lam + lam * lam), tol_eff);
      add(rep, "multiplier-cap-max", mult, 9.0 / (4 + 2 * std::sqrt(13.0)),
          tol_eff);
      break;
    }
  }

  // orbit chain product of the log-derivative factors
  {
    double chain = multiplier_chain_product(B.psi, r, B.zeta, p);
    add_eq(rep, "multiplier-chain-identity", chain, mult,
           std::max(1e-7, 1e3 * tol_eff) * std::max(mult, 1e-300));
    if (P.regime == Regime::LOW_NU) {
      double up = 1.0, lo_chain = 1.0;
      for (int j = 0; j < p; ++j) {
        double zj = B.zeta[j];
        up *= zj * (1 + lam) / (r * (1 + zj) * (1 - lam * zj));
        lo_chain *= zj * (1 - P.b) / (r * (1 + zj) * (1 + P.b * zj));
      }
      add(rep, "multiplier-chain-upper", mult, up, tol_eff);
      add(rep, "multiplier-chain-lower", lo_chain, mult, tol_eff);
      double closed_up = std::pow(lam, 1.0 + (p - 1) * (1 - nu)) *
                         std::pow(r * (1 - lam), -p);
      add(rep, "multiplier-chain-upper-closed", mult, closed_up, tol_eff);
      double c = (1 - P.b) * (1 - P.b) / (4 * r * (1 + P.b));
      double closed_lo =
          std::pow(c, p) * std::pow(lam, 1.0 + (p - 1) * (1 - nu));
      add(rep, "multiplier-chain-lower-closed", closed_lo, mult, tol_eff);
    }
  }

  add(rep, "z1-above-lambda-nu", std::pow(lam, nu), z1, tol_eff);
  add(rep, "u0-above-half-gap", (1 - lam) / 2, z1 * lam_pow, tol_eff);
  if (P.regime == Regime::LOW_NU)
    add(rep, "z1-above-half-gap", (1 - lam) / 2, z1, tol_eff);
  if (P.regime == Regime::P1_HIGH_NU)
    add(rep, "z1-above-gap", 1 - lam, z1, tol_eff);

  {
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j + 1 < B.zeta.size(); ++j)
      min_gap = std::min(min_gap, B.zeta[j + 1] - B.zeta[j]);
    add(rep, "orbit-increasing", 0.0, min_gap, tol_eff);
    add_eq(rep, "orbit-endpoint", B.zeta[p], lam_pow,
           tol_eff * std::max(1.0, lam_pow));
    add(rep, "orbit-above-u0", z1 * lam_pow, B.zeta[1], tol_eff);
    if (P.regime == Regime::PGE2_HIGH_NU)
      add(rep, "orbit-gap-ratio", 1.0 / a_of(lam), B.zeta[1] / lam, tol_eff);
  }

  {
    double psi_left = B.psi.eval_lo(0.0);
    add(rep, "psi-left-cap", psi_left, std::pow(lam, -s),
        tol_eff * std::pow(lam, -s));
    double v_top = std::pow(std::max(psi_left, 0.0), 1.0 / r);
    add(rep, "v-cap", v_top, std::pow(lam, -nu), tol_eff * std::pow(lam, -nu));
  }

  add_eq(rep, "psi-at-zero", B.psi(0.0), 1.0, tol_eff);
  add_eq(rep, "psi-at-one", B.psi(1.0), 0.0, tol_eff);
  add_eq(rep, "u-at-origin", B.u(0.0), z1 * lam_pow, tol_eff);
  add_eq(rep, "phi-fixes-one", B.phi(1.0), 1.0, tol_eff);
  {
    double right = B.phi.eval_hi(0.0);
    add(rep, "phi-right-value", right, z1 * std::pow(lam, -nu),
        tol_eff * std::max(1.0, z1 * std::pow(lam, -nu)));
    double left = B.phi.eval_lo(0.0);
    if (p == 1)
      add_eq(rep, "phi-left-zero", left, 0.0, tol_eff);
    else
      add(rep, "phi-left-above-z1", z1, left, tol_eff);
  }

  {
    EnvelopeReport env = e0_envelope_check(B.psi, lam, B.a_frame, tol_eff, 257);
    add(rep, "envelope-sandwich", 0.0, env.min_sandwich, tol_eff);
    add(rep, "envelope-logderiv", 0.0, env.min_logderiv, tol_eff);
  }
  return rep;
}

double appendix_inequality(double x) {
  if (!(x > 0 && x < 1))
    throw DomainError("appendix_inequality: x must lie strictly inside (0,1)");
  double t = (1 + x * x) * (1 + x) * (1 + x);
  return (1 - x * x) * std::log(t) + 4 * x * x * std::log(x);
}

double appendix_sweep_min_serial(int n) {
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= n; ++i) {
    double x = static_cast<double>(i) / (n + 1);
    worst = std::min(worst, appendix_inequality(x));
  }
  return worst;
}

double appendix_sweep_min(int n) {
  double worst = std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(min : worst) schedule(static)
  for (int i = 1; i <= n; ++i) {
    double x = static_cast<double>(i) / (n + 1);
    worst = std::min(worst, appendix_inequality(x));
  }
  return worst;
}

XiMaxReport xi_max(const SolutionBundle& B, double tol) {
  const auto& P = B.params;
  const double lam = B.lambda;
  const double vmax = 1.0 / lam;
  XiMaxReport out;
  auto ucheck = [&](double w) {
    w = std::min(vmax, std::max(-1.0, w));
    return B.u(-w);
  };
  XiMax xm;
  try {
    xm = xi_max_compute_fn(ucheck, lam, P.p);
  } catch (const SolverError& e) {
    throw SolverError(std::string("xi_max: ") + e.what());
  }
  out.xi_max = xm.xi_max;
  out.chain = xm.chain;
  double tails = std::max(tol, 100 * B.u.tail_bound());
  add(out.checks, "xi-above-orbit-ratio", B.zeta[1] / lam, out.xi_max,
      tails * out.xi_max);
  if (xm.chain.size() > 1) {
    for (int j = 1; j <= P.p - 1; ++j)
      add(out.checks, "orbit-below-chain-" + std::to_string(j), B.zeta[j],
          lam * xm.chain[j - 1], tails * std::max(1.0, B.zeta[j]));
    if (P.nu == 2.0)
      add_eq(out.checks, "xi-max-equals-orbit-ratio", out.xi_max,
             B.zeta[1] / lam, std::max(tails, 1e-7) * out.xi_max);
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < xm.chain.size(); ++i)
      gap = std::min(gap, xm.chain[i + 1] - xm.chain[i]);
    add(out.checks, "xi-chain-increasing", 0.0, gap, 0.0);
  }
  return out;
}

CommutativityReport lanford_commutativity(const SolutionBundle& B,
                                          double tol) {
  const auto& P = B.params;
  if (P.nu != 2.0)
    throw RegimeError("lanford_commutativity: identities require nu = 2");
  const double lam = B.lambda, r = P.r;
  const double tau = std::pow(lam, r);
  CommutativityReport rep;

  // two-sided pairing on (-lambda, 1)
  {
    auto grid = chebyshev_grid(-lam * (1 - 1e-9), 1 - 1e-9, 257);
    double worst = 0;
    for (double z : grid) {
      double a1 = lam * B.u(-z / lam);
      double f1 = B.psi(std::min(a1, B.psi.domain().hi));
      double a2 = B.u(z) / lam;
      double f2 = B.psi(std::min(a2, B.psi.domain().hi));
      worst = std::max(worst, std::fabs(f1 + tau * f2));
    }
    rep.pairing_defect = worst;
  }

  // value of the linearizer at the basin edge
  rep.edge_value_defect = std::fabs(B.psi.eval_hi(0.0) + 1.0 / tau);

  // interior fixed point of the flipped one-step map
  {
    const auto& phd = B.phi.domain();
    auto G0 = [&](double x) {
      double arg = std::min(phd.hi, std::max(phd.lo, -x / lam));
      return B.phi(arg);
    };
    rep.xbar =
        bisect([&](double x) { return G0(x) - x; }, 1e-12, 1 - 1e-12, 1e-14);
    rep.xbar_defect = std::fabs(rep.xbar - lam * B.zeta[P.p - 1]);
    double kappa = -(-B.phi.deriv(-rep.xbar / lam, 1) / lam);
    rep.kappa_defect = std::fabs(std::fabs(kappa) - tau) / tau;
  }

  // commutation of the extended pair
  {
    const double zeta1 = B.zeta[1];
    const double hi_psi = B.psi.domain().hi;
    auto u_ext = [&](double w) {  // continuation past the zero of u
      if (w <= 1.0) return B.u(w);
      double ps = B.psi(std::min(w, hi_psi));
      double mag = B.z1 * std::pow(lam, 1.0 - P.nu) *
                   std::pow(std::fabs(ps), 1.0 / r);
      return ps >= 0 ? mag : -mag;
    };
    auto xi_plain = [&](double x) {  // inverse of -u on its range
      return solve_monotone([&](double w) { return -B.u(w); }, -1.0 / lam, 1.0,
                            x, 1e-13, 1e-9);
    };
    auto xi_ext = [&](double x) {
      return solve_monotone([&](double w) { return -u_ext(w); }, -1.0 / lam,
                            zeta1 / lam, x, 1e-13, 1e-9);
    };
    auto eta = [&](double y) { return -lam * xi_plain(-y / lam); };
    auto eta_ext = [&](double y) { return -lam * xi_ext(-y / lam); };
    double worst = 0;
    int skipped = 0;
    auto grid =
        chebyshev_grid(-B.z1 / lam * (1 - 1e-6), B.z1 * (1 - 1e-6), 65);
    for (double x : grid) {
      try {
        double lhs = eta(xi_ext(x));
        double rhs = xi_plain(eta_ext(x));
        worst = std::max(worst, std::fabs(lhs - rhs));
      } catch (const Error&) {
        ++skipped;
      }
    }
    rep.commute_defect = worst;
    rep.commute_skipped = skipped;
  }

  rep.pass = rep.pairing_defect <= tol && rep.edge_value_defect <= tol &&
             rep.xbar_defect <= 1e3 * tol && rep.kappa_defect <= 1e3 * tol &&
             rep.commute_defect <= 1e3 * tol;
  return rep;
}

UnivalenceReport univalence_probe_fn(const AnalyticFn& f, int samples) {
  UnivalenceReport rep;
  const auto& dom = f.domain();
  const double w = dom.width();
  rep.min_deriv = std::numeric_limits<double>::infinity();

  // real axis: a derivative sign change disproves injectivity outright
  auto grid = chebyshev_grid(dom.lo + 1e-4 * w, dom.hi - 1e-4 * w, 257);
  double d0 = f.deriv(grid[0], 1);
  for (double z : grid) {
    double d = f.deriv(z, 1);
    rep.min_deriv = std::min(rep.min_deriv, std::fabs(d));
    if (d * d0 < 0) ++rep.collisions;
  }

  // complex points in the certified region: near-equal values at separated
  // points are polished by Newton before being counted as collisions
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull ^ static_cast<unsigned>(samples));
  std::uniform_real_distribution<double> ux(dom.lo + 1e-3 * w,
                                            dom.hi - 1e-3 * w);
  std::uniform_real_distribution<double> uy(1e-4 * w, 0.4 * w);
  std::vector<std::complex<double>> pts, vals;
  int tries = 0;
  while (static_cast<int>(pts.size()) < samples && tries < 40 * samples) {
    ++tries;
    std::complex<double> z(ux(rng), uy(rng));
    try {
      auto v = f.eval_c(z);
      pts.push_back(z);
      vals.push_back(v);
    } catch (const EvalError&) {
    }
  }
  double scale = std::max(1.0, f.scale());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (std::abs(pts[i] - pts[j]) < 1e-3 * w) continue;
      if (std::abs(vals[i] - vals[j]) > 1e-5 * scale) continue;
      std::complex<double> z = pts[i];
      bool ok = true;
      for (int it = 0; it < 30; ++it) {
        std::complex<double> fv, dv;
        try {
          fv = f.eval_c(z);
          dv = f.deriv_c(z);
        } catch (const EvalError&) {
          ok = false;
          break;
        }
        if (std::abs(dv) < 1e-14 * scale) {
          ok = false;
          break;
        }
        std::complex<double> step = (fv - vals[j]) / dv;
        z -= step;
        if (std::abs(step) < 1e-13 * w) break;
      }
      if (!ok) continue;
      try {
        if (std::abs(f.eval_c(z) - vals[j]) < 1e-10 * scale &&
            std::abs(z - pts[j]) > 1e-4 * w && std::fabs(z.imag()) > 1e-6 * w)
          ++rep.collisions;
      } catch (const EvalError&) {
      }
    }
  }
  rep.pass = rep.collisions == 0;
  return rep;
}

UnivalenceReport univalence_probe(const SolutionBundle& bundle, int samples) {
  return univalence_probe_fn(bundle.psi, samples);
}

AttractorReport attractor_c(const SolutionBundle& B, double tol) {
  const auto& P = B.params;
  const double lam = B.lambda, nu = P.nu;
  const double lam_pow = std::pow(lam, nu - 1.0);
  const double nu_inv = std::pow(lam, -nu);
  AttractorReport rep;

  auto F_c = [&](std::complex<double> z) {
    for (int j = 0; j < P.p - 1; ++j) z = B.u.eval_c(-z);
    return nu_inv * B.u.eval_c(lam_pow * z);
  };
  auto F_r = [&](double z) {
    for (int j = 0; j < P.p - 1; ++j) z = B.u(-z);
    return nu_inv * B.u(lam_pow * z);
  };
  auto dF_r = [&](double z) {
    double prod = 1.0;
    for (int j = 0; j < P.p - 1; ++j) {
      prod *= -B.u.deriv(-z, 1);
      z = B.u(-z);
    }
    return nu_inv * B.u.deriv(lam_pow * z, 1) * lam_pow * prod;
  };

  double u0 = B.u(0.0);
  rep.real_fp_defect = std::fabs(F_r(u0) - u0);
  rep.real_fp_deriv_defect = std::fabs(dF_r(u0) + 1.0 / lam);

  // start at the imaginary unit when certified, else at the midpoint of the
  // certified strip's upper edge
  std::complex<double> z(0.0, 1.0);
  bool ok_start = true;
  try {
    (void)F_c(z);
  } catch (const EvalError&) {
    ok_start = false;
  }
  if (!ok_start) {
    double mid = u0;
    double h = 0.4 * B.u.domain().width();
    for (; h > 1e-8; h *= 0.5) {
      try {
        (void)F_c({mid, h});
        break;
      } catch (const EvalError&) {
      }
    }
    if (h <= 1e-8)
      throw AttractorError("attractor_c: no certified start point");
    z = {mid, 0.5 * h};
  }

  std::complex<double> prev = z;
  bool converged = false;
  for (int it = 0; it < 2000; ++it) {
    std::complex<double> nxt;
    try {
      nxt = F_c(F_c(z));
    } catch (const EvalError& e) {
      throw AttractorError(
          std::string("attractor_c: orbit left the certified region: ") +
          e.what());
    }
    rep.iterations = it + 1;
    prev = z;
    z = nxt;
    if (std::abs(z - prev) < 1e-12 * (1 + std::abs(z))) {
      converged = true;
      break;
    }
  }
  if (!converged) throw AttractorError("attractor_c: no convergence");
  rep.c = z;

  auto dF_c = [&](std::complex<double> w) {
    std::complex<double> prod = 1.0;
    for (int j = 0; j < P.p - 1; ++j) {
      prod *= -B.u.deriv_c(-w);
      w = B.u.eval_c(-w);
    }
    return nu_inv * B.u.deriv_c(lam_pow * w) * lam_pow * prod;
  };
  try {
    rep.multiplier_mod = std::abs(dF_c(F_c(z)) * dF_c(z));
  } catch (const EvalError&) {
    rep.multiplier_mod = std::numeric_limits<double>::quiet_NaN();
  }
  rep.pass = z.imag() > 0 && rep.multiplier_mod < 1.0 &&
             rep.real_fp_defect < 1e3 * tol &&
             rep.real_fp_deriv_defect < 1e2 * tol;
  return rep;
}

}  // namespace renorm
