#include "renorm/renorm_ops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace renorm {

namespace {

FitSpec pipeline_fitspec(const StepOptions& opt, double warp_l, double warp_r) {
  FitSpec spec;
  spec.degree = opt.degree;
  spec.tol_rel = opt.fit_tol;
  spec.warp_left = warp_l;
  spec.warp_right = warp_r;
  // frames stretch like 1/lambda, so piece layouts may need to descend
  // through many scales
  spec.max_depth = 44;
  spec.max_pieces = 96;
  return spec;
}

template <class F>
auto run_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    std::ostringstream os;
    os << stage << ": " << e.what();
    throw Error(os.str());
  }
}

// ---------------------------------------------------------------------------
// Schroeder function of phi0 at the fixed point 1.
//
// The raw limit definition loses all precision once the orbit is close to 1
// (the divided difference cancels), so the tail is evaluated with a local
// power series h(1+d) = d + c_2 d^2 + ... whose coefficients come from the
// Taylor expansion of phi0 at 1, and the orbit only runs until it enters the
// series' ball.
// ---------------------------------------------------------------------------
struct Schroeder {
  const AnalyticFn* phi0 = nullptr;
  double multiplier = 0;
  std::vector<double> cloc;  // c_1..c_K with c_1 = 1
  double delta0 = 0.05;
  int cap = 10000;

  void build(const AnalyticFn& f, double mult, int order = 24) {
    phi0 = &f;
    multiplier = mult;
    double R = f.taylor_radius(1.0);
    if (R <= 0) throw LinearizationError("linearizer: fixed point at domain end");
    std::vector<double> a = f.taylor_at(1.0, order, 0.0);
    if (std::fabs(a[0] - 1.0) > 1e-8)
      throw LinearizationError("linearizer: map does not fix 1");
    double m = a[1];
    if (!(m > 0 && m < 1))
      throw LinearizationError("linearizer: multiplier outside (0,1)");
    if (std::fabs(m - mult) > 1e-6 * std::max(mult, 1e-6))
      throw LinearizationError("linearizer: multiplier mismatch with frame");
    // g_k = Taylor of phi0(1+d) - 1; solve h(g(d)) = m h(d) order by order
    const int K = order;
    std::vector<double> g(K + 1, 0.0);
    for (int k = 1; k <= K; ++k) g[k] = a[k];
    g[1] = m;
    std::vector<std::vector<double>> gpow(K + 1);  // g^j truncated at K
    gpow[1] = g;
    for (int j = 2; j <= K; ++j) {
      gpow[j].assign(K + 1, 0.0);
      for (int i = j - 1; i <= K; ++i) {
        if (gpow[j - 1][i] == 0.0) continue;
        for (int l = 1; i + l <= K; ++l)
          gpow[j][i + l] += gpow[j - 1][i] * g[l];
      }
    }
    std::vector<double> c(K + 1, 0.0);
    c[1] = 1.0;
    for (int k = 2; k <= K; ++k) {
      double rhs = 0;
      for (int j = 1; j < k; ++j) rhs += c[j] * gpow[j][k];
      c[k] = rhs / (m - std::pow(m, k));
    }
    cloc.assign(c.begin() + 1, c.end());  // cloc[i] = c_{i+1}
    // stay well inside the series' own radius (it shrinks with the
    // multiplier, roughly like m / g_2)
    double rad = std::numeric_limits<double>::infinity();
    for (int k = 2; k <= K; ++k) {
      double a = std::fabs(c[k]);
      if (a > 1e-12) rad = std::min(rad, std::pow(a, -1.0 / (k - 1)));
    }
    delta0 = std::min({0.05, 0.25 * R, 0.3 * rad});
    if (!(delta0 > 0))
      throw LinearizationError("linearizer: empty core ball");
    multiplier = m;
  }

  double from(double w, int j) const {
    while (std::fabs(w - 1.0) > delta0) {
      w = (*phi0)(w);
      if (++j > cap)
        throw LinearizationError("linearizer: orbit did not reach the core");
    }
    double d = w - 1.0;
    double s = 0;
    for (int i = static_cast<int>(cloc.size()) - 1; i >= 0; --i)
      s = cloc[i] + d * s;
    s *= d;
    return s * std::pow(multiplier, -static_cast<double>(j));
  }
  double operator()(double z) const { return from(z, 0); }
};

double clamp_to(double x, double lo, double hi, double slack,
                const char* what) {
  if (x < lo - slack || x > hi + slack) {
    std::ostringstream os;
    os << what << ": value " << x << " escapes [" << lo << ", " << hi << "]";
    throw EvalError(os.str());
  }
  return std::min(hi, std::max(lo, x));
}

}  // namespace

// ---------------------------------------------------------------------------

double extract_lambda(const AnalyticFn& Phi, const RegimeParams& params) {
  if (Phi.tail_bound() > 1e-6 * std::max(1.0, Phi.scale()))
    throw PreconditionError("extract_lambda: representation not resolved");
  double one = Phi(1.0);
  if (std::fabs(one - 1.0) > 1e-7)
    throw RegimeError("extract_lambda: frame function does not fix 1");
  double d = Phi.deriv(1.0, 1);
  double cap = std::pow(params.b, params.s());
  if (!(d > 0) || d > cap * (1 + 1e-10)) {
    std::ostringstream os;
    os << "extract_lambda: derivative " << d << " outside (0, " << cap << "]";
    throw RegimeError(os.str());
  }
  return std::pow(std::min(d, cap), 1.0 / params.s());
}

FrameState conjugate_to_lambda(const AnalyticFn& Phi, double lambda,
                               const RegimeParams& params,
                               const StepOptions& opt) {
  const double b = params.b;
  if (!(lambda > 0 && lambda <= b * (1 + 1e-12)))
    throw FrameError("conjugate_to_lambda: lambda outside (0, b]");
  FrameState fs;
  fs.lambda = std::min(lambda, b);
  fs.a_frame = (params.regime == Regime::PGE2_HIGH_NU)
                   ? (1 + fs.lambda) / 2 + (b - fs.lambda) / (1 + b)
                   : b - fs.lambda * (1 - b);
  if (std::fabs(fs.lambda - b) < 1e-14) {
    fs.phi0 = Phi;
    return fs;
  }
  Homography h = make_h(b, fs.lambda);
  Homography hinv = make_h(fs.lambda, b);
  DomainInterval dom(-1.0 / fs.lambda, 1.0 / fs.a_frame);
  const auto& pdom = Phi.domain();
  const double reach = 0.999 * Phi.lo_reach();
  FitSpec spec = pipeline_fitspec(opt, params.warp(), 1.0);
  try {
    fs.phi0 = fit_function(
        [&](double x, double dlo, double) {
          double doff = hinv.image_offset(dom.lo, dlo);
          if (doff < reach) return h(Phi.eval_lo(doff));
          double y = hinv(x);
          y = std::min(pdom.hi, std::max(pdom.lo, y));
          return h(Phi(y));
        },
        dom, spec);
  } catch (const Error& e) {
    throw FrameError(std::string("conjugate_to_lambda: ") + e.what());
  }
  return fs;
}

AnalyticFn koenigs_linearizer(const FrameState& frame, double multiplier,
                              const RegimeParams& params,
                              const StepOptions& opt, double* defect) {
  if (!(multiplier > 0 && multiplier < 1))
    throw LinearizationError("koenigs_linearizer: multiplier must be in (0,1)");
  Schroeder sch;
  sch.build(frame.phi0, multiplier);
  double h0 = sch(0.0);
  if (!(h0 < 0))
    throw LinearizationError("koenigs_linearizer: degenerate normalization");
  DomainInterval dom = frame.phi0.domain();
  const double reach = 0.999 * frame.phi0.lo_reach();
  FitSpec spec = pipeline_fitspec(opt, params.warp(), 1.0);
  AnalyticFn psi = fit_function(
      [&](double z, double dlo, double) {
        if (dlo < reach) return sch.from(frame.phi0.eval_lo(dlo), 1) / h0;
        return sch(z) / h0;
      },
      dom, spec);
  // a-posteriori check of the defining relation on a fresh grid, in the
  // orientation m psi(z) = psi(phi0(z)) that does not amplify noise when
  // the multiplier is small
  auto grid = chebyshev_grid(dom.lo, dom.hi, 129);
  const double m = sch.multiplier;
  double worst = 0;
  for (double z : grid) {
    double lhs = m * psi(z);
    double w = frame.phi0(z);
    w = std::min(dom.hi, std::max(dom.lo, w));
    worst = std::max(worst, std::fabs(lhs - psi(w)));
  }
  if (defect) *defect = worst / m;
  double floor_rel = std::max(1e-7, 200 * kEps / m);
  if (worst > floor_rel * std::max(1.0, m * psi.scale()))
    throw LinearizationError("koenigs_linearizer: functional-equation defect " +
                             std::to_string(worst / m));
  return psi;
}

AnalyticFn build_v(const AnalyticFn& psi, double r, const StepOptions& opt) {
  const double lambda = -1.0 / psi.domain().lo;
  if (!(lambda > 0 && lambda < 1))
    throw PreconditionError("build_v: psi domain does not start at -1/lambda");
  const double neg_tol = 1e-10 * std::max(1.0, psi.scale());
  DomainInterval dom(-1.0, 1.0 / lambda);
  // local model of psi at its simple zero; the r-th root needs the offset
  // to full relative accuracy there
  const int ord = 20;
  double R_used = 0;
  std::vector<double> tay = psi.taylor_at(1.0, ord, 0.0, &R_used);
  if (std::fabs(tay[0]) > 1e-6 * std::max(1.0, psi.scale()))
    throw PreconditionError("build_v: psi(1) is not zero");
  tay[0] = 0.0;
  if (!(tay[1] < 0))
    throw PreconditionError("build_v: psi must be decreasing at its zero");
  const double sw = 0.2 * R_used;           // local-series validity
  const double reach = 0.999 * psi.lo_reach();
  StepOptions o2 = opt;
  FitSpec spec = pipeline_fitspec(o2, warp_exponent_for_degree(r),
                                  warp_exponent_for_degree(r));
  return fit_function(
      [&, lambda, r, neg_tol, sw](double z, double dlo, double dhi) {
        double p;
        if (dlo < sw) {
          // psi(1 - dlo) by the local series, no cancellation
          double q = 0;
          for (int k = ord; k >= 1; --k) q = tay[k] + q * (-dlo);
          p = q * (-dlo);
        } else if (dhi < reach) {
          p = psi.eval_lo(dhi);  // -z = psi.lo + dhi
        } else {
          p = psi(-z);
        }
        if (p < -neg_tol) {
          std::ostringstream os;
          os << "build_v: psi negative (" << p << ") at " << -z;
          throw BranchError(os.str());
        }
        return std::pow(std::max(p, 0.0), 1.0 / r);
      },
      dom, spec);
}

OrbitSolve solve_z1(const AnalyticFn& v, double lambda,
                    const RegimeParams& params) {
  const int p = params.p;
  const double nu = params.nu;
  const double lam_pow = std::pow(lambda, 1.0 - nu);  // lambda^(1-nu)
  const double vmax = 1.0 / lambda;
  const double slack = 1e-9 * vmax;
  const double vlam = v(lambda);
  if (!(vlam > 1.0))
    throw SolverError("solve_z1: v(lambda) must exceed 1");
  const double s_star = std::pow(lambda, nu) / vlam;

  // x_k(s): k-fold application of w -> s lam_pow v(w) started at lambda.
  // Intermediate escapes beyond 1/lambda flag the chain as "above target".
  auto chain = [&](double s, int k, bool* escaped) -> double {
    double w = lambda;
    *escaped = false;
    for (int i = 0; i < k; ++i) {
      if (w > vmax + slack) {
        *escaped = true;
        return vmax;
      }
      w = s * lam_pow * v(std::min(w, vmax));
    }
    return w;
  };
  auto chain_value = [&](double s, int k) {
    bool esc = false;
    double w = chain(s, k, &esc);
    return esc ? std::numeric_limits<double>::infinity() : w;
  };

  OrbitSolve out;
  if (p == 1) {
    out.z1 = 1.0 / vlam;
  } else {
    double bracket_hi;
    if (params.regime == Regime::PGE2_HIGH_NU) {
      // descending chain of parameters at which successive iterates reach
      // the top of the carrier interval
      double s_prev = std::pow(lambda, nu - 2.0) / vlam;
      out.s_chain.push_back(s_prev);
      for (int j = 2; j <= p - 1; ++j) {
        if (!(s_prev > s_star * (1 + 1e-13)))
          throw RegimeError("solve_z1: bracket chain collapsed");
        double sj = bisect(
            [&](double s) { return chain_value(s, j) - vmax; }, s_star, s_prev,
            1e-15);
        out.s_chain.push_back(sj);
        s_prev = sj;
      }
      bracket_hi = s_prev;
    } else {
      bracket_hi = 1.0;
    }
    if (!(bracket_hi > s_star))
      throw RegimeError("solve_z1: empty bracket");
    double target = lam_pow;
    double z1 = bisect(
        [&](double s) { return chain_value(s, p) - target; }, s_star,
        bracket_hi, 1e-15);
    // one Newton polish with the analytic chain derivative
    {
      double w = lambda, wp = 0.0;
      for (int i = 0; i < p; ++i) {
        double wc = std::min(w, vmax);
        double vw = v(wc), dvw = v.deriv(wc, 1);
        double wn = z1 * lam_pow * vw;
        wp = lam_pow * vw + z1 * lam_pow * dvw * wp;
        w = wn;
      }
      if (wp > 0) {
        double corr = (w - target) / wp;
        double cand = z1 - corr;
        if (cand > s_star && cand < bracket_hi) z1 = cand;
      }
    }
    out.z1 = z1;
  }
  if (!(out.z1 > 0 && out.z1 < 1))
    throw SolverError("solve_z1: z1 left (0,1)");

  out.zeta.resize(p + 2);
  double w = lambda;
  out.zeta[0] = w;
  for (int j = 1; j <= p + 1; ++j) {
    w = out.z1 * lam_pow * v(clamp_to(w, -1.0, vmax, slack, "solve_z1 orbit"));
    out.zeta[j] = w;
  }
  for (int j = 0; j <= p; ++j)
    if (!(out.zeta[j] < out.zeta[j + 1]))
      throw SolverError("solve_z1: orbit not strictly increasing");
  if (std::fabs(out.zeta[p] - lam_pow) > 1e-6 * std::max(1.0, lam_pow))
    throw SolverError("solve_z1: orbit endpoint off target");
  return out;
}

AnalyticFn build_phi(const AnalyticFn& v, double z1, double lambda,
                     const RegimeParams& params, const StepOptions& opt) {
  const int p = params.p;
  const double nu = params.nu;
  const double lam_pow = std::pow(lambda, 1.0 - nu);
  const double vmax = 1.0 / lambda;
  const double slack = 1e-9 * vmax;
  double hi;
  if (params.regime == Regime::PGE2_HIGH_NU) {
    double zeta1 = z1 * lam_pow * v(lambda);
    hi = zeta1 / lambda;
  } else {
    hi = 1.0 / (lambda * lambda);
  }
  DomainInterval dom(-1.0 / lambda, hi);
  const double reach_lo = 0.999 * v.lo_reach() / lambda;
  const double reach_hi = 0.999 * v.hi_reach() / lambda;
  const bool narrow = params.regime == Regime::PGE2_HIGH_NU;
  FitSpec spec = pipeline_fitspec(opt, params.warp(), params.warp());
  return fit_function(
      [&, z1, lambda, lam_pow, p, narrow](double x, double dlo,
                                          double dhi) {
        double w;
        if (dlo < reach_lo) {
          w = z1 * lam_pow * v.eval_lo(lambda * dlo);  // 1 + lambda x exactly
        } else if (!narrow && dhi < reach_hi) {
          w = z1 * lam_pow * v.eval_hi(lambda * dhi);  // 1/lambda - lambda x
        } else {
          w = clamp_to(lambda * x, -1.0, vmax, slack, "build_phi");
          w = z1 * lam_pow * v(w);
        }
        for (int i = 1; i < p; ++i)
          w = z1 * lam_pow * v(clamp_to(w, -1.0, vmax, slack, "build_phi"));
        return std::pow(lambda, nu - 1.0) * w;
      },
      dom, spec);
}

double multiplier_chain_product(const AnalyticFn& psi, double r,
                                const std::vector<double>& zeta, int p) {
  double prod = 1.0;
  for (int j = 0; j < p; ++j) {
    double z = zeta[j];
    double ps = psi(-z), dps = psi.deriv(-z, 1);
    prod *= (-z * dps) / (r * ps);
  }
  return prod;
}

void check_frame_class(const AnalyticFn& Phi, const RegimeParams& params,
                       double tol) {
  const auto& dom = Phi.domain();
  if (std::fabs(Phi(1.0) - 1.0) > tol)
    throw PreconditionError("frame class: function does not fix 1");
  double d = Phi.deriv(1.0, 1);
  double cap = std::pow(params.b, params.s());
  if (!(d > 0 && d <= cap * (1 + 1e-9)))
    throw PreconditionError("frame class: derivative at 1 outside (0, b^(r nu)]");
  double m = 1e-4 * dom.width();
  auto grid = chebyshev_grid(dom.lo + m, dom.hi - m, 65);
  double scale = std::max(1.0, Phi.scale());
  for (double z : grid) {
    if (Phi(z) < -tol * scale)
      throw PreconditionError("frame class: negative value inside domain");
    if (Phi.deriv(z, 1) < -tol * scale)
      throw PreconditionError("frame class: not increasing");
  }
  if (Phi(dom.lo) < -tol * scale)
    throw PreconditionError("frame class: negative at left end");
  if (Phi(dom.hi) > dom.hi * (1 + tol))
    throw PreconditionError("frame class: right end not mapped into domain");
}

namespace {

AnalyticFn conjugate_back(const AnalyticFn& phi, double lambda,
                          const RegimeParams& params, const StepOptions& opt) {
  const double b = params.b;
  DomainInterval dom = params.frame();
  FitSpec spec = pipeline_fitspec(opt, params.warp(), 1.0);
  if (std::fabs(lambda - b) < 1e-14) return phi;  // identity conjugation
  Homography h = make_h(b, lambda);
  Homography hinv = make_h(lambda, b);
  const auto& pd = phi.domain();
  const double reach = 0.999 * phi.lo_reach();
  return fit_function(
      [&, reach](double z, double dlo, double) {
        double doff = h.image_offset(dom.lo, dlo);
        if (doff < reach) return hinv(phi.eval_lo(doff));
        double x = h(z);
        x = std::min(pd.hi, std::max(pd.lo, x));
        return hinv(phi(x));
      },
      dom, spec);
}

}  // namespace

BStep apply_B_full(const AnalyticFn& Phi, const RegimeParams& params,
                   const StepOptions& opt) {
  if (opt.check_class)
    run_stage("apply_B[class]",
              [&] { check_frame_class(Phi, params, opt.class_tol); return 0; });
  BStep st;
  st.lambda = run_stage("apply_B[lambda]",
                        [&] { return extract_lambda(Phi, params); });
  st.multiplier = Phi.deriv(1.0, 1);
  st.frame = run_stage("apply_B[conjugate]", [&] {
    return conjugate_to_lambda(Phi, st.lambda, params, opt);
  });
  st.psi = run_stage("apply_B[linearize]", [&] {
    return koenigs_linearizer(st.frame, st.multiplier, params, opt,
                              &st.koenigs_defect);
  });
  st.v = run_stage("apply_B[v]", [&] { return build_v(st.psi, params.r, opt); });
  OrbitSolve orb = run_stage("apply_B[z1]",
                             [&] { return solve_z1(st.v, st.lambda, params); });
  st.z1 = orb.z1;
  st.zeta = orb.zeta;
  st.phi = run_stage("apply_B[phi]", [&] {
    return build_phi(st.v, st.z1, st.lambda, params, opt);
  });
  st.Phi_next = run_stage("apply_B[conjugate_back]", [&] {
    return conjugate_back(st.phi, st.lambda, params, opt);
  });
  st.lambda_floor_flag = st.lambda < params.lambda_floor();
  return st;
}

AnalyticFn apply_B(const AnalyticFn& Phi, const RegimeParams& params,
                   const StepOptions& opt) {
  return apply_B_full(Phi, params, opt).Phi_next;
}

double truncated_multiplier_floor(const RegimeParams& params) {
  const double l1 = params.lambda1, r = params.r;
  const int p = params.p;
  double a1 = (1 + l1) / 2 + (params.b - l1) / (1 + params.b);
  double t1 = std::pow(l1, params.s());
  double a3 = t1 + (1 - t1) * a1;
  double f1 = (1 - a3) / (r * (1 + l1) * (1 + a3 * l1));
  double f2 = (1 - a3) / (r * (1 + l1) * (l1 + a3));
  return std::pow(l1, p) * f1 * std::pow(f2, p - 1);
}

BStep apply_N_full(const AnalyticFn& Phi, const RegimeParams& params,
                   const StepOptions& opt) {
  if (params.regime != Regime::PGE2_HIGH_NU)
    throw RegimeError("apply_N: truncated operator needs the wide frame");
  const double l1 = params.lambda1;
  double escape_cap = std::pow(9.0 * params.r, -params.p / (params.s() - 1.0));
  if (!(l1 > 0 && l1 <= 0.125 && l1 < escape_cap))
    throw RegimeError("apply_N: lambda1 outside the escape window");
  if (opt.check_class)
    run_stage("apply_N[class]",
              [&] { check_frame_class(Phi, params, opt.class_tol); return 0; });
  double sigma_nu = Phi.deriv(1.0, 1);
  double tau1_nu = std::pow(l1, params.s());
  if (sigma_nu >= tau1_nu) return apply_B_full(Phi, params, opt);

  BStep st;
  st.truncated_branch = true;
  st.lambda = l1;
  st.multiplier = sigma_nu;
  st.frame = run_stage("apply_N[conjugate]", [&] {
    return conjugate_to_lambda(Phi, l1, params, opt);
  });
  AnalyticFn psi1 = run_stage("apply_N[linearize]", [&] {
    return koenigs_linearizer(st.frame, sigma_nu, params, opt,
                              &st.koenigs_defect);
  });
  Homography theta = make_theta(sigma_nu, tau1_nu);
  double a1 = st.frame.a_frame;
  double a3 = tau1_nu + (1 - tau1_nu) * a1;
  st.ell = (tau1_nu - sigma_nu + (1 - tau1_nu) * a1) / (1 - sigma_nu);
  DomainInterval dom(-1.0 / l1, 1.0 / a3);
  const double reach = 0.999 * psi1.lo_reach();
  FitSpec spec = pipeline_fitspec(opt, params.warp(), 1.0);
  st.psi = run_stage("apply_N[shift]", [&] {
    return fit_function(
        [&](double z, double dlo, double) {
          return theta(dlo < reach ? psi1.eval_lo(dlo) : psi1(z));
        },
        dom, spec);
  });
  st.v = run_stage("apply_N[v]", [&] { return build_v(st.psi, params.r, opt); });
  OrbitSolve orb =
      run_stage("apply_N[z1]", [&] { return solve_z1(st.v, l1, params); });
  st.z1 = orb.z1;
  st.zeta = orb.zeta;
  st.phi = run_stage("apply_N[phi]", [&] {
    return build_phi(st.v, st.z1, l1, params, opt);
  });
  st.Phi_next = run_stage("apply_N[conjugate_back]", [&] {
    return conjugate_back(st.phi, l1, params, opt);
  });
  st.lambda_floor_flag = true;
  return st;
}

AnalyticFn apply_N(const AnalyticFn& Phi, const RegimeParams& params,
                   const StepOptions& opt) {
  return apply_N_full(Phi, params, opt).Phi_next;
}

XiMax xi_max_compute(const AnalyticFn& v, double z1, double lambda,
                     const RegimeParams& params) {
  const double lam_pow = std::pow(lambda, 1.0 - params.nu);
  const double vmax = 1.0 / lambda;
  const double slack = 1e-9 * vmax;
  return xi_max_compute_fn(
      [&, z1, lam_pow](double w) {
        return z1 * lam_pow * v(clamp_to(w, -1.0, vmax, slack, "xi_max"));
      },
      lambda, params.p);
}

XiMax xi_max_compute_fn(const RealFn& ucheck, double lambda, int p) {
  const double vmax = 1.0 / lambda;
  XiMax out;
  double top = ucheck(vmax);
  if (top <= vmax * (1 + 1e-12)) {
    out.xi_max = vmax * vmax;
    out.chain = {out.xi_max};
    return out;
  }
  std::vector<double> xi(p + 1, 0.0);
  xi[p] = vmax * vmax;
  double zeta1 = ucheck(lambda);
  for (int j = p - 1; j >= 1; --j) {
    auto Fj = [&](double x) {
      double w = lambda * x;
      for (int k = 0; k < p - j; ++k) w = ucheck(w);
      return w;
    };
    double lo = zeta1 / lambda * (1 - 1e-12);
    double hi = xi[j + 1];
    try {
      xi[j] = solve_monotone(Fj, lo, hi, vmax, 1e-13 * vmax, 1e-9 * vmax);
    } catch (const SolverError& e) {
      throw SolverError(std::string("xi_max chain inversion: ") + e.what());
    }
  }
  out.chain.assign(xi.begin() + 1, xi.end());
  for (std::size_t i = 0; i + 1 < out.chain.size(); ++i)
    if (!(out.chain[i] < out.chain[i + 1]))
      throw SolverError("xi_max: chain not increasing");
  out.xi_max = out.chain.front();
  return out;
}

}  // namespace renorm
