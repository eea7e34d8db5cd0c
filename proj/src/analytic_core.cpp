#include "renorm/analytic_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace renorm {

double schwarz_multiplier_bound(double A, double B, double A2, double B2) {
  if (!(A > 0 && B > 0 && A2 > 0 && B2 > 0))
    throw DomainError("schwarz_multiplier_bound: all radii must be positive");
  return A2 * B2 * (A + B) / (A * B * (A2 + B2));
}

double chi_eval(double b, double s, double z) {
  double den = 1 + b - b * b * (z - 1);
  if (den <= 0) throw EvalError("chi: past the pole");
  return 1 + std::pow(b, s - 1) * b * (1 + b) * (z - 1) / den;
}

AnalyticFn make_chi(double b, double s, int degree) {
  if (!(b > 0 && b < 1)) throw DomainError("make_chi: b must be in (0,1)");
  if (!(s > 1)) throw DomainError("make_chi: s must be > 1");
  DomainInterval dom(-1.0 / b, 1.0 / (b * b));
  FitSpec spec;
  spec.degree = degree;
  spec.split = false;
  return fit_function([b, s](double z) { return chi_eval(b, s, z); }, dom,
                      spec);
}

AnalyticFn negate(const AnalyticFn& f) {
  std::vector<Piece> ps = f.pieces();
  for (auto& p : ps)
    for (auto& c : p.coef) c = -c;
  return AnalyticFn::from_pieces(f.domain(), std::move(ps), f.tol_rel());
}

AnalyticFn fit(const RealFn& fn, DomainInterval domain, int degree) {
  FitSpec spec;
  spec.degree = degree;
  spec.split = false;
  return fit_function(fn, domain, spec);
}

AnalyticFn compose(const AnalyticFn& f, const AnalyticFn& g, int degree) {
  const auto& fd = f.domain();
  const auto& gd = g.domain();
  const int probe = std::max(512, 4 * degree);
  auto grid = chebyshev_grid(gd.lo, gd.hi, probe);
  std::vector<double> gv(grid.size());
  g.eval_many(grid, gv);
  double slack = 1e-12 * fd.width() + g.tail_bound();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (gv[i] < fd.lo - slack || gv[i] > fd.hi + slack) {
      double a = i > 0 ? grid[i - 1] : gd.lo;
      double b = i + 1 < grid.size() ? grid[i + 1] : gd.hi;
      std::ostringstream os;
      os << "compose: range escape near [" << a << ", " << b << "], g("
         << grid[i] << ") = " << gv[i] << " outside [" << fd.lo << ", "
         << fd.hi << "]";
      throw CompositionError(os.str());
    }
  }
  FitSpec spec;
  spec.degree = degree;
  spec.split = true;
  return fit_function(
      [&](double x) {
        double y = g(x);
        y = std::min(fd.hi, std::max(fd.lo, y));
        return f(y);
      },
      gd, spec);
}

// ---------------------------------------------------------------------------
// Herglotz certification
// ---------------------------------------------------------------------------

CertifyReport herglotz_certify(const AnalyticFn& f, const CertifyOptions& opt) {
  if (!f.resolved())
    throw PreconditionError("herglotz_certify: representation not resolved");
  const auto& dom = f.domain();
  const double margin = opt.end_margin_rel * dom.width();
  const double a = dom.lo, b = dom.hi;
  CertifyReport rep;
  rep.min_matrix_eig = std::numeric_limits<double>::infinity();
  rep.min_deriv = std::numeric_limits<double>::infinity();
  rep.min_logderiv_lo = std::numeric_limits<double>::infinity();
  rep.min_logderiv_hi = std::numeric_limits<double>::infinity();

  // Hankel matrices of Taylor coefficients at the sample points
  const int order = 2 * opt.N - 1;
  auto mat_grid = chebyshev_grid(a + margin, b - margin, opt.matrix_samples);
  for (double x : mat_grid) {
    std::vector<double> tay;
    try {
      tay = f.taylor_at(x, order);
    } catch (const EvalError&) {
      ++rep.skipped;
      continue;
    }
    // derivative scale normalizes the eigenvalue tolerance at this point
    double sc = 0;
    for (int k = 1; k <= order; ++k) sc = std::max(sc, std::fabs(tay[k]));
    if (sc == 0) sc = 1;
    std::vector<double> M(opt.N * opt.N);
    for (int j = 0; j < opt.N; ++j)
      for (int k = 0; k < opt.N; ++k) M[j * opt.N + k] = tay[j + k + 1] / sc;
    rep.min_matrix_eig =
        std::min(rep.min_matrix_eig, smallest_eigenvalue_sym(M, opt.N));
  }

  auto grid = chebyshev_grid(a + margin, b - margin, opt.grid_samples);
  double deriv_scale = 0;
  std::vector<double> d1(grid.size()), d2(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    d1[i] = f.deriv(grid[i], 1);
    d2[i] = f.deriv(grid[i], 2);
    deriv_scale = std::max(deriv_scale, std::fabs(d1[i]));
  }
  if (deriv_scale == 0) deriv_scale = 1;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double z = grid[i];
    rep.min_deriv = std::min(rep.min_deriv, d1[i]);
    if (std::fabs(d1[i]) < 1e-12 * deriv_scale) {
      ++rep.skipped;
      continue;
    }
    double q = d2[i] / d1[i];
    rep.min_logderiv_lo = std::min(rep.min_logderiv_lo, q + 2.0 / (z - a));
    rep.min_logderiv_hi = std::min(rep.min_logderiv_hi, 2.0 / (b - z) - q);
  }

  double tol = opt.tol;
  rep.pass = rep.min_matrix_eig >= -tol && rep.min_deriv >= -tol * deriv_scale &&
             rep.min_logderiv_lo >= -tol / dom.width() * 4 &&
             rep.min_logderiv_hi >= -tol / dom.width() * 4;
  std::ostringstream os;
  os << "min_eig=" << rep.min_matrix_eig << " min_deriv=" << rep.min_deriv
     << " logderiv=(" << rep.min_logderiv_lo << "," << rep.min_logderiv_hi
     << ") skipped=" << rep.skipped;
  rep.detail = os.str();
  return rep;
}

CertifyReport herglotz_certify(const AnalyticFn& f, int N, double tol) {
  CertifyOptions opt;
  opt.N = N;
  opt.tol = tol;
  return herglotz_certify(f, opt);
}

CertifyReport anti_herglotz_certify(const AnalyticFn& f, int N, double tol) {
  return herglotz_certify(negate(f), N, tol);
}

// ---------------------------------------------------------------------------
// Envelope checks
// ---------------------------------------------------------------------------

EnvelopeReport e0_envelope_check(const AnalyticFn& psi, double u_minus,
                                 double u_plus, double tol, int grid_n) {
  if (u_minus < 0 || u_plus < 0)
    throw DomainError("e0_envelope_check: parameters must be >= 0");
  if (std::fabs(psi(0.0) - 1.0) > std::max(tol, 1e-8) ||
      std::fabs(psi(1.0)) > std::max(tol, 1e-8))
    throw PreconditionError("e0_envelope_check: psi not normalized");
  const auto& dom = psi.domain();
  double lo = dom.lo, hi = dom.hi;
  if (u_minus > 0) lo = std::max(lo, -1.0 / u_minus);
  if (u_plus > 0) hi = std::min(hi, 1.0 / u_plus);
  double w = hi - lo;
  lo += 1e-9 * w;
  hi -= 1e-9 * w;
  EnvelopeReport rep;
  rep.min_sandwich = std::numeric_limits<double>::infinity();
  rep.min_logderiv = std::numeric_limits<double>::infinity();
  auto grid = chebyshev_grid(lo, hi, grid_n);
  for (double z : grid) {
    if (std::fabs(z - 1.0) < 1e-6 * w) continue;
    double p = psi(z);
    double ru = p * (1 - u_plus * z) / (1 - z);
    double rl = p * (1 + u_minus * z) / (1 - z);
    double m1, m2;
    if (z > 0) {
      m1 = 1.0 - ru;
      m2 = rl - 1.0;
    } else {
      m1 = ru - 1.0;
      m2 = 1.0 - rl;
    }
    rep.min_sandwich = std::min({rep.min_sandwich, m1, m2});

    if (std::fabs(p) > 1e-12) {
      double q = -psi.deriv(z, 1) / p;
      double L = (1 - u_plus) / ((1 - z) * (1 - u_plus * z));
      double R = (1 + u_minus) / ((1 - z) * (1 + u_minus * z));
      rep.min_logderiv = std::min({rep.min_logderiv, q - L, R - q});
    }
  }
  rep.pass = rep.min_sandwich >= -tol && rep.min_logderiv >= -tol;
  return rep;
}

double lemma_noses_rhs(double fa, double fb, double A, double a, double b,
                       double B, double z) {
  if (!(A < a && a < z && z < b && b < B))
    throw DomainError("lemma_noses_bound: need A < a < z < b < B");
  return ((B - b) * (z - a) * fb + (B - a) * (b - z) * fa) /
         ((b - a) * (B - z));
}

double lemma_noses_bound(const AnalyticFn& f, double A, double a, double b,
                         double B, double z) {
  return lemma_noses_rhs(f(a), f(b), A, a, b, B, z);
}

}  // namespace renorm
