#include "renorm/cheb.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <mutex>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace renorm {

namespace {

constexpr double kPi = 3.14159265358979323846;

// cos(k*i*pi/n) tables, cached per n
const std::vector<double>& cos_table(int n) {
  static std::map<int, std::vector<double>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> tab((n + 1) * (n + 1));
  for (int k = 0; k <= n; ++k)
    for (int i = 0; i <= n; ++i) tab[k * (n + 1) + i] = std::cos(kPi * k * i / n);
  return cache.emplace(n, std::move(tab)).first->second;
}

// values at t_i = cos(i*pi/n) -> Chebyshev coefficients of the interpolant
std::vector<double> values_to_coeffs(const std::vector<double>& fv) {
  const int n = static_cast<int>(fv.size()) - 1;
  const auto& tab = cos_table(n);
  std::vector<double> c(n + 1);
  for (int k = 0; k <= n; ++k) {
    double s = 0.5 * (fv[0] * tab[k * (n + 1)] + fv[n] * tab[k * (n + 1) + n]);
    for (int i = 1; i < n; ++i) s += fv[i] * tab[k * (n + 1) + i];
    c[k] = 2.0 * s / n;
  }
  c[0] *= 0.5;
  c[n] *= 0.5;
  return c;
}

double clenshaw(const std::vector<double>& c, double t) {
  double b1 = 0, b2 = 0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
    double b0 = 2 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + (c.empty() ? 0.0 : c[0]);
}

std::complex<double> clenshaw_c(const std::vector<double>& c, int kmax,
                                std::complex<double> t) {
  std::complex<double> b1 = 0, b2 = 0;
  for (int k = std::min<int>(kmax, static_cast<int>(c.size()) - 1); k >= 1;
       --k) {
    std::complex<double> b0 = 2.0 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + (c.empty() ? 0.0 : c[0]);
}

std::vector<double> diff_coeffs(const std::vector<double>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  if (n <= 0) return {0.0};
  std::vector<double> d(n, 0.0);
  for (int k = n - 1; k >= 0; --k)
    d[k] = (k + 2 <= n - 1 ? d[k + 2] : 0.0) + 2.0 * (k + 1) * c[k + 1];
  d[0] *= 0.5;
  return d;
}

// Bernstein ellipse coordinate of complex t: |t + sqrt(t^2-1)| >= 1
double ellipse_param(std::complex<double> t) {
  std::complex<double> w = std::sqrt(t * t - 1.0);
  double a = std::abs(t + w), b = std::abs(t - w);
  return std::max(a, b);
}

}  // namespace

// ---------------------------------------------------------------------------
// Piece
// ---------------------------------------------------------------------------

double Piece::z_from_s(double s) const {
  double rel;
  switch (side) {
    case WarpSide::left:
      rel = std::pow(s, g);
      break;
    case WarpSide::right:
      rel = 1.0 - std::pow(1.0 - s, g);
      break;
    default:
      rel = s;
  }
  return lo + (hi - lo) * rel;
}

double Piece::s_from_z(double z) const {
  double rel = (z - lo) / (hi - lo);
  rel = std::min(1.0, std::max(0.0, rel));
  switch (side) {
    case WarpSide::left:
      return std::pow(rel, 1.0 / g);
    case WarpSide::right:
      return 1.0 - std::pow(1.0 - rel, 1.0 / g);
    default:
      return rel;
  }
}

void Piece::z_t_derivatives(double s, double& zt, double& ztt,
                            double& zttt) const {
  const double W = hi - lo;
  switch (side) {
    case WarpSide::left: {
      double p1 = std::pow(s, g - 1.0);
      double p2 = (g >= 2.0 || s > 0) ? std::pow(s, g - 2.0) : 0.0;
      double p3 = (g >= 3.0 || s > 0) ? std::pow(s, g - 3.0) : 0.0;
      zt = W * g * p1 / 2;
      ztt = W * g * (g - 1) * p2 / 4;
      zttt = W * g * (g - 1) * (g - 2) * p3 / 8;
      break;
    }
    case WarpSide::right: {
      double u = 1.0 - s;
      double p1 = std::pow(u, g - 1.0);
      double p2 = (g >= 2.0 || u > 0) ? std::pow(u, g - 2.0) : 0.0;
      double p3 = (g >= 3.0 || u > 0) ? std::pow(u, g - 3.0) : 0.0;
      zt = W * g * p1 / 2;
      ztt = -W * g * (g - 1) * p2 / 4;
      zttt = W * g * (g - 1) * (g - 2) * p3 / 8;
      break;
    }
    default:
      zt = W / 2;
      ztt = 0;
      zttt = 0;
  }
}

double Piece::eval(double z) const {
  double t = 2.0 * s_from_z(z) - 1.0;
  return clenshaw(coef, t);
}

std::complex<double> Piece::eval_c(std::complex<double> z,
                                   double rho_cap) const {
  std::complex<double> rel = (z - lo) / (hi - lo);
  std::complex<double> s;
  switch (side) {
    case WarpSide::left:
      if (rel.real() < 0) throw EvalError("eval_c: behind warped endpoint");
      s = std::pow(rel, 1.0 / g);
      break;
    case WarpSide::right:
      if (rel.real() > 1) throw EvalError("eval_c: behind warped endpoint");
      s = 1.0 - std::pow(1.0 - rel, 1.0 / g);
      break;
    default:
      s = rel;
  }
  std::complex<double> t = 2.0 * s - 1.0;
  if (ellipse_param(t) > rho_cap)
    throw EvalError("eval_c: point outside certified ellipse");
  // coefficients below the noise floor would be amplified by T_k growth
  return clenshaw_c(coef, kcut, t);
}

std::complex<double> Piece::deriv_c(std::complex<double> z,
                                    double rho_cap) const {
  std::complex<double> rel = (z - lo) / (hi - lo);
  std::complex<double> s;
  std::complex<double> dsdrel;  // ds/drel
  switch (side) {
    case WarpSide::left:
      if (rel.real() < 0) throw EvalError("deriv_c: behind warped endpoint");
      s = std::pow(rel, 1.0 / g);
      dsdrel = std::pow(rel, 1.0 / g - 1.0) / g;
      break;
    case WarpSide::right:
      if (rel.real() > 1) throw EvalError("deriv_c: behind warped endpoint");
      s = 1.0 - std::pow(1.0 - rel, 1.0 / g);
      dsdrel = std::pow(1.0 - rel, 1.0 / g - 1.0) / g;
      break;
    default:
      s = rel;
      dsdrel = 1.0;
  }
  std::complex<double> t = 2.0 * s - 1.0;
  if (ellipse_param(t) > rho_cap)
    throw EvalError("deriv_c: point outside certified ellipse");
  std::complex<double> Ft = clenshaw_c(dcoef1, kcut, t);
  return Ft * 2.0 * dsdrel / (hi - lo);
}

double Piece::deriv(double z, int order) const {
  double s = s_from_z(z);
  double t = 2.0 * s - 1.0;
  double zt, ztt, zttt;
  z_t_derivatives(s, zt, ztt, zttt);
  if (zt == 0.0) throw EvalError("deriv: derivative at warped endpoint");
  double Ft = clenshaw(dcoef1, t);
  double F1 = Ft / zt;
  if (order == 1) return F1;
  double Ftt = clenshaw(dcoef2, t);
  double F2 = (Ftt - F1 * ztt) / (zt * zt);
  if (order == 2) return F2;
  double Fttt = clenshaw(dcoef3, t);
  double F3 = (Fttt - 3.0 * F2 * zt * ztt - F1 * zttt) / (zt * zt * zt);
  if (order == 3) return F3;
  throw DomainError("deriv: order must be 1, 2 or 3");
}

void Piece::finalize() {
  dcoef1 = diff_coeffs(coef);
  dcoef2 = diff_coeffs(dcoef1);
  dcoef3 = diff_coeffs(dcoef2);
  const int n = static_cast<int>(coef.size()) - 1;
  double cmax = 0;
  for (double v : coef) cmax = std::max(cmax, std::fabs(v));
  rho = 1e6;
  kcut = n;
  eval_cap = 1e6;
  if (cmax == 0) return;
  // last index carrying signal rather than rounding noise; the transform
  // rounding grows mildly with n
  const double noise = std::max(5e-15, n * 4e-17) * cmax;
  kcut = 0;
  for (int k = n; k >= 0; --k) {
    if (std::fabs(coef[k]) > noise) {
      kcut = k;
      break;
    }
  }
  // decay rate, fitted on the clearly-resolved part of the series only
  int khi = 0;
  for (int k = n; k >= 0; --k) {
    if (std::fabs(coef[k]) > 1e-12 * cmax) {
      khi = k;
      break;
    }
  }
  if (khi >= 8) {
    int k0 = std::max(2, khi / 2);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int k = k0; k <= khi; ++k) {
      double a = std::fabs(coef[k]);
      if (a <= 1e-14 * cmax) continue;
      double y = std::log(a);
      sx += k;
      sy += y;
      sxx += double(k) * k;
      sxy += k * y;
      ++cnt;
    }
    if (cnt >= 4) {
      double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
      rho = std::min(1e6, std::max(1.02, std::exp(-slope)));
    } else {
      rho = 1.05;
    }
  }
  // largest ellipse on which the sub-resolved part of the kept series stays
  // below ~1e-8 of scale once amplified by Chebyshev growth
  int k_good = 0;
  for (int k = kcut; k >= 0; --k) {
    if (std::fabs(coef[k]) >= 1e-10 * cmax) {
      k_good = k;
      break;
    }
  }
  auto noise_at = [&](double sigma) {
    double s = 0, pw = std::pow(sigma, k_good + 1);
    for (int k = k_good + 1; k <= kcut; ++k) {
      s += std::fabs(coef[k]) * pw;
      pw *= sigma;
    }
    return s;
  };
  double lo_cap = 1.0, hi_cap = 64.0;
  if (noise_at(hi_cap) <= 1e-8 * cmax) {
    eval_cap = hi_cap;
  } else {
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo_cap + hi_cap);
      (noise_at(mid) <= 1e-8 * cmax ? lo_cap : hi_cap) = mid;
    }
    eval_cap = std::max(1.0 + 1e-6, lo_cap);
  }
}

// ---------------------------------------------------------------------------
// AnalyticFn
// ---------------------------------------------------------------------------

const Piece& AnalyticFn::locate(double z, double* zc) const {
  if (pieces_.empty()) throw EvalError("AnalyticFn: empty");
  double slack = 64 * kEps * std::max(1.0, dom_.width() + std::fabs(dom_.lo) +
                                               std::fabs(dom_.hi));
  if (z < dom_.lo - slack || z > dom_.hi + slack) {
    std::ostringstream os;
    os << "AnalyticFn: evaluation at " << z << " outside [" << dom_.lo << ", "
       << dom_.hi << "]";
    throw EvalError(os.str());
  }
  double x = std::min(dom_.hi, std::max(dom_.lo, z));
  if (zc) *zc = x;
  std::size_t lo = 0, hi = pieces_.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (x <= pieces_[mid].hi)
      hi = mid;
    else
      lo = mid + 1;
  }
  return pieces_[lo];
}

double AnalyticFn::operator()(double z) const {
  double x;
  const Piece& p = locate(z, &x);
  return p.eval(x);
}

double AnalyticFn::eval_lo(double dlo) const {
  if (dlo < 0) {
    if (dlo < -64 * kEps * std::max(1.0, std::fabs(dom_.lo)))
      throw EvalError("eval_lo: negative offset");
    dlo = 0;
  }
  const Piece& p0 = pieces_.front();
  double w = p0.hi - p0.lo;
  if (dlo <= w) {
    double rel = dlo / w;
    double s = (p0.side == WarpSide::left) ? std::pow(rel, 1.0 / p0.g) : rel;
    return clenshaw(p0.coef, 2 * s - 1);
  }
  return (*this)(dom_.lo + dlo);
}

double AnalyticFn::eval_hi(double dhi) const {
  if (dhi < 0) {
    if (dhi < -64 * kEps * std::max(1.0, std::fabs(dom_.hi)))
      throw EvalError("eval_hi: negative offset");
    dhi = 0;
  }
  const Piece& p1 = pieces_.back();
  double w = p1.hi - p1.lo;
  if (dhi <= w) {
    double rel1 = dhi / w;  // distance from piece hi, relative
    double s = (p1.side == WarpSide::right) ? 1.0 - std::pow(rel1, 1.0 / p1.g)
                                            : 1.0 - rel1;
    return clenshaw(p1.coef, 2 * s - 1);
  }
  return (*this)(dom_.hi - dhi);
}

bool AnalyticFn::certified_at(std::complex<double> z) const {
  try {
    (void)eval_c(z);
    return true;
  } catch (const EvalError&) {
    return false;
  }
}

std::complex<double> AnalyticFn::eval_c(std::complex<double> z) const {
  double x;
  const Piece& base = locate(z.real(), &x);
  // the certified ellipses of neighboring pieces overlap; accept the point
  // if any piece certifies it, nearest first
  std::ptrdiff_t i0 = &base - pieces_.data();
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(pieces_.size());
  for (std::ptrdiff_t step = 0; step < n; ++step) {
    for (int sgn : {+1, -1}) {
      std::ptrdiff_t i = i0 + sgn * step;
      if (i < 0 || i >= n) continue;
      try {
        return pieces_[i].eval_c(z, pieces_[i].eval_cap);
      } catch (const EvalError&) {
      }
      if (step == 0) break;
    }
  }
  throw EvalError("eval_c: point outside every certified ellipse");
}

std::complex<double> AnalyticFn::deriv_c(std::complex<double> z) const {
  double x;
  const Piece& base = locate(z.real(), &x);
  std::ptrdiff_t i0 = &base - pieces_.data();
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(pieces_.size());
  for (std::ptrdiff_t step = 0; step < n; ++step) {
    for (int sgn : {+1, -1}) {
      std::ptrdiff_t i = i0 + sgn * step;
      if (i < 0 || i >= n) continue;
      try {
        return pieces_[i].deriv_c(z, pieces_[i].eval_cap);
      } catch (const EvalError&) {
      }
      if (step == 0) break;
    }
  }
  throw EvalError("deriv_c: point outside every certified ellipse");
}

double AnalyticFn::deriv(double z, int order) const {
  double x;
  const Piece& p = locate(z, &x);
  return p.deriv(x, order);
}

void AnalyticFn::eval_many_serial(std::span<const double> zs,
                                  std::span<double> out) const {
  for (std::size_t i = 0; i < zs.size(); ++i) out[i] = (*this)(zs[i]);
}

void AnalyticFn::eval_many(std::span<const double> zs,
                           std::span<double> out) const {
  const std::int64_t n = static_cast<std::int64_t>(zs.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[i] = (*this)(zs[i]);
}

double AnalyticFn::taylor_radius(double x0) const {
  double dl = x0 - dom_.lo, dr = dom_.hi - x0;
  if (dl <= 0 || dr <= 0) return 0.0;
  // stay clear of warped (singular) endpoints; plain endpoints still bound
  // the representation even if the function continues past them
  double rl = (pieces_.front().side == WarpSide::left) ? 0.5 * dl : 0.75 * dl;
  double rr = (pieces_.back().side == WarpSide::right) ? 0.5 * dr : 0.75 * dr;
  return std::min(rl, rr);
}

std::vector<double> AnalyticFn::taylor_at(double x0, int order, double radius,
                                          double* used_radius) const {
  double R = radius > 0 ? radius : taylor_radius(x0);
  if (R <= 0) throw EvalError("taylor_at: point too close to domain end");
  const int M = std::max(64, 8 * (order + 1));
  std::vector<std::complex<double>> fv(M);
  for (int attempt = 0;; ++attempt) {
    bool ok = true;
    for (int j = 0; j < M; ++j) {
      double th = 2 * kPi * j / M;
      std::complex<double> zj(x0 + R * std::cos(th), R * std::sin(th));
      try {
        fv[j] = eval_c(zj);
      } catch (const EvalError&) {
        ok = false;
        break;
      }
    }
    if (ok) break;
    R *= 0.6;
    if (attempt > 24) throw EvalError("taylor_at: no certified circle found");
  }
  if (used_radius) *used_radius = R;
  std::vector<double> a(order + 1);
  for (int m = 0; m <= order; ++m) {
    std::complex<double> s = 0;
    for (int j = 0; j < M; ++j) {
      double th = 2 * kPi * j / M;
      s += fv[j] * std::complex<double>(std::cos(m * th), -std::sin(m * th));
    }
    a[m] = s.real() / (M * std::pow(R, m));
  }
  return a;
}

AnalyticFn AnalyticFn::from_pieces(DomainInterval dom,
                                   std::vector<Piece> pieces, double tol_rel) {
  if (pieces.empty()) throw DomainError("from_pieces: no pieces");
  AnalyticFn f;
  f.dom_ = dom;
  f.tol_rel_ = tol_rel;
  double scale = 0, tail = 0;
  for (auto& p : pieces) {
    p.finalize();
    for (double c : p.coef) scale = std::max(scale, std::fabs(c));
    tail = std::max(tail, p.tail);
  }
  f.pieces_ = std::move(pieces);
  f.scale_ = scale;
  f.tail_ = tail;
  // resolved against the configured tolerance, measured on the whole
  // function's scale (pieces near a noise floor report honest tails)
  f.resolved_ = tail <= 4 * tol_rel * std::max(scale, 1e-300);
  return f;
}

// ---------------------------------------------------------------------------
// fit
// ---------------------------------------------------------------------------

namespace {

// fit one piece; fills coef/tail/resolved
void fit_piece(const OffsetFn& f, const DomainInterval& dom, Piece& p,
               int degree, double tol_rel, double* scale_seen) {
  const int n = degree;
  const double W = p.hi - p.lo;
  const double head = p.lo - dom.lo;  // exact 0 for the first piece
  const double tail_gap = dom.hi - p.hi;
  std::vector<double> fv(n + 1);
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i <= n; ++i) {
    if (err) continue;
    try {
      double t = std::cos(kPi * i / n);  // descending
      double s = 0.5 * (t + 1.0);
      if (i == 0) s = 1.0;
      if (i == n) s = 0.0;
      double rel, rel1;  // distance from piece lo / hi, relative
      switch (p.side) {
        case WarpSide::left:
          rel = std::pow(s, p.g);
          rel1 = 1.0 - rel;
          break;
        case WarpSide::right:
          rel1 = std::pow(1.0 - s, p.g);
          rel = 1.0 - rel1;
          break;
        default:
          rel = s;
          rel1 = 1.0 - s;
      }
      double z = (i == 0) ? p.hi : (i == n ? p.lo : p.lo + W * rel);
      double v = f(z, head + W * rel, tail_gap + W * rel1);
      if (!is_finite(v)) {
        std::ostringstream os;
        os << "fit: non-finite sample at z=" << z;
        throw EvalError(os.str());
      }
      fv[i] = v;
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  // values_to_coeffs expects samples ordered by node index i (t descending)
  p.coef = values_to_coeffs(fv);
  double scale = 0;
  for (double v : fv) scale = std::max(scale, std::fabs(v));
  *scale_seen = std::max(*scale_seen, scale);
  const double floor = tol_rel * std::max(scale, 1e-300);
  // resolved cutoff: the last index that still rises above the noise floor
  int cutoff = 0;
  for (int k = n; k >= 0; --k) {
    if (std::fabs(p.coef[k]) > floor) {
      cutoff = k;
      break;
    }
  }
  int quiet = n - cutoff;
  p.resolved = quiet >= std::max(3, n / 8);
  double tail = 0;
  if (p.resolved) {
    for (int k = cutoff + 1; k <= n; ++k) tail += std::fabs(p.coef[k]);
  } else {
    for (int k = n - std::max(1, n / 4); k <= n; ++k)
      tail += std::fabs(p.coef[k]);
  }
  p.tail = tail;
}

}  // namespace

AnalyticFn fit_function(const RealFn& f, DomainInterval dom,
                        const FitSpec& spec) {
  return fit_function(
      [&f](double z, double, double) { return f(z); }, dom, spec);
}

AnalyticFn fit_function(const OffsetFn& f, DomainInterval dom,
                        const FitSpec& spec) {
  if (spec.degree < 2) throw DomainError("fit: degree must be >= 2");
  struct Job {
    Piece p;
    int depth;
    double parent_tail;
    int stall = 0;  // consecutive splits without tail improvement
  };
  std::vector<Job> stack;
  auto mk = [&](double lo, double hi, WarpSide side, double g) {
    Piece p;
    p.lo = lo;
    p.hi = hi;
    p.side = g > 1.0 ? side : WarpSide::none;
    p.g = g > 1.0 ? g : 1.0;
    return p;
  };
  const double kInf = std::numeric_limits<double>::infinity();
  const bool wl = spec.warp_left > 1.0, wr = spec.warp_right > 1.0;
  // a steep warp concentrates its nodes at the endpoint, so its piece must
  // stay short or the bulk starves; the plain remainder splits adaptively
  auto frac = [](double g) { return g <= 6.0 ? 0.5 : 0.05; };
  const double W = dom.width();
  double cut_l = dom.lo + (wl ? frac(spec.warp_left) : 0.5) * W;
  double cut_r = dom.hi - (wr ? frac(spec.warp_right) : 0.5) * W;
  if (wl && wr) {
    if (cut_r <= cut_l) cut_l = cut_r = 0.5 * (dom.lo + dom.hi);
    stack.push_back(
        {mk(dom.lo, cut_l, WarpSide::left, spec.warp_left), 0, kInf});
    if (cut_r > cut_l)
      stack.push_back({mk(cut_l, cut_r, WarpSide::none, 1.0), 0, kInf});
    stack.push_back(
        {mk(cut_r, dom.hi, WarpSide::right, spec.warp_right), 0, kInf});
  } else if (wl) {
    stack.push_back(
        {mk(dom.lo, cut_l, WarpSide::left, spec.warp_left), 0, kInf});
    stack.push_back({mk(cut_l, dom.hi, WarpSide::none, 1.0), 0, kInf});
  } else if (wr) {
    stack.push_back({mk(dom.lo, cut_r, WarpSide::none, 1.0), 0, kInf});
    stack.push_back(
        {mk(cut_r, dom.hi, WarpSide::right, spec.warp_right), 0, kInf});
  } else {
    stack.push_back({mk(dom.lo, dom.hi, WarpSide::none, 1.0), 0, kInf});
  }

  std::vector<Piece> done;
  double scale = 0;
  while (!stack.empty()) {
    Job job = std::move(stack.back());
    stack.pop_back();
    fit_piece(f, dom, job.p, spec.degree, spec.tol_rel, &scale);
    // a persistent tail under splitting means the evaluator's own noise
    // floor has been reached, not a resolution limit; allow a short stall
    int stall = (job.p.tail < 0.7 * job.parent_tail) ? 0 : job.stall + 1;
    bool may_split = spec.split && job.depth < spec.max_depth && stall <= 2 &&
                     job.p.hi - job.p.lo > 1e-9 * dom.width() &&
                     static_cast<int>(done.size() + stack.size()) + 2 <=
                         spec.max_pieces;
    if (!job.p.resolved && may_split) {
      // a warped piece keeps a quarter of its width at the singular end so
      // neither child collapses; plain pieces bisect
      double zmid;
      switch (job.p.side) {
        case WarpSide::left:
          zmid = job.p.lo + 0.25 * (job.p.hi - job.p.lo);
          break;
        case WarpSide::right:
          zmid = job.p.hi - 0.25 * (job.p.hi - job.p.lo);
          break;
        default:
          zmid = 0.5 * (job.p.lo + job.p.hi);
      }
      if (zmid <= job.p.lo || zmid >= job.p.hi) zmid = 0.5 * (job.p.lo + job.p.hi);
      Piece a = mk(job.p.lo, zmid,
                   job.p.side == WarpSide::left ? WarpSide::left : WarpSide::none,
                   job.p.side == WarpSide::left ? job.p.g : 1.0);
      Piece b = mk(zmid, job.p.hi,
                   job.p.side == WarpSide::right ? WarpSide::right : WarpSide::none,
                   job.p.side == WarpSide::right ? job.p.g : 1.0);
      stack.push_back({b, job.depth + 1, job.p.tail, stall});
      stack.push_back({a, job.depth + 1, job.p.tail, stall});
      continue;
    }
    done.push_back(std::move(job.p));
  }
  std::sort(done.begin(), done.end(),
            [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
  return AnalyticFn::from_pieces(dom, std::move(done), spec.tol_rel);
}

}  // namespace renorm
