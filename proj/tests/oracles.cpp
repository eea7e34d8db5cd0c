#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "renorm/common.hpp"

namespace oracles {

double affine_lambda(int p, double nu, double xtol) {
  auto f = [&](double lam) {
    return std::pow(lam, nu) + p * std::pow(lam, nu - 1.0) - 1.0;
  };
  return renorm::bisect(f, 1e-12, 1.0 - 1e-12, xtol, 300);
}

double series_eval(const std::vector<double>& c, double x) {
  // g(x) = 1 + sum c_k (T_k(2x^2-1) - (-1)^k): even, g(0) = 1 built in,
  // well conditioned in the coefficients
  const int K = static_cast<int>(c.size());
  double t = 2 * x * x - 1.0;
  double tkm = 1.0, tk = t;
  double s = 1.0;
  double sign = -1.0;
  for (int k = 1; k <= K; ++k) {
    s += c[k - 1] * (tk - sign);
    double tn = 2 * t * tk - tkm;
    tkm = tk;
    tk = tn;
    sign = -sign;
  }
  return s;
}

namespace {

struct SeriesModel {
  int p;
  int K;
  std::vector<double> nodes;

  double iterate(const std::vector<double>& c, double x) const {
    double w = x;
    for (int j = 0; j <= p; ++j) w = series_eval(c, w);
    return w;
  }
  std::vector<double> residual(const std::vector<double>& c) const {
    double lam = -iterate(c, 0.0);
    std::vector<double> F(K, 1e6);
    if (!(lam > 1e-4 && lam < 1.0)) return F;
    for (int i = 0; i < K; ++i) {
      double x = nodes[i];
      F[i] = series_eval(c, x) + iterate(c, -lam * x) / lam;
    }
    return F;
  }
  double merit(const std::vector<double>& c) const {
    double s = 0;
    for (double f : residual(c)) s += f * f;
    return s;
  }
};

}  // namespace

double tupling_lambda_series(int p, int terms, double tol) {
  SeriesModel M;
  M.p = p;
  M.K = terms;
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < terms; ++i)
    M.nodes.push_back(std::cos(pi * (2 * i + 1) / (4.0 * terms)));

  // coarse search over the leading coefficient of the quadratic-type seed
  std::vector<double> best;
  double best_merit = 1e300;
  for (double c1 = -1.6; c1 <= -0.3; c1 += 0.05) {
    std::vector<double> c(terms, 0.0);
    c[0] = c1;
    double m = M.merit(c);
    if (m < best_merit) {
      best_merit = m;
      best = c;
    }
  }

  std::vector<double> c = best;
  for (int it = 0; it < 300; ++it) {
    std::vector<double> F = M.residual(c);
    double m0 = 0;
    for (double f : F) m0 += f * f;
    if (m0 < 1e-28) break;
    std::vector<double> J(terms * terms);
    for (int j = 0; j < terms; ++j) {
      double h = 1e-8 * std::max(1.0, std::fabs(c[j]));
      std::vector<double> cj = c;
      cj[j] += h;
      std::vector<double> Fj = M.residual(cj);
      for (int i = 0; i < terms; ++i) J[i * terms + j] = (Fj[i] - F[i]) / h;
    }
    std::vector<double> step;
    try {
      step = renorm::solve_linear(J, F, terms);
    } catch (const std::exception&) {
      break;
    }
    double scale = 1.0;
    bool accepted = false;
    for (int half = 0; half < 14; ++half) {
      std::vector<double> cn = c;
      for (int j = 0; j < terms; ++j) cn[j] -= scale * step[j];
      if (M.merit(cn) < m0) {
        c = cn;
        accepted = true;
        break;
      }
      scale *= 0.5;
    }
    if (!accepted) break;
  }

  if (M.merit(c) > tol * tol)
    throw std::runtime_error("series oracle: Newton did not converge");
  double lam = -M.iterate(c, 0.0);
  if (!(lam > 0.01 && lam < 0.95))
    throw std::runtime_error("series oracle: scaling constant out of range");
  for (int i = 0; i < 50; ++i) {
    double x = 0.02 + 0.96 * i / 49.0;
    if (!(series_eval(c, x + 0.005) < series_eval(c, x - 0.005)))
      throw std::runtime_error("series oracle: map not decreasing");
  }
  return lam;
}

}  // namespace oracles
