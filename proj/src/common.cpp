#include "renorm/common.hpp"

#include <algorithm>

namespace renorm {

double bisect(const std::function<double(double)>& f, double a, double b,
              double xtol, int max_iter) {
  double fa = f(a), fb = f(b);
  if (!is_finite(fa) || !is_finite(fb))
    throw SolverError("bisect: non-finite bracket values");
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0)) throw SolverError("bisect: bracket does not sign-change");
  for (int it = 0; it < max_iter && (b - a) > xtol; ++it) {
    double m = 0.5 * (a + b);
    double fm = f(m);
    if (!is_finite(fm)) throw SolverError("bisect: non-finite midpoint value");
    if (fm == 0.0) return m;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
      fb = fm;
    }
  }
  return 0.5 * (a + b);
}

double solve_monotone(const std::function<double(double)>& f, double a,
                      double b, double y, double xtol, double slack) {
  double fa = f(a), fb = f(b);
  if (y < fa - slack || y > fb + slack)
    throw SolverError("solve_monotone: target outside range");
  if (y <= fa) return a;
  if (y >= fb) return b;
  return bisect([&](double x) { return f(x) - y; }, a, b, xtol);
}

std::vector<double> solve_linear(std::vector<double> A, std::vector<double> b,
                                 int n) {
  std::vector<int> piv(n);
  for (int i = 0; i < n; ++i) piv[i] = i;
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::fabs(A[k * n + k]);
    for (int i = k + 1; i < n; ++i) {
      double v = std::fabs(A[i * n + k]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) throw SolverError("solve_linear: singular matrix");
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(A[k * n + j], A[p * n + j]);
      std::swap(b[k], b[p]);
    }
    for (int i = k + 1; i < n; ++i) {
      double m = A[i * n + k] / A[k * n + k];
      A[i * n + k] = 0.0;
      for (int j = k + 1; j < n; ++j) A[i * n + j] -= m * A[k * n + j];
      b[i] -= m * b[k];
    }
  }
  std::vector<double> x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= A[i * n + j] * x[j];
    x[i] = s / A[i * n + i];
  }
  return x;
}

double smallest_eigenvalue_sym(std::vector<double> A, int n) {
  auto off = [&]() {
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += A[i * n + j] * A[i * n + j];
    return s;
  };
  double scale = 0;
  for (int i = 0; i < n * n; ++i) scale = std::max(scale, std::fabs(A[i]));
  if (scale == 0) return 0.0;
  const double tol = 1e-30 * scale * scale;
  for (int sweep = 0; sweep < 100 && off() > tol; ++sweep) {
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        double apq = A[p * n + q];
        if (std::fabs(apq) < 1e-300) continue;
        double theta = (A[q * n + q] - A[p * n + p]) / (2 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1));
        double c = 1.0 / std::sqrt(t * t + 1), s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = A[k * n + p], akq = A[k * n + q];
          A[k * n + p] = c * akp - s * akq;
          A[k * n + q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = A[p * n + k], aqk = A[q * n + k];
          A[p * n + k] = c * apk - s * aqk;
          A[q * n + k] = s * apk + c * aqk;
        }
      }
  }
  double lo = A[0];
  for (int i = 1; i < n; ++i) lo = std::min(lo, A[i * n + i]);
  return lo;
}

std::vector<double> chebyshev_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < n; ++i) {
    double t = std::cos(pi * (n - 1 - i) / (n - 1));
    g[i] = lo + (hi - lo) * 0.5 * (t + 1.0);
  }
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> interior_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  double h = (hi - lo) / (n + 1);
  for (int i = 0; i < n; ++i) g[i] = lo + h * (i + 1);
  return g;
}

}  // namespace renorm
