// Acceptance suite: every exit criterion of the build, one pass/fail line
// each.  Expected values come from the independent oracles in oracles.cpp
// or from closed-form constants; tolerances are pinned here.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "renorm/asymptotics.hpp"
#include "renorm/io.hpp"
#include "renorm/verifier.hpp"

using namespace renorm;
namespace asy = renorm::asymptotics;

namespace {

int failures = 0;

void report(const std::string& id, bool pass, const std::string& detail) {
  std::printf("%-4s %s  %s\n", id.c_str(), pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const auto t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

struct Timer {
  double start = now_seconds();
  double elapsed() const { return now_seconds() - start; }
};

SolutionBundle solve_point(int p, double r, double nu, bool test_mode = false,
                           int degree = 128, int max_iter = 500) {
  auto P = make_params(p, r, nu, test_mode);
  IterateOptions io;
  io.max_iter = max_iter;
  io.degree = degree;
  return iterate(P, io);
}

std::string fmt(double x) { return io::format_double(x); }

}  // namespace

int main() {
  std::printf("acceptance suite\n================\n");

  // 1. affine anchors ------------------------------------------------------
  try {
    Timer t;
    auto B1 = solve_point(1, 1.0, 2.0, true, 64, 400);
    double want1 = oracles::affine_lambda(1, 2.0);
    double err1 = std::fabs(B1.lambda - want1);
    double psi_err = 0;
    auto grid = chebyshev_grid(B1.psi.domain().lo, B1.psi.domain().hi, 101);
    for (double z : grid)
      psi_err = std::max(psi_err, std::fabs(B1.psi(z) - (1 - z)));
    auto B2 = solve_point(2, 1.0, 2.0, true, 64, 400);
    double want2 = oracles::affine_lambda(2, 2.0);
    double err2 = std::fabs(B2.lambda - want2);
    double secs = t.elapsed();
    report("C1",
           err1 < 1e-10 && err2 < 1e-10 && psi_err < 1e-7 && secs < 1.0,
           "affine anchors: |dl|=" + fmt(err1) + ", " + fmt(err2) +
               " (tol 1e-10), |psi-(1-z)|=" + fmt(psi_err) + ", " +
               fmt(secs) + " s (cap 1)");
  } catch (const std::exception& e) {
    report("C1", false, std::string("exception: ") + e.what());
  }

  // 2. period doubling against the series oracle ---------------------------
  try {
    Timer t;
    const auto& B = feigenbaum_bundle();
    double oracle = oracles::tupling_lambda_series(1, 20);
    double err = std::fabs(1.0 / B.lambda - 1.0 / oracle);
    double secs = t.elapsed();
    report("C2", err < 1e-6 && secs < 60.0,
           "doubling: 1/lambda=" + fmt(1.0 / B.lambda) + " vs oracle " +
               fmt(1.0 / oracle) + ", |d|=" + fmt(err) + " (tol 1e-6), " +
               fmt(secs) + " s (cap 60)");
  } catch (const std::exception& e) {
    report("C2", false, std::string("exception: ") + e.what());
  }

  // 3. period tripling against the same oracle family ----------------------
  try {
    Timer t;
    auto B = solve_point(2, 2.0, 1.0);
    double oracle = oracles::tupling_lambda_series(2, 20);
    double err = std::fabs(B.lambda - oracle);
    double secs = t.elapsed();
    report("C3", err < 1e-6 && secs < 120.0,
           "tripling: lambda=" + fmt(B.lambda) + " vs oracle " + fmt(oracle) +
               ", |d|=" + fmt(err) + " (tol 1e-6), " + fmt(secs) +
               " s (cap 120)");
  } catch (const std::exception& e) {
    report("C3", false, std::string("exception: ") + e.what());
  }

  // 4. feasibility boundary -------------------------------------------------
  {
    std::string detail;
    bool pass = true;
    for (double r : {3.0, 4.0}) {
      bool infeasible = false;
      try {
        make_params(3, r, 0.5);
      } catch (const FeasibilityError&) {
        infeasible = true;
      }
      pass = pass && infeasible;
      detail += "r=" + fmt(r) + (infeasible ? " infeasible(2); " : " WRONG; ");
    }
    for (double r : {4.5, 5.0}) {
      bool solved = false;
      std::string note;
      try {
        auto B = solve_point(3, r, 0.5, false, 128, 400);
        solved = true;
        note = " lambda=" + fmt(B.lambda);
      } catch (const std::exception& e) {
        note = std::string(" [") + e.what() + "]";
      }
      pass = pass && solved;
      detail += "r=" + fmt(r) + (solved ? " solved" + note + "; "
                                        : " FAILED" + note + "; ");
    }
    report("C4", pass, "boundary behavior: " + detail);
  }

  // 5. bound suite across the regimes ---------------------------------------
  {
    struct Point {
      int p;
      double r, nu;
    };
    std::vector<Point> pts = {{1, 2.0, 1.0},  {2, 2.0, 1.0}, {2, 6.0, 0.5},
                              {1, 3.0, 2.0},  {1, 2.0, 1.5}, {2, 3.0, 2.0},
                              {3, 2.0, 1.5}};
    bool pass = true;
    std::string detail = std::to_string(pts.size()) + " points: ";
    for (const auto& pt : pts) {
      try {
        auto B = solve_point(pt.p, pt.r, pt.nu);
        auto rep = check_bounds(B, 1e-9);
        bool ok = rep.all_pass();
        pass = pass && ok;
        detail += "(" + std::to_string(pt.p) + "," + fmt(pt.r) + "," +
                  fmt(pt.nu) + (ok ? ") ok " : ") FAIL ");
        if (!ok)
          for (const auto& name : rep.failures()) detail += name + " ";
      } catch (const std::exception& e) {
        pass = false;
        detail += "(" + std::to_string(pt.p) + "," + fmt(pt.r) + "," +
                  fmt(pt.nu) + ") EX:" + e.what() + " ";
      }
    }
    report("C5", pass, detail);
  }

  // 6. frame-threshold inequality sweep -------------------------------------
  {
    double m = appendix_sweep_min(10000);
    report("C6", m > 0,
           "inequality sweep at 10^4 interior points: min margin " + fmt(m));
  }

  // 7. commutation identities for the circle-map regime ----------------------
  try {
    auto B = solve_point(2, 3.0, 2.0);
    auto rep = lanford_commutativity(B, 1e-8);
    bool ok = rep.pairing_defect < 1e-8 && rep.edge_value_defect < 1e-8;
    report("C7", ok,
           "pairing defect " + fmt(rep.pairing_defect) +
               " (tol 1e-8), edge value defect " + fmt(rep.edge_value_defect) +
               " (tol 1e-8)");
  } catch (const std::exception& e) {
    report("C7", false, std::string("exception: ") + e.what());
  }

  // 8. wide-degree family ----------------------------------------------------
  try {
    Timer t;
    bool pass = true;
    std::string detail;
    std::vector<asy::AsymptoticBundle> fam;
    for (double r : {10.0, 20.0, 40.0}) {
      auto B = solve_point(2, r, 1.0, false, 128, 400);
      auto ab = asy::build(B);
      auto rep = asy::check_bounds(ab);
      double lr = asy::limit_residual(ab);
      bool ok = rep.all_pass() && lr <= 10 * std::max(B.residual, 1e-12);
      pass = pass && ok;
      detail += "r=" + fmt(r) + (ok ? " ok" : " FAIL");
      if (!ok)
        for (const auto& name : rep.failures()) detail += " " + name;
      detail += " (defect " + fmt(lr) + "); ";
      fam.push_back(std::move(ab));
    }
    double d1 = asy::s_distance(fam[0], fam[1]);
    double d2 = asy::s_distance(fam[1], fam[2]);
    bool dec = d2 < d1;
    pass = pass && dec;
    double secs = t.elapsed();
    pass = pass && secs < 600.0;
    report("C8", pass,
           detail + "S-distances " + fmt(d1) + " > " + fmt(d2) +
               (dec ? " decreasing" : " NOT decreasing") + ", " + fmt(secs) +
               " s (cap 600)");
  } catch (const std::exception& e) {
    report("C8", false, std::string("exception: ") + e.what());
  }

  // 9. property suite ---------------------------------------------------------
  {
    bool pass = true;
    std::string detail;
    struct Point {
      int p;
      double r, nu;
    };
    for (const auto& pt :
         std::vector<Point>{{1, 2.0, 1.0}, {2, 2.0, 1.0}, {1, 3.0, 2.0},
                            {2, 3.0, 2.0}}) {
      try {
        auto B = solve_point(pt.p, pt.r, pt.nu);
        StepOptions sopt;
        sopt.check_class = false;
        auto st =
            (B.params.regime == Regime::PGE2_HIGH_NU && default_use_N(B.params))
                ? apply_N_full(B.Phi, B.params, sopt)
                : apply_B_full(B.Phi, B.params, sopt);
        bool ok = herglotz_certify(st.frame.phi0, 3, 1e-6).pass &&
                  herglotz_certify(st.phi, 3, 1e-6).pass &&
                  anti_herglotz_certify(B.psi, 3, 1e-6).pass &&
                  anti_herglotz_certify(B.u, 3, 1e-6).pass;
        pass = pass && ok;
        detail += "(" + std::to_string(pt.p) + "," + fmt(pt.r) + "," +
                  fmt(pt.nu) + (ok ? ") certified " : ") FAIL ");
      } catch (const std::exception& e) {
        pass = false;
        detail += std::string("EX:") + e.what() + " ";
      }
    }
    double rm = asy::remark81_scan_min();
    bool rm_ok = rm >= 0.0;
    pass = pass && rm_ok;
    detail += "inversion-scan min " + fmt(rm) + (rm_ok ? " ok" : " FAIL");
    // homography algebra round-trips exactly
    {
      auto fwd = make_h(0.37, 0.81);
      auto round = make_h(0.81, 0.37).compose(fwd);
      bool hok = true;
      for (double z : {-1.0, -0.2, 0.6, 1.4})
        hok = hok && std::fabs(round(z) - z) < 1e-12;
      pass = pass && hok;
      detail += hok ? ", homography round-trip ok" : ", homography FAIL";
    }
    report("C9", pass, detail);
  }

  std::printf("================\n%s (%d failures)\n",
              failures == 0 ? "ACCEPTANCE: ALL CRITERIA PASS"
                            : "ACCEPTANCE: FAILURES PRESENT",
              failures);
  return failures == 0 ? 0 : 1;
}
