#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "renorm/renorm_ops.hpp"

using namespace renorm;

TEST_CASE("regime selection and frame constants") {
  auto feig = make_params(1, 2.0, 1.0);
  CHECK(feig.regime == Regime::LOW_NU);
  // threshold for s = 2, single inner step: root of (1+b) b = 1
  CHECK(feig.b == doctest::Approx((std::sqrt(5.0) - 1) / 2).epsilon(1e-12));

  auto trip = make_params(2, 2.0, 1.0);
  CHECK(trip.regime == Regime::LOW_NU);
  double b1 = trip.b;
  double lhs = (1 + b1) * (1 + std::sqrt(b1)) * (1 + std::sqrt(b1)) *
               std::pow(b1, trip.s() - 1);
  CHECK(lhs == doctest::Approx(1.0).epsilon(1e-10));

  CHECK(make_params(1, 3.0, 2.0).regime == Regime::P1_HIGH_NU);
  CHECK(make_params(2, 3.0, 2.0).regime == Regime::PGE2_HIGH_NU);
  CHECK(make_params(1, 3.0, 2.0).b ==
        doctest::Approx(std::pow(0.479, 1.0 / 6)).epsilon(1e-12));
  CHECK(make_params(2, 3.0, 2.0).b ==
        doctest::Approx(std::pow(0.803, 1.0 / 6)).epsilon(1e-12));

  CHECK_THROWS_AS(make_params(3, 4.0, 0.5), FeasibilityError);
  CHECK_THROWS_AS(make_params(1, 1.0, 2.0), DomainError);  // needs test mode
  CHECK_NOTHROW(make_params(1, 1.0, 2.0, true));
}

TEST_CASE("threshold functions satisfy the stated orderings") {
  for (double s : {1.5, 2.0, 3.0, 5.0, 10.0, 40.0}) {
    double b1 = b1_threshold(s);
    CHECK(b1 <= b0_threshold(s) + 1e-12);
    CHECK(s > (1 + b1) / (1 - b1));
    CHECK(b3_threshold(s) < 1.0);
    CHECK(b3_threshold(s) > b1);  // wider cap for a single inner step
  }
}

TEST_CASE("multiplier extraction") {
  auto P = make_params(1, 3.0, 1.0);
  FitSpec sp;
  sp.degree = 32;
  sp.split = false;
  double b = P.b;
  auto Phi = fit_function(
      [&](double z) { return 1.0 + 0.125 * (z - 1.0); }, P.frame(), sp);
  CHECK(extract_lambda(Phi, P) == doctest::Approx(0.5).epsilon(1e-10));

  auto chi = seed(P);
  CHECK(extract_lambda(chi, P) == doctest::Approx(b).epsilon(1e-9));

  auto bad = fit_function([&](double z) { return 1.0 + 0.99 * (z - 1.0); },
                          P.frame(), sp);
  CHECK_THROWS_AS(extract_lambda(bad, P), RegimeError);
}

TEST_CASE("conjugation to the extracted frame") {
  auto P = make_params(1, 2.0, 1.0);  // b = 0.618...
  // a_frame arithmetic at a made-up lambda
  {
    auto P2 = make_params(1, 2.0, 1.0);
    P2.b = 0.5;
    auto chi = seed(P2, 64);
    auto fs = conjugate_to_lambda(chi, 0.3, P2);
    CHECK(fs.a_frame == doctest::Approx(0.35).epsilon(1e-12));
  }
  // the wide-frame constant approaches (1+3b)/(2(1+b)) as lambda -> 0
  {
    double b = 0.8;
    double a1_limit = (1 + 3 * b) / (2 * (1 + b));
    double a1 = (1 + 1e-9) / 2 + (b - 1e-9) / (1 + b);
    CHECK(a1 == doctest::Approx(a1_limit).epsilon(1e-8));
    CHECK(a1_limit == doctest::Approx(17.0 / 18).epsilon(1e-12));
  }
  // identity conjugation at lambda = b
  auto chi = seed(P, 64);
  auto fs = conjugate_to_lambda(chi, P.b, P);
  for (double z : {-1.0, 0.0, 1.0, 2.0})
    CHECK(fs.phi0(z) == doctest::Approx(chi(z)).epsilon(1e-13));
}

TEST_CASE("linearizer of an affine frame map is affine") {
  auto P = make_params(1, 2.0, 1.0);
  FitSpec sp;
  sp.degree = 32;
  sp.split = false;
  double m = 0.2;
  FrameState fs;
  fs.lambda = 0.4;
  fs.a_frame = 0.5;
  fs.phi0 = fit_function([&](double z) { return 1.0 + m * (z - 1.0); },
                         DomainInterval(-2.5, 2.0), sp);
  double defect = 0;
  auto psi = koenigs_linearizer(fs, m, P, {}, &defect);
  CHECK(defect < 1e-11);
  CHECK(psi(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(psi(1.0)) < 1e-12);
  for (double z : {-2.0, -0.5, 0.7, 1.8})
    CHECK(psi(z) == doctest::Approx(1.0 - z).epsilon(1e-11));
}

TEST_CASE("linearizer of a homographic frame map matches the closed form") {
  auto P = make_params(1, 2.0, 1.0);
  double b = P.b, s = P.s();
  auto chi = seed(P, 128);
  auto fs = conjugate_to_lambda(chi, b, P);  // identity: phi0 = chi
  double m = std::pow(b, s);
  double defect = 0;
  auto psi = koenigs_linearizer(fs, m, P, {}, &defect);
  CHECK(defect < 1e-11);
  // second fixed point of the homography
  double q = bisect([&](double z) { return chi_eval(b, s, z) - z; },
                    1.0 + 1e-6, 1.0 / (b * b) - 1e-9, 1e-14);
  auto closed = [&](double z) { return q * (z - 1.0) / (1.0 * (z - q)); };
  double h0 = closed(0.0);
  for (double z : {-1.5, -0.5, 0.4, 1.3, 2.2})
    CHECK(psi(z) == doctest::Approx(closed(z) / h0).epsilon(1e-10));
}

TEST_CASE("carrier construction and root solve") {
  auto P = make_params(2, 2.0, 1.0);
  FitSpec sp;
  sp.degree = 64;
  sp.split = false;
  double lam = 0.1;
  auto psi = fit_function([](double z) { return 1.0 - z; },
                          DomainInterval(-1.0 / lam, 2.0), sp);
  auto v = build_v(psi, 2.0);
  CHECK(std::fabs(v(-1.0)) < 1e-10);
  CHECK(v(0.0) == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(v(3.0) == doctest::Approx(2.0).epsilon(1e-10));

  auto orb = solve_z1(v, lam, P);
  // brute-force scan oracle for the same root
  auto xp = [&](double s_) {
    double w = lam;
    for (int i = 0; i < 2; ++i) w = s_ * std::sqrt(1.0 + w);
    return w;
  };
  double best = 0, bestd = 1e300;
  for (int i = 0; i <= 1000000; ++i) {
    double s_ = 1e-6 + (1 - 2e-6) * i / 1000000.0;
    double d = std::fabs(xp(s_) - 1.0);
    if (d < bestd) {
      bestd = d;
      best = s_;
    }
  }
  CHECK(orb.z1 == doctest::Approx(best).epsilon(1e-5));
  CHECK(orb.zeta.front() == doctest::Approx(lam));
  CHECK(orb.zeta[2] == doctest::Approx(1.0).epsilon(1e-9));
  for (std::size_t j = 0; j + 1 < orb.zeta.size(); ++j)
    CHECK(orb.zeta[j] < orb.zeta[j + 1]);
}

TEST_CASE("single-step root has the closed form") {
  const auto& B = feigenbaum_bundle();
  double vlam = B.v(B.lambda);
  CHECK(B.z1 == doctest::Approx(1.0 / vlam).epsilon(1e-10));
}

TEST_CASE("rebuilt map fixes 1 and matches the chain-rule derivative") {
  const auto& B = feigenbaum_bundle();
  CHECK(B.phi(1.0) == doctest::Approx(1.0).epsilon(1e-11));
  // chain product against a centered difference
  double h = 1e-6;
  double fd = (B.phi(1.0 + h) - B.phi(1.0 - h)) / (2 * h);
  double chain =
      multiplier_chain_product(B.psi, B.params.r, B.zeta, B.params.p);
  CHECK(fd == doctest::Approx(chain).epsilon(1e-7));
  // single inner step: rebuilt map vanishes at the left end
  CHECK(std::fabs(B.phi.eval_lo(0.0)) < 1e-9);
}

TEST_CASE("one application of the operator preserves the class") {
  auto P = make_params(2, 2.0, 1.0);
  auto chi = seed(P);
  auto st = apply_B_full(chi, P);
  double out_mult = st.Phi_next.deriv(1.0, 1);
  CHECK(out_mult > 0.0);
  CHECK(out_mult <= std::pow(P.b, P.s()) * (1 + 1e-9));
  CHECK(out_mult < 0.125);  // two inner steps cap
  CHECK_NOTHROW(check_frame_class(st.Phi_next, P, 1e-7));
}

TEST_CASE("truncated operator equals the plain one above the cutoff") {
  auto P = make_params(2, 2.0, 1.5);  // s = 3 <= p? no: s=3 > p=2; force N
  REQUIRE(P.regime == Regime::PGE2_HIGH_NU);
  auto chi = seed(P);
  // seed multiplier b^s is far above lambda1^s
  auto stB = apply_B_full(chi, P);
  auto stN = apply_N_full(chi, P);
  CHECK_FALSE(stN.truncated_branch);
  auto grid = chebyshev_grid(P.frame_lo(), P.frame_hi(), 65);
  for (double z : grid)
    CHECK(stN.Phi_next(z) == doctest::Approx(stB.Phi_next(z)).epsilon(1e-12));
}

TEST_CASE("truncated branch clamps the frame and keeps its guarantees") {
  auto P = make_params(2, 2.0, 1.5);
  REQUIRE(P.regime == Regime::PGE2_HIGH_NU);
  // class member with a multiplier below the cutoff
  double s_eff = P.s();
  double tau1nu = std::pow(P.lambda1, s_eff);
  double s_big = std::log(tau1nu * 0.25) / std::log(P.b);
  REQUIRE(s_big > 1.0);
  FitSpec sp;
  sp.degree = 128;
  sp.split = false;
  auto Phi = fit_function(
      [&](double z) { return chi_eval(P.b, s_big, z); }, P.frame(), sp);
  REQUIRE(Phi.deriv(1.0, 1) < tau1nu);
  auto st = apply_N_full(Phi, P);
  CHECK(st.truncated_branch);
  CHECK(st.lambda == doctest::Approx(P.lambda1));
  // the shifted linearizer satisfies the edge cap
  double edge = st.psi.eval_lo(0.0);
  CHECK(edge <= std::pow(P.lambda1, -s_eff) * (1 + 1e-9));
  // analyticity constant of the shift sits inside its window
  double a1 = st.frame.a_frame;
  double a3 = tau1nu + (1 - tau1nu) * a1;
  CHECK(st.ell < a3);
  CHECK(st.ell >= a1 - 1e-12);
  // output multiplier respects the truncated floor
  CHECK(st.Phi_next.deriv(1.0, 1) >=
        truncated_multiplier_floor(P) * (1 - 1e-9));
  CHECK_NOTHROW(check_frame_class(st.Phi_next, P, 1e-7));
}

TEST_CASE("analyticity endpoint of the rebuilt map") {
  const auto& B = feigenbaum_bundle();  // nu = 1: the plain square case
  auto xm = xi_max_compute(B.v, B.z1, B.lambda, B.params);
  CHECK(xm.xi_max ==
        doctest::Approx(1.0 / (B.lambda * B.lambda)).epsilon(1e-12));

  const auto& C = circle_cubic_bundle();  // nu = 2: endpoint at the orbit ratio
  auto xc = xi_max_compute(C.v, C.z1, C.lambda, C.params);
  CHECK(xc.xi_max ==
        doctest::Approx(C.zeta[1] / C.lambda).epsilon(1e-7));
}
