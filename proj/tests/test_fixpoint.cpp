#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "renorm/verifier.hpp"

using namespace renorm;

TEST_CASE("seed map is an admissible class member") {
  auto P = make_params(1, 2.0, 1.0);
  auto chi = seed(P);
  CHECK(chi(1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(chi.deriv(1.0, 1) ==
        doctest::Approx(std::pow(P.b, P.s())).epsilon(1e-9));
  CHECK(herglotz_certify(chi, 3, 1e-7).pass);
  CHECK_NOTHROW(check_frame_class(chi, P, 1e-8));
}

TEST_CASE("period-doubling scaling constant matches the series oracle") {
  const auto& B = feigenbaum_bundle();
  double oracle = oracles::tupling_lambda_series(1, 20);
  CHECK(std::fabs(1.0 / B.lambda - 1.0 / oracle) < 1e-6);
  CHECK(1.0 / oracle == doctest::Approx(2.50290787).epsilon(1e-7));
  CHECK(B.residual < 1e-10);
}

TEST_CASE("affine anchor reproduces the golden-ratio constant") {
  const auto& B = affine_bundle();
  double oracle = oracles::affine_lambda(1, 2.0);
  CHECK(std::fabs(B.lambda - oracle) < 1e-10);
  CHECK(oracle == doctest::Approx((std::sqrt(5.0) - 1) / 2).epsilon(1e-13));
  // the linearizer degenerates to 1 - z
  double worst = 0;
  auto grid = chebyshev_grid(B.psi.domain().lo, B.psi.domain().hi, 101);
  for (double z : grid) worst = std::max(worst, std::fabs(B.psi(z) - (1 - z)));
  CHECK(worst < 1e-8);
  CHECK(B.z1 == doctest::Approx(B.lambda).epsilon(1e-9));
}

TEST_CASE("affine anchor with two inner steps") {
  const auto& B = affine_tripling_bundle();
  double oracle = oracles::affine_lambda(2, 2.0);
  CHECK(std::fabs(B.lambda - oracle) < 1e-10);
  CHECK(oracle == doctest::Approx(std::sqrt(2.0) - 1).epsilon(1e-13));
}

TEST_CASE("continuity of the anchor in the degree") {
  auto P = make_params(1, 1.0 + 1e-4, 2.0);
  IterateOptions io;
  io.max_iter = 400;
  auto B = iterate(P, io);
  CHECK(std::fabs(B.lambda - 0.6180339887) < 1e-3);
}

TEST_CASE("period tripling matches the series oracle") {
  auto P = make_params(2, 2.0, 1.0);
  IterateOptions io;
  auto B = iterate(P, io);
  double oracle = oracles::tupling_lambda_series(2, 20);
  CHECK(std::fabs(B.lambda - oracle) < 1e-6);
}

TEST_CASE("iteration trace starts far from the fixed point") {
  auto P = make_params(1, 2.0, 1.0);
  IterateOptions io;
  IterationTrace tr;
  auto B = iterate(P, io, &tr);
  REQUIRE(!tr.records.empty());
  CHECK(tr.records.front().sup_change > 1e-3);  // the seed is not fixed
  CHECK(tr.records.back().sup_change < io.tol);
  CHECK(B.iterations == static_cast<int>(tr.records.size()));
}

TEST_CASE("fixed point is idempotent under one more application") {
  const auto& B = feigenbaum_bundle();
  StepOptions sopt;
  sopt.check_class = false;
  auto next = apply_B(B.Phi, B.params, sopt);
  double sup = 0;
  auto grid =
      chebyshev_grid(B.params.frame_lo(), B.params.frame_hi(), 257);
  for (double z : grid) sup = std::max(sup, std::fabs(next(z) - B.Phi(z)));
  CHECK(sup < 2e-12 * 10);
}

TEST_CASE("bundle internal consistency") {
  const auto& B = feigenbaum_bundle();
  CHECK(B.tau == doctest::Approx(std::pow(B.lambda, B.params.r)));
  CHECK(B.y0 == doctest::Approx(std::pow(B.z1, B.params.r)));
  CHECK(B.psi(0.0) == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(std::fabs(B.psi(1.0)) < 1e-11);
  CHECK(std::fabs(B.u(1.0)) < 1e-11);
  double lam_pow = std::pow(B.lambda, 1.0 - B.params.nu);
  CHECK(B.u(0.0) == doctest::Approx(B.z1 * lam_pow).epsilon(1e-10));
  // orbit self-similarity: the once-iterated carrier advances the orbit
  for (int j = 0; j + 1 <= B.params.p + 1; ++j) {
    double next = B.ucheck_at(B.zeta[j]);
    CHECK(next == doctest::Approx(B.zeta[j + 1]).epsilon(1e-9));
  }
  // residual of the defining equations stays near the representation floor
  CHECK(residual(B) < 1e-10);
}

TEST_CASE("solver reports divergence paths as typed errors") {
  // infeasible parameters never reach the iteration
  CHECK_THROWS_AS(make_params(3, 4.0, 0.5), FeasibilityError);
  // absurdly tight budget triggers the non-convergence path with a trace
  auto P = make_params(1, 2.0, 1.0);
  IterateOptions io;
  io.max_iter = 3;
  io.tol = 1e-14;
  try {
    iterate(P, io);
    FAIL("expected non-convergence");
  } catch (const NonConvergenceError& e) {
    CHECK(e.trace.records.size() == 3);
  }
}
