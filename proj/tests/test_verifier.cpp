#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "renorm/io.hpp"
#include "renorm/verifier.hpp"

using namespace renorm;

TEST_CASE("existence condition arithmetic") {
  auto f = feasibility(3, 5.0, 0.5);
  CHECK(f.pass);
  CHECK(f.margin == doctest::Approx(0.5).epsilon(1e-12));

  auto g = feasibility(3, 4.0, 0.5);
  CHECK_FALSE(g.pass);
  CHECK(g.margin == doctest::Approx(0.0).epsilon(1e-12));

  // at the interval-map point the condition reduces to r > 1
  CHECK(feasibility(7, 1.001, 1.0).pass);
  CHECK_FALSE(feasibility(7, 1.0, 1.0).pass);

  // monotone in the degree at fixed (p, nu)
  for (double r = 4.1; r < 8.0; r += 0.3) {
    if (feasibility(3, r, 0.5).pass) {
      CHECK(feasibility(3, r + 0.5, 0.5).pass);
    }
  }
}

TEST_CASE("bound suite passes on converged solutions") {
  auto rep = check_bounds(feigenbaum_bundle());
  for (const auto& e : rep.entries) {
    INFO(e.name, " lhs=", e.lhs, " rhs=", e.rhs);
    CHECK(e.pass);
  }
  // spot values: two inner-step-free facts at nu = 1
  const auto& B = feigenbaum_bundle();
  CHECK(std::pow(B.lambda, B.params.s()) < B.lambda / (1 + B.lambda));
  CHECK(B.z1 > std::pow(B.lambda, B.params.nu));
}

TEST_CASE("bound suite flags a corrupted bundle") {
  SolutionBundle B = feigenbaum_bundle();
  B.lambda *= 2;
  auto rep = check_bounds(B);
  CHECK_FALSE(rep.all_pass());
}

TEST_CASE("frame-threshold inequality is positive on the open interval") {
  CHECK(appendix_inequality(0.5) == doctest::Approx(0.0824).epsilon(1e-3));
  CHECK_THROWS_AS(appendix_inequality(0.0), DomainError);
  CHECK_THROWS_AS(appendix_inequality(1.0), DomainError);
  double m = appendix_sweep_min(10000);
  CHECK(m > 0);
  CHECK(m == appendix_sweep_min_serial(10000));
  // boundary limits vanish
  CHECK(appendix_inequality(1e-7) < 1e-4);
  CHECK(appendix_inequality(1 - 1e-7) < 1e-4);
}

TEST_CASE("analyticity endpoint checks") {
  auto xr = xi_max(feigenbaum_bundle());
  const auto& B = feigenbaum_bundle();
  CHECK(xr.xi_max ==
        doctest::Approx(1.0 / (B.lambda * B.lambda)).epsilon(1e-12));
  for (const auto& e : xr.checks.entries) {
    INFO(e.name);
    CHECK(e.pass);
  }

  auto xc = xi_max(circle_cubic_bundle());
  const auto& C = circle_cubic_bundle();
  CHECK(xc.xi_max == doctest::Approx(C.zeta[1] / C.lambda).epsilon(1e-7));
}

TEST_CASE("commutation identities at the affine anchor") {
  auto rep = lanford_commutativity(affine_tripling_bundle(), 1e-8);
  CHECK(rep.pairing_defect < 1e-8);
  CHECK(rep.edge_value_defect < 1e-7);
  CHECK(rep.commute_defect < 1e-6);
  // interior fixed point of the flipped map sits on the orbit
  const auto& B = affine_tripling_bundle();
  CHECK(rep.xbar ==
        doctest::Approx(B.lambda * B.zeta[B.params.p - 1]).epsilon(1e-7));
}

TEST_CASE("commutation identities on a genuine circle-map solution") {
  const auto& C = circle_cubic_bundle();
  auto rep = lanford_commutativity(C, 1e-8);
  CHECK(rep.pairing_defect < 1e-9);
  CHECK(rep.edge_value_defect < 1e-8);
  CHECK(rep.kappa_defect < 1e-5);
  CHECK(rep.commute_defect < 1e-6);
  CHECK(rep.pass);
}

TEST_CASE("commutation requires the circle-map regime") {
  CHECK_THROWS_AS(lanford_commutativity(feigenbaum_bundle(), 1e-8),
                  RegimeError);
}

TEST_CASE("injectivity probe separates monotone from folded maps") {
  FitSpec sp;
  sp.degree = 48;
  sp.split = false;
  auto good = fit_function([](double z) { return 1.0 - z; }, {-1, 3}, sp);
  CHECK(univalence_probe_fn(good, 200).pass);

  auto folded =
      fit_function([](double z) { return (1.0 - z) * (1.0 - z); }, {-1, 3}, sp);
  CHECK_FALSE(univalence_probe_fn(folded, 200).pass);

  CHECK(univalence_probe(feigenbaum_bundle(), 300).pass);
}

TEST_CASE("attractor of the doubled folding map") {
  const auto& B = feigenbaum_bundle();
  auto rep = attractor_c(B);
  CHECK(rep.real_fp_deriv_defect < 1e-8);
  CHECK(rep.c.imag() > 0);
  CHECK(rep.multiplier_mod < 1.0);
  CHECK(rep.pass);
}

TEST_CASE("bundles survive a serialization round trip") {
  const auto& B = feigenbaum_bundle();
  std::string text = io::bundle_to_json(B);
  auto B2 = io::bundle_from_json(text);
  CHECK(B2.lambda == B.lambda);
  CHECK(B2.z1 == B.z1);
  CHECK(B2.residual == B.residual);
  auto grid = chebyshev_grid(B.psi.domain().lo, B.psi.domain().hi, 101);
  for (double z : grid) {
    CHECK(B2.psi(z) == B.psi(z));
    CHECK(B2.u(std::min(z, B.u.domain().hi)) ==
          B.u(std::min(z, B.u.domain().hi)));
  }
  // a reloaded bundle verifies identically
  CHECK(check_bounds(B2).all_pass());
}
