#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "renorm/asymptotics.hpp"

using namespace renorm;
namespace asy = renorm::asymptotics;

namespace {
const SolutionBundle& wide_bundle() {
  static SolutionBundle B = [] {
    auto P = make_params(2, 10.0, 1.0);
    IterateOptions io;
    io.max_iter = 300;
    return iterate(P, io);
  }();
  return B;
}
}  // namespace

TEST_CASE("derived functions refuse out-of-scope regimes") {
  CHECK_THROWS_AS(asy::build(circle_cubic_bundle()), RegimeError);   // nu = 2
  CHECK_THROWS_AS(asy::build(feigenbaum_bundle()), RegimeError);     // p = 1
}

TEST_CASE("outer factor normalization") {
  auto ab = asy::build(wide_bundle());
  const auto& B = wide_bundle();
  CHECK(ab.V(1.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ab.V.deriv(1.0, 1) ==
        doctest::Approx(-1.0 / B.lambda).epsilon(1e-7));
  CHECK(ab.alpha == doctest::Approx(B.psi(-B.lambda)).epsilon(1e-10));
  CHECK(std::fabs(ab.V(ab.alpha)) < 1e-7);
  // the logarithmic carrier vanishes where the linearizer does
  CHECK(std::fabs(ab.H_plus(0.0)) < 1e-9);
  CHECK(std::fabs(ab.S_plus(1.0)) < 1e-9);
  // w-orbit sits in the stated window
  for (double w : ab.w_orbit) {
    CHECK(w >= -1.0 - 1e-9);
    CHECK(w <= B.params.nu - 1.0 + 1e-9);
  }
}

TEST_CASE("full bound suite at a wide-frame solution") {
  auto ab = asy::build(wide_bundle());
  auto rep = asy::check_bounds(ab);
  for (const auto& e : rep.entries) {
    INFO(e.name, " lhs=", e.lhs, " rhs=", e.rhs, " margin=", e.margin);
    CHECK(e.pass);
  }
}

TEST_CASE("rescaled equation defect tracks the bundle residual") {
  auto ab = asy::build(wide_bundle());
  double lr = asy::limit_residual(ab);
  CHECK(lr <= 10 * std::max(wide_bundle().residual, 1e-12));
  // one application of the right-hand side preserves the zero at 1
  const auto& B = wide_bundle();
  double c = B.y0 * std::pow(B.tau, 1.0 - B.params.nu);
  double inner = c * B.psi(-std::pow(B.tau * 1.0, 1.0 / B.params.r));
  for (int j = 0; j < B.params.p - 1; ++j)
    inner = c * B.psi(-std::pow(inner, 1.0 / B.params.r));
  double rhs = std::pow(B.tau, -B.params.nu) * c *
               B.psi(std::pow(std::pow(B.tau, B.params.nu - 1.0) * inner,
                              1.0 / B.params.r));
  CHECK(std::fabs(rhs - ab.S_plus(1.0)) < 1e-7);
}

TEST_CASE("cubic-inversion helper holds on a brute-force triple grid") {
  double m = asy::remark81_scan_min();
  CHECK(m >= 0.0);
  CHECK(m == asy::remark81_scan_min_serial());
}
