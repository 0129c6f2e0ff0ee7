#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pqlap/fem.hpp"
#include "pqlap/reference.hpp"

using namespace pqlap;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("generalized pi reduces to pi at q = 2") {
  CHECK(generalized_pi(2.0) == doctest::Approx(kPi).epsilon(1e-15));
  CHECK_THROWS_AS(generalized_pi(1.0), InvalidExponent);
}

TEST_CASE("closed-form eigenvalues at q = 2 are (k pi / L)^2") {
  for (int k = 1; k <= 6; ++k)
    CHECK(qlap_eigenvalue(k, 2.0, 1.0) ==
          doctest::Approx(k * k * kPi * kPi).epsilon(1e-14));
  CHECK(qlap_eigenvalue(2, 2.0, 0.5) == doctest::Approx(16.0 * kPi * kPi).epsilon(1e-13));
}

TEST_CASE("eigenvalues scale as L^{-q}") {
  for (double q : {1.5, 3.0}) {
    const double base = qlap_eigenvalue(3, q, 1.0);
    CHECK(qlap_eigenvalue(3, q, 2.0) ==
          doctest::Approx(base / std::pow(2.0, q)).epsilon(1e-13));
  }
}

TEST_CASE("shooting oracle counts interior zeros correctly") {
  // Between lambda_2 and lambda_3 (q = 2) the trajectory has 2 interior zeros.
  const double lambda = 2.5 * 2.5 * kPi * kPi;
  const ShootResult r = shooting_oracle(2.0, lambda, 1.0);
  CHECK(r.zero_count == 2);
  // Just above lambda_1 the end value has flipped sign.
  CHECK(shooting_oracle(2.0, 0.9 * kPi * kPi, 1.0).end_value > 0.0);
  CHECK(shooting_oracle(2.0, 1.1 * kPi * kPi, 1.0).end_value < 0.0);
}

TEST_CASE("shooting eigenvalues agree with the closed form") {
  // Spot checks here; the full (q, k) sweep is an acceptance criterion.
  for (double q : {1.5, 2.0, 3.0}) {
    for (int k : {1, 3}) {
      const double closed = qlap_eigenvalue(k, q, 1.0);
      const double shot = qlap_eigenvalue_shooting(k, q, 1.0);
      CHECK(shot == doctest::Approx(closed).epsilon(1e-8));
    }
  }
}

TEST_CASE("shooting samples reproduce sin on the nodes (q = 2)") {
  const std::vector<double> targets = {0.25, 0.5, 0.75};
  const std::vector<double> s = shooting_samples(2.0, kPi * kPi, 1.0, targets);
  // Trajectory is sin(pi x)/pi for v(0) = 1.
  for (size_t i = 0; i < targets.size(); ++i)
    CHECK(s[i] == doctest::Approx(std::sin(kPi * targets[i]) / kPi).epsilon(1e-9));
}

TEST_CASE("reference eigenfunction: normalization, sign, Rayleigh consistency") {
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, 1024);
  for (int k : {1, 2, 3}) {
    const NodalFunction u = reference_eigenfunction(k, 2.0, mesh);
    CHECK(mass_q(u, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(u[0] > 0.0);
    // Interpolant Rayleigh quotient approaches the eigenvalue at O(h^2).
    const double rq = grad_energy(u, 2.0) / mass_q(u, 2.0);
    CHECK(rq == doctest::Approx(k * k * kPi * kPi).epsilon(1e-3));
  }
  const NodalFunction u15 = reference_eigenfunction(1, 1.5, mesh);
  CHECK(mass_q(u15, 1.5) == doctest::Approx(1.0).epsilon(1e-12));
  // Weak form with test function u itself: |grad u|_q^q = lambda |u|_q^q.
  const double rq15 = grad_energy(u15, 1.5) / mass_q(u15, 1.5);
  CHECK(rq15 == doctest::Approx(qlap_eigenvalue(1, 1.5, 1.0)).epsilon(1e-3));
}

TEST_CASE("reference eigenpair bundles the closed-form eigenvalue") {
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, 64);
  const ReferenceEigenpair rp = reference_eigenpair(2, 2.0, mesh);
  CHECK(rp.k == 2);
  CHECK(rp.lambda == doctest::Approx(4.0 * kPi * kPi).epsilon(1e-14));
  CHECK(rp.u.size() == 63);
}
