#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pqlap/functionals.hpp"

using namespace pqlap;

namespace {

NodalFunction hat() { return NodalFunction(Mesh1D::uniform(0.0, 1.0, 2), {1.0}); }

NodalFunction random_fn(const MeshPtr& mesh, std::mt19937& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  NodalFunction u(mesh);
  for (int i = 0; i < u.size(); ++i) u[i] = unif(rng);
  return u;
}

}  // namespace

TEST_CASE("PQParams validation") {
  CHECK_THROWS_AS(PQParams(1.0, 2.0), InvalidExponent);
  CHECK_THROWS_AS(PQParams(2.0, 0.9), InvalidExponent);
  CHECK_THROWS_AS(PQParams(2.0, 2.0), InvalidExponent);
  CHECK(PQParams(3.0, 2.0).p_above_q());
  CHECK_FALSE(PQParams(1.5, 2.0).p_above_q());
}

TEST_CASE("closed forms on the unit hat") {
  // |grad u|_3^3 = 8, |grad u|_2^2 = 4, |u|_2^2 = 1/3.
  const NodalFunction u = hat();
  const PQParams pq{3.0, 2.0};
  CHECK(energy_E(u, {12.0}, pq) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
  CHECK(energy_I(u, pq) == doctest::Approx(14.0 / 3.0).epsilon(1e-14));
  CHECK(rayleigh_F(u, pq) == doctest::Approx(28.0).epsilon(1e-13));
  CHECK(nehari_residual(u, {12.0}, pq) == doctest::Approx(8.0).epsilon(1e-13));

  // Transformed-problem level for p < q: alpha = (|grad u|_2^2)^{1/2} = 2,
  // F_w = (q/p) alpha |grad u|_{1.5}^{1.5} + |grad u|_2^2.
  const PQParams wq{1.5, 2.0};
  const double gp = std::pow(2.0, 1.5);
  CHECK(energy_F_w(u, wq) == doctest::Approx((2.0 / 1.5) * 2.0 * gp + 4.0).epsilon(1e-13));
}

TEST_CASE("all functionals are even") {
  std::mt19937 rng(29);
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, 16);
  const NodalFunction u = random_fn(mesh, rng);
  NodalFunction mu = u;
  mu *= -1.0;
  const PQParams pq{3.0, 2.0};
  const PQParams wq{1.5, 2.0};
  CHECK(energy_E(u, {5.0}, pq) == doctest::Approx(energy_E(mu, {5.0}, pq)));
  CHECK(energy_I(u, pq) == doctest::Approx(energy_I(mu, pq)));
  CHECK(rayleigh_F(u, pq) == doctest::Approx(rayleigh_F(mu, pq)));
  CHECK(energy_F_w(u, wq) == doctest::Approx(energy_F_w(mu, wq)));
}

TEST_CASE("rayleigh_F rejects the zero function") {
  NodalFunction z(Mesh1D::uniform(0.0, 1.0, 8));
  CHECK_THROWS_AS(rayleigh_F(z, PQParams(3.0, 2.0)), ZeroFunction);
}

TEST_CASE("Nehari projection lands on the Nehari set and is idempotent") {
  std::mt19937 rng(31);
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, 32);
  const PQParams pq{1.5, 2.0};
  const SpectralParam lam{40.0};
  for (int trial = 0; trial < 10; ++trial) {
    const NodalFunction u = random_fn(mesh, rng);
    const double den = lam.lambda * mass_q(u, pq.q) - grad_energy(u, pq.q);
    if (!(den > 0.0)) {
      CHECK_THROWS_AS(nehari_project(u, lam, pq), NotProjectable);
      continue;
    }
    const NodalFunction proj = nehari_project(u, lam, pq);
    const double scale = grad_energy(proj, pq.p) + grad_energy(proj, pq.q);
    CHECK(std::abs(nehari_residual(proj, lam, pq)) < 1e-12 * scale);
    // Projecting a point already on the set is the identity (t = 1).
    const NodalFunction again = nehari_project(proj, lam, pq);
    for (int i = 0; i < proj.size(); ++i)
      CHECK(again[i] == doctest::Approx(proj[i]).epsilon(1e-12));
  }
}

TEST_CASE("Nehari projection scalar closed form") {
  // For the hat with lambda*|u|_q^q - |grad u|_q^q = 2 and |grad u|_p^p = 8
  // (p = 1.5 scaled), t = (num/den)^{1/(q-p)}.
  const NodalFunction u = hat();
  const PQParams pq{1.5, 2.0};
  const double lambda = 18.0;  // den = 18/3 - 4 = 2
  const double num = grad_energy(u, pq.p);
  const double t_expect = std::pow(num / 2.0, 1.0 / (pq.q - pq.p));
  const NodalFunction proj = nehari_project(u, {lambda}, pq);
  CHECK(proj[0] == doctest::Approx(t_expect).epsilon(1e-13));
}

TEST_CASE("nehari_project requires p < q and a positive denominator") {
  const NodalFunction u = hat();
  CHECK_THROWS_AS(nehari_project(u, {50.0}, PQParams(3.0, 2.0)), InvalidExponent);
  // lambda below the Rayleigh quotient of u: denominator <= 0.
  CHECK_THROWS_AS(nehari_project(u, {6.0}, PQParams(1.5, 2.0)), NotProjectable);
}

TEST_CASE("apply_T pairs to the transformed energy identity") {
  std::mt19937 rng(37);
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, 16);
  const PQParams pq{1.5, 2.0};
  const NodalFunction w = random_fn(mesh, rng);
  const double gq = grad_energy(w, pq.q);
  const double alpha = std::pow(gq, 2.0 * (pq.q - pq.p) / pq.q);
  CHECK(pair(apply_T(w, pq), w) ==
        doctest::Approx(alpha * grad_energy(w, pq.p) + gq).epsilon(1e-12));
  CHECK_THROWS_AS(apply_T(w, PQParams(3.0, 2.0)), InvalidExponent);
}

TEST_CASE("monotonicity_gap basics") {
  const double x1[] = {1.0, -2.0, 0.5};
  const double x2[] = {0.3, 0.4, -1.0};
  // s = 2 reduces to the squared distance.
  double d2 = 0.0;
  for (int i = 0; i < 3; ++i) d2 += (x2[i] - x1[i]) * (x2[i] - x1[i]);
  CHECK(monotonicity_gap(x1, x2, 2.0) == doctest::Approx(d2).epsilon(1e-14));
  CHECK(monotonicity_gap(x1, x1, 3.0) == 0.0);
  CHECK(monotonicity_gap(x1, x2, 1.5) >= 0.0);
  CHECK(monotonicity_gap(x1, x2, 3.0) >= 0.0);

  const double zero[] = {0.0, 0.0, 0.0};
  // |0|^{s-2} 0 := 0 even for s < 2.
  CHECK(monotonicity_gap(zero, x2, 1.5) >= 0.0);
  CHECK_THROWS_AS(monotonicity_gap(x1, x2, 1.0), InvalidExponent);
}
