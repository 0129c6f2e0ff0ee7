#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pqlap/solvers.hpp"

using namespace pqlap;

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

NodalFunction random_fn(const MeshPtr& mesh, std::mt19937& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  NodalFunction u(mesh);
  for (int i = 0; i < u.size(); ++i) u[i] = unif(rng);
  return u;
}

}  // namespace

TEST_CASE("sign_changes counts alternations with a dead band") {
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, 8);
  NodalFunction u(mesh, {1.0, 1.0, 1e-14, 1.0, -1.0, -1.0, 1.0});
  CHECK(sign_changes(u) == 2);
  NodalFunction pos(mesh, {0.1, 0.2, 0.3, 0.4, 0.3, 0.2, 0.1});
  CHECK(sign_changes(pos) == 0);
  const NodalFunction e3 = reference_eigenfunction(3, 2.0, Mesh1D::uniform(0.0, 1.0, 48));
  CHECK(sign_changes(e3) == 2);
}

TEST_CASE("global minimization below lambda_1 collapses to zero") {
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, 64);
  const SolverConfig cfg;
  const SolveResult res = solve_first_global(0.5 * kPi2, {3.0, 2.0}, mesh, cfg);
  CHECK(res.status == SolveStatus::ConvergedToZero);
  CHECK_THROWS_AS(solve_first_global(20.0, PQParams(1.5, 2.0), mesh, cfg),
                  InvalidExponent);
}

TEST_CASE("global minimization above lambda_1 finds a one-signed eigenpair") {
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, 128);
  const SolverConfig cfg;
  const PQParams pq{3.0, 2.0};
  const double lambda = 2.0 * kPi2;
  const SolveResult res = solve_first_global(lambda, pq, mesh, cfg);
  REQUIRE(res.ok());
  const EigenPair& ep = *res.pair;
  CHECK(ep.sign_changes == 0);
  CHECK(ep.level < 0.0);  // inf E_lambda < 0 for lambda above the threshold
  CHECK(ep.residual_norm < 1e-8 * std::max(1.0, lambda * ep.rho));
  // Eigenvalue identity from the weak form tested with u.
  const double identity = grad_energy(ep.u, pq.p) + grad_energy(ep.u, pq.q);
  CHECK(lambda * ep.rho == doctest::Approx(identity).epsilon(1e-8));
}

TEST_CASE("Nehari solver: threshold behavior and level identity") {
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, 128);
  const SolverConfig cfg;
  const PQParams pq{1.5, 2.0};

  CHECK(solve_first_nehari(0.9 * kPi2, pq, mesh, cfg).status ==
        SolveStatus::NotProjectable);
  CHECK_THROWS_AS(solve_first_nehari(20.0, PQParams(3.0, 2.0), mesh, cfg),
                  InvalidExponent);

  const double lambda = 2.0 * kPi2;
  const SolveResult res = solve_first_nehari(lambda, pq, mesh, cfg);
  REQUIRE(res.ok());
  const EigenPair& ep = *res.pair;
  CHECK(ep.sign_changes == 0);
  CHECK(ep.level > 0.0);
  // On the Nehari set E_lambda(u) = (1/p - 1/q) |grad u|_p^p.
  const double rhs = (1.0 / pq.p - 1.0 / pq.q) * grad_energy(ep.u, pq.p);
  CHECK(ep.level == doctest::Approx(rhs).epsilon(1e-10));
  CHECK(std::abs(nehari_residual(ep.u, {lambda}, pq)) <
        1e-10 * (grad_energy(ep.u, pq.p) + grad_energy(ep.u, pq.q)));
}

TEST_CASE("Nehari solver multistart consistency") {
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, 96);
  const SolverConfig cfg;
  const PQParams pq{1.5, 2.0};
  const double lambda = 2.0 * kPi2;
  std::mt19937 rng(91);
  double first_level = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const NodalFunction start = random_fn(mesh, rng);
    const SolveResult res = solve_first_nehari(lambda, pq, mesh, cfg, &start);
    REQUIRE(res.ok());
    if (trial == 0) first_level = res.pair->level;
    else CHECK(res.pair->level == doctest::Approx(first_level).epsilon(1e-6));
  }
}

TEST_CASE("fixed-mass solve: small-mass limit and identities") {
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, 256);
  const SolverConfig cfg;
  const PQParams pq{3.0, 2.0};

  const SolveResult r1 = solve_fixed_rho(1, 1e-6, pq, mesh, cfg);
  REQUIRE(r1.ok());
  CHECK(r1.pair->lambda == doctest::Approx(kPi2).epsilon(0.02));
  CHECK(r1.pair->sign_changes == 0);
  CHECK(r1.pair->rho == doctest::Approx(1e-6).epsilon(1e-10));
  const double id1 = grad_energy(r1.pair->u, pq.p) + grad_energy(r1.pair->u, pq.q);
  CHECK(r1.pair->lambda * r1.pair->rho == doctest::Approx(id1).epsilon(1e-10));

  const SolveResult r2 = solve_fixed_rho(2, 1e-6, pq, mesh, cfg);
  REQUIRE(r2.ok());
  CHECK(r2.pair->lambda == doctest::Approx(4.0 * kPi2).epsilon(0.02));
  CHECK(r2.pair->sign_changes == 1);
  // Antisymmetry about the midpoint.
  const NodalFunction& u = r2.pair->u;
  const double peak = u.max_abs();
  for (int i = 0; i < u.size(); ++i)
    CHECK(std::abs(u[i] + u[u.size() - 1 - i]) < 1e-3 * peak);

  CHECK_THROWS_AS(solve_fixed_rho(300, 1e-3, pq, Mesh1D::uniform(0.0, 1.0, 16), cfg),
                  InfeasibleNodalPattern);
}

TEST_CASE("fixed-mass levels are nondecreasing in the mode (k <= 4)") {
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, 240);
  const SolverConfig cfg;
  const PQParams pq{3.0, 2.0};
  double prev = -1.0;
  for (int k = 1; k <= 4; ++k) {
    const SolveResult res = solve_fixed_rho(k, 1e-3, pq, mesh, cfg);
    REQUIRE(res.ok());
    CHECK(res.pair->level > prev);
    prev = res.pair->level;
  }
}

TEST_CASE("w-equation solve: identities, certificate, back-transform") {
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, 256);
  SolverConfig cfg;
  cfg.residual_tol = 1e-10;
  const PQParams pq{1.5, 2.0};
  const double rho = 1e-2;
  const SolveResult res = solve_w_equation(1, rho, pq, mesh, cfg);
  REQUIRE(res.ok());
  const EigenPair& ep = *res.pair;
  const NodalFunction& w = ep.u;
  CHECK(ep.sign_changes == 0);

  // Transformed eigenvalue identity: lambda rho = alpha |grad w|_p^p + |grad w|_q^q
  // with alpha = ||w||_{1,q}^{2(q-p)}.
  const double gq = grad_energy(w, pq.q);
  const double alpha = std::pow(gq, 2.0 * (pq.q - pq.p) / pq.q);
  const double rhs = alpha * grad_energy(w, pq.p) + gq;
  CHECK(ep.lambda * rho == doctest::Approx(rhs).epsilon(1e-10));

  // Back-transform u = w / ||w||_{1,q}^2 solves the original weak form with
  // the same eigenvalue.
  const double c = 1.0 / std::pow(sobolev_norm(w, pq.q), 2.0);
  NodalFunction u = w;
  u *= c;
  DualVector r = grad_residual(u, pq.p);
  r += grad_residual(u, pq.q);
  DualVector m = mass_residual(u, pq.q);
  m *= ep.lambda;
  r -= m;
  const LaplaceOperator lap(mesh);
  CHECK(lap.dual_norm(r) < 1e-7);
}

TEST_CASE("w-equation approaches the q-Laplacian eigenvalue at small mass") {
  // The gap lambda(rho) - pi^2 decays like rho^{(q-p)/q} = rho^{1/4} for
  // p = 1.5, q = 2, so a direct 2% check needs a very small mass.
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, 128);
  const SolverConfig cfg;
  const SolveResult res = solve_w_equation(1, 1e-9, {1.5, 2.0}, mesh, cfg);
  REQUIRE(res.ok());
  CHECK(res.pair->lambda == doctest::Approx(kPi2).epsilon(0.02));
}
