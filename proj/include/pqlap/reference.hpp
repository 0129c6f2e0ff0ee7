#pragma once

#include <vector>

#include "pqlap/mesh.hpp"

namespace pqlap {

/// Generalized pi: pi_q = 2 pi (q-1)^{1/q} / (q sin(pi/q)); pi_2 = pi.
double generalized_pi(double q);

/// k-th Dirichlet eigenvalue of the pure q-Laplacian on an interval of
/// length L: (k pi_q / L)^q.
double qlap_eigenvalue(int k, double q, double L);

struct ShootResult {
  int zero_count = 0;    // interior zeros of u on (0, L)
  double end_value = 0;  // u(L)
};

/// Integrate u' = |v|^{q'-2} v, v' = -lambda |u|^{q-2} u from (u,v)(0) = (0,1)
/// over [0,L] with an adaptive embedded Runge-Kutta pair.
ShootResult shooting_oracle(double q, double lambda, double L, double rel_tol = 1e-11);

/// Eigenvalue by shooting: geometric scan for the k-th sign change of u(L),
/// then bisection. Independent of the closed form above.
double qlap_eigenvalue_shooting(int k, double q, double L, double rel_tol = 1e-11);

/// Shooting trajectory u sampled at the given abscissae (must be increasing,
/// within [0, L]).
std::vector<double> shooting_samples(double q, double lambda, double L,
                                     const std::vector<double>& targets,
                                     double rel_tol = 1e-11);

/// Mode-k eigenfunction of the q-Laplacian interpolated on the mesh,
/// normalized to |u|_q^q = 1 with positive first lobe.
NodalFunction reference_eigenfunction(int k, double q, const MeshPtr& mesh);

struct ReferenceEigenpair {
  int k;
  double q;
  double lambda;
  NodalFunction u;
};

ReferenceEigenpair reference_eigenpair(int k, double q, const MeshPtr& mesh);

}  // namespace pqlap
