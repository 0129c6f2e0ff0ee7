#pragma once

#include <vector>

#include "pqlap/mesh.hpp"

namespace pqlap {

/// Regularization floor for |grad u|^{s-2} weights with s < 2, applied in
/// residual assembly only; energies are never regularized.
inline constexpr double kGradRegFloor = 1e-12;

/// Raw gradient integral: sum_e h_e |du/h_e|^s. Exact for P1 functions.
double grad_energy(const NodalFunction& u, double s);

/// Constraint integral of |u|^q. Evaluated in closed form per element via the
/// antiderivative of |linear|^q (exact, including sign-changing elements);
/// the quadrature rule is only used as a cancellation-safe fallback when the
/// endpoint values nearly coincide.
double mass_q(const NodalFunction& u, double q,
              const Quadrature& quad = Quadrature::default_rule());

/// v |-> integral of |grad u|^{s-2} grad u . grad v. Pairing with u itself
/// recovers grad_energy(u, s).
DualVector grad_residual(const NodalFunction& u, double s);

/// v |-> integral of |u|^{q-2} u v (the spectral parameter factored out).
/// Closed-form per element, like mass_q.
DualVector mass_residual(const NodalFunction& u, double q,
                         const Quadrature& quad = Quadrature::default_rule());

/// Sobolev norm ||u||_{1,s} = (integral |grad u|^s)^{1/s}.
double sobolev_norm(const NodalFunction& u, double s);

/// Factorized P1 stiffness matrix of the (linear) Dirichlet Laplacian,
/// optionally with extra interior nodes clamped to zero. Provides the
/// H^1-descent preconditioner and the discrete dual norm
/// sqrt(<K^{-1} r, r>) used by every residual certificate.
class LaplaceOperator {
 public:
  explicit LaplaceOperator(MeshPtr mesh, std::vector<int> clamped = {});

  /// Solve K x = r; clamped entries of the result are zero.
  std::vector<double> solve(const DualVector& r) const;
  /// Dual (H^{-1}-type) norm sqrt(r . K^{-1} r).
  double dual_norm(const DualVector& r) const;
  const std::vector<int>& clamped() const { return clamped_; }

 private:
  MeshPtr mesh_;
  std::vector<int> clamped_;
  std::vector<bool> is_clamped_;
  // LDL^T factors of the (clamp-adjusted) tridiagonal stiffness matrix.
  std::vector<double> diag_, lower_;
};

}  // namespace pqlap
