#pragma once

#include <optional>
#include <string>

#include "pqlap/functionals.hpp"
#include "pqlap/reference.hpp"

namespace pqlap {

enum class SolveStatus {
  Converged,
  ConvergedToZero,   // attracted to the trivial solution (expected below lambda_1)
  NotProjectable,    // no admissible Nehari start exists on this mesh
  MaxIterations,
};

std::string to_string(SolveStatus s);

/// A converged solution of the discrete weak problem, with its certificate
/// data. For modes k >= 2 the level is a nodal-surrogate value: minimization
/// is restricted to functions with k-1 prescribed interior zeros and
/// alternating signs, which upper-bounds the genus minimax level and is exact
/// only for k = 1.
struct EigenPair {
  double lambda = 0.0;
  NodalFunction u;
  double rho = 0.0;
  int mode = 1;
  double level = 0.0;          // c_k, d_k or the Nehari/global level m
  double residual_norm = 0.0;  // dual norm of the full weak-form residual
  int iterations = 0;
  int sign_changes = 0;
};

struct SolverConfig {
  // Armijo backtracking.
  double armijo_slope = 1e-4;
  double armijo_shrink = 0.5;
  int max_backtracks = 45;
  // Stopping: dual residual < residual_tol * max(1, lambda*rho), and the
  // level decrease over stall_window iterations below stall_tol relative.
  double residual_tol = 1e-8;
  int stall_window = 10;
  double stall_tol = 1e-12;
  int max_iterations = 50000;
  double mass_floor = 1e-14;
  double zero_norm_tol = 1e-6;  // ||u||_{1,p} collapse threshold
  bool optimize_breakpoints = true;
  unsigned seed = 42;
  int quad_order = 8;
  double lambda_margin = 1e-3;
  double w_alpha_tol = 1e-13;  // self-consistency of the w-equation prefactor
};

struct SolveResult {
  SolveStatus status = SolveStatus::MaxIterations;
  std::optional<EigenPair> pair;
  bool ok() const { return status == SolveStatus::Converged; }
};

/// Strict sign alternations of the nodal coefficients, ignoring entries below
/// 1e-10 * ||u||_inf.
int sign_changes(const NodalFunction& u);

/// Global minimization of E_lambda (p > q). Returns ConvergedToZero when the
/// iterate collapses to the trivial solution, as expected for
/// lambda <= lambda_1^D(q).
SolveResult solve_first_global(double lambda, const PQParams& pq, const MeshPtr& mesh,
                               const SolverConfig& cfg, const NodalFunction* start = nullptr);

/// Nehari-constrained minimization of E_lambda (p < q).
SolveResult solve_first_nehari(double lambda, const PQParams& pq, const MeshPtr& mesh,
                               const SolverConfig& cfg, const NodalFunction* start = nullptr);

/// Fixed-mass minimization of I on {|u|_q^q = rho}, nodal surrogate class for
/// mode k. lambda is recovered from lambda*rho = |grad u|_p^p + |grad u|_q^q.
SolveResult solve_fixed_rho(int k, double rho, const PQParams& pq, const MeshPtr& mesh,
                            const SolverConfig& cfg, const NodalFunction* warm_start = nullptr);

/// Fixed-mass solve of the transformed w-equation (p < q): the p-term carries
/// the prefactor ||w||_{1,q}^{2(q-p)}, made self-consistent by an outer fixed
/// point so the transformed weak form holds at the returned w.
SolveResult solve_w_equation(int k, double rho, const PQParams& pq, const MeshPtr& mesh,
                             const SolverConfig& cfg, const NodalFunction* warm_start = nullptr);

}  // namespace pqlap
