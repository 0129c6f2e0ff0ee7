#pragma once

#include <string>
#include <vector>

#include "pqlap/solvers.hpp"

namespace pqlap {

enum class BranchRegime {
  Direct,        // p > q: fixed-mass minimization in the original variable
  WTransformed,  // p < q: transformed w-problem; norms reported in both frames
};

/// One certified point of a mass-parametrized eigenvalue branch. Norms are in
/// the original variable u; for a w-branch they are back-transformed through
/// u = w / ||w||_{1,q}^2.
struct BranchPoint {
  double rho = 0.0;
  double lambda = 0.0;
  double level = 0.0;  // c_k (direct) or d_k (transformed)
  double norm_1p = 0.0;
  double norm_1q = 0.0;
  double norm_w_1q = 0.0;  // 0 in the direct regime
  int sign_changes = 0;
  int iterations = 0;
};

struct Branch {
  int mode;
  PQParams pq;
  BranchRegime regime;
  std::vector<BranchPoint> points;  // rho strictly decreasing
  // Index into the requested grid of the first point that failed its
  // certificate; -1 when the whole branch completed. The points before the
  // failure are still returned.
  int failed_index = -1;

  bool complete() const { return failed_index < 0; }
};

/// n log-spaced values from rho_max down to rho_min (inclusive, decreasing).
std::vector<double> log_grid(double rho_max, double rho_min, int n);

/// Trace the mode-k branch over the given mass grid, warm-starting each point
/// from the previous one. The regime follows the sign of p - q.
Branch trace_branch(int k, const PQParams& pq, const std::vector<double>& rho_grid,
                    const MeshPtr& mesh, const SolverConfig& cfg);

struct LimitEstimate {
  double lambda_limit = 0.0;
  double uncertainty = 0.0;  // bootstrap standard deviation
  double exponent = 0.0;     // fitted beta of lambda(rho) = lambda* + A rho^beta
};

/// Extrapolate lambda(rho) -> rho = 0 against the power-law model above,
/// using the smallest masses of the branch as the asymptotic window.
LimitEstimate estimate_limit(const Branch& branch);

/// Least-squares slope of log(level gap) vs log rho over the asymptotic
/// window, where the gap is q*c_k(rho) - lambda_ref*rho (direct) or
/// d_k(rho) - lambda_ref*rho (transformed).
double fit_scaling_exponent(const Branch& branch, double lambda_ref);

struct MultiplicityResult {
  std::vector<EigenPair> pairs;
  // One message per mode whose branch could not be bracketed or solved;
  // empty when every expected mode was found.
  std::vector<std::string> mode_errors;
};

/// For lambda in (lambda_k^D(q), lambda_{k+1}^D(q)), solve
/// lambda_i(p,q; rho) = lambda for each mode i <= k by bracketed bisection in
/// rho. Returns the found eigenpairs (their sign-flips are solutions too).
MultiplicityResult multiplicity_solve(double lambda, const PQParams& pq,
                                      const MeshPtr& mesh, const SolverConfig& cfg);

}  // namespace pqlap
