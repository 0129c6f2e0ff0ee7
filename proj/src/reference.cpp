#include "pqlap/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pqlap/fem.hpp"

namespace pqlap {

namespace {

double signed_power(double u, double e) {
  if (u == 0.0) return 0.0;
  return u > 0.0 ? std::pow(u, e) : -std::pow(-u, e);
}

struct State {
  double u, v;
};

// First-order system of the q-Laplacian ODE; q' = q/(q-1).
State rhs(const State& y, double q, double lambda) {
  const double dual_exp = 1.0 / (q - 1.0);  // q' - 1
  return {signed_power(y.v, dual_exp), -lambda * signed_power(y.u, q - 1.0)};
}

// Dormand-Prince 5(4) step: returns 5th-order solution and an error estimate.
State dopri_step(const State& y, double q, double lambda, double h, double& err) {
  auto f = [&](const State& s) { return rhs(s, q, lambda); };
  const State k1 = f(y);
  const State k2 = f({y.u + h * 0.2 * k1.u, y.v + h * 0.2 * k1.v});
  const State k3 = f({y.u + h * (3.0 / 40 * k1.u + 9.0 / 40 * k2.u),
                      y.v + h * (3.0 / 40 * k1.v + 9.0 / 40 * k2.v)});
  const State k4 = f({y.u + h * (44.0 / 45 * k1.u - 56.0 / 15 * k2.u + 32.0 / 9 * k3.u),
                      y.v + h * (44.0 / 45 * k1.v - 56.0 / 15 * k2.v + 32.0 / 9 * k3.v)});
  const State k5 =
      f({y.u + h * (19372.0 / 6561 * k1.u - 25360.0 / 2187 * k2.u + 64448.0 / 6561 * k3.u -
                    212.0 / 729 * k4.u),
         y.v + h * (19372.0 / 6561 * k1.v - 25360.0 / 2187 * k2.v + 64448.0 / 6561 * k3.v -
                    212.0 / 729 * k4.v)});
  const State k6 =
      f({y.u + h * (9017.0 / 3168 * k1.u - 355.0 / 33 * k2.u + 46732.0 / 5247 * k3.u +
                    49.0 / 176 * k4.u - 5103.0 / 18656 * k5.u),
         y.v + h * (9017.0 / 3168 * k1.v - 355.0 / 33 * k2.v + 46732.0 / 5247 * k3.v +
                    49.0 / 176 * k4.v - 5103.0 / 18656 * k5.v)});
  State y5{y.u + h * (35.0 / 384 * k1.u + 500.0 / 1113 * k3.u + 125.0 / 192 * k4.u -
                      2187.0 / 6784 * k5.u + 11.0 / 84 * k6.u),
           y.v + h * (35.0 / 384 * k1.v + 500.0 / 1113 * k3.v + 125.0 / 192 * k4.v -
                      2187.0 / 6784 * k5.v + 11.0 / 84 * k6.v)};
  const State k7 = f(y5);
  // 4th-order embedded solution.
  State y4{y.u + h * (5179.0 / 57600 * k1.u + 7571.0 / 16695 * k3.u + 393.0 / 640 * k4.u -
                      92097.0 / 339200 * k5.u + 187.0 / 2100 * k6.u + 1.0 / 40 * k7.u),
           y.v + h * (5179.0 / 57600 * k1.v + 7571.0 / 16695 * k3.v + 393.0 / 640 * k4.v -
                      92097.0 / 339200 * k5.v + 187.0 / 2100 * k6.v + 1.0 / 40 * k7.v)};
  err = std::max(std::abs(y5.u - y4.u), std::abs(y5.v - y4.v));
  return y5;
}

// Integrate over [0, L]; optional sorted sample abscissae are hit exactly.
ShootResult integrate(double q, double lambda, double L, double rel_tol,
                      const std::vector<double>* targets, std::vector<double>* samples) {
  State y{0.0, 1.0};
  double x = 0.0;
  double h = L / 64.0;
  const double h_min = L * 1e-14;
  int zeros = 0;
  double last_sign = 0.0;
  size_t next_target = 0;
  // Scale for the error test; |v(0)| = 1 and the trajectory is bounded by the
  // conserved energy, so a running max works.
  double scale = 1.0;
  if (targets)
    while (next_target < targets->size() && (*targets)[next_target] <= 0.0) {
      samples->push_back(0.0);
      ++next_target;
    }
  int guard = 0;
  while (x < L) {
    if (++guard > 50'000'000) throw IntegrationFailure("shooting: step budget exceeded");
    bool hit_target = false;
    double h_try = std::min(h, L - x);
    if (targets && next_target < targets->size()) {
      const double to_target = (*targets)[next_target] - x;
      if (to_target <= h_try) {
        h_try = to_target;
        hit_target = true;
      }
    }
    if (h_try <= 0.0) {  // target coincides with current x
      samples->push_back(y.u);
      ++next_target;
      continue;
    }
    double err = 0.0;
    State y_new = dopri_step(y, q, lambda, h_try, err);
    const double tol = rel_tol * scale + 1e-300;
    if (err > tol && h_try > h_min) {
      h = std::max(h_min, 0.9 * h_try * std::pow(tol / err, 0.2));
      continue;
    }
    if (h_try <= h_min && err > tol)
      throw IntegrationFailure("shooting: step size underflow");
    // Accepted.
    x += h_try;
    y = y_new;
    scale = std::max({scale, std::abs(y.u), std::abs(y.v)});
    const double s = y.u > 0.0 ? 1.0 : (y.u < 0.0 ? -1.0 : 0.0);
    if (x < L * (1.0 - 1e-12) && s != 0.0) {
      if (last_sign != 0.0 && s != last_sign) ++zeros;
      last_sign = s;
    }
    if (hit_target) {
      samples->push_back(y.u);
      ++next_target;
    }
    if (err > 0.0) h = std::min(h_try * std::min(5.0, 0.9 * std::pow(tol / err, 0.2)), L);
    else h = std::min(h_try * 5.0, L);
  }
  return {zeros, y.u};
}

}  // namespace

double generalized_pi(double q) {
  if (!(q > 1.0)) throw InvalidExponent("generalized_pi: q must be > 1");
  const double pi = std::numbers::pi;
  return 2.0 * pi * std::pow(q - 1.0, 1.0 / q) / (q * std::sin(pi / q));
}

double qlap_eigenvalue(int k, double q, double L) {
  if (k < 1) throw InvalidLength("qlap_eigenvalue: k must be >= 1");
  if (!(q > 1.0)) throw InvalidExponent("qlap_eigenvalue: q must be > 1");
  if (!(L > 0.0)) throw InvalidLength("qlap_eigenvalue: L must be > 0");
  // Equivalently (q-1) (k pi~_q / L)^q with pi~_q = 2 pi / (q sin(pi/q));
  // the (q-1)^{1/q} weight inside pi_q absorbs the prefactor.
  return std::pow(k * generalized_pi(q) / L, q);
}

ShootResult shooting_oracle(double q, double lambda, double L, double rel_tol) {
  if (!(q > 1.0)) throw InvalidExponent("shooting_oracle: q must be > 1");
  if (!(lambda > 0.0)) throw InvalidLength("shooting_oracle: lambda must be > 0");
  return integrate(q, lambda, L, rel_tol, nullptr, nullptr);
}

double qlap_eigenvalue_shooting(int k, double q, double L, double rel_tol) {
  if (k < 1) throw InvalidLength("qlap_eigenvalue_shooting: k must be >= 1");
  // Geometric scan for the k-th sign change of u(L); cheap tolerance suffices
  // to locate brackets since the zeros of u(L; lambda) are simple.
  const double scan_tol = 1e-7;
  double lo = 0.01 / std::pow(L, q);
  double sign_lo = shooting_oracle(q, lo, L, scan_tol).end_value > 0.0 ? 1.0 : -1.0;
  int crossings = 0;
  double hi = lo;
  const double ratio = 1.05;
  for (int i = 0; i < 2000; ++i) {
    hi = lo * ratio;
    const double end = shooting_oracle(q, hi, L, scan_tol).end_value;
    const double sign_hi = end > 0.0 ? 1.0 : -1.0;
    if (sign_hi != sign_lo) {
      ++crossings;
      if (crossings == k) break;
      sign_lo = sign_hi;
    }
    lo = hi;
  }
  if (crossings != k)
    throw IntegrationFailure("qlap_eigenvalue_shooting: bracket scan failed");
  // Bisection at full accuracy.
  double end_lo = shooting_oracle(q, lo, L, rel_tol).end_value;
  for (int i = 0; i < 80 && (hi - lo) > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    const ShootResult r = shooting_oracle(q, mid, L, rel_tol);
    if ((r.end_value > 0.0) == (end_lo > 0.0)) {
      lo = mid;
      end_lo = r.end_value;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> shooting_samples(double q, double lambda, double L,
                                     const std::vector<double>& targets, double rel_tol) {
  std::vector<double> out;
  out.reserve(targets.size());
  integrate(q, lambda, L, rel_tol, &targets, &out);
  if (out.size() != targets.size())
    throw IntegrationFailure("shooting_samples: did not reach all targets");
  return out;
}

NodalFunction reference_eigenfunction(int k, double q, const MeshPtr& mesh) {
  const double L = mesh->length();
  const double lambda = qlap_eigenvalue(k, q, L);
  std::vector<double> targets(static_cast<size_t>(mesh->n_interior()));
  for (int i = 0; i < mesh->n_interior(); ++i)
    targets[static_cast<size_t>(i)] = mesh->node(i + 1) - mesh->a();
  std::vector<double> values = shooting_samples(q, lambda, L, targets);
  NodalFunction u(mesh, std::move(values));
  const double mass = mass_q(u, q);
  u *= 1.0 / std::pow(mass, 1.0 / q);
  if (u.size() > 0 && u[0] < 0.0) u *= -1.0;  // first lobe positive
  return u;
}

ReferenceEigenpair reference_eigenpair(int k, double q, const MeshPtr& mesh) {
  return {k, q, qlap_eigenvalue(k, q, mesh->length()), reference_eigenfunction(k, q, mesh)};
}

}  // namespace pqlap
