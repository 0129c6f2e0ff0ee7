#pragma once

#include <span>

#include "pqlap/fem.hpp"

namespace pqlap {

/// Exponent pair of the perturbed q-homogeneous problem. The two regimes
/// p > q and p < q behave differently throughout; p == q is rejected.
struct PQParams {
  double p;
  double q;

  PQParams(double p_, double q_) : p(p_), q(q_) {
    if (!(p > 1.0)) throw InvalidExponent("PQParams: p must be > 1");
    if (!(q > 1.0)) throw InvalidExponent("PQParams: q must be > 1");
    if (p == q) throw InvalidExponent("PQParams: p == q is not supported");
  }
  bool p_above_q() const { return p > q; }
};

struct SpectralParam {
  double lambda = 0.0;
};

/// E_lambda(u) = (1/p) |grad u|_p^p + (1/q) |grad u|_q^q - (lambda/q) |u|_q^q.
double energy_E(const NodalFunction& u, SpectralParam lam, const PQParams& pq);

/// I(u) = (1/p) |grad u|_p^p + (1/q) |grad u|_q^q; the fixed-mass level functional.
double energy_I(const NodalFunction& u, const PQParams& pq);

/// Rayleigh-type quotient F(u) = q I(u) / |u|_q^q.
double rayleigh_F(const NodalFunction& u, const PQParams& pq);

/// <E'_lambda(u), u> = |grad u|_p^p + |grad u|_q^q - lambda |u|_q^q.
double nehari_residual(const NodalFunction& u, SpectralParam lam, const PQParams& pq);

/// Scale u onto the Nehari set: t = (|grad u|_p^p / (lambda |u|_q^q - |grad u|_q^q))^{1/(q-p)}.
/// Requires p < q; throws NotProjectable when the denominator is nonpositive.
NodalFunction nehari_project(const NodalFunction& u, SpectralParam lam, const PQParams& pq);

/// Transformed operator T applied to w: ||w||_{1,q}^{2(q-p)} R_p(w) + R_q(w),
/// where R_s is the s-Laplacian residual. Requires p < q.
DualVector apply_T(const NodalFunction& w, const PQParams& pq);

/// Level functional of the transformed problem:
/// (q/p) ||w||_{1,q}^{2(q-p)} |grad w|_p^p + |grad w|_q^q. Requires p < q.
double energy_F_w(const NodalFunction& w, const PQParams& pq);

/// (|x2|^{s-2} x2 - |x1|^{s-2} x1) . (x2 - x1), with |0|^{s-2} 0 := 0.
double monotonicity_gap(std::span<const double> x1, std::span<const double> x2, double s);

}  // namespace pqlap
