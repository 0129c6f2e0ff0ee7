#include "pqlap/functionals.hpp"

#include <cmath>

namespace pqlap {

double energy_E(const NodalFunction& u, SpectralParam lam, const PQParams& pq) {
  return grad_energy(u, pq.p) / pq.p + grad_energy(u, pq.q) / pq.q -
         lam.lambda / pq.q * mass_q(u, pq.q);
}

double energy_I(const NodalFunction& u, const PQParams& pq) {
  return grad_energy(u, pq.p) / pq.p + grad_energy(u, pq.q) / pq.q;
}

double rayleigh_F(const NodalFunction& u, const PQParams& pq) {
  const double mass = mass_q(u, pq.q);
  const double floor = 1e-14 * u.mesh()->length();
  if (mass < floor) throw ZeroFunction("rayleigh_F: |u|_q^q below floor");
  return pq.q * energy_I(u, pq) / mass;
}

double nehari_residual(const NodalFunction& u, SpectralParam lam, const PQParams& pq) {
  return grad_energy(u, pq.p) + grad_energy(u, pq.q) - lam.lambda * mass_q(u, pq.q);
}

NodalFunction nehari_project(const NodalFunction& u, SpectralParam lam, const PQParams& pq) {
  if (!(pq.p < pq.q))
    throw InvalidExponent("nehari_project: requires p < q");
  const double num = grad_energy(u, pq.p);
  const double den = lam.lambda * mass_q(u, pq.q) - grad_energy(u, pq.q);
  if (!(den > 0.0))
    throw NotProjectable("nehari_project: lambda |u|_q^q - |grad u|_q^q <= 0");
  const double t = std::pow(num / den, 1.0 / (pq.q - pq.p));
  NodalFunction out = u;
  out *= t;
  return out;
}

DualVector apply_T(const NodalFunction& w, const PQParams& pq) {
  if (!(pq.p < pq.q)) throw InvalidExponent("apply_T: requires p < q");
  const double gq = grad_energy(w, pq.q);
  DualVector out = grad_residual(w, pq.q);
  if (gq > 0.0) {
    const double alpha = std::pow(gq, 2.0 * (pq.q - pq.p) / pq.q);
    DualVector rp = grad_residual(w, pq.p);
    rp *= alpha;
    out += rp;
  }
  return out;
}

double energy_F_w(const NodalFunction& w, const PQParams& pq) {
  if (!(pq.p < pq.q)) throw InvalidExponent("energy_F_w: requires p < q");
  const double gq = grad_energy(w, pq.q);
  if (gq == 0.0) return 0.0;
  const double alpha = std::pow(gq, 2.0 * (pq.q - pq.p) / pq.q);
  return pq.q / pq.p * alpha * grad_energy(w, pq.p) + gq;
}

double monotonicity_gap(std::span<const double> x1, std::span<const double> x2, double s) {
  if (!(s > 1.0)) throw InvalidExponent("monotonicity_gap: s must be > 1");
  if (x1.size() != x2.size())
    throw InvalidLength("monotonicity_gap: dimension mismatch");
  double n1 = 0.0, n2 = 0.0;
  for (size_t i = 0; i < x1.size(); ++i) {
    n1 += x1[i] * x1[i];
    n2 += x2[i] * x2[i];
  }
  n1 = std::sqrt(n1);
  n2 = std::sqrt(n2);
  const double w1 = n1 > 0.0 ? std::pow(n1, s - 2.0) : 0.0;
  const double w2 = n2 > 0.0 ? std::pow(n2, s - 2.0) : 0.0;
  double gap = 0.0;
  for (size_t i = 0; i < x1.size(); ++i)
    gap += (w2 * x2[i] - w1 * x1[i]) * (x2[i] - x1[i]);
  return gap;
}

}  // namespace pqlap
