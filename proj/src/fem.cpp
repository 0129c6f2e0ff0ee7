#include "pqlap/fem.hpp"

#include <algorithm>
#include <cmath>

namespace pqlap {

namespace {

void check_exponent(double s, const char* where) {
  if (!(s > 1.0)) throw InvalidExponent(std::string(where) + ": exponent must be > 1");
}

double signed_power(double u, double e) {
  // sign(u) |u|^e, with 0 mapped to 0.
  if (u == 0.0) return 0.0;
  return u > 0.0 ? std::pow(u, e) : -std::pow(-u, e);
}

// Antiderivative of |v|^q: sign(v) |v|^{q+1} / (q+1).
double anti_abs_pow(double v, double q) { return signed_power(v, q + 1.0) / (q + 1.0); }

// Antiderivative of sign(v) |v|^{q-1}: |v|^q / q.
double anti_signed_pow(double v, double q) { return std::pow(std::abs(v), q) / q; }

// Relative endpoint-value gap below which the closed-form differences above
// would cancel catastrophically; fall back to plain quadrature (the integrand
// is then one-signed and smooth).
constexpr double kNearConstant = 1e-5;

}  // namespace

double grad_energy(const NodalFunction& u, double s) {
  check_exponent(s, "grad_energy");
  const Mesh1D& mesh = *u.mesh();
  double total = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double g = std::abs(u.gradient(e));
    if (g > 0.0) total += mesh.h(e) * std::pow(g, s);
  }
  return total;
}

double mass_q(const NodalFunction& u, double q, const Quadrature& quad) {
  check_exponent(q, "mass_q");
  const Mesh1D& mesh = *u.mesh();
  double total = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double a = u.value_at_node(e), b = u.value_at_node(e + 1);
    const double h = mesh.h(e);
    const double scale = std::abs(a) + std::abs(b);
    if (scale == 0.0) continue;
    if (std::abs(b - a) < kNearConstant * scale) {
      for (size_t g = 0; g < quad.points.size(); ++g)
        total += h * quad.weights[g] *
                 std::pow(std::abs(a + (b - a) * quad.points[g]), q);
    } else {
      // Exact: the integrand is |linear|^q, integrated via its antiderivative.
      total += h * (anti_abs_pow(b, q) - anti_abs_pow(a, q)) / (b - a);
    }
  }
  return total;
}

DualVector grad_residual(const NodalFunction& u, double s) {
  check_exponent(s, "grad_residual");
  const Mesh1D& mesh = *u.mesh();
  DualVector r(mesh.n_interior());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double g = u.gradient(e);
    double base = std::abs(g);
    if (s < 2.0) base = std::max(base, kGradRegFloor);
    double weight;
    if (s == 2.0)
      weight = 1.0;
    else if (base == 0.0)
      weight = 0.0;  // s > 2 here
    else
      weight = std::pow(base, s - 2.0);
    const double flux = weight * g;
    if (e + 1 <= mesh.n_interior()) r[e] += flux;      // node e+1
    if (e >= 1) r[e - 1] -= flux;                      // node e
  }
  return r;
}

DualVector mass_residual(const NodalFunction& u, double q, const Quadrature& quad) {
  check_exponent(q, "mass_residual");
  const Mesh1D& mesh = *u.mesh();
  DualVector r(mesh.n_interior());
  for (int e = 0; e < mesh.n_elements(); ++e) {
    const double a = u.value_at_node(e), b = u.value_at_node(e + 1);
    const double h = mesh.h(e);
    const double scale = std::abs(a) + std::abs(b);
    if (scale == 0.0) continue;
    // s0 = int_0^1 g(u(t)) dt and st = int_0^1 g(u(t)) t dt with
    // g(v) = |v|^{q-2} v; the hat weights are t and 1 - t.
    double s0, st;
    if (std::abs(b - a) < kNearConstant * scale) {
      s0 = st = 0.0;
      for (size_t g = 0; g < quad.points.size(); ++g) {
        const double t = quad.points[g];
        const double f = signed_power(a + (b - a) * t, q - 1.0);
        s0 += quad.weights[g] * f;
        st += quad.weights[g] * f * t;
      }
    } else {
      const double d0 = anti_signed_pow(b, q) - anti_signed_pow(a, q);
      const double d1 = anti_abs_pow(b, q) - anti_abs_pow(a, q);
      s0 = d0 / (b - a);
      st = (d1 - a * d0) / ((b - a) * (b - a));
    }
    if (e >= 1) r[e - 1] += h * (s0 - st);
    if (e + 1 <= mesh.n_interior()) r[e] += h * st;
  }
  return r;
}

double sobolev_norm(const NodalFunction& u, double s) {
  return std::pow(grad_energy(u, s), 1.0 / s);
}

LaplaceOperator::LaplaceOperator(MeshPtr mesh, std::vector<int> clamped)
    : mesh_(std::move(mesh)), clamped_(std::move(clamped)) {
  const int n = mesh_->n_interior();
  is_clamped_.assign(static_cast<size_t>(n), false);
  for (int c : clamped_) {
    if (c < 0 || c >= n)
      throw InfeasibleNodalPattern("LaplaceOperator: clamped index out of range");
    is_clamped_[static_cast<size_t>(c)] = true;
  }
  std::vector<double> d(static_cast<size_t>(n)), a(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    d[static_cast<size_t>(i)] = 1.0 / mesh_->h(i) + 1.0 / mesh_->h(i + 1);
    if (i >= 1) a[static_cast<size_t>(i)] = -1.0 / mesh_->h(i);  // coupling (i-1, i)
  }
  for (int i = 0; i < n; ++i) {
    if (!is_clamped_[static_cast<size_t>(i)]) continue;
    d[static_cast<size_t>(i)] = 1.0;
    a[static_cast<size_t>(i)] = 0.0;
    if (i + 1 < n) a[static_cast<size_t>(i) + 1] = 0.0;
  }
  diag_.resize(static_cast<size_t>(n));
  lower_.assign(static_cast<size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double di = d[static_cast<size_t>(i)];
    if (i >= 1) {
      lower_[static_cast<size_t>(i)] = a[static_cast<size_t>(i)] / diag_[static_cast<size_t>(i) - 1];
      di -= lower_[static_cast<size_t>(i)] * a[static_cast<size_t>(i)];
    }
    diag_[static_cast<size_t>(i)] = di;
  }
}

std::vector<double> LaplaceOperator::solve(const DualVector& r) const {
  const int n = static_cast<int>(diag_.size());
  std::vector<double> x(r.entries);
  for (int c : clamped_) x[static_cast<size_t>(c)] = 0.0;
  for (int i = 1; i < n; ++i) x[static_cast<size_t>(i)] -= lower_[static_cast<size_t>(i)] * x[static_cast<size_t>(i) - 1];
  for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] /= diag_[static_cast<size_t>(i)];
  for (int i = n - 2; i >= 0; --i)
    x[static_cast<size_t>(i)] -= lower_[static_cast<size_t>(i) + 1] * x[static_cast<size_t>(i) + 1];
  for (int c : clamped_) x[static_cast<size_t>(c)] = 0.0;
  return x;
}

double LaplaceOperator::dual_norm(const DualVector& r) const {
  std::vector<double> x = solve(r);
  double s = 0.0;
  for (int i = 0; i < static_cast<int>(x.size()); ++i) s += x[static_cast<size_t>(i)] * r[i];
  return std::sqrt(std::max(0.0, s));
}

}  // namespace pqlap
