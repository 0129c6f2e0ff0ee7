#include "pqlap/verify.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

namespace pqlap {

namespace {

constexpr double kPi2 = std::numbers::pi * std::numbers::pi;

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& msg) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += msg;
    }
  }
  void note(const std::string& msg) {
    if (!detail.empty()) detail += "; ";
    detail += msg;
  }
};

NodalFunction random_function(const MeshPtr& mesh, std::mt19937& rng, double lo = -1.0,
                              double hi = 1.0) {
  std::uniform_real_distribution<double> unif(lo, hi);
  NodalFunction u(mesh);
  for (int i = 0; i < u.size(); ++i) u[i] = unif(rng);
  return u;
}

// --- Criterion 1: bifurcation from zero (p > q) -----------------------------

Check crit_bifurcation_zero(const RunConfig& rc) {
  Check c;
  const PQParams pq{3.0, 2.0};
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, rc.n_elements);
  const SolverConfig cfg = rc.solver();
  const std::vector<double> grid = log_grid(1e-1, 1e-6, 12);

  const double targets[] = {kPi2, 4.0 * kPi2};
  const double tols[] = {0.01, 0.02};
  for (int k = 1; k <= 2; ++k) {
    const Branch br = trace_branch(k, pq, grid, mesh, cfg);
    if (!br.complete()) {
      c.require(false, "mode " + std::to_string(k) + ": branch broke at grid index " +
                           std::to_string(br.failed_index));
      continue;
    }
    const LimitEstimate est = estimate_limit(br);
    const double err = rel_err(est.lambda_limit, targets[k - 1]);
    c.note("mode " + std::to_string(k) + ": lambda* = " + fmt(est.lambda_limit) +
           " (target " + fmt(targets[k - 1]) + ", rel err " + fmt(err) +
           ", bootstrap +- " + fmt(est.uncertainty) + ")");
    c.require(err < tols[k - 1],
              "mode " + std::to_string(k) +
                  " limit outside tolerance; on coarse meshes the FE "
                  "discretization error of lambda_k^D(q) dominates this gap");
  }
  return c;
}

// --- Criterion 2: bifurcation from infinity (p < q, w-equation) -------------

Check crit_bifurcation_infinity(const RunConfig& rc) {
  Check c;
  const PQParams pq{1.5, 2.0};
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, rc.n_elements);
  const SolverConfig cfg = rc.solver();
  const Branch br = trace_branch(1, pq, log_grid(1e-1, 1e-6, 12), mesh, cfg);
  if (!br.complete()) {
    c.require(false, "w-branch broke at grid index " + std::to_string(br.failed_index));
    return c;
  }
  const LimitEstimate est = estimate_limit(br);
  const double err = rel_err(est.lambda_limit, kPi2);
  c.note("lambda~* = " + fmt(est.lambda_limit) + " (rel err " + fmt(err) + ")");
  c.require(err < 0.01, "w-limit outside 1% of pi^2");
  const double norm_large_rho = br.points.front().norm_1q;
  const double norm_small_rho = br.points.back().norm_1q;
  c.note("back-transformed ||u||_{1,q}: " + fmt(norm_large_rho) + " -> " +
         fmt(norm_small_rho));
  c.require(norm_small_rho > 10.0 * norm_large_rho,
            "||u||_{1,q} did not grow 10x toward rho = 0");
  return c;
}

// --- Criterion 3: scaling exponent of Lemma-5.1-type gaps -------------------

Check crit_scaling_exponent(const RunConfig& rc) {
  Check c;
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, rc.n_elements);
  const SolverConfig cfg = rc.solver();
  const std::vector<double> grid = log_grid(1e-1, 1e-6, 12);
  for (double p : {3.0, 4.0}) {
    const PQParams pq{p, 2.0};
    const Branch br = trace_branch(1, pq, grid, mesh, cfg);
    if (!br.complete()) {
      c.require(false, "p=" + fmt(p) + ": branch broke");
      continue;
    }
    const double slope = fit_scaling_exponent(br, kPi2);
    const double target = p / 2.0;
    c.note("p=" + fmt(p) + ": slope " + fmt(slope) + " (target " + fmt(target) + ")");
    c.require(std::abs(slope - target) <= 0.15 * target,
              "p=" + fmt(p) + " slope outside +-15%");
  }
  return c;
}

// --- Criterion 4: multiplicity count (Thm-6.1-type) --------------------------

Check crit_multiplicity(const RunConfig& rc) {
  Check c;
  const PQParams pq{3.0, 2.0};
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, rc.n_elements);
  SolverConfig cfg = rc.solver();
  cfg.residual_tol = std::min(cfg.residual_tol, 1e-9);
  const double lambda = 45.0;  // in (4 pi^2, 9 pi^2)
  const MultiplicityResult mr = multiplicity_solve(lambda, pq, mesh, cfg);
  for (const std::string& err : mr.mode_errors) c.require(false, err);
  c.require(mr.pairs.size() == 2,
            "expected exactly 2 modes, got " + std::to_string(mr.pairs.size()));
  for (size_t i = 0; i < mr.pairs.size(); ++i) {
    const EigenPair& ep = mr.pairs[i];
    c.note("mode " + std::to_string(i + 1) + ": rho = " + fmt(ep.rho) + ", residual " +
           fmt(ep.residual_norm));
    c.require(ep.sign_changes == static_cast<int>(i),
              "mode " + std::to_string(i + 1) + ": sign_changes = " +
                  std::to_string(ep.sign_changes));
    c.require(ep.residual_norm < 1e-7,
              "mode " + std::to_string(i + 1) + ": weak residual >= 1e-7");
    const double identity = grad_energy(ep.u, pq.p) + grad_energy(ep.u, pq.q);
    c.require(std::abs(ep.lambda * ep.rho - identity) <= 1e-10 * identity,
              "mode " + std::to_string(i + 1) + ": lambda*rho identity violated");
    c.require(rel_err(ep.lambda, lambda) < 1e-5,
              "mode " + std::to_string(i + 1) + ": lambda missed the target");
  }
  return c;
}

// --- Criterion 5: nonexistence below lambda_1^D(q) ---------------------------

Check crit_nonexistence(const RunConfig& rc) {
  Check c;
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, 128);
  const SolverConfig cfg = rc.solver();
  const double lambda = 0.95 * kPi2;
  std::mt19937 rng(rc.seed);

  int to_zero = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const NodalFunction start = random_function(mesh, rng);
    const SolveResult res = solve_first_global(lambda, {3.0, 2.0}, mesh, cfg, &start);
    if (res.status == SolveStatus::ConvergedToZero) ++to_zero;
  }
  c.note("p=3: " + std::to_string(to_zero) + "/20 starts collapsed to zero");
  c.require(to_zero == 20, "p=3: a start produced a spurious nontrivial solution");

  int not_projectable = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const NodalFunction start = random_function(mesh, rng);
    const SolveResult res = solve_first_nehari(lambda, {1.5, 2.0}, mesh, cfg, &start);
    if (res.status == SolveStatus::NotProjectable) ++not_projectable;
  }
  c.note("p=1.5: " + std::to_string(not_projectable) + "/20 starts not projectable");
  c.require(not_projectable == 20, "p=1.5: a start projected onto the Nehari set");
  return c;
}

// --- Criterion 6: positivity of first eigenfunctions -------------------------

Check crit_positivity(const RunConfig& rc) {
  Check c;
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, 128);
  const SolverConfig cfg = rc.solver();
  int n_pairs = 0;
  auto check_pair = [&](const std::string& label, const SolveResult& res) {
    if (!res.ok()) {
      c.require(false, label + ": " + to_string(res.status));
      return;
    }
    ++n_pairs;
    c.require(res.pair->sign_changes == 0,
              label + ": sign_changes = " + std::to_string(res.pair->sign_changes));
  };

  for (double rho : {1e-2, 1e-4}) {
    check_pair("fixed-rho p=3 rho=" + fmt(rho),
               solve_fixed_rho(1, rho, {3.0, 2.0}, mesh, cfg));
  }
  check_pair("fixed-rho p=4", solve_fixed_rho(1, 1e-3, {4.0, 2.0}, mesh, cfg));
  check_pair("fixed-rho p=2.5 q=1.5", solve_fixed_rho(1, 1e-2, {2.5, 1.5}, mesh, cfg));
  check_pair("fixed-rho p=1.5 q=2", solve_fixed_rho(1, 1e-3, {1.5, 2.0}, mesh, cfg));
  check_pair("global p=3 lambda=2pi^2",
             solve_first_global(2.0 * kPi2, {3.0, 2.0}, mesh, cfg));
  check_pair("nehari p=1.5 lambda=2pi^2",
             solve_first_nehari(2.0 * kPi2, {1.5, 2.0}, mesh, cfg));
  check_pair("w-equation p=1.5", solve_w_equation(1, 1e-3, {1.5, 2.0}, mesh, cfg));
  c.note(std::to_string(n_pairs) + " first eigenpairs checked");
  return c;
}

// --- Criterion 7: Nehari level identity ---------------------------------------

Check crit_nehari_level(const RunConfig& rc) {
  Check c;
  const PQParams pq{1.5, 2.0};
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, 128);
  const SolveResult res = solve_first_nehari(2.0 * kPi2, pq, mesh, rc.solver());
  if (!res.ok()) {
    c.require(false, "solver: " + to_string(res.status));
    return c;
  }
  const double m = energy_E(res.pair->u, {2.0 * kPi2}, pq);
  const double rhs = (1.0 / pq.p - 1.0 / pq.q) * grad_energy(res.pair->u, pq.p);
  c.note("m = " + fmt(m));
  c.require(m > 0.0, "Nehari level m is not positive");
  c.require(std::abs(m - rhs) < 1e-10 * std::abs(m),
            "E_lambda(u) != (1/p - 1/q) |grad u|_p^p at 1e-10");
  return c;
}

// --- Criterion 8: residuals vs finite differences ----------------------------

Check crit_gradients(const RunConfig& rc) {
  Check c;
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, 16);
  std::mt19937 rng(rc.seed + 1);
  const double h = 1e-6;
  double worst = 0.0;
  int failures = 0;
  for (double s : {1.5, 2.0, 2.5, 3.0, 4.0}) {
    for (int trial = 0; trial < 50; ++trial) {
      const NodalFunction u = random_function(mesh, rng);
      const NodalFunction v = random_function(mesh, rng);
      auto fd = [&](const std::function<double(const NodalFunction&)>& f) {
        NodalFunction up = u, um = u;
        up += h * v;
        um += -h * v;
        return (f(up) - f(um)) / (2.0 * h);
      };
      // d/dt grad_energy(u + t v, s) = s <grad_residual(u, s), v>,
      // d/dt mass_q(u + t v, q)     = q <mass_residual(u, q), v>.
      const double fd_grad = fd([&](const NodalFunction& w) { return grad_energy(w, s); });
      const double err_grad = rel_err(s * pair(grad_residual(u, s), v), fd_grad);
      const double fd_mass = fd([&](const NodalFunction& w) { return mass_q(w, s); });
      const double err_mass = rel_err(s * pair(mass_residual(u, s), v), fd_mass);
      worst = std::max({worst, err_grad, err_mass});
      if (err_grad >= 1e-5 || err_mass >= 1e-5) ++failures;
    }
  }
  c.note("worst relative FD error " + fmt(worst));
  c.require(failures == 0, std::to_string(failures) + " FD checks exceeded 1e-5");
  return c;
}

// --- Criterion 9: reference spectrum oracle ----------------------------------

Check crit_spectrum_oracle(const RunConfig&) {
  Check c;
  double worst = 0.0;
  for (double q : {1.5, 2.0, 2.5, 3.0, 4.0}) {
    for (int k = 1; k <= 6; ++k) {
      const double closed = qlap_eigenvalue(k, q, 1.0);
      const double shot = qlap_eigenvalue_shooting(k, q, 1.0);
      const double err = rel_err(shot, closed);
      worst = std::max(worst, err);
      c.require(err < 1e-8, "q=" + fmt(q) + " k=" + std::to_string(k) +
                                ": shooting vs closed form rel err " + fmt(err));
      if (q == 2.0)
        c.require(rel_err(closed, k * k * kPi2) < 1e-12,
                  "q=2 k=" + std::to_string(k) + ": closed form differs from (k pi)^2");
    }
  }
  c.note("worst shooting/closed-form disagreement " + fmt(worst));
  return c;
}

// --- Criterion 10: monotone-operator sampling --------------------------------

Check crit_monotonicity(const RunConfig& rc) {
  Check c;
  std::mt19937 rng(rc.seed + 2);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (double s : {1.5, 3.0}) {
    double min_gap = 1e300;
    for (int trial = 0; trial < 10000; ++trial) {
      double x1[5], x2[5];
      for (int i = 0; i < 5; ++i) {
        x1[i] = unif(rng);
        x2[i] = unif(rng);
      }
      min_gap = std::min(min_gap, monotonicity_gap(x1, x2, s));
    }
    c.note("s=" + fmt(s) + ": min gap " + fmt(min_gap));
    c.require(min_gap >= -1e-14, "s=" + fmt(s) + ": negative monotonicity gap");
  }

  const PQParams pq{1.5, 2.0};
  const MeshPtr mesh = Mesh1D::uniform(0.0, 1.0, 32);
  std::uniform_real_distribution<double> radius(1e-3, 0.05);
  double min_t = 1e300;
  for (int trial = 0; trial < 100; ++trial) {
    NodalFunction u = random_function(mesh, rng);
    NodalFunction v = random_function(mesh, rng);
    u *= radius(rng) / sobolev_norm(u, pq.q);
    v *= radius(rng) / sobolev_norm(v, pq.q);
    DualVector d = apply_T(u, pq);
    d -= apply_T(v, pq);
    NodalFunction diff = u;
    NodalFunction mv = v;
    mv *= -1.0;
    diff += mv;
    min_t = std::min(min_t, pair(d, diff));
  }
  c.note("min <T(u)-T(v), u-v> = " + fmt(min_t));
  c.require(min_t > 0.0, "T failed strict monotonicity on a sampled pair");
  return c;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const VerifyOptions& opt) {
  struct Entry {
    int id;
    const char* name;
    std::function<Check(const RunConfig&)> run;
  };
  const std::vector<Entry> entries = {
      {1, "bifurcation-zero", crit_bifurcation_zero},
      {2, "bifurcation-infinity", crit_bifurcation_infinity},
      {3, "scaling-exponent", crit_scaling_exponent},
      {4, "multiplicity", crit_multiplicity},
      {5, "nonexistence", crit_nonexistence},
      {6, "positivity", crit_positivity},
      {7, "nehari-level", crit_nehari_level},
      {8, "gradients", crit_gradients},
      {9, "spectrum-oracle", crit_spectrum_oracle},
      {10, "monotonicity", crit_monotonicity},
  };
  std::vector<CriterionResult> out;
  for (const Entry& e : entries) {
    if (!opt.only.empty() && std::string(e.name).find(opt.only) == std::string::npos)
      continue;
    CriterionResult r;
    r.id = e.id;
    r.name = e.name;
    try {
      const Check c = e.run(opt.config);
      r.passed = c.ok;
      r.detail = c.detail;
    } catch (const std::exception& ex) {
      r.passed = false;
      r.detail = std::string("exception: ") + ex.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace pqlap
