#include "pqlap/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <cstdio>
#include <cstdlib>

namespace pqlap {

namespace {

/// Window used for all asymptotic fits: the smallest-mass points.
constexpr size_t kFitWindow = 6;

std::vector<const BranchPoint*> fit_window(const Branch& branch, size_t min_points) {
  if (branch.points.size() < min_points)
    throw InvalidLength("asymptotic fit: not enough branch points");
  const size_t n = std::min(kFitWindow, branch.points.size());
  std::vector<const BranchPoint*> out;
  out.reserve(n);
  for (size_t i = branch.points.size() - n; i < branch.points.size(); ++i)
    out.push_back(&branch.points[i]);
  return out;
}

struct PowerFit {
  double lambda_star = 0.0;
  double amplitude = 0.0;
  double ssr = 0.0;
};

/// Linear least squares of lambda against {1, rho^beta}.
PowerFit fit_at_beta(const std::vector<double>& rho, const std::vector<double>& lam,
                     double beta) {
  const size_t n = rho.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> x(n);
  for (size_t i = 0; i < n; ++i) {
    x[i] = std::pow(rho[i], beta);
    mx += x[i];
    my += lam[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (lam[i] - my);
  }
  PowerFit f;
  f.amplitude = sxx > 0.0 ? sxy / sxx : 0.0;
  f.lambda_star = my - f.amplitude * mx;
  for (size_t i = 0; i < n; ++i) {
    const double r = lam[i] - f.lambda_star - f.amplitude * x[i];
    f.ssr += r * r;
  }
  return f;
}

constexpr double kBetaLo = 0.05;
constexpr double kBetaHi = 5.0;

double best_beta(const std::vector<double>& rho, const std::vector<double>& lam,
                 double beta_init) {
  // Coarse geometric scan (the SSR landscape can have several basins), then
  // golden-section refinement in the winning bracket.
  double best = std::clamp(beta_init, kBetaLo, kBetaHi);
  double best_ssr = fit_at_beta(rho, lam, best).ssr;
  const int n_scan = 240;
  for (int i = 0; i <= n_scan; ++i) {
    const double b = kBetaLo * std::pow(kBetaHi / kBetaLo, double(i) / n_scan);
    const double ssr = fit_at_beta(rho, lam, b).ssr;
    if (ssr < best_ssr) {
      best_ssr = ssr;
      best = b;
    }
  }
  const double step = std::pow(kBetaHi / kBetaLo, 1.0 / n_scan);
  double lo = std::max(kBetaLo, best / step);
  double hi = std::min(kBetaHi, best * step);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double b1 = hi - gr * (hi - lo), b2 = lo + gr * (hi - lo);
  double f1 = fit_at_beta(rho, lam, b1).ssr, f2 = fit_at_beta(rho, lam, b2).ssr;
  for (int i = 0; i < 200 && (hi - lo) > 1e-13 * hi; ++i) {
    if (f1 < f2) {
      hi = b2;
      b2 = b1;
      f2 = f1;
      b1 = hi - gr * (hi - lo);
      f1 = fit_at_beta(rho, lam, b1).ssr;
    } else {
      lo = b1;
      b1 = b2;
      f1 = f2;
      b2 = lo + gr * (hi - lo);
      f2 = fit_at_beta(rho, lam, b2).ssr;
    }
  }
  const double mid = 0.5 * (lo + hi);
  return fit_at_beta(rho, lam, mid).ssr <= best_ssr ? mid : best;
}

double default_beta_init(const Branch& branch) {
  if (branch.regime == BranchRegime::Direct)
    return branch.pq.p / branch.pq.q - 1.0;
  return 2.0 * (branch.pq.q - branch.pq.p) / branch.pq.p;
}

}  // namespace

std::vector<double> log_grid(double rho_max, double rho_min, int n) {
  if (!(rho_min > 0.0) || !(rho_max > rho_min))
    throw InvalidLength("log_grid: need rho_max > rho_min > 0");
  if (n < 1) throw InvalidLength("log_grid: need at least one point");
  std::vector<double> out(static_cast<size_t>(n));
  if (n == 1) {
    out[0] = rho_max;
    return out;
  }
  const double r = std::log(rho_min / rho_max) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = rho_max * std::exp(r * i);
  out.back() = rho_min;
  return out;
}

Branch trace_branch(int k, const PQParams& pq, const std::vector<double>& rho_grid,
                    const MeshPtr& mesh, const SolverConfig& cfg) {
  if (rho_grid.empty()) throw InvalidLength("trace_branch: empty mass grid");
  std::vector<double> grid = rho_grid;
  std::sort(grid.begin(), grid.end(), std::greater<double>());

  Branch branch{k, pq, pq.p_above_q() ? BranchRegime::Direct : BranchRegime::WTransformed,
                {}, -1};
  SolverConfig point_cfg = cfg;
  std::optional<NodalFunction> warm;
  for (size_t i = 0; i < grid.size(); ++i) {
    const double rho = grid[i];
    const NodalFunction* start = warm ? &*warm : nullptr;
    SolveResult res = branch.regime == BranchRegime::Direct
                          ? solve_fixed_rho(k, rho, pq, mesh, point_cfg, start)
                          : solve_w_equation(k, rho, pq, mesh, point_cfg, start);
    const double cert_scale = res.ok()
        ? cfg.residual_tol * std::max(1.0, std::abs(res.pair->lambda) * rho)
        : 0.0;
    if (!res.ok() || res.pair->residual_norm > 10.0 * cert_scale) {
      branch.failed_index = static_cast<int>(i);
      break;
    }
    const EigenPair& ep = *res.pair;
    BranchPoint pt;
    pt.rho = rho;
    pt.lambda = ep.lambda;
    pt.level = ep.level;
    pt.sign_changes = ep.sign_changes;
    pt.iterations = ep.iterations;
    if (branch.regime == BranchRegime::Direct) {
      pt.norm_1p = sobolev_norm(ep.u, pq.p);
      pt.norm_1q = sobolev_norm(ep.u, pq.q);
    } else {
      // Back-transform u = w / ||w||_{1,q}^2.
      const double wq = sobolev_norm(ep.u, pq.q);
      pt.norm_w_1q = wq;
      pt.norm_1q = 1.0 / wq;
      pt.norm_1p = sobolev_norm(ep.u, pq.p) / (wq * wq);
    }
    branch.points.push_back(pt);
    warm = ep.u;
    // Break points settle after the first (largest-mass) point; re-optimizing
    // them on warm starts risks hopping between equivalent patterns.
    point_cfg.optimize_breakpoints = false;
  }
  return branch;
}

LimitEstimate estimate_limit(const Branch& branch) {
  const std::vector<const BranchPoint*> win = fit_window(branch, 4);
  const size_t n = win.size();
  std::vector<double> rho(n), lam(n);
  for (size_t i = 0; i < n; ++i) {
    rho[i] = win[i]->rho;
    lam[i] = win[i]->lambda;
  }

  const double beta = best_beta(rho, lam, default_beta_init(branch));
  const PowerFit fit = fit_at_beta(rho, lam, beta);

  const auto [lam_min, lam_max] = std::minmax_element(lam.begin(), lam.end());
  const double spread = *lam_max - *lam_min;
  const double rms = std::sqrt(fit.ssr / static_cast<double>(n));
  if (rms > 0.05 * spread + 1e-9 * std::max(1.0, std::abs(fit.lambda_star)))
    throw PoorFit("estimate_limit: power-law model does not fit the branch tail");

  // Bootstrap the window to put an error bar on the extrapolated limit.
  std::mt19937 rng(12345);
  std::uniform_int_distribution<size_t> pick(0, n - 1);
  std::vector<double> limits;
  for (int b = 0; b < 200; ++b) {
    std::vector<double> rr, ll;
    rr.reserve(n);
    ll.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      const size_t j = pick(rng);
      rr.push_back(rho[j]);
      ll.push_back(lam[j]);
    }
    std::vector<double> distinct = rr;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3) continue;
    limits.push_back(fit_at_beta(rr, ll, best_beta(rr, ll, beta)).lambda_star);
  }
  double unc = 0.0;
  if (limits.size() >= 2) {
    double mean = 0.0;
    for (double v : limits) mean += v;
    mean /= static_cast<double>(limits.size());
    for (double v : limits) unc += (v - mean) * (v - mean);
    unc = std::sqrt(unc / static_cast<double>(limits.size() - 1));
  }
  return {fit.lambda_star, unc, beta};
}

double fit_scaling_exponent(const Branch& branch, double lambda_ref) {
  const std::vector<const BranchPoint*> win = fit_window(branch, 2);
  std::vector<double> lx, ly;
  for (const BranchPoint* pt : win) {
    const double gap = branch.regime == BranchRegime::Direct
                           ? branch.pq.q * pt->level - lambda_ref * pt->rho
                           : pt->level - lambda_ref * pt->rho;
    if (!(gap > 1e-14 * std::max(1.0, lambda_ref * pt->rho)))
      throw NonPositiveGap("fit_scaling_exponent: level gap at or below floating floor");
    lx.push_back(std::log(pt->rho));
    ly.push_back(std::log(gap));
  }
  const size_t n = lx.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidLength("fit_scaling_exponent: degenerate mass grid");
  return sxy / sxx;
}

MultiplicityResult multiplicity_solve(double lambda, const PQParams& pq,
                                      const MeshPtr& mesh, const SolverConfig& cfg) {
  if (!(lambda > 0.0)) throw InvalidLength("multiplicity_solve: lambda must be > 0");
  MultiplicityResult out;
  const double L = mesh->length();
  int k = 0;
  while (qlap_eigenvalue(k + 1, pq.q, L) < lambda) ++k;
  if (k == 0) return out;  // below lambda_1^D(q): no nontrivial solutions

  for (int mode = 1; mode <= k; ++mode) {
    // Scan a geometric mass grid for a bracket of lambda_mode(rho) = lambda;
    // the branch need not be monotone, so we look for any sign change.
    const double scan_lo = 1e-7, scan_hi = 1e4, factor = std::pow(10.0, 0.25);
    std::optional<NodalFunction> warm;
    double rho_lo = 0.0, f_lo = 0.0;
    double rho_hi = 0.0;
    bool bracketed = false;
    std::string failure;
    for (double rho = scan_lo; rho <= scan_hi * (1.0 + 1e-12); rho *= factor) {
      SolveResult res =
          solve_fixed_rho(mode, rho, pq, mesh, cfg, warm ? &*warm : nullptr);
      if (!res.ok()) {
        failure = "mode " + std::to_string(mode) + ": solver returned " +
                  to_string(res.status) + " at rho=" + std::to_string(rho);
        break;
      }
      warm = res.pair->u;
      const double f = res.pair->lambda - lambda;
      if (rho_lo > 0.0 && f_lo * f <= 0.0) {
        rho_hi = rho;
        bracketed = true;
        break;
      }
      rho_lo = rho;
      f_lo = f;
    }
    if (!bracketed) {
      out.mode_errors.push_back(failure.empty()
                                    ? "mode " + std::to_string(mode) +
                                          ": BracketNotFound on the scanned mass range"
                                    : failure);
      continue;
    }

    // Bisect in log rho until the eigenvalue matches.
    std::optional<EigenPair> found;
    for (int it = 0; it < 60; ++it) {
      const double rho_mid = std::sqrt(rho_lo * rho_hi);
      SolveResult res =
          solve_fixed_rho(mode, rho_mid, pq, mesh, cfg, warm ? &*warm : nullptr);
      if (std::getenv("PQLAP_DEBUG"))
        std::fprintf(stderr, "[mult] it=%d rho=[%.6e,%.6e] mid ok=%d lambda=%.12g\n", it,
                     rho_lo, rho_hi, res.ok() ? 1 : 0,
                     res.ok() ? res.pair->lambda : 0.0);
      if (!res.ok()) break;
      warm = res.pair->u;
      const double f = res.pair->lambda - lambda;
      if (std::abs(f) < 1e-6 * lambda) {
        found = *res.pair;
        break;
      }
      if (f_lo * f <= 0.0) {
        rho_hi = rho_mid;
      } else {
        rho_lo = rho_mid;
        f_lo = f;
      }
    }
    if (found) {
      out.pairs.push_back(std::move(*found));
    } else {
      out.mode_errors.push_back("mode " + std::to_string(mode) +
                                ": bisection did not reach |lambda - target| < 1e-6");
    }
  }
  return out;
}

}  // namespace pqlap
