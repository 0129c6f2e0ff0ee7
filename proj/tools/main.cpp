// Command-line surface over the library: reference spectra, single solves,
// branch traces, bifurcation diagrams, multiplicity runs, verification.
//
// Exit codes: 0 success, 1 verification failure, 2 usage/config error,
// 3 solver non-convergence.

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "pqlap/io.hpp"
#include "pqlap/svg.hpp"
#include "pqlap/verify.hpp"

namespace {

using namespace pqlap;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;

std::string out_dir(const RunConfig& cfg) {
  if (const char* env = std::getenv("PQLAP_OUT_DIR")) return env;
  return cfg.output_dir;
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

RunConfig load_config(const std::string& path) {
  return path.empty() ? RunConfig{} : RunConfig::from_file(path);
}

CsvDoc spectrum_csv(double q, int k_max, double L) {
  CsvDoc csv("qlap_spectrum_v1", {"q", "k", "lambda"});
  for (int k = 1; k <= k_max; ++k)
    csv.add_row({q, static_cast<double>(k), qlap_eigenvalue(k, q, L)});
  return csv;
}

CsvDoc eigenpair_csv(const EigenPair& ep) {
  CsvDoc csv("eigenpair_v1",
             {"lambda", "rho", "level", "residual", "sign_changes", "iterations"});
  csv.add_row({ep.lambda, ep.rho, ep.level, ep.residual_norm,
               static_cast<double>(ep.sign_changes), static_cast<double>(ep.iterations)});
  return csv;
}

CsvDoc eigenfunction_csv(const NodalFunction& u) {
  CsvDoc csv("eigenfunction_v1", {"x", "u"});
  const Mesh1D& mesh = *u.mesh();
  for (int i = 0; i <= mesh.n_elements(); ++i)
    csv.add_row({mesh.node(i), u.value_at_node(i)});
  return csv;
}

CsvDoc branch_csv(const Branch& br) {
  CsvDoc csv("branch_v1",
             {"rho", "lambda", "level", "norm1p", "norm1q", "sign_changes"});
  for (const BranchPoint& pt : br.points)
    csv.add_row({pt.rho, pt.lambda, pt.level, pt.norm_1p, pt.norm_1q,
                 static_cast<double>(pt.sign_changes)});
  return csv;
}

int cmd_spectrum_ref(double q, int k_max, double L, const std::string& output) {
  const CsvDoc csv = spectrum_csv(q, k_max, L);
  if (output.empty()) std::cout << csv.str();
  else write_text_atomic(output, csv.str());
  return kExitOk;
}

int cmd_solve(const RunConfig& cfg, double lambda, double rho, int mode) {
  const MeshPtr mesh = cfg.make_mesh();
  const PQParams pq = cfg.params();
  const SolverConfig scfg = cfg.solver();
  SolveResult res{SolveStatus::MaxIterations, std::nullopt};
  if (rho > 0.0) {
    res = solve_fixed_rho(mode, rho, pq, mesh, scfg);
  } else if (pq.p_above_q()) {
    res = solve_first_global(lambda, pq, mesh, scfg);
  } else {
    res = solve_first_nehari(lambda, pq, mesh, scfg);
  }
  std::cout << "outcome=" << to_string(res.status) << "\n";
  if (res.status == SolveStatus::ConvergedToZero ||
      res.status == SolveStatus::NotProjectable)
    return kExitOk;  // the definitive "no nontrivial solution" answers
  if (!res.ok()) return kExitNoConvergence;
  const EigenPair& ep = *res.pair;
  std::cout << "lambda=" << format_num(ep.lambda) << " rho=" << format_num(ep.rho)
            << " level=" << format_num(ep.level)
            << " residual=" << format_num(ep.residual_norm)
            << " sign_changes=" << ep.sign_changes << " iterations=" << ep.iterations
            << "\n";
  const std::string dir = out_dir(cfg);
  write_text_atomic(join(dir, "solve_summary.csv"), eigenpair_csv(ep).str());
  write_text_atomic(join(dir, "solve_eigenfunction.csv"), eigenfunction_csv(ep.u).str());
  return kExitOk;
}

int trace_all(const RunConfig& cfg, std::vector<Branch>& branches) {
  const MeshPtr mesh = cfg.make_mesh();
  const PQParams pq = cfg.params();
  const SolverConfig scfg = cfg.solver();
  const std::vector<double> grid = cfg.rho_grid();
  int complete = 0;
  for (int k : cfg.modes) {
    Branch br = trace_branch(k, pq, grid, mesh, scfg);
    if (br.complete()) {
      ++complete;
    } else {
      std::cerr << "warning: mode " << k << " branch incomplete (failed at grid index "
                << br.failed_index << ")\n";
    }
    branches.push_back(std::move(br));
  }
  return complete;
}

int cmd_branch(const RunConfig& cfg) {
  std::vector<Branch> branches;
  const int complete = trace_all(cfg, branches);
  const std::string dir = out_dir(cfg);
  for (const Branch& br : branches)
    write_text_atomic(join(dir, "branch_k" + std::to_string(br.mode) + ".csv"),
                      branch_csv(br).str());
  std::cout << complete << "/" << branches.size() << " branches complete\n";
  return complete > 0 ? kExitOk : kExitNoConvergence;
}

int cmd_diagram(const RunConfig& cfg) {
  std::vector<Branch> branches;
  const int complete = trace_all(cfg, branches);
  const std::string dir = out_dir(cfg);
  int k_max = 0;
  for (const Branch& br : branches) {
    k_max = std::max(k_max, br.mode);
    write_text_atomic(join(dir, "branch_k" + std::to_string(br.mode) + ".csv"),
                      branch_csv(br).str());
  }
  std::vector<double> asymptotes;
  for (int k = 1; k <= k_max; ++k)
    asymptotes.push_back(qlap_eigenvalue(k, cfg.q, cfg.b - cfg.a));
  const std::string title =
      "Bifurcation diagram, p=" + format_num(cfg.p) + ", q=" + format_num(cfg.q);
  write_text_atomic(join(dir, "diagram.svg"),
                    render_diagram_svg(branches, asymptotes, title));
  std::cout << complete << "/" << branches.size() << " branches complete\n";
  return complete > 0 ? kExitOk : kExitNoConvergence;
}

int cmd_multiplicity(const RunConfig& cfg, double lambda) {
  const MultiplicityResult mr =
      multiplicity_solve(lambda, cfg.params(), cfg.make_mesh(), cfg.solver());
  CsvDoc csv("multiplicity_v1",
             {"mode", "rho", "lambda", "level", "residual", "sign_changes"});
  for (size_t i = 0; i < mr.pairs.size(); ++i) {
    const EigenPair& ep = mr.pairs[i];
    csv.add_row({static_cast<double>(ep.mode), ep.rho, ep.lambda, ep.level,
                 ep.residual_norm, static_cast<double>(ep.sign_changes)});
  }
  write_text_atomic(join(out_dir(cfg), "multiplicity.csv"), csv.str());
  std::cout << "solutions=" << mr.pairs.size() << "\n";
  for (const std::string& err : mr.mode_errors) std::cerr << "warning: " << err << "\n";
  return mr.mode_errors.empty() ? kExitOk : kExitNoConvergence;
}

int cmd_verify(const RunConfig& cfg, const std::string& only) {
  const std::vector<CriterionResult> results = run_acceptance({cfg, only});
  bool all_pass = true;
  for (const CriterionResult& r : results) {
    std::cout << (r.passed ? "PASS" : "FAIL") << " criterion-" << r.id << " " << r.name
              << ": " << r.detail << "\n";
    all_pass = all_pass && r.passed;
  }
  if (results.empty()) {
    std::cerr << "no criterion matches filter '" << only << "'\n";
    return kExitUsage;
  }
  return all_pass ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet (p,q)-Laplacian eigenvalue toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  unsigned seed_override = 0;
  bool seed_set = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value run configuration file");
    sub->add_option("--seed", seed_override, "override the config seed")
        ->each([&](const std::string&) { seed_set = true; });
  };

  double q = 2.0, L = 1.0;
  int k_max = 1;
  std::string spectrum_out;
  CLI::App* spectrum = app.add_subcommand("spectrum-ref", "reference q-Laplacian spectrum");
  spectrum->add_option("--q", q, "exponent q > 1")->required();
  spectrum->add_option("--k-max", k_max, "largest mode")->required();
  spectrum->add_option("--L", L, "interval length");
  spectrum->add_option("--output", spectrum_out, "write CSV here instead of stdout");

  double lambda = 0.0, rho = 0.0;
  int mode = 1;
  CLI::App* solve = app.add_subcommand("solve", "single eigenpair solve");
  add_common(solve);
  solve->add_option("--lambda", lambda, "spectral parameter (first-eigenpair solve)");
  solve->add_option("--rho", rho, "mass constraint (fixed-mass solve)");
  solve->add_option("--mode", mode, "mode index for --rho solves");

  CLI::App* branch = app.add_subcommand("branch", "trace branches over the mass grid");
  add_common(branch);

  CLI::App* diagram = app.add_subcommand("diagram", "branch CSVs plus bifurcation SVG");
  add_common(diagram);

  double mult_lambda = 0.0;
  CLI::App* multiplicity = app.add_subcommand("multiplicity", "all modes at one lambda");
  add_common(multiplicity);
  multiplicity->add_option("--lambda", mult_lambda, "spectral parameter")->required();

  std::string only;
  CLI::App* verify = app.add_subcommand("verify", "acceptance criteria");
  add_common(verify);
  verify->add_option("--only", only, "substring filter on criterion names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (spectrum->parsed()) {
      if (!(q > 1.0)) {
        std::cerr << "error: invalid exponent q = " << q << " (need q > 1)\n";
        return kExitUsage;
      }
      if (k_max < 1 || !(L > 0.0)) {
        std::cerr << "error: need k-max >= 1 and L > 0\n";
        return kExitUsage;
      }
      return cmd_spectrum_ref(q, k_max, L, spectrum_out);
    }

    RunConfig cfg = load_config(config_path);
    if (seed_set) cfg.seed = seed_override;

    if (solve->parsed()) {
      if (lambda <= 0.0 && rho <= 0.0) {
        std::cerr << "error: solve needs --lambda or --rho\n";
        return kExitUsage;
      }
      return cmd_solve(cfg, lambda, rho, mode);
    }
    if (branch->parsed()) return cmd_branch(cfg);
    if (diagram->parsed()) return cmd_diagram(cfg);
    if (multiplicity->parsed()) return cmd_multiplicity(cfg, mult_lambda);
    if (verify->parsed()) return cmd_verify(cfg, only);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  }
  return kExitUsage;
}
