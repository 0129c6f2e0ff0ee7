#pragma once

#include <string>
#include <vector>

#include "pqlap/io.hpp"

namespace pqlap {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Options for the verification suite. The mesh resolution and solver
/// tolerances come from the config (the exponent pairs of the criteria
/// themselves are fixed); `only` filters criteria by substring match on the
/// name, empty string runs everything.
struct VerifyOptions {
  RunConfig config;
  std::string only;
};

/// Run the acceptance criteria and report one result per criterion. Criteria
/// never throw: failures (including unexpected exceptions) are reported in
/// the result.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& opt);

}  // namespace pqlap
