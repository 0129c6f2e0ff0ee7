// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
// The same criteria back the CLI `verify` command.

#include <cstdio>

#include "pqlap/verify.hpp"

int main() {
  pqlap::VerifyOptions opt;  // defaults: (0,1), 512 elements, seed 42
  const std::vector<pqlap::CriterionResult> results = pqlap::run_acceptance(opt);
  bool all_pass = true;
  for (const pqlap::CriterionResult& r : results) {
    std::printf("%s criterion-%d %s: %s\n", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && r.passed;
  }
  return all_pass ? 0 : 1;
}
