#pragma once

#include <string>
#include <vector>

namespace vsi {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;  // expected/actual on failure, summary on success
};

struct VerifyOptions {
  // Nonzero values are added to the first stored reference coefficient
  // before the coupling-table comparison; the check must then fail.
  double lambda_perturbation = 0.0;
  // Broadening handed to the vibrational checks; zero is handed through so
  // the module precondition error surfaces to the caller.
  double sigma = 1.0;
  double trajectory_t_end = 50.0;  // ns
};

// One-shot release gate: golden tables, sum rules and a short trajectory.
// Module precondition violations (std::invalid_argument) propagate.
std::vector<CheckResult> verify_suite(const VerifyOptions& opts = {});

bool all_passed(const std::vector<CheckResult>& checks);

class Catalog;
// Built once per process; shared by the verify checks and run reports.
const Catalog& shared_catalog();

// Individual checks reused by run reports.
CheckResult catalog_check();
CheckResult coupling_table_check(double lambda_perturbation = 0.0);

}  // namespace vsi
