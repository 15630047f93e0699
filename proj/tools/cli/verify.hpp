#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace barrierwalk::cli {

struct VerifyConfig {
  std::vector<std::string> only;  // empty: run every check
  double perturb = 0.0;
  double trunc_eps = 1e-14;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;      // largest residual / ratio seen
  std::string tolerance;   // human-readable acceptance rule
  std::string detail;      // failing case, if any
};

// Names accepted by VerifyConfig::only.
const std::vector<std::string>& verify_check_names();

// Runs the identity and bound suite on the builtin laws, printing one line
// per check. Throws InvalidArgument for an unknown check name.
std::vector<CheckResult> run_verification(const VerifyConfig& config, std::ostream& out);

}  // namespace barrierwalk::cli
