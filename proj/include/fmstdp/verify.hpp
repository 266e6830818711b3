#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fmstdp {

struct CheckResult {
  std::string family;     // e.g. "trace-recursion"
  std::string name;
  double error = 0.0;     // measured error
  double tolerance = 0.0;
  bool relative = true;
  bool passed = false;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
  std::vector<std::string> failures() const;
};

struct VerifyOptions {
  std::uint64_t seed = 7;
  std::size_t length = 1000;  // steps per random spike record
  // Eligibility time constant used in the closed-form checks; the
  // equivalence only holds when it equals the rate time constant.
  double tau_z_override = 0.0;
};

VerifyReport run_verification(const VerifyOptions& opt = {});
std::string format_report(const VerifyReport& r);

}  // namespace fmstdp
