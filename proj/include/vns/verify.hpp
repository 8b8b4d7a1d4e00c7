#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vns {

struct CheckResult {
  std::string group;  // identity, kernel, coercivity, norm
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerifyOptions {
  int identity_draws = 100;
  int identity_nx = 4;
  int kernel_draws_3d = 1000;
  int kernel_draws_2d = 200;
  int coercivity_draws = 200;
  int coercivity_nx = 4;
  int norm_pairs = 100;
  std::uint64_t seed = 20240611;
};

std::vector<CheckResult> verify_identities(const VerifyOptions& o);
std::vector<CheckResult> verify_kernel_fields(const VerifyOptions& o);
std::vector<CheckResult> verify_coercivity(const VerifyOptions& o);
std::vector<CheckResult> verify_norm_axioms(const VerifyOptions& o);

/// All of the above, in that order.
std::vector<CheckResult> run_verification_suite(const VerifyOptions& o = {});

}  // namespace vns
