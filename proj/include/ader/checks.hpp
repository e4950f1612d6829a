#ifndef ADER_CHECKS_HPP
#define ADER_CHECKS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ader/config.hpp"

namespace ader {

// Runtime self-test suites behind the `check` subcommand: operator
// exactness, layout round trips, GEMM against a triple-loop oracle, padding
// neutrality, user-function properties, four-way variant equivalence, the
// dense volume-operator Taylor comparison, and the point-source path.
struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CheckOptions {
  std::vector<int> orders{3, 4, 5, 6, 7, 8};
  std::string pde = "elastic";
  int quantities = 9;
  int vec_width = 8;
  std::uint64_t seed = 0;
  // flips one bit of the derivative operator so the exactness suite must
  // report a failure; exercised by the fault-injection test
  bool inject_d_fault = false;
};

std::vector<CheckResult> run_checks(const CheckOptions& opt);

}  // namespace ader

#endif
