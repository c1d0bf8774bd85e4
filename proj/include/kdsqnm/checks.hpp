#pragma once

#include <string>
#include <vector>

namespace kdsqnm::checks {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

CheckResult angular_exactness();      // spherical eigenvalues at a = 0
CheckResult radial_closed_forms();    // leading radial term and first-order square
CheckResult schwarzschild_lattice();  // nonrotating mode lattice vs closed form
CheckResult zeeman_splitting();       // d Re(omega) / dk at k = +-l
CheckResult homogeneity();            // term scaling under (sigma, k) -> (2 sigma, 2k)
CheckResult order_slopes();           // successive-order differences decay in l
CheckResult engine_residuals();       // transport / null / gauge residuals, budget stability
CheckResult branch_fan();             // 2l+1 branch fan over the rotation sweep

/// The full acceptance battery, in criterion order.
std::vector<CheckResult> run_all();

/// Fast subset used by `validate quick`.
std::vector<CheckResult> run_quick();

}  // namespace kdsqnm::checks
