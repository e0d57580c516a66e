#include "tgf/grid.hpp"

#include <iostream>
#include <sstream>

namespace tgf {

FluidParams::FluidParams(double nu_, double alpha1_, double alpha2_, double beta_, ThermoPolicy policy)
    : nu(nu_), alpha1(alpha1_), alpha2(alpha2_), beta(beta_) {
  if (!(nu >= 0.0) || !(alpha1 >= 0.0) || !(beta >= 0.0) || !std::isfinite(alpha2)) {
    throw std::invalid_argument("FluidParams: require nu >= 0, alpha1 >= 0, beta >= 0, finite alpha2");
  }
  if (!thermo_admissible()) {
    std::ostringstream msg;
    msg << "FluidParams: |alpha1 + alpha2| = " << std::abs(alpha1 + alpha2)
        << " exceeds sqrt(24 nu beta) = " << thermo_bound();
    if (policy == ThermoPolicy::enforce) throw std::invalid_argument(msg.str());
    std::clog << "warning: " << msg.str() << '\n';
  }
}

bool FluidParams::thermo_admissible() const {
  const double bound = thermo_bound();
  return std::abs(alpha1 + alpha2) <= bound * (1.0 + 1e-12) + 1e-300;
}

}  // namespace tgf
