#pragma once

#include <cmath>

#include "xphase/error.hpp"

namespace xphase {

// Unit system is dimensionless with configurable c; SI values enter only here.
struct Constants {
  double c = 1.0;      // conversion between time and the q0 coordinate, > 0
  double e = 1.0;      // particle charge
  double m = 1.0;      // particle mass, > 0 wherever it enters as inertia
  double alpha = 1.0;  // metric sign, +1 or -1

  void validate() const {
    if (!(std::isfinite(c) && c > 0.0))
      throw Error(ErrorKind::validation, "constants: c must be finite and > 0");
    if (!std::isfinite(e) || !std::isfinite(m))
      throw Error(ErrorKind::validation, "constants: e and m must be finite");
    if (alpha != 1.0 && alpha != -1.0)
      throw Error(ErrorKind::validation, "constants: alpha must be +1 or -1");
  }

  void require_mass() const {
    if (!(std::isfinite(m) && m > 0.0))
      throw Error(ErrorKind::validation, "constants: m must be finite and > 0 here");
  }
};

}  // namespace xphase
