#pragma once

#include "barrierinv/errors.hpp"

namespace barrierinv {

// hbar and the particle mass are carried explicitly through every formula;
// the defaults give the clean unit system used by the tests.
struct physical_constants {
  double hbar = 1.0;
  double mass = 1.0;

  void validate() const {
    if (!(hbar > 0.0) || !(mass > 0.0))
      raise(errc::domain_error, "physical constants must be strictly positive");
  }
};

}  // namespace barrierinv
