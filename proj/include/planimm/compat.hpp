#pragma once

#include "planimm/field.hpp"
#include "planimm/geodesic.hpp"

namespace planimm {

// Necessary-condition check linking curl and boundary values: the area
// integral of the curl must equal minus the boundary circulation of phi
// against the clockwise tangent T = J n (n = outward normal), which by
// Green's theorem is the counterclockwise circulation of phi.
struct CompatReport {
  double interior_integral = 0.0;  // trapezoidal integral of curl over the grid
  double boundary_integral = 0.0;  // -circulation of phi.T over the boundary nodes
  double defect = 0.0;             // interior_integral - boundary_integral
  double relative_defect = 0.0;    // |defect| / max(|interior|, |boundary|, 1)
};

CompatReport compatibility_defect(const ScalarField& crl, const BoundaryData& b);

}  // namespace planimm
