#pragma once

#include "planimm/field.hpp"
#include "planimm/grid.hpp"
#include "planimm/linalg.hpp"

namespace planimm {

// Maps with min |det dphi| below this over interior nodes are refused where an
// immersion is required.
inline constexpr double kImmersionThreshold = 1e-8;

// Second-order first-derivative stencils: central in the interior, 3-point
// one-sided on the first/last row or column. Exact on polynomials of degree
// <= 2, so affine maps differentiate exactly.
template <class F>
double stencil_dx(const Grid2& g, F&& f, int i, int j) {
  if (i == 0) return (-3.0 * f(0, j) + 4.0 * f(1, j) - f(2, j)) / (2.0 * g.hx);
  if (i == g.nx - 1)
    return (3.0 * f(i, j) - 4.0 * f(i - 1, j) + f(i - 2, j)) / (2.0 * g.hx);
  return (f(i + 1, j) - f(i - 1, j)) / (2.0 * g.hx);
}

template <class F>
double stencil_dy(const Grid2& g, F&& f, int i, int j) {
  if (j == 0) return (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) / (2.0 * g.hy);
  if (j == g.ny - 1)
    return (3.0 * f(i, j) - 4.0 * f(i, j - 1) + f(i, j - 2)) / (2.0 * g.hy);
  return (f(i, j + 1) - f(i, j - 1)) / (2.0 * g.hy);
}

// d(phi) at a node; column j is the derivative along coordinate j.
Mat2 differential(const MapField& f, int i, int j);

// det d(phi) per node
ScalarField jacobian_det(const MapField& f);

// planar curl d1(phi^2) - d2(phi^1) per node; identical arithmetic to
// div(J phi) and tr d(J phi) on the same stencil
ScalarField curl(const MapField& f);

// node-wise J rotation of the values
MapField dual_map(const MapField& f);

double min_abs_interior_jacobian(const MapField& f);
bool is_immersion(const MapField& f, double threshold = kImmersionThreshold);

}  // namespace planimm
