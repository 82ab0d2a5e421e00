#include "planimm/field_ops.hpp"

#include <cmath>
#include <limits>

#include "planimm/errors.hpp"
#include "planimm/ga2.hpp"

namespace planimm {

Mat2 differential(const MapField& f, int i, int j) {
  const Grid2& g = f.grid;
  auto c1 = [&f](int a, int b) { return f.at(a, b).x; };
  auto c2 = [&f](int a, int b) { return f.at(a, b).y; };
  return {stencil_dx(g, c1, i, j), stencil_dy(g, c1, i, j),
          stencil_dx(g, c2, i, j), stencil_dy(g, c2, i, j)};
}

ScalarField jacobian_det(const MapField& f) {
  ScalarField out(f.grid);
  for (int j = 0; j < f.grid.ny; ++j)
    for (int i = 0; i < f.grid.nx; ++i) out.at(i, j) = differential(f, i, j).det();
  return out;
}

ScalarField curl(const MapField& f) {
  const Grid2& g = f.grid;
  ScalarField out(f.grid);
  auto c1 = [&f](int a, int b) { return f.at(a, b).x; };
  auto c2 = [&f](int a, int b) { return f.at(a, b).y; };
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out.at(i, j) = stencil_dx(g, c2, i, j) - stencil_dy(g, c1, i, j);
  return out;
}

MapField dual_map(const MapField& f) {
  MapField out(f.grid);
  for (size_t n = 0; n < f.values.size(); ++n) out.values[n] = j_rotate(f.values[n]);
  return out;
}

double min_abs_interior_jacobian(const MapField& f) {
  double m = std::numeric_limits<double>::infinity();
  for (int j = 1; j < f.grid.ny - 1; ++j)
    for (int i = 1; i < f.grid.nx - 1; ++i)
      m = std::min(m, std::abs(differential(f, i, j).det()));
  return m;
}

bool is_immersion(const MapField& f, double threshold) {
  return min_abs_interior_jacobian(f) >= threshold;
}

}  // namespace planimm
