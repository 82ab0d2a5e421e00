#include "planimm/compat.hpp"

#include <cmath>

#include "planimm/errors.hpp"
#include "planimm/ga2.hpp"

namespace planimm {

CompatReport compatibility_defect(const ScalarField& crl, const BoundaryData& b) {
  require_same_grid(crl.grid, b.grid(), "compatibility_defect");
  const Grid2& g = crl.grid;

  // interior: 2D trapezoidal rule
  double interior = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    const double wj = (j == 0 || j == g.ny - 1) ? 0.5 : 1.0;
    for (int i = 0; i < g.nx; ++i) {
      const double wi = (i == 0 || i == g.nx - 1) ? 0.5 : 1.0;
      interior += wi * wj * crl.at(i, j);
    }
  }
  interior *= g.hx * g.hy;

  // boundary: trapezoidal circulation of phi against T = J n per edge
  // bottom n=(0,-1), right n=(1,0), top n=(0,1), left n=(-1,0)
  auto edge_integral = [&](auto value, int count, double h, Vec2 tangent) {
    double s = 0.0;
    for (int k = 0; k < count; ++k) {
      const double w = (k == 0 || k == count - 1) ? 0.5 : 1.0;
      s += w * dot(value(k), tangent);
    }
    return s * h;
  };

  double circulation = 0.0;
  circulation += edge_integral([&](int i) { return b.node_value(i, 0); }, g.nx, g.hx,
                               j_rotate(Vec2{0.0, -1.0}));
  circulation += edge_integral([&](int j) { return b.node_value(g.nx - 1, j); }, g.ny,
                               g.hy, j_rotate(Vec2{1.0, 0.0}));
  circulation += edge_integral([&](int i) { return b.node_value(i, g.ny - 1); }, g.nx,
                               g.hx, j_rotate(Vec2{0.0, 1.0}));
  circulation += edge_integral([&](int j) { return b.node_value(0, j); }, g.ny, g.hy,
                               j_rotate(Vec2{-1.0, 0.0}));

  CompatReport report;
  report.interior_integral = interior;
  report.boundary_integral = -circulation;
  report.defect = report.interior_integral - report.boundary_integral;
  report.relative_defect =
      std::abs(report.defect) /
      std::max({std::abs(report.interior_integral), std::abs(report.boundary_integral),
                1.0});
  return report;
}

}  // namespace planimm
