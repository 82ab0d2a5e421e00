#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "planimm/field.hpp"
#include "planimm/grid.hpp"
#include "planimm/linalg.hpp"

namespace planimm {

// A test map with closed-form value, Jacobian, and per-component Hessian.
// The analytic derivatives are the oracle every discrete operator is checked
// against; the Hessians additionally give exact metric derivatives for
// Christoffel-symbol tests.
struct AnalyticMap {
  std::string name;
  std::vector<double> params;
  std::function<Vec2(Vec2)> value;
  std::function<Mat2(Vec2)> jacobian;
  // hessian[c] holds the second partials of component c: [[dxx, dxy], [dxy, dyy]]
  std::function<std::array<Mat2, 2>(Vec2)> hessian;

  double analytic_jacobian_det(Vec2 p) const { return jacobian(p).det(); }
  double analytic_curl(Vec2 p) const {
    Mat2 d = jacobian(p);
    return d.c - d.b;  // d(phi^2)/dx - d(phi^1)/dy
  }
};

AnalyticMap identity_map();
AnalyticMap rotation_map(double theta);
AnalyticMap scale_map(double ax, double ay);
AnalyticMap shear_map(double k);
// identity plus amplitude*sin(pi x)sin(pi y) in the first component; the
// perturbation vanishes on the boundary of the unit square
AnalyticMap sinusoidal_map(double amplitude);

// Factory for CLI/config use. Unknown names raise ConfigError listing the
// known maps; params fall back to per-map defaults when omitted.
AnalyticMap make_map(const std::string& name, const std::vector<double>& params = {});
std::vector<std::string> known_map_names();

// Default-parameter instances used by the whole-registry sweeps.
std::vector<AnalyticMap> builtin_maps();

MapField sample_map(const AnalyticMap& map, const Grid2& grid);

}  // namespace planimm
