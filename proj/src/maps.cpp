#include "planimm/maps.hpp"

#include <cmath>

#include "planimm/errors.hpp"

namespace planimm {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::array<Mat2, 2> zero_hessian(Vec2) { return {Mat2{}, Mat2{}}; }

AnalyticMap affine(std::string name, std::vector<double> params, Mat2 m) {
  AnalyticMap map;
  map.name = std::move(name);
  map.params = std::move(params);
  map.value = [m](Vec2 p) { return m * p; };
  map.jacobian = [m](Vec2) { return m; };
  map.hessian = zero_hessian;
  return map;
}

}  // namespace

AnalyticMap identity_map() { return affine("identity", {}, Mat2::identity()); }

AnalyticMap rotation_map(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return affine("rotation", {theta}, Mat2{c, -s, s, c});
}

AnalyticMap scale_map(double ax, double ay) {
  return affine("scale", {ax, ay}, Mat2{ax, 0.0, 0.0, ay});
}

AnalyticMap shear_map(double k) { return affine("shear", {k}, Mat2{1.0, k, 0.0, 1.0}); }

AnalyticMap sinusoidal_map(double amplitude) {
  AnalyticMap map;
  map.name = "sinusoidal";
  map.params = {amplitude};
  const double a = amplitude;
  map.value = [a](Vec2 p) {
    return Vec2{p.x + a * std::sin(kPi * p.x) * std::sin(kPi * p.y), p.y};
  };
  map.jacobian = [a](Vec2 p) {
    const double ux = a * kPi * std::cos(kPi * p.x) * std::sin(kPi * p.y);
    const double uy = a * kPi * std::sin(kPi * p.x) * std::cos(kPi * p.y);
    return Mat2{1.0 + ux, uy, 0.0, 1.0};
  };
  map.hessian = [a](Vec2 p) {
    const double pi2 = kPi * kPi;
    const double uxx = -a * pi2 * std::sin(kPi * p.x) * std::sin(kPi * p.y);
    const double uxy = a * pi2 * std::cos(kPi * p.x) * std::cos(kPi * p.y);
    const double uyy = uxx;
    return std::array<Mat2, 2>{Mat2{uxx, uxy, uxy, uyy}, Mat2{}};
  };
  return map;
}

AnalyticMap make_map(const std::string& name, const std::vector<double>& params) {
  auto param = [&params](size_t k, double fallback) {
    return k < params.size() ? params[k] : fallback;
  };
  if (name == "identity") return identity_map();
  if (name == "rotation") return rotation_map(param(0, 0.5));
  if (name == "scale") return scale_map(param(0, 2.0), param(1, 3.0));
  if (name == "shear") return shear_map(param(0, 0.5));
  if (name == "sinusoidal") return sinusoidal_map(param(0, 0.1));

  std::string known;
  for (const auto& n : known_map_names()) known += " " + n;
  throw ConfigError("unknown map '" + name + "'; known maps:" + known);
}

std::vector<std::string> known_map_names() {
  return {"identity", "rotation", "scale", "shear", "sinusoidal"};
}

std::vector<AnalyticMap> builtin_maps() {
  return {identity_map(), rotation_map(0.5), scale_map(2.0, 3.0), shear_map(0.5),
          sinusoidal_map(0.1)};
}

MapField sample_map(const AnalyticMap& map, const Grid2& grid) {
  MapField f(grid);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) f.at(i, j) = map.value(grid.node(i, j));
  return f;
}

}  // namespace planimm
