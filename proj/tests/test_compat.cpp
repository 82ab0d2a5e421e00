#include <doctest.h>

#include <cmath>

#include "planimm/compat.hpp"
#include "planimm/errors.hpp"
#include "planimm/field_ops.hpp"
#include "planimm/maps.hpp"

using namespace planimm;

TEST_CASE("identity map is compatible with zero curl") {
  const Grid2 grid = Grid2::unit_square(33);
  const MapField f = sample_map(identity_map(), grid);
  const CompatReport r =
      compatibility_defect(curl(f), BoundaryData::from_map_field(f));
  CHECK(std::abs(r.interior_integral) < 1e-14);
  CHECK(std::abs(r.boundary_integral) < 1e-14);
  CHECK(std::abs(r.defect) < 1e-14);
  CHECK(r.relative_defect < 1e-14);
}

TEST_CASE("rotation maps are compatible to quadrature exactness") {
  const Grid2 grid = Grid2::unit_square(33);
  for (double theta : {0.3, 1.0}) {
    const MapField f = sample_map(rotation_map(theta), grid);
    const CompatReport r =
        compatibility_defect(curl(f), BoundaryData::from_map_field(f));
    // both sides equal 2 sin(theta) x area; affine data makes the trapezoid exact
    CHECK(r.interior_integral == doctest::Approx(2.0 * std::sin(theta)).epsilon(1e-12));
    CHECK(r.boundary_integral == doctest::Approx(2.0 * std::sin(theta)).epsilon(1e-12));
    CHECK(std::abs(r.defect) < 1e-10);
    // sign convention guard: the two integrals agree in sign, not just magnitude
    CHECK(r.interior_integral > 0.0);
    CHECK(r.boundary_integral > 0.0);
  }
}

TEST_CASE("deliberately inconsistent prescription has unit defect") {
  const Grid2 grid = Grid2::unit_square(33);
  const ScalarField one(grid, 1.0);
  const BoundaryData b =
      BoundaryData::from_map_field(sample_map(identity_map(), grid));
  const CompatReport r = compatibility_defect(one, b);
  CHECK(r.interior_integral == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(r.boundary_integral) < 1e-14);
  CHECK(r.defect == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.relative_defect == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("defect vanishes at order two under refinement") {
  // rectangle chosen so the curl integral and circulation are genuinely curved
  double prev = 0.0;
  for (int n : {17, 33, 65}) {
    const Grid2 grid(n, n, 0.0, 0.1, 1.0, 0.6);
    const MapField f = sample_map(sinusoidal_map(0.1), grid);
    const CompatReport r =
        compatibility_defect(curl(f), BoundaryData::from_map_field(f));
    if (prev > 0.0) CHECK(std::abs(r.defect) <= prev / 3.0);
    prev = std::abs(r.defect);
  }
  CHECK(prev < 1e-5);
}

TEST_CASE("grid mismatch is rejected") {
  const ScalarField crl(Grid2::unit_square(17));
  const BoundaryData b =
      BoundaryData::from_map_field(sample_map(identity_map(), Grid2::unit_square(33)));
  CHECK_THROWS_AS(compatibility_defect(crl, b), GridMismatchError);
}
