#include <doctest.h>

#include <cmath>

#include "planimm/errors.hpp"
#include "planimm/field_ops.hpp"
#include "planimm/geodesic.hpp"
#include "planimm/maps.hpp"
#include "planimm/metric.hpp"

using namespace planimm;

namespace {

// Closed-form Christoffel symbols of the metric induced by an analytic map,
// from its exact Jacobian and Hessians. Independent of the stencil path.
void analytic_christoffel(const AnalyticMap& map, Vec2 p, double out[2][2][2]) {
  const Mat2 jac = map.jacobian(p);
  const auto hess = map.hessian(p);

  // entry (c, a) of the Jacobian: d_a phi^c
  auto A = [&jac](int c, int a) {
    return c == 0 ? (a == 0 ? jac.a : jac.b) : (a == 0 ? jac.c : jac.d);
  };
  // d_l d_a phi^c
  auto dA = [&hess](int c, int a, int l) { return hess[c](a, l); };

  double g[2][2], dg[2][2][2];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      g[a][b] = 0.0;
      for (int c = 0; c < 2; ++c) g[a][b] += A(c, a) * A(c, b);
      for (int l = 0; l < 2; ++l) {
        dg[l][a][b] = 0.0;
        for (int c = 0; c < 2; ++c)
          dg[l][a][b] += dA(c, a, l) * A(c, b) + A(c, a) * dA(c, b, l);
      }
    }

  const double det = g[0][0] * g[1][1] - g[0][1] * g[0][1];
  const double ginv[2][2] = {{g[1][1] / det, -g[0][1] / det},
                             {-g[0][1] / det, g[0][0] / det}};
  for (int k = 0; k < 2; ++k)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        double s = 0.0;
        for (int l = 0; l < 2; ++l)
          s += ginv[k][l] * (dg[a][b][l] + dg[b][a][l] - dg[l][a][b]);
        out[k][a][b] = 0.5 * s;
      }
}

double christoffel_err(const AnalyticMap& map, const Grid2& grid, int i, int j) {
  const MetricField g = induced_metric(sample_map(map, grid));
  const Christoffel c = christoffel(g, i, j);
  double exact[2][2][2];
  analytic_christoffel(map, grid.node(i, j), exact);
  double err = 0.0;
  for (int k = 0; k < 2; ++k)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        err = std::max(err, std::abs(c.gamma[k][a][b] - exact[k][a][b]));
  return err;
}

MetricField euclidean_metric(const Grid2& grid) {
  MetricField g(grid);
  for (auto& m : g.values) m = {1.0, 0.0, 1.0};
  return g;
}

}  // namespace

TEST_CASE("christoffel symbols vanish for constant metrics") {
  const Grid2 grid = Grid2::unit_square(17);

  const MetricField flat = euclidean_metric(grid);
  MetricField aniso(grid);
  for (auto& m : aniso.values) m = {4.0, 0.0, 9.0};

  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      for (int k = 0; k < 2; ++k)
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            CHECK(christoffel(flat, i, j).gamma[k][a][b] == 0.0);
            CHECK(christoffel(aniso, i, j).gamma[k][a][b] == 0.0);
          }
}

TEST_CASE("christoffel symbols match the symbolic oracle at second order") {
  const AnalyticMap map = sinusoidal_map(0.1);
  // probe away from symmetry axes so all symbols are nonzero
  const double e33 = christoffel_err(map, Grid2::unit_square(33), 11, 7);
  const double e65 = christoffel_err(map, Grid2::unit_square(65), 22, 14);
  CHECK(e65 <= e33 / 3.0);
  CHECK(e65 < 2e-3);
}

TEST_CASE("christoffel rejects a singular metric") {
  const Grid2 grid = Grid2::unit_square(9);
  MetricField g = euclidean_metric(grid);
  g.at(4, 4) = {1.0, 1.0, 1.0};  // det = 0
  CHECK_THROWS_AS(christoffel(g, 4, 4), Error);
}

TEST_CASE("straight shots in the flat metric") {
  const Grid2 grid = Grid2::unit_square(33);
  const MetricSampler sampler(euclidean_metric(grid));

  const GeodesicTrace t1 = shoot(sampler, {0.5, 0.5}, {1.0, 0.0});
  CHECK(norm(t1.exit_point - Vec2{1.0, 0.5}) < 1e-9);
  CHECK(t1.arc_length == doctest::Approx(0.5).epsilon(1e-9));

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const GeodesicTrace t2 = shoot(sampler, {0.5, 0.5}, {inv_sqrt2, inv_sqrt2});
  CHECK(norm(t2.exit_point - Vec2{1.0, 1.0}) < 1e-9);
  CHECK(t2.arc_length == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-9));

  // direction magnitude is irrelevant: unit g-speed normalization
  const GeodesicTrace t3 = shoot(sampler, {0.5, 0.5}, {17.0, 0.0});
  CHECK(norm(t3.exit_point - t1.exit_point) < 1e-12);

  CHECK_THROWS_AS(shoot(sampler, {0.0, 0.5}, {1.0, 0.0}), Error);  // on boundary
  CHECK_THROWS_AS(shoot(sampler, {0.5, 0.5}, {0.0, 0.0}), Error);  // zero direction
}

TEST_CASE("unit g-speed is preserved along traces") {
  const Grid2 grid = Grid2::unit_square(65);
  const MetricField g = induced_metric(sample_map(sinusoidal_map(0.05), grid));
  const MetricSampler sampler(g);

  for (Vec2 start : {Vec2{0.31, 0.47}, Vec2{0.5, 0.5}, Vec2{0.73, 0.21}}) {
    const GeodesicTrace t = shoot(sampler, start, {0.6, 0.8});
    REQUIRE(t.speeds.size() > 10);
    for (double sp : t.speeds) CHECK(std::abs(sp - 1.0) < 1e-6);
  }
}

TEST_CASE("shots retrace when reversed from a mid-trace state") {
  const Grid2 grid = Grid2::unit_square(65);
  const MetricField g = induced_metric(sample_map(sinusoidal_map(0.05), grid));
  const MetricSampler sampler(g);

  const Vec2 x{0.4, 0.55};
  const Vec2 v{0.8, -0.6};
  const GeodesicTrace fwd = shoot(sampler, x, v);
  const GeodesicTrace back_from_x = shoot(sampler, x, -v);

  const size_t mid = fwd.points.size() / 2;
  const GeodesicTrace rev = shoot(sampler, fwd.points[mid], -fwd.velocities[mid]);
  // reversing from the midpoint must come out at the same boundary point as
  // shooting backwards from the start
  CHECK(norm(rev.exit_point - back_from_x.exit_point) < 1e-6);
  CHECK(rev.arc_length ==
        doctest::Approx(back_from_x.arc_length + fwd.step_size * mid).epsilon(1e-5));
}

TEST_CASE("images of geodesics under the generating map are straight") {
  const AnalyticMap map = sinusoidal_map(0.05);
  const Grid2 grid = Grid2::unit_square(129);
  const MetricField g = induced_metric(sample_map(map, grid));
  const MetricSampler sampler(g);

  const GeodesicTrace t = shoot(sampler, {0.37, 0.41}, {0.3, 1.0});
  REQUIRE(t.points.size() > 20);

  const Vec2 first = map.value(t.points.front());
  const Vec2 last = map.value(t.points.back());
  const double chord = norm(last - first);
  REQUIRE(chord > 0.1);
  const Vec2 dir = (1.0 / chord) * (last - first);
  double max_dev = 0.0;
  for (const Vec2& p : t.points) {
    const Vec2 d = map.value(p) - first;
    const double off = std::abs(d.x * dir.y - d.y * dir.x);
    max_dev = std::max(max_dev, off);
  }
  CHECK(max_dev / chord < 1e-4);
}

TEST_CASE("trapped trajectories hit the step ceiling") {
  // stereographic-chart sphere metric: the image of the equator is the unit
  // circle, a closed geodesic that never reaches the rectangle boundary
  const Grid2 grid(33, 33, -3.0, -3.0, 3.0, 3.0);
  MetricField g(grid);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const Vec2 p = grid.node(i, j);
      const double conf = 4.0 / ((1.0 + p.x * p.x + p.y * p.y) *
                                 (1.0 + p.x * p.x + p.y * p.y));
      g.at(i, j) = {conf, 0.0, conf};
    }
  CHECK_THROWS_AS(shoot(g, {1.0, 0.0}, {0.0, 1.0}), TrappedGeodesicError);
}

TEST_CASE("boundary data interpolation") {
  // rectangle placed so the sinusoidal boundary trace is genuinely curved
  const AnalyticMap map = sinusoidal_map(0.1);
  const Grid2 grid(33, 33, 0.0, 0.25, 1.0, 0.75);
  const BoundaryData b = BoundaryData::from_analytic(map, grid);

  CHECK(norm(b.node_value(0, 0) - map.value({0.0, 0.25})) == 0.0);
  CHECK(norm(b.node_value(32, 32) - map.value({1.0, 0.75})) == 0.0);
  CHECK_THROWS_AS(b.node_value(5, 5), Error);

  // off-node boundary points: 4-point Lagrange windows track the closed form
  for (double x : {0.013, 0.29, 0.5071, 0.871, 0.9999}) {
    const Vec2 vb = b.value_at({x, 0.25});
    CHECK(norm(vb - map.value({x, 0.25})) < 1e-5);
    const Vec2 vt = b.value_at({x, 0.75});
    CHECK(norm(vt - map.value({x, 0.75})) < 1e-5);
  }
  for (double y : {0.2711, 0.5, 0.7013}) {
    CHECK(norm(b.value_at({0.0, y}) - map.value({0.0, y})) < 1e-5);
    CHECK(norm(b.value_at({1.0, y}) - map.value({1.0, y})) < 1e-5);
  }

  CHECK_THROWS_AS(b.value_at({0.5, 0.5}), Error);  // not on the boundary
}

TEST_CASE("coons blend reproduces affine maps from their boundary") {
  const Grid2 grid = Grid2::unit_square(17);
  const MapField rot = sample_map(rotation_map(0.5), grid);
  const MapField blend = coons_blend(BoundaryData::from_map_field(rot));
  CHECK(sup_distance(rot, blend) < 1e-13);
}

TEST_CASE("reconstruct_point recovers reference maps") {
  const Grid2 grid = Grid2::unit_square(33);

  // identity data reconstruct themselves
  {
    const MapField f = sample_map(identity_map(), grid);
    const MetricSampler sampler(induced_metric(f));
    const BoundaryData b = BoundaryData::from_map_field(f);
    for (Vec2 v : {Vec2{1.0, 0.0}, Vec2{0.3, -1.0}, Vec2{0.7, 0.7}}) {
      const Vec2 rec = reconstruct_point(sampler, b, {0.3, 0.7}, v);
      CHECK(norm(rec - Vec2{0.3, 0.7}) < 1e-9);
    }
  }

  // flat metric with rotation boundary reproduces the rotation
  {
    const double theta = 0.5;
    const MapField f = sample_map(rotation_map(theta), grid);
    const MetricSampler sampler(induced_metric(f));
    const BoundaryData b = BoundaryData::from_map_field(f);
    const AnalyticMap oracle = rotation_map(theta);
    for (Vec2 x : {Vec2{0.3, 0.7}, Vec2{0.62, 0.18}, Vec2{0.5, 0.5}}) {
      const Vec2 rec = reconstruct_point(sampler, b, x, {1.0, 0.4});
      CHECK(norm(rec - oracle.value(x)) < 1e-6);
    }
  }
}

TEST_CASE("reconstruct_point on the sinusoidal map") {
  const AnalyticMap map = sinusoidal_map(0.05);
  const Grid2 grid = Grid2::unit_square(129);
  const MapField f = sample_map(map, grid);
  const MetricSampler sampler(induced_metric(f));
  const BoundaryData b = BoundaryData::from_map_field(f);

  const Vec2 rec = reconstruct_point(sampler, b, {0.5, 0.5}, {1.0, 0.25});
  CHECK(norm(rec - map.value({0.5, 0.5})) < 1e-3);
}

TEST_CASE("segment-length consistency guards bad boundary data") {
  const Grid2 grid = Grid2::unit_square(33);
  const MetricSampler sampler(euclidean_metric(grid));
  // boundary from a map that stretches lengths: incompatible with a flat metric
  const BoundaryData wrong =
      BoundaryData::from_map_field(sample_map(scale_map(3.0, 3.0), grid));
  CHECK_THROWS_AS(reconstruct_point(sampler, wrong, {0.5, 0.5}, {1.0, 0.0}),
                  SegmentConsistencyError);
}

TEST_CASE("reconstruct_map: direction spread is the uniqueness witness") {
  const Grid2 grid = Grid2::unit_square(33);

  {
    const MapField f = sample_map(identity_map(), grid);
    const ReconstructResult res = reconstruct_map(
        induced_metric(f), BoundaryData::from_map_field(f), {.directions = 4});
    CHECK(res.report.failures.empty());
    CHECK(res.report.max_spread < 1e-8);
    CHECK(sup_distance(res.field, f) < 1e-8);
  }

  {
    const MapField f = sample_map(rotation_map(0.5), grid);
    const ReconstructResult res = reconstruct_map(
        induced_metric(f), BoundaryData::from_map_field(f), {.directions = 4});
    CHECK(res.report.failures.empty());
    CHECK(res.report.max_spread < 1e-6);
    CHECK(sup_distance(res.field, f) < 1e-6);
  }
}

TEST_CASE("reconstruct_map on the sinusoidal map") {
  const AnalyticMap map = sinusoidal_map(0.05);
  const Grid2 grid = Grid2::unit_square(65);
  const MapField f = sample_map(map, grid);
  const ReconstructResult res = reconstruct_map(
      induced_metric(f), BoundaryData::from_map_field(f), {.directions = 8});
  CHECK(res.report.failures.empty());
  CHECK(res.report.nodes_without_value == 0);
  CHECK(res.report.max_spread < 2e-2);
  CHECK(sup_distance(res.field, f) < 2e-2);
  // the O(h^2) arc-length budget shows up in the segment consistency numbers
  CHECK(res.report.max_segment_mismatch < 5e-3);
}
