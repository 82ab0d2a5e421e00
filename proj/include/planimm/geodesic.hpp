#pragma once

#include <memory>
#include <string>
#include <vector>

#include "planimm/field.hpp"
#include "planimm/grid.hpp"
#include "planimm/linalg.hpp"
#include "planimm/maps.hpp"
#include "planimm/metric.hpp"

namespace planimm {

// Levi-Civita symbols at a node, Gamma^k_{ij}, symmetric in (i, j).
struct Christoffel {
  double gamma[2][2][2] = {};
};

// Gamma^k_{ij} = 1/2 g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij}) with metric
// derivatives taken by the same second-order stencils the field operators use.
Christoffel christoffel(const MetricField& g, int i, int j);

// Boundary values of a mapping on the four rectangle edges, sampled at the
// grid's boundary nodes, with piecewise-cubic interpolation along each edge
// (4-point Lagrange windows; exact on cubics). Corner values shared by
// adjacent edges must agree to 1e-12.
class BoundaryData {
 public:
  static BoundaryData from_map_field(const MapField& f);
  static BoundaryData from_analytic(const AnalyticMap& map, const Grid2& g);

  const Grid2& grid() const { return grid_; }

  // value at a boundary node (i, j); throws if the node is interior
  Vec2 node_value(int i, int j) const;

  // piecewise-cubic value at an arbitrary boundary point (snapped to the
  // nearest edge; the point must lie within 1e-9 of the boundary)
  Vec2 value_at(Vec2 p) const;

 private:
  explicit BoundaryData(const Grid2& g);

  Grid2 grid_;
  std::vector<Vec2> bottom_, top_;   // nx values each
  std::vector<Vec2> left_, right_;  // ny values each
};

// Transfinite (Coons) blend of the boundary values; reproduces any affine map
// from its boundary trace and is the solver's canonical initial guess.
MapField coons_blend(const BoundaryData& b);

struct GeodesicTrace {
  std::vector<Vec2> points;      // accepted step positions, starting point first
  std::vector<Vec2> velocities;  // matching unit-g-speed velocities
  std::vector<double> speeds;    // measured g-speed at each point (pre-renormalization)
  Vec2 exit_point;               // boundary crossing
  double arc_length = 0.0;       // g-length from start to exit
  double step_size = 0.0;
};

// Node-precomputed Christoffel symbols plus bilinear interpolation of both
// Gamma and g between nodes; build once, shoot many times.
class MetricSampler {
 public:
  explicit MetricSampler(const MetricField& g);

  const Grid2& grid() const { return grid_; }
  Metric2 metric_at(Vec2 p) const;
  Christoffel christoffel_at(Vec2 p) const;

  // acceleration of the geodesic equation: -Gamma^k_{ij} v^i v^j
  Vec2 geodesic_accel(Vec2 p, Vec2 v) const;

 private:
  Grid2 grid_;
  std::vector<Metric2> g_;
  std::vector<Christoffel> gamma_;

  void locate(Vec2 p, int& i, int& j, double& s, double& t) const;
};

// Integrates the geodesic ODE gamma''^k + Gamma^k_{ij} gamma'^i gamma'^j = 0
// from an interior point with RK4 (fixed step min(hx,hy)/4) until the
// trajectory leaves the rectangle; the crossing is located by bisection on the
// final step to 1e-12 in the curve parameter. The velocity is renormalized to
// unit g-speed after every accepted step, so the parameter is arc length.
// Throws TrappedGeodesicError once 64*(nx+ny) steps pass without an exit.
GeodesicTrace shoot(const MetricSampler& sampler, Vec2 x, Vec2 v);
GeodesicTrace shoot(const MetricField& g, Vec2 x, Vec2 v);

struct ReconstructOptions {
  int directions = 4;
  // |phi(p)-phi(q)| and s_p+s_q must agree to this; beyond 10x it is an error
  double consistency_tol = 1e-2;
  int threads = 0;  // 0 = hardware concurrency
};

// Value of the mapping at interior point x from metric + boundary data alone:
// shoot +/-v to boundary exits p, q and place phi(x) on the segment
// [phi(p), phi(q)] at the arc-length ratio.
Vec2 reconstruct_point(const MetricSampler& sampler, const BoundaryData& b, Vec2 x,
                       Vec2 v, double consistency_tol = 1e-2);
Vec2 reconstruct_point(const MetricField& g, const BoundaryData& b, Vec2 x, Vec2 v,
                       double consistency_tol = 1e-2);

struct NodeFailure {
  int i = 0, j = 0;
  int direction = -1;
  std::string reason;
};

struct ReconstructReport {
  int directions = 0;
  std::vector<NodeFailure> failures;    // per-direction failures
  int nodes_without_value = 0;          // interior nodes where every direction failed
  double max_spread = 0.0;              // max over nodes of max pairwise distance
  double mean_spread = 0.0;
  double max_segment_mismatch = 0.0;    // worst | |phi(p)-phi(q)| - (s_p+s_q) |
};

struct ReconstructResult {
  MapField field;
  ReconstructReport report;
};

// reconstruct_point at every interior node for `directions` equispaced
// directions theta_m = pi*m/k (each shot covers +/-v, so the half circle spans
// k distinct geodesic lines). Node value = mean over successful directions;
// the per-node spread across directions is the headline uniqueness measure.
// Boundary nodes copy the boundary data. Direction failures are recorded, not
// fatal; nodes with no successful direction fall back to the Coons blend.
ReconstructResult reconstruct_map(const MetricField& g, const BoundaryData& b,
                                  const ReconstructOptions& opts = {});

}  // namespace planimm
