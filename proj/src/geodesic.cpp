#include "planimm/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

#include "planimm/errors.hpp"
#include "planimm/field_ops.hpp"

namespace planimm {

namespace {

void parallel_for(int begin, int end, int threads, const std::function<void(int)>& fn) {
  const int n = end - begin;
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int k = begin; k < end; ++k) fn(k);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int lo = begin + t * chunk;
    const int hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (int k = lo; k < hi; ++k) fn(k);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

// ---------------------------------------------------------------------------
// Christoffel symbols

Christoffel christoffel(const MetricField& g, int i, int j) {
  const Metric2& m = g.at(i, j);
  const double det = m.det();
  if (!(m.g11 > 0.0) || !(det > 0.0))
    throw Error("christoffel: metric not positive definite at node");
  const double inv11 = m.g22 / det;
  const double inv12 = -m.g12 / det;
  const double inv22 = m.g11 / det;

  // dg[l][ab]: derivative along coordinate l of g_{ab}, ab in {11, 12, 22}
  auto g11f = [&g](int a, int b) { return g.at(a, b).g11; };
  auto g12f = [&g](int a, int b) { return g.at(a, b).g12; };
  auto g22f = [&g](int a, int b) { return g.at(a, b).g22; };
  const double dg[2][3] = {
      {stencil_dx(g.grid, g11f, i, j), stencil_dx(g.grid, g12f, i, j),
       stencil_dx(g.grid, g22f, i, j)},
      {stencil_dy(g.grid, g11f, i, j), stencil_dy(g.grid, g12f, i, j),
       stencil_dy(g.grid, g22f, i, j)},
  };
  auto dgc = [&dg](int l, int a, int b) {
    return dg[l][a + b];  // (0,0)->11, (0,1)/(1,0)->12, (1,1)->22
  };

  Christoffel out;
  for (int k = 0; k < 2; ++k)
    for (int a = 0; a < 2; ++a)
      for (int b = a; b < 2; ++b) {
        double s = 0.0;
        for (int l = 0; l < 2; ++l) {
          const double ginv =
              (k == 0) ? (l == 0 ? inv11 : inv12) : (l == 0 ? inv12 : inv22);
          s += ginv * (dgc(a, b, l) + dgc(b, a, l) - dgc(l, a, b));
        }
        out.gamma[k][a][b] = 0.5 * s;
        out.gamma[k][b][a] = out.gamma[k][a][b];
      }
  return out;
}

// ---------------------------------------------------------------------------
// BoundaryData

BoundaryData::BoundaryData(const Grid2& g)
    : grid_(g),
      bottom_(static_cast<size_t>(g.nx)),
      top_(static_cast<size_t>(g.nx)),
      left_(static_cast<size_t>(g.ny)),
      right_(static_cast<size_t>(g.ny)) {}

BoundaryData BoundaryData::from_map_field(const MapField& f) {
  BoundaryData b(f.grid);
  const Grid2& g = f.grid;
  for (int i = 0; i < g.nx; ++i) {
    b.bottom_[i] = f.at(i, 0);
    b.top_[i] = f.at(i, g.ny - 1);
  }
  for (int j = 0; j < g.ny; ++j) {
    b.left_[j] = f.at(0, j);
    b.right_[j] = f.at(g.nx - 1, j);
  }
  return b;
}

BoundaryData BoundaryData::from_analytic(const AnalyticMap& map, const Grid2& g) {
  BoundaryData b(g);
  for (int i = 0; i < g.nx; ++i) {
    b.bottom_[i] = map.value(g.node(i, 0));
    b.top_[i] = map.value(g.node(i, g.ny - 1));
  }
  for (int j = 0; j < g.ny; ++j) {
    b.left_[j] = map.value(g.node(0, j));
    b.right_[j] = map.value(g.node(g.nx - 1, j));
  }
  // corners belong to two edges and must agree
  auto check = [](Vec2 a, Vec2 b2, const char* where) {
    if (norm_inf(a - b2) > 1e-12)
      throw Error(std::string("BoundaryData: corner mismatch at ") + where);
  };
  check(b.bottom_.front(), b.left_.front(), "(x0, y0)");
  check(b.bottom_.back(), b.right_.front(), "(x1, y0)");
  check(b.top_.front(), b.left_.back(), "(x0, y1)");
  check(b.top_.back(), b.right_.back(), "(x1, y1)");
  return b;
}

Vec2 BoundaryData::node_value(int i, int j) const {
  if (j == 0) return bottom_[i];
  if (j == grid_.ny - 1) return top_[i];
  if (i == 0) return left_[j];
  if (i == grid_.nx - 1) return right_[j];
  throw Error("BoundaryData::node_value: node is interior");
}

namespace {

// Piecewise-cubic Lagrange interpolation on uniformly spaced samples: a
// 4-point window centered on the containing interval, clamped at the ends.
Vec2 cubic_edge_interp(const std::vector<Vec2>& vals, double t0, double h, double t) {
  const int n = static_cast<int>(vals.size());
  double u = (t - t0) / h;
  u = std::clamp(u, 0.0, static_cast<double>(n - 1));
  int cell = std::min(static_cast<int>(u), n - 2);
  int base = std::clamp(cell - 1, 0, n - 4);
  const double s = u - base;  // in [0, 3]

  // Lagrange weights for nodes at offsets 0..3
  const double w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
  const double w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
  const double w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
  const double w3 = s * (s - 1.0) * (s - 2.0) / 6.0;

  return w0 * vals[base] + w1 * vals[base + 1] + w2 * vals[base + 2] +
         w3 * vals[base + 3];
}

}  // namespace

Vec2 BoundaryData::value_at(Vec2 p) const {
  const Grid2& g = grid_;
  const double dl = std::abs(p.x - g.x0), dr = std::abs(p.x - g.x1);
  const double db = std::abs(p.y - g.y0), dt = std::abs(p.y - g.y1);
  const double dmin = std::min({dl, dr, db, dt});
  if (dmin > 1e-9)
    throw Error("BoundaryData::value_at: point is not on the boundary");

  if (db == dmin) return cubic_edge_interp(bottom_, g.x0, g.hx, p.x);
  if (dt == dmin) return cubic_edge_interp(top_, g.x0, g.hx, p.x);
  if (dl == dmin) return cubic_edge_interp(left_, g.y0, g.hy, p.y);
  return cubic_edge_interp(right_, g.y0, g.hy, p.y);
}

MapField coons_blend(const BoundaryData& b) {
  const Grid2& g = b.grid();
  MapField f(g);
  const Vec2 c00 = b.node_value(0, 0), c10 = b.node_value(g.nx - 1, 0);
  const Vec2 c01 = b.node_value(0, g.ny - 1), c11 = b.node_value(g.nx - 1, g.ny - 1);
  for (int j = 0; j < g.ny; ++j) {
    const double t = static_cast<double>(j) / (g.ny - 1);
    for (int i = 0; i < g.nx; ++i) {
      const double s = static_cast<double>(i) / (g.nx - 1);
      const Vec2 edges = (1.0 - s) * b.node_value(0, j) +
                         s * b.node_value(g.nx - 1, j) +
                         (1.0 - t) * b.node_value(i, 0) +
                         t * b.node_value(i, g.ny - 1);
      const Vec2 corners = (1.0 - s) * (1.0 - t) * c00 + s * (1.0 - t) * c10 +
                           (1.0 - s) * t * c01 + s * t * c11;
      f.at(i, j) = edges - corners;
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// MetricSampler

MetricSampler::MetricSampler(const MetricField& g) : grid_(g.grid), g_(g.values) {
  gamma_.resize(static_cast<size_t>(grid_.node_count()));
  for (int j = 0; j < grid_.ny; ++j)
    for (int i = 0; i < grid_.nx; ++i)
      gamma_[static_cast<size_t>(grid_.index(i, j))] = christoffel(g, i, j);
}

void MetricSampler::locate(Vec2 p, int& i, int& j, double& s, double& t) const {
  // clamp into the rectangle; RK stages may probe slightly outside
  const double u = std::clamp((p.x - grid_.x0) / grid_.hx, 0.0,
                              static_cast<double>(grid_.nx - 1));
  const double v = std::clamp((p.y - grid_.y0) / grid_.hy, 0.0,
                              static_cast<double>(grid_.ny - 1));
  i = std::min(static_cast<int>(u), grid_.nx - 2);
  j = std::min(static_cast<int>(v), grid_.ny - 2);
  s = u - i;
  t = v - j;
}

Metric2 MetricSampler::metric_at(Vec2 p) const {
  int i, j;
  double s, t;
  locate(p, i, j, s, t);
  const Metric2& m00 = g_[static_cast<size_t>(grid_.index(i, j))];
  const Metric2& m10 = g_[static_cast<size_t>(grid_.index(i + 1, j))];
  const Metric2& m01 = g_[static_cast<size_t>(grid_.index(i, j + 1))];
  const Metric2& m11 = g_[static_cast<size_t>(grid_.index(i + 1, j + 1))];
  const double w00 = (1.0 - s) * (1.0 - t), w10 = s * (1.0 - t);
  const double w01 = (1.0 - s) * t, w11 = s * t;
  return {w00 * m00.g11 + w10 * m10.g11 + w01 * m01.g11 + w11 * m11.g11,
          w00 * m00.g12 + w10 * m10.g12 + w01 * m01.g12 + w11 * m11.g12,
          w00 * m00.g22 + w10 * m10.g22 + w01 * m01.g22 + w11 * m11.g22};
}

Christoffel MetricSampler::christoffel_at(Vec2 p) const {
  int i, j;
  double s, t;
  locate(p, i, j, s, t);
  const Christoffel& c00 = gamma_[static_cast<size_t>(grid_.index(i, j))];
  const Christoffel& c10 = gamma_[static_cast<size_t>(grid_.index(i + 1, j))];
  const Christoffel& c01 = gamma_[static_cast<size_t>(grid_.index(i, j + 1))];
  const Christoffel& c11 = gamma_[static_cast<size_t>(grid_.index(i + 1, j + 1))];
  const double w00 = (1.0 - s) * (1.0 - t), w10 = s * (1.0 - t);
  const double w01 = (1.0 - s) * t, w11 = s * t;
  Christoffel out;
  for (int k = 0; k < 2; ++k)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        out.gamma[k][a][b] = w00 * c00.gamma[k][a][b] + w10 * c10.gamma[k][a][b] +
                             w01 * c01.gamma[k][a][b] + w11 * c11.gamma[k][a][b];
  return out;
}

Vec2 MetricSampler::geodesic_accel(Vec2 p, Vec2 v) const {
  const Christoffel c = christoffel_at(p);
  Vec2 acc;
  acc.x = -(c.gamma[0][0][0] * v.x * v.x + 2.0 * c.gamma[0][0][1] * v.x * v.y +
            c.gamma[0][1][1] * v.y * v.y);
  acc.y = -(c.gamma[1][0][0] * v.x * v.x + 2.0 * c.gamma[1][0][1] * v.x * v.y +
            c.gamma[1][1][1] * v.y * v.y);
  return acc;
}

// ---------------------------------------------------------------------------
// Geodesic integration

namespace {

struct OdeState {
  Vec2 pos;
  Vec2 vel;
  double len = 0.0;  // accumulated g-arc-length
};

struct OdeDeriv {
  Vec2 dpos;
  Vec2 dvel;
  double dlen;
};

OdeDeriv ode_rhs(const MetricSampler& sampler, const OdeState& st) {
  const Metric2 m = sampler.metric_at(st.pos);
  const double sp2 = m.apply(st.vel, st.vel);
  return {st.vel, sampler.geodesic_accel(st.pos, st.vel),
          std::sqrt(std::max(sp2, 0.0))};
}

OdeState rk4_step(const MetricSampler& sampler, const OdeState& st, double h) {
  const OdeDeriv k1 = ode_rhs(sampler, st);
  OdeState s2{st.pos + (h / 2.0) * k1.dpos, st.vel + (h / 2.0) * k1.dvel,
              st.len + (h / 2.0) * k1.dlen};
  const OdeDeriv k2 = ode_rhs(sampler, s2);
  OdeState s3{st.pos + (h / 2.0) * k2.dpos, st.vel + (h / 2.0) * k2.dvel,
              st.len + (h / 2.0) * k2.dlen};
  const OdeDeriv k3 = ode_rhs(sampler, s3);
  OdeState s4{st.pos + h * k3.dpos, st.vel + h * k3.dvel, st.len + h * k3.dlen};
  const OdeDeriv k4 = ode_rhs(sampler, s4);

  return {st.pos + (h / 6.0) * (k1.dpos + 2.0 * k2.dpos + 2.0 * k3.dpos + k4.dpos),
          st.vel + (h / 6.0) * (k1.dvel + 2.0 * k2.dvel + 2.0 * k3.dvel + k4.dvel),
          st.len + (h / 6.0) * (k1.dlen + 2.0 * k2.dlen + 2.0 * k3.dlen + k4.dlen)};
}

Vec2 snap_to_boundary(const Grid2& g, Vec2 p) {
  const double dl = std::abs(p.x - g.x0), dr = std::abs(p.x - g.x1);
  const double db = std::abs(p.y - g.y0), dt = std::abs(p.y - g.y1);
  const double dmin = std::min({dl, dr, db, dt});
  if (dl == dmin)
    p.x = g.x0;
  else if (dr == dmin)
    p.x = g.x1;
  else if (db == dmin)
    p.y = g.y0;
  else
    p.y = g.y1;
  p.x = std::clamp(p.x, g.x0, g.x1);
  p.y = std::clamp(p.y, g.y0, g.y1);
  return p;
}

struct ExitInfo {
  Vec2 exit_point;
  double arc_length;
};

// Integrate until the trajectory crosses the rectangle boundary. `trace` may
// be null when only the exit matters.
ExitInfo integrate_to_boundary(const MetricSampler& sampler, Vec2 x, Vec2 v,
                               GeodesicTrace* trace) {
  const Grid2& g = sampler.grid();
  if (!g.strictly_contains(x))
    throw Error("shoot: start point must be strictly interior");
  if (norm(v) == 0.0) throw Error("shoot: zero direction");

  const double speed0 = std::sqrt(sampler.metric_at(x).apply(v, v));
  if (!(speed0 > 0.0)) throw Error("shoot: direction has zero metric speed");

  OdeState st{x, (1.0 / speed0) * v, 0.0};
  const double h = std::min(g.hx, g.hy) / 4.0;
  const long max_steps = 64L * (g.nx + g.ny);

  if (trace) {
    trace->step_size = h;
    trace->points.push_back(st.pos);
    trace->velocities.push_back(st.vel);
    trace->speeds.push_back(1.0);
  }

  for (long step = 0; step < max_steps; ++step) {
    OdeState next = rk4_step(sampler, st, h);
    if (!is_finite(next.pos) || !is_finite(next.vel) || !std::isfinite(next.len))
      throw Error("shoot: non-finite state during integration");

    if (!g.contains(next.pos)) {
      // bracket the crossing on this step by bisection in the step fraction
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 64 && (hi - lo) * h > 1e-12; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g.contains(rk4_step(sampler, st, mid * h).pos))
          lo = mid;
        else
          hi = mid;
      }
      const OdeState cross = rk4_step(sampler, st, 0.5 * (lo + hi) * h);
      const Vec2 exit = snap_to_boundary(g, cross.pos);
      if (trace) {
        trace->exit_point = exit;
        trace->arc_length = cross.len;
      }
      return {exit, cross.len};
    }

    // measure the g-speed, then renormalize: the geodesic path is unchanged
    // by reparameterization and the parameter stays arc length
    const double sp = std::sqrt(sampler.metric_at(next.pos).apply(next.vel, next.vel));
    st = next;
    st.vel = (1.0 / sp) * st.vel;
    if (trace) {
      trace->points.push_back(st.pos);
      trace->velocities.push_back(st.vel);
      trace->speeds.push_back(sp);
    }
  }
  throw TrappedGeodesicError("shoot: step ceiling exceeded (trajectory did not exit)");
}

}  // namespace

GeodesicTrace shoot(const MetricSampler& sampler, Vec2 x, Vec2 v) {
  GeodesicTrace trace;
  integrate_to_boundary(sampler, x, v, &trace);
  return trace;
}

GeodesicTrace shoot(const MetricField& g, Vec2 x, Vec2 v) {
  return shoot(MetricSampler(g), x, v);
}

// ---------------------------------------------------------------------------
// Reconstruction

namespace {

struct PointRecon {
  Vec2 value;
  double mismatch;  // | |phi(p)-phi(q)| - (s_p + s_q) |
};

PointRecon reconstruct_point_detail(const MetricSampler& sampler,
                                    const BoundaryData& b, Vec2 x, Vec2 v,
                                    double consistency_tol) {
  const ExitInfo fwd = integrate_to_boundary(sampler, x, v, nullptr);
  const ExitInfo bwd = integrate_to_boundary(sampler, x, -v, nullptr);

  const Vec2 phi_p = b.value_at(fwd.exit_point);
  const Vec2 phi_q = b.value_at(bwd.exit_point);
  const double total = fwd.arc_length + bwd.arc_length;
  const double mismatch = std::abs(norm(phi_p - phi_q) - total);
  if (mismatch > 10.0 * consistency_tol)
    throw SegmentConsistencyError(
        "reconstruct_point: |phi(p)-phi(q)| and arc lengths disagree by " +
        std::to_string(mismatch));

  const double ratio = fwd.arc_length / total;
  return {phi_p + ratio * (phi_q - phi_p), mismatch};
}

}  // namespace

Vec2 reconstruct_point(const MetricSampler& sampler, const BoundaryData& b, Vec2 x,
                       Vec2 v, double consistency_tol) {
  return reconstruct_point_detail(sampler, b, x, v, consistency_tol).value;
}

Vec2 reconstruct_point(const MetricField& g, const BoundaryData& b, Vec2 x, Vec2 v,
                       double consistency_tol) {
  return reconstruct_point(MetricSampler(g), b, x, v, consistency_tol);
}

ReconstructResult reconstruct_map(const MetricField& g, const BoundaryData& b,
                                  const ReconstructOptions& opts) {
  require_same_grid(g.grid, b.grid(), "reconstruct_map");
  if (opts.directions < 2)
    throw Error("reconstruct_map: need at least 2 directions");

  const Grid2& grid = g.grid;
  const MetricSampler sampler(g);
  const MapField blend = coons_blend(b);

  struct NodeOut {
    Vec2 value;
    double spread = 0.0;
    double mismatch = 0.0;
    int successes = 0;
    std::vector<NodeFailure> failures;
  };
  const int ni = grid.nx - 2, nj = grid.ny - 2;
  std::vector<NodeOut> nodes(static_cast<size_t>(ni) * nj);

  constexpr double kPi = 3.14159265358979323846;
  const int k = opts.directions;

  parallel_for(0, ni * nj, opts.threads, [&](int m) {
    const int i = 1 + m % ni;
    const int j = 1 + m / ni;
    const Vec2 x = grid.node(i, j);
    NodeOut& out = nodes[static_cast<size_t>(m)];

    std::vector<Vec2> vals;
    vals.reserve(static_cast<size_t>(k));
    for (int dir = 0; dir < k; ++dir) {
      const double theta = kPi * dir / k;
      const Vec2 v{std::cos(theta), std::sin(theta)};
      try {
        const PointRecon r =
            reconstruct_point_detail(sampler, b, x, v, opts.consistency_tol);
        vals.push_back(r.value);
        out.mismatch = std::max(out.mismatch, r.mismatch);
      } catch (const Error& err) {
        out.failures.push_back({i, j, dir, err.what()});
      }
    }

    out.successes = static_cast<int>(vals.size());
    if (vals.empty()) {
      out.value = blend.at(i, j);
      return;
    }
    Vec2 mean{};
    for (Vec2 val : vals) mean += val;
    out.value = (1.0 / vals.size()) * mean;
    for (size_t a = 0; a < vals.size(); ++a)
      for (size_t c = a + 1; c < vals.size(); ++c)
        out.spread = std::max(out.spread, norm(vals[a] - vals[c]));
  });

  ReconstructResult result{MapField(grid), {}};
  result.report.directions = k;

  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (grid.is_boundary(i, j)) result.field.at(i, j) = b.node_value(i, j);

  double spread_sum = 0.0;
  for (int m = 0; m < ni * nj; ++m) {
    const NodeOut& out = nodes[static_cast<size_t>(m)];
    const int i = 1 + m % ni;
    const int j = 1 + m / ni;
    result.field.at(i, j) = out.value;
    result.report.max_spread = std::max(result.report.max_spread, out.spread);
    result.report.max_segment_mismatch =
        std::max(result.report.max_segment_mismatch, out.mismatch);
    spread_sum += out.spread;
    if (out.successes == 0) ++result.report.nodes_without_value;
    for (const NodeFailure& fail : out.failures) result.report.failures.push_back(fail);
  }
  result.report.mean_spread = spread_sum / (ni * nj);
  return result;
}

}  // namespace planimm
