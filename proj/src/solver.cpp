#include "planimm/solver.hpp"

#include <Eigen/Sparse>
#include <cmath>
#include <limits>

#include "planimm/compat.hpp"
#include "planimm/errors.hpp"
#include "planimm/field_ops.hpp"

namespace planimm {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kBoundaryTol = 1e-12;

void check_boundary_agreement(const MapField& f, const BoundaryData& b,
                              const char* where) {
  const Grid2& g = f.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!g.is_boundary(i, j)) continue;
      if (norm_inf(f.at(i, j) - b.node_value(i, j)) > kBoundaryTol)
        throw BoundaryMismatchError(std::string(where) +
                                    ": field does not match boundary data");
    }
}

struct Indexer {
  int nx, ny, ni;

  explicit Indexer(const Grid2& g) : nx(g.nx), ny(g.ny), ni(g.nx - 2) {}

  bool interior(int i, int j) const {
    return i > 0 && j > 0 && i < nx - 1 && j < ny - 1;
  }
  // flat interior-node index
  int node(int i, int j) const { return (j - 1) * ni + (i - 1); }
  // unknown index of component c at interior node (i, j)
  int unknown(int i, int j, int c) const { return 2 * node(i, j) + c; }
};

void fill_interior(MapField& f, const Eigen::VectorXd& x, const Indexer& ix) {
  for (int j = 1; j < f.grid.ny - 1; ++j)
    for (int i = 1; i < f.grid.nx - 1; ++i)
      f.at(i, j) = {x[ix.unknown(i, j, 0)], x[ix.unknown(i, j, 1)]};
}

Eigen::VectorXd pack_interior(const MapField& f, const Indexer& ix) {
  Eigen::VectorXd x(2 * ix.ni * (f.grid.ny - 2));
  for (int j = 1; j < f.grid.ny - 1; ++j)
    for (int i = 1; i < f.grid.nx - 1; ++i) {
      x[ix.unknown(i, j, 0)] = f.at(i, j).x;
      x[ix.unknown(i, j, 1)] = f.at(i, j).y;
    }
  return x;
}

Eigen::VectorXd residual_vector(const MapField& f, const Prescription& p,
                                const Indexer& ix) {
  Eigen::VectorXd r(2 * ix.ni * (f.grid.ny - 2));
  for (int j = 1; j < f.grid.ny - 1; ++j)
    for (int i = 1; i < f.grid.nx - 1; ++i) {
      const Mat2 d = differential(f, i, j);
      const int row = 2 * ix.node(i, j);
      r[row] = d.det() - p.jac_target.at(i, j);
      r[row + 1] = (d.c - d.b) - p.curl_target.at(i, j);
    }
  return r;
}

// Analytic Jacobian of the residual. Interior residuals use central
// differences, so each row touches at most the four neighbours of its node
// (8 unknowns); neighbours on the boundary are fixed and contribute nothing.
void assemble_jacobian(const MapField& f, const Indexer& ix,
                       std::vector<Eigen::Triplet<double>>& trip) {
  trip.clear();
  const Grid2& g = f.grid;
  const double cx = 1.0 / (2.0 * g.hx);
  const double cy = 1.0 / (2.0 * g.hy);

  auto add = [&](int row, int i, int j, int comp, double val) {
    if (ix.interior(i, j)) trip.emplace_back(row, ix.unknown(i, j, comp), val);
  };

  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 1; i < g.nx - 1; ++i) {
      const Mat2 d = differential(f, i, j);
      const int row_jac = 2 * ix.node(i, j);
      const int row_curl = row_jac + 1;

      // det = a*d - b*c with a = dx phi1, b = dy phi1, c = dx phi2, d = dy phi2
      add(row_jac, i + 1, j, 0, d.d * cx);
      add(row_jac, i - 1, j, 0, -d.d * cx);
      add(row_jac, i, j + 1, 0, -d.c * cy);
      add(row_jac, i, j - 1, 0, d.c * cy);
      add(row_jac, i + 1, j, 1, -d.b * cx);
      add(row_jac, i - 1, j, 1, d.b * cx);
      add(row_jac, i, j + 1, 1, d.a * cy);
      add(row_jac, i, j - 1, 1, -d.a * cy);

      // curl = c - b
      add(row_curl, i + 1, j, 1, cx);
      add(row_curl, i - 1, j, 1, -cx);
      add(row_curl, i, j + 1, 0, -cy);
      add(row_curl, i, j - 1, 0, cy);
    }
}

}  // namespace

Prescription make_prescription(const AnalyticMap& map, const Grid2& grid) {
  const MapField f = sample_map(map, grid);
  return {jacobian_det(f), curl(f), BoundaryData::from_map_field(f)};
}

bool has_invisible_sublattice(const Grid2& g) {
  // the (odd, odd) class contains no boundary node exactly when the last
  // indices nx-1, ny-1 are even
  return g.nx % 2 == 1 && g.ny % 2 == 1;
}

Vec2 sublattice_mean(const MapField& f) {
  if (!has_invisible_sublattice(f.grid)) return {0.0, 0.0};
  Vec2 sum{};
  int count = 0;
  for (int j = 1; j < f.grid.ny - 1; j += 2)
    for (int i = 1; i < f.grid.nx - 1; i += 2) {
      sum += f.at(i, j);
      ++count;
    }
  return (1.0 / count) * sum;
}

std::vector<double> residual(const MapField& f, const Prescription& p) {
  require_same_grid(f.grid, p.jac_target.grid, "residual");
  require_same_grid(f.grid, p.curl_target.grid, "residual");
  check_boundary_agreement(f, p.boundary, "residual");
  const Indexer ix(f.grid);
  const Eigen::VectorXd r = residual_vector(f, p, ix);
  return {r.data(), r.data() + r.size()};
}

SolveReport solve(const Prescription& p, const MapField& init,
                  const SolverOptions& opts) {
  require_same_grid(p.jac_target.grid, p.curl_target.grid, "solve");
  require_same_grid(p.jac_target.grid, init.grid, "solve");
  check_boundary_agreement(init, p.boundary, "solve");

  // prescription preconditions: targets must admit an immersion and satisfy
  // the curl/boundary compatibility identity
  for (double v : p.jac_target.values)
    if (std::abs(v) < opts.immersion_threshold)
      throw NotImmersionError("solve: jac target not bounded away from zero");
  const CompatReport compat = compatibility_defect(p.curl_target, p.boundary);
  if (compat.relative_defect >= opts.compat_rel_tol)
    throw IncompatiblePrescriptionError(
        "solve: curl/boundary compatibility defect " +
        std::to_string(compat.defect) + " (relative " +
        std::to_string(compat.relative_defect) + ") exceeds tolerance");
  if (!is_immersion(init, opts.immersion_threshold))
    throw NotImmersionError("solve: initial guess is not an immersion");

  const Grid2& grid = init.grid;
  const Indexer ix(grid);
  const int n_unknowns = 2 * grid.interior_count();

  // unknown indices of the stencil-invisible sub-lattice, per component
  std::vector<int> invisible[2];
  if (has_invisible_sublattice(grid))
    for (int j = 1; j < grid.ny - 1; j += 2)
      for (int i = 1; i < grid.nx - 1; i += 2)
        for (int c = 0; c < 2; ++c) invisible[c].push_back(ix.unknown(i, j, c));
  auto remove_invisible = [&invisible](Eigen::VectorXd& step) {
    for (auto& cls : invisible) {
      if (cls.empty()) continue;
      double mean = 0.0;
      for (int k : cls) mean += step[k];
      mean /= static_cast<double>(cls.size());
      for (int k : cls) step[k] -= mean;
    }
  };

  SolveReport report{.solution = init};
  MapField f = init;
  MapField f_trial = init;
  Eigen::VectorXd x = pack_interior(f, ix);
  Eigen::VectorXd r = residual_vector(f, p, ix);
  double rnorm = r.norm();
  report.residual_history.push_back(rnorm);

  Eigen::SparseMatrix<double> jac(n_unknowns, n_unknowns);
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::SparseMatrix<double> eye(n_unknowns, n_unknowns);
  eye.setIdentity();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;

  double lambda = opts.lambda0;
  int immersion_rejects = 0;

  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    if (r.lpNorm<Eigen::Infinity>() < opts.residual_tol) {
      report.converged = true;
      break;
    }

    assemble_jacobian(f, ix, trip);
    jac.setFromTriplets(trip.begin(), trip.end());
    const Eigen::SparseMatrix<double> jtj =
        Eigen::SparseMatrix<double>(jac.transpose()) * jac;
    const Eigen::VectorXd grad = jac.transpose() * r;

    bool accepted = false;
    for (int attempt = 0; attempt < 40 && !accepted; ++attempt) {
      const Eigen::SparseMatrix<double> h = jtj + lambda * eye;
      ldlt.compute(h);
      if (ldlt.info() != Eigen::Success) {
        lambda *= 10.0;
        continue;
      }
      Eigen::VectorXd step = ldlt.solve(-grad);
      remove_invisible(step);
      const Eigen::VectorXd x_trial = x + step;
      fill_interior(f_trial, x_trial, ix);

      if (min_abs_interior_jacobian(f_trial) < opts.immersion_threshold) {
        // candidate folds the grid: raise damping and retry
        report.immersion_failure = true;
        if (++immersion_rejects > opts.max_immersion_rejects) {
          report.message = "aborted: immersion repeatedly lost during iteration";
          report.iterations = iter;
          report.final_residual_norm = rnorm;
          report.final_residual_max = r.lpNorm<Eigen::Infinity>();
          report.solution = f;
          return report;
        }
        lambda *= 10.0;
        continue;
      }

      const Eigen::VectorXd r_trial = residual_vector(f_trial, p, ix);
      const double rnorm_trial = r_trial.norm();
      if (rnorm_trial <= rnorm) {
        x = x_trial;
        std::swap(f, f_trial);
        r = r_trial;
        rnorm = rnorm_trial;
        lambda = std::max(lambda / 10.0, 1e-14);
        report.residual_history.push_back(rnorm);
        report.lambda_history.push_back(lambda);
        accepted = true;
        if (r.lpNorm<Eigen::Infinity>() < opts.residual_tol) {
          report.converged = true;
        } else {
          // relative step below tolerance at a nonzero residual is a stall
          // (typically a local minimum of the least-squares landscape), not
          // convergence; stop and report it as such
          const double step_scale = 1.0 + x.lpNorm<Eigen::Infinity>();
          if (step.lpNorm<Eigen::Infinity>() <= opts.step_tol * step_scale)
            report.message = "stopped: relative step below tolerance at residual " +
                             std::to_string(rnorm);
        }
      } else {
        lambda *= 10.0;
        if (lambda > 1e10) break;
      }
    }

    report.iterations = iter + 1;
    if (!accepted) {
      report.message = "stalled: no acceptable damped step found";
      break;
    }
    if (report.converged || !report.message.empty()) break;
  }

  if (report.converged && report.message.empty()) report.message = "converged";
  if (!report.converged && report.message.empty())
    report.message = "iteration limit reached";
  report.final_residual_norm = rnorm;
  report.final_residual_max = r.lpNorm<Eigen::Infinity>();
  report.solution = f;
  return report;
}

MapField random_start(const BoundaryData& b, double sigma, std::mt19937_64& rng) {
  MapField f = coons_blend(b);
  if (sigma == 0.0) return f;

  // low-frequency interior bump: vanishes on the boundary, smooth inside
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double cx[3][3], cy[3][3];
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) {
      const double damp = 1.0 / ((p + 1) * (p + 1) + (q + 1) * (q + 1));
      cx[p][q] = sigma * u(rng) * damp;
      cy[p][q] = sigma * u(rng) * damp;
    }

  const Grid2& g = f.grid;
  MapField bump(g);
  for (int j = 1; j < g.ny - 1; ++j) {
    const double t = static_cast<double>(j) / (g.ny - 1);
    for (int i = 1; i < g.nx - 1; ++i) {
      const double s = static_cast<double>(i) / (g.nx - 1);
      Vec2 v{};
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) {
          const double mode =
              std::sin((p + 1) * kPi * s) * std::sin((q + 1) * kPi * t);
          v.x += cx[p][q] * mode;
          v.y += cy[p][q] * mode;
        }
      bump.at(i, j) = v;
    }
  }

  // keep the perturbation orthogonal to the stencil-invisible sub-lattice so
  // every start pins the same representative of the discrete solution family
  const Vec2 mean = sublattice_mean(bump);
  if (has_invisible_sublattice(g))
    for (int j = 1; j < g.ny - 1; j += 2)
      for (int i = 1; i < g.nx - 1; i += 2) bump.at(i, j) = bump.at(i, j) - mean;

  for (int j = 1; j < g.ny - 1; ++j)
    for (int i = 1; i < g.nx - 1; ++i) f.at(i, j) += bump.at(i, j);
  return f;
}

UniquenessReport uniqueness_experiment(const Prescription& p, int n_starts,
                                       double sigma, std::uint64_t seed,
                                       const SolverOptions& opts) {
  if (n_starts < 2) throw Error("uniqueness_experiment: need n_starts >= 2");

  UniquenessReport report;
  std::mt19937_64 rng(seed);
  for (int s = 0; s < n_starts; ++s) {
    const MapField init = random_start(p.boundary, sigma, rng);
    try {
      report.starts.push_back(solve(p, init, opts));
    } catch (const Error& err) {
      SolveReport failed{.solution = init};
      failed.message = err.what();
      report.starts.push_back(std::move(failed));
    }
    if (report.starts.back().converged)
      report.converged_indices.push_back(s);
  }

  const int nc = static_cast<int>(report.converged_indices.size());
  report.distance.assign(nc, std::vector<double>(nc, 0.0));
  for (int a = 0; a < nc; ++a)
    for (int c = a + 1; c < nc; ++c) {
      const double dist =
          sup_distance(report.starts[report.converged_indices[a]].solution,
                       report.starts[report.converged_indices[c]].solution);
      report.distance[a][c] = dist;
      report.distance[c][a] = dist;
      report.max_pairwise_distance = std::max(report.max_pairwise_distance, dist);
    }
  report.conclusive = nc >= 2;
  return report;
}

}  // namespace planimm
