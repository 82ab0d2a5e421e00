#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "planimm/field.hpp"
#include "planimm/geodesic.hpp"
#include "planimm/grid.hpp"
#include "planimm/maps.hpp"

namespace planimm {

// Target data for the inverse problem: find phi with prescribed Jacobian
// determinant and curl matching given boundary values.
struct Prescription {
  ScalarField jac_target;
  ScalarField curl_target;
  BoundaryData boundary;
};

// Targets generated by the discrete operators applied to a sampled analytic
// map, so the sampled map is an exact discrete solution and solver error can
// be measured against it directly.
Prescription make_prescription(const AnalyticMap& map, const Grid2& grid);

struct SolverOptions {
  int max_iterations = 200;
  double residual_tol = 1e-10;      // max-norm convergence threshold
  double step_tol = 1e-12;          // relative step convergence threshold
  double lambda0 = 1e-3;            // initial damping
  double immersion_threshold = 1e-8;
  double compat_rel_tol = 1e-6;     // precondition on the prescription
  int max_immersion_rejects = 50;
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double final_residual_norm = 0.0;      // 2-norm
  double final_residual_max = 0.0;       // max-norm
  std::vector<double> residual_history;  // 2-norm after each accepted step
  std::vector<double> lambda_history;
  bool immersion_failure = false;
  std::string message;
  MapField solution;
};

// Residuals over interior nodes in row-major order, two per node:
// [jac(f) - jac_target, curl(f) - curl_target]. f must match the
// prescription's boundary values at boundary nodes.
std::vector<double> residual(const MapField& f, const Prescription& p);

// When both node counts are odd, interior central differences cannot see a
// constant added to the (odd, odd) node sub-lattice: i-1 and i+1 share parity,
// so every stencil difference of such a field cancels identically and the
// discrete problem admits an exact two-parameter family of solutions around
// each root. The solver keeps its steps orthogonal to that family and random
// starts carry no component of it, so a solution's sub-lattice mean is pinned
// by its initial guess.
bool has_invisible_sublattice(const Grid2& g);

// per-component mean over the interior (odd, odd) sub-lattice
Vec2 sublattice_mean(const MapField& f);

// Damped Gauss-Newton (Levenberg-Marquardt) on the interior node values with
// the boundary eliminated; the residual Jacobian is assembled analytically
// from the stencil structure and the normal equations are solved by sparse
// Cholesky. Rejected steps never enter the history, so recorded residual
// norms are non-increasing.
SolveReport solve(const Prescription& p, const MapField& init,
                  const SolverOptions& opts = {});

// Coons blend of the boundary plus a smooth random interior perturbation:
// per component sum of sin(p pi s) sin(q pi t) modes, p,q <= 3, with
// coefficients drawn uniformly from [-sigma, sigma] / (p^2 + q^2).
MapField random_start(const BoundaryData& b, double sigma, std::mt19937_64& rng);

struct UniquenessReport {
  std::vector<SolveReport> starts;
  std::vector<std::vector<double>> distance;  // pairwise sup-distances, converged starts
  std::vector<int> converged_indices;
  double max_pairwise_distance = 0.0;
  bool conclusive = false;  // at least two converged starts
};

// Runs `solve` from n_starts seeded random starts and reports the pairwise
// sup-distances between converged solutions; the max pairwise distance is the
// headline uniqueness number.
UniquenessReport uniqueness_experiment(const Prescription& p, int n_starts,
                                       double sigma, std::uint64_t seed,
                                       const SolverOptions& opts = {});

}  // namespace planimm
