#pragma once

#include "planimm/linalg.hpp"

namespace planimm {

// Affine map x -> A x + b on R^3 with closed-form invariants.
struct AffineMap3 {
  Mat3 a;
  Vec3 b;

  double jacobian_det() const { return a.det(); }
  // standard right-handed curl of the linear part
  Vec3 curl() const {
    return {a.m[2][1] - a.m[1][2], a.m[0][2] - a.m[2][0], a.m[1][0] - a.m[0][1]};
  }
  Mat3 induced_metric() const { return a.transpose_times_self(); }
};

// In three dimensions, equal Jacobian determinant and curl do not force equal
// induced metrics: phi(x,y,z) = (y,z,x) and psi(x,y,z) = (y-x,z,x) share
// Jacobian determinant 1 and curl (-1,-1,-1) but induce different metrics.
// All quantities are integer-valued, so every check is exact.
struct Counterexample3dReport {
  AffineMap3 phi, psi;
  double jac_phi = 0.0, jac_psi = 0.0;
  Vec3 curl_phi, curl_psi;
  Mat3 metric_phi, metric_psi;

  bool jacobians_match_one = false;
  bool curls_match_expected = false;
  bool phi_metric_is_identity = false;
  bool psi_metric_is_expected = false;
  bool metrics_differ = false;

  bool pass() const {
    return jacobians_match_one && curls_match_expected && phi_metric_is_identity &&
           psi_metric_is_expected && metrics_differ;
  }
};

Counterexample3dReport run_counterexample();

}  // namespace planimm
