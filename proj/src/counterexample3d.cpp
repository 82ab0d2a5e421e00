#include "planimm/counterexample3d.hpp"

namespace planimm {

Counterexample3dReport run_counterexample() {
  Counterexample3dReport r;
  // phi(x,y,z) = (y, z, x)
  r.phi.a = Mat3{{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}};
  // psi(x,y,z) = (y - x, z, x)
  r.psi.a = Mat3{{{-1, 1, 0}, {0, 0, 1}, {1, 0, 0}}};

  r.jac_phi = r.phi.jacobian_det();
  r.jac_psi = r.psi.jacobian_det();
  r.curl_phi = r.phi.curl();
  r.curl_psi = r.psi.curl();
  r.metric_phi = r.phi.induced_metric();
  r.metric_psi = r.psi.induced_metric();

  const Vec3 expected_curl{-1.0, -1.0, -1.0};
  const Mat3 identity{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  const Mat3 expected_psi_metric{{{2, -1, 0}, {-1, 1, 0}, {0, 0, 1}}};

  r.jacobians_match_one = r.jac_phi == 1.0 && r.jac_psi == 1.0;
  r.curls_match_expected = r.curl_phi == expected_curl && r.curl_psi == expected_curl;
  r.phi_metric_is_identity = r.metric_phi == identity;
  r.psi_metric_is_expected = r.metric_psi == expected_psi_metric;
  r.metrics_differ = !(r.metric_phi == r.metric_psi);
  return r;
}

}  // namespace planimm
