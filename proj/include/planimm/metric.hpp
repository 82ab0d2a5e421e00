#pragma once

#include <array>
#include <utility>
#include <vector>

#include "planimm/field.hpp"
#include "planimm/field_ops.hpp"
#include "planimm/grid.hpp"
#include "planimm/linalg.hpp"

namespace planimm {

// Symmetric 2x2 metric tensor at a node.
struct Metric2 {
  double g11 = 0.0, g12 = 0.0, g22 = 0.0;

  double det() const { return g11 * g22 - g12 * g12; }
  bool positive_definite() const { return g11 > 0.0 && det() > 0.0; }
  double apply(Vec2 v, Vec2 w) const {
    return g11 * v.x * w.x + g12 * (v.x * w.y + v.y * w.x) + g22 * v.y * w.y;
  }
  Mat2 as_matrix() const { return {g11, g12, g12, g22}; }
};

struct MetricField {
  Grid2 grid;
  std::vector<Metric2> values;

  explicit MetricField(const Grid2& g)
      : grid(g), values(static_cast<size_t>(g.node_count())) {}

  Metric2& at(int i, int j) { return values[static_cast<size_t>(grid.index(i, j))]; }
  const Metric2& at(int i, int j) const {
    return values[static_cast<size_t>(grid.index(i, j))];
  }
};

// g = (dphi)^T dphi per node. Requires an immersion; every node must come out
// positive definite.
MetricField induced_metric(const MapField& f);

// Metric field I/O uses the `planimm field v1` format with ncomp = 3 and
// components (g11, g12, g22).
void write_metric_field(std::ostream& os, const MetricField& g);
MetricField read_metric_field(std::istream& is);
void save_metric_field(const std::string& path, const MetricField& g);
MetricField load_metric_field(const std::string& path);

// Characteristic-polynomial data of the dual differential d(J phi), assembled
// from a prescription: trace = curl, det = Jacobian determinant. Nodes where
// |det| falls below the immersion threshold are flagged degenerate.
struct CharData {
  ScalarField trace;
  ScalarField det;
  std::vector<std::pair<int, int>> degenerate_nodes;
};

CharData char_data_from_prescription(const ScalarField& jac, const ScalarField& crl);

// Roots of lambda^2 - t*lambda + d, ordered by (real, imag).
std::array<Complex, 2> char_roots(double t, double d);

// Eigen-decomposition of a real 2x2 matrix over C.
//
// Eigenvalues are sorted by (real, imag); complex pairs are stored as exact
// conjugates with conjugate eigenvectors. Each eigenvector is scaled so its
// largest-modulus component is exactly 1; omega holds the dual basis, i.e.
// omega^i(f_j) = delta^i_j. A repeated eigenvalue with a one-dimensional
// eigenspace sets `defective` (omega is meaningless in that case).
struct EigenData {
  std::array<Complex, 2> lambda;
  std::array<CVec2, 2> f;      // eigenvectors (columns)
  std::array<CVec2, 2> omega;  // dual covectors (rows)
  bool defective = false;
};

EigenData eigendecompose(const Mat2& m);

// The eigen-expansion of the induced metric: B(v,w) = sum_ij lambda_i lambda_j
// vt^i wt^j f_i.f_j with eigen-coordinates vt = omega(v) and the bilinear
// (non-Hermitian) dot. Equals m^T m when the eigendata came from m. Throws on
// defective input or when any entry's imaginary residue exceeds 1e-9.
Metric2 metric_from_eigendata(const EigenData& e);

// End-to-end node check: build d(J phi), confirm its (trace, det) equals the
// (curl, Jacobian) prescription, then compare the eigen-expansion metric with
// the directly induced one.
struct Lemma1Report {
  double max_metric_discrepancy = 0.0;
  double max_char_discrepancy = 0.0;
  std::vector<std::pair<int, int>> defective_nodes;

  double max_discrepancy() const {
    return std::max(max_metric_discrepancy, max_char_discrepancy);
  }
};

Lemma1Report verify_lemma1(const MapField& f);

}  // namespace planimm
