#include "planimm/metric.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "planimm/errors.hpp"
#include "planimm/ga2.hpp"

namespace planimm {

MetricField induced_metric(const MapField& f) {
  if (!is_immersion(f))
    throw NotImmersionError("induced_metric: |det dphi| below immersion threshold");
  MetricField g(f.grid);
  for (int j = 0; j < f.grid.ny; ++j)
    for (int i = 0; i < f.grid.nx; ++i) {
      const Mat2 d = differential(f, i, j);
      const Metric2 m{d.a * d.a + d.c * d.c, d.a * d.b + d.c * d.d,
                      d.b * d.b + d.d * d.d};
      if (!m.positive_definite())
        throw NotImmersionError("induced_metric: metric not positive definite at node (" +
                                std::to_string(i) + ", " + std::to_string(j) + ")");
      g.at(i, j) = m;
    }
  return g;
}

void write_metric_field(std::ostream& os, const MetricField& g) {
  std::vector<double> data;
  data.reserve(g.values.size() * 3);
  for (const Metric2& m : g.values) {
    data.push_back(m.g11);
    data.push_back(m.g12);
    data.push_back(m.g22);
  }
  write_field(os, g.grid, 3, data);
}

MetricField read_metric_field(std::istream& is) {
  RawField raw = read_field(is);
  if (raw.ncomp != 3) throw IoError("read_metric_field: expected ncomp = 3");
  MetricField g(raw.grid);
  for (size_t n = 0; n < g.values.size(); ++n)
    g.values[n] = {raw.data[3 * n], raw.data[3 * n + 1], raw.data[3 * n + 2]};
  return g;
}

void save_metric_field(const std::string& path, const MetricField& g) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  write_metric_field(os, g);
}

MetricField load_metric_field(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open for reading: " + path);
  return read_metric_field(is);
}

CharData char_data_from_prescription(const ScalarField& jac, const ScalarField& crl) {
  require_same_grid(jac.grid, crl.grid, "char_data_from_prescription");
  CharData cd{ScalarField(jac.grid), ScalarField(jac.grid), {}};
  cd.trace.values = crl.values;
  cd.det.values = jac.values;
  for (int j = 0; j < jac.grid.ny; ++j)
    for (int i = 0; i < jac.grid.nx; ++i)
      if (std::abs(jac.at(i, j)) < kImmersionThreshold)
        cd.degenerate_nodes.emplace_back(i, j);
  return cd;
}

std::array<Complex, 2> char_roots(double t, double d) {
  const double disc = t * t - 4.0 * d;
  if (disc >= 0.0) {
    const double sq = std::sqrt(disc);
    return {Complex{(t - sq) / 2.0, 0.0}, Complex{(t + sq) / 2.0, 0.0}};
  }
  const double sq = std::sqrt(-disc);
  return {Complex{t / 2.0, -sq / 2.0}, Complex{t / 2.0, sq / 2.0}};
}

namespace {

// Scale so the largest-modulus component is exactly 1 (first index wins ties).
CVec2 normalize_eigvec(CVec2 f) {
  const Complex pivot = std::abs(f.x) >= std::abs(f.y) ? f.x : f.y;
  return {f.x / pivot, f.y / pivot};
}

// Eigenvector of m for eigenvalue lam, valid when m is not (numerically)
// scalar: (b, lam-a) and (lam-d, c) both lie in the kernel of (m - lam I).
CVec2 raw_eigvec(const Mat2& m, Complex lam) {
  if (std::abs(m.b) >= std::abs(m.c)) return {Complex{m.b}, lam - m.a};
  return {lam - m.d, Complex{m.c}};
}

}  // namespace

EigenData eigendecompose(const Mat2& m) {
  const double t = m.trace();
  const double d = m.det();
  const double disc = t * t - 4.0 * d;
  const double tol_defect = 1e-10 * (1.0 + norm_inf(m));

  EigenData e;

  if (std::abs(disc) < tol_defect) {
    // repeated eigenvalue lam = t/2
    const Complex lam{t / 2.0, 0.0};
    const bool scalar_like = std::abs(m.b) <= tol_defect &&
                             std::abs(m.c) <= tol_defect &&
                             std::abs(m.a - m.d) <= tol_defect;
    if (scalar_like) {
      e.lambda = {lam, lam};
      e.f = {CVec2{1.0, 0.0}, CVec2{0.0, 1.0}};
      e.omega = {CVec2{1.0, 0.0}, CVec2{0.0, 1.0}};
      return e;
    }
    // one-dimensional eigenspace
    e.defective = true;
    e.lambda = {lam, lam};
    const CVec2 f = normalize_eigvec(raw_eigvec(m, lam));
    e.f = {f, f};
    e.omega = {CVec2{}, CVec2{}};
    return e;
  }

  if (std::abs(m.b) <= 0.0 && std::abs(m.c) <= 0.0) {
    // diagonal with distinct entries
    const bool swap = m.a > m.d;
    e.lambda = {Complex{swap ? m.d : m.a}, Complex{swap ? m.a : m.d}};
    e.f = {CVec2{swap ? 0.0 : 1.0, swap ? 1.0 : 0.0},
           CVec2{swap ? 1.0 : 0.0, swap ? 0.0 : 1.0}};
    e.omega = e.f;
    return e;
  }

  if (disc > 0.0) {
    const auto roots = char_roots(t, d);
    e.lambda = roots;
    e.f = {normalize_eigvec(raw_eigvec(m, roots[0])),
           normalize_eigvec(raw_eigvec(m, roots[1]))};
  } else {
    // conjugate pair; the member with negative imaginary part sorts first
    const auto roots = char_roots(t, d);
    e.lambda = roots;
    const CVec2 f0 = normalize_eigvec(raw_eigvec(m, roots[0]));
    e.f = {f0, conj(f0)};
  }

  // dual basis: rows of the inverse of [f1 f2]
  const Complex detf = e.f[0].x * e.f[1].y - e.f[0].y * e.f[1].x;
  e.omega = {CVec2{e.f[1].y / detf, -e.f[1].x / detf},
             CVec2{-e.f[0].y / detf, e.f[0].x / detf}};
  return e;
}

Metric2 metric_from_eigendata(const EigenData& e) {
  if (e.defective)
    throw DefectiveEigenError("metric_from_eigendata: defective eigendata");

  Complex fdot[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) fdot[i][j] = bilinear_dot(e.f[i], e.f[j]);

  auto omega_comp = [&e](int i, int k) {
    return k == 0 ? e.omega[i].x : e.omega[i].y;
  };

  Complex bkl[2][2];
  for (int k = 0; k < 2; ++k)
    for (int l = k; l < 2; ++l) {
      Complex s{};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          s += e.lambda[i] * e.lambda[j] * omega_comp(i, k) * omega_comp(j, l) *
               fdot[i][j];
      bkl[k][l] = s;
    }

  const double residue = std::max({std::abs(bkl[0][0].imag()),
                                   std::abs(bkl[0][1].imag()),
                                   std::abs(bkl[1][1].imag())});
  if (residue >= 1e-9)
    throw Error("metric_from_eigendata: imaginary residue " + std::to_string(residue) +
                " signals inconsistent eigendata");

  return {bkl[0][0].real(), bkl[0][1].real(), bkl[1][1].real()};
}

Lemma1Report verify_lemma1(const MapField& f) {
  if (!is_immersion(f))
    throw NotImmersionError("verify_lemma1: map is not an immersion");

  const ScalarField jac = jacobian_det(f);
  const ScalarField crl = curl(f);
  const CharData cd = char_data_from_prescription(jac, crl);
  const MetricField gm = induced_metric(f);
  const Mat2 jm = j_matrix();

  Lemma1Report report;
  for (int j = 0; j < f.grid.ny; ++j)
    for (int i = 0; i < f.grid.nx; ++i) {
      const Mat2 djphi = jm * differential(f, i, j);

      const double char_err = std::max(std::abs(djphi.trace() - cd.trace.at(i, j)),
                                       std::abs(djphi.det() - cd.det.at(i, j)));
      report.max_char_discrepancy = std::max(report.max_char_discrepancy, char_err);

      const EigenData ed = eigendecompose(djphi);
      if (ed.defective) {
        report.defective_nodes.emplace_back(i, j);
        continue;
      }
      const Metric2 recon = metric_from_eigendata(ed);
      const Metric2& direct = gm.at(i, j);
      const double metric_err = std::max({std::abs(recon.g11 - direct.g11),
                                          std::abs(recon.g12 - direct.g12),
                                          std::abs(recon.g22 - direct.g22)});
      report.max_metric_discrepancy =
          std::max(report.max_metric_discrepancy, metric_err);
    }
  return report;
}

}  // namespace planimm
