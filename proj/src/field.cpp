#include "planimm/field.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "planimm/errors.hpp"

namespace planimm {

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double sup_distance(const MapField& f, const MapField& g) {
  require_same_grid(f.grid, g.grid, "sup_distance");
  double m = 0.0;
  for (size_t n = 0; n < f.values.size(); ++n)
    m = std::max(m, norm(f.values[n] - g.values[n]));
  return m;
}

namespace {

// 17 significant digits: enough for an exact double round-trip.
void append_double(std::string& line, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, " %.17g", v);
  line += buf;
}

}  // namespace

void write_field(std::ostream& os, const Grid2& grid, int ncomp,
                 const std::vector<double>& data) {
  if (ncomp < 1) throw IoError("write_field: ncomp must be >= 1");
  if (data.size() != static_cast<size_t>(grid.node_count()) * ncomp)
    throw IoError("write_field: data size does not match grid");
  for (double v : data)
    if (!std::isfinite(v)) throw IoError("write_field: non-finite value");

  std::string line;
  line = "# planimm field v1";
  char head[160];
  std::snprintf(head, sizeof head, " %d %d %.17g %.17g %.17g %.17g %d", grid.nx,
                grid.ny, grid.x0, grid.y0, grid.x1, grid.y1, ncomp);
  line += head;
  os << line << '\n';

  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      line.clear();
      line += std::to_string(i);
      line += ' ';
      line += std::to_string(j);
      const size_t base = static_cast<size_t>(grid.index(i, j)) * ncomp;
      for (int c = 0; c < ncomp; ++c) append_double(line, data[base + c]);
      os << line << '\n';
    }
  if (!os) throw IoError("write_field: stream failure");
}

RawField read_field(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw IoError("read_field: empty input");

  std::istringstream hs(header);
  std::string hash, name, fieldword, version;
  int nx = 0, ny = 0, ncomp = 0;
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  hs >> hash >> name >> fieldword >> version >> nx >> ny >> x0 >> y0 >> x1 >> y1 >>
      ncomp;
  if (!hs || hash != "#" || name != "planimm" || fieldword != "field" ||
      version != "v1")
    throw IoError("read_field: bad header: " + header);
  if (ncomp < 1) throw IoError("read_field: bad ncomp");

  Grid2 grid(nx, ny, x0, y0, x1, y1);
  RawField out{grid, ncomp,
               std::vector<double>(static_cast<size_t>(grid.node_count()) * ncomp)};

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      int ri = -1, rj = -1;
      if (!(is >> ri >> rj)) throw IoError("read_field: truncated node data");
      if (ri != i || rj != j)
        throw IoError("read_field: node order mismatch (expected row-major, j outer)");
      const size_t base = static_cast<size_t>(grid.index(i, j)) * ncomp;
      for (int c = 0; c < ncomp; ++c) {
        double v;
        if (!(is >> v)) throw IoError("read_field: truncated node values");
        if (!std::isfinite(v)) throw IoError("read_field: non-finite value");
        out.data[base + c] = v;
      }
    }
  return out;
}

void write_scalar_field(std::ostream& os, const ScalarField& f) {
  write_field(os, f.grid, 1, f.values);
}

void write_map_field(std::ostream& os, const MapField& f) {
  std::vector<double> data;
  data.reserve(f.values.size() * 2);
  for (Vec2 v : f.values) {
    data.push_back(v.x);
    data.push_back(v.y);
  }
  write_field(os, f.grid, 2, data);
}

ScalarField read_scalar_field(std::istream& is) {
  RawField raw = read_field(is);
  if (raw.ncomp != 1) throw IoError("read_scalar_field: expected ncomp = 1");
  ScalarField f(raw.grid);
  f.values = std::move(raw.data);
  return f;
}

MapField read_map_field(std::istream& is) {
  RawField raw = read_field(is);
  if (raw.ncomp != 2) throw IoError("read_map_field: expected ncomp = 2");
  MapField f(raw.grid);
  for (size_t n = 0; n < f.values.size(); ++n)
    f.values[n] = {raw.data[2 * n], raw.data[2 * n + 1]};
  return f;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open for reading: " + path);
  return is;
}

}  // namespace

void save_scalar_field(const std::string& path, const ScalarField& f) {
  auto os = open_out(path);
  write_scalar_field(os, f);
}

void save_map_field(const std::string& path, const MapField& f) {
  auto os = open_out(path);
  write_map_field(os, f);
}

ScalarField load_scalar_field(const std::string& path) {
  auto is = open_in(path);
  return read_scalar_field(is);
}

MapField load_map_field(const std::string& path) {
  auto is = open_in(path);
  return read_map_field(is);
}

}  // namespace planimm
