#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "planimm/grid.hpp"
#include "planimm/linalg.hpp"

namespace planimm {

struct ScalarField {
  Grid2 grid;
  std::vector<double> values;

  explicit ScalarField(const Grid2& g, double fill = 0.0)
      : grid(g), values(static_cast<size_t>(g.node_count()), fill) {}

  double& at(int i, int j) { return values[static_cast<size_t>(grid.index(i, j))]; }
  double at(int i, int j) const { return values[static_cast<size_t>(grid.index(i, j))]; }

  double max_abs() const;
};

// Discretely sampled planar mapping: one R^2 value per node.
struct MapField {
  Grid2 grid;
  std::vector<Vec2> values;

  explicit MapField(const Grid2& g)
      : grid(g), values(static_cast<size_t>(g.node_count())) {}

  Vec2& at(int i, int j) { return values[static_cast<size_t>(grid.index(i, j))]; }
  Vec2 at(int i, int j) const { return values[static_cast<size_t>(grid.index(i, j))]; }
};

// max over nodes of the Euclidean distance between two map fields
double sup_distance(const MapField& f, const MapField& g);

// --- `planimm field v1` text format ---------------------------------------
//
// UTF-8 text. Header line:
//   # planimm field v1 <nx> <ny> <x0> <y0> <x1> <y1> <ncomp>
// then one line per node in row-major order (j outer, i inner):
//   i j v1 [v2 ...]
// Values carry 17 significant digits so a write/read round-trip reproduces
// every double exactly.

struct RawField {
  Grid2 grid;
  int ncomp;
  std::vector<double> data;  // node-major, component inner
};

void write_field(std::ostream& os, const Grid2& grid, int ncomp,
                 const std::vector<double>& data);
RawField read_field(std::istream& is);

void write_scalar_field(std::ostream& os, const ScalarField& f);
void write_map_field(std::ostream& os, const MapField& f);
ScalarField read_scalar_field(std::istream& is);
MapField read_map_field(std::istream& is);

void save_scalar_field(const std::string& path, const ScalarField& f);
void save_map_field(const std::string& path, const MapField& f);
ScalarField load_scalar_field(const std::string& path);
MapField load_map_field(const std::string& path);

}  // namespace planimm
