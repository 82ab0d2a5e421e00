#pragma once

#include <string>

#include "planimm/errors.hpp"
#include "planimm/linalg.hpp"

namespace planimm {

// Uniform node grid on an axis-aligned rectangle [x0,x1] x [y0,y1].
// Node (i, j) sits at (x0 + i*hx, y0 + j*hy); fields store nodes row-major,
// j outer and i inner, matching the on-disk format.
struct Grid2 {
  int nx, ny;
  double x0, y0, x1, y1;
  double hx, hy;

  Grid2(int nx_, int ny_, double x0_, double y0_, double x1_, double y1_)
      : nx(nx_), ny(ny_), x0(x0_), y0(y0_), x1(x1_), y1(y1_) {
    if (nx < 3 || ny < 3)
      throw Error("Grid2: nx and ny must be >= 3 (one-sided stencils need 3 points)");
    if (!(x1 > x0) || !(y1 > y0)) throw Error("Grid2: degenerate rectangle");
    hx = (x1 - x0) / (nx - 1);
    hy = (y1 - y0) / (ny - 1);
  }

  static Grid2 unit_square(int n) { return Grid2(n, n, 0.0, 0.0, 1.0, 1.0); }

  int node_count() const { return nx * ny; }
  int interior_count() const { return (nx - 2) * (ny - 2); }
  int index(int i, int j) const { return j * nx + i; }

  double x(int i) const { return x0 + i * hx; }
  double y(int j) const { return y0 + j * hy; }
  Vec2 node(int i, int j) const { return {x(i), y(j)}; }

  bool is_boundary(int i, int j) const {
    return i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
  }
  bool contains(Vec2 p) const {
    return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
  }
  bool strictly_contains(Vec2 p) const {
    return p.x > x0 && p.x < x1 && p.y > y0 && p.y < y1;
  }

  friend bool operator==(const Grid2&, const Grid2&) = default;
};

inline void require_same_grid(const Grid2& a, const Grid2& b, const char* where) {
  if (!(a == b)) throw GridMismatchError(std::string(where) + ": grids differ");
}

}  // namespace planimm
