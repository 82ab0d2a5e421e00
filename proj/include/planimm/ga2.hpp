#pragma once

#include "planimm/linalg.hpp"

namespace planimm {

// Element of the geometric algebra Cl(2,0) over the fixed basis {1, e1, e2, e1e2}.
// The unit bivector e1e2 is written J throughout; J^2 = -1 and J anticommutes
// with every vector.
struct Multivector2 {
  double s = 0.0;   // grade 0
  double v1 = 0.0;  // e1 coefficient
  double v2 = 0.0;  // e2 coefficient
  double b = 0.0;   // e1e2 coefficient
};

inline Multivector2 mv_scalar(double a) { return {a, 0.0, 0.0, 0.0}; }
inline Multivector2 mv_vector(Vec2 v) { return {0.0, v.x, v.y, 0.0}; }
inline Multivector2 mv_bivector(double beta) { return {0.0, 0.0, 0.0, beta}; }

inline Multivector2 operator+(const Multivector2& p, const Multivector2& q) {
  return {p.s + q.s, p.v1 + q.v1, p.v2 + q.v2, p.b + q.b};
}
inline Multivector2 operator-(const Multivector2& p, const Multivector2& q) {
  return {p.s - q.s, p.v1 - q.v1, p.v2 - q.v2, p.b - q.b};
}
inline Multivector2 operator*(double c, const Multivector2& p) {
  return {c * p.s, c * p.v1, c * p.v2, c * p.b};
}

inline double norm_inf(const Multivector2& p) {
  return std::max(std::max(std::abs(p.s), std::abs(p.v1)),
                  std::max(std::abs(p.v2), std::abs(p.b)));
}

// Geometric product. The 4x4 basis table is written out entry by entry; every
// sign follows from e1^2 = e2^2 = 1 and e1e2 = -e2e1:
//   e1(e1e2) = e2      (e1e2)e1 = -e2
//   e2(e1e2) = -e1     (e1e2)e2 = e1
//   (e1e2)(e1e2) = -1
inline Multivector2 mv_product(const Multivector2& p, const Multivector2& q) {
  return {
      p.s * q.s + p.v1 * q.v1 + p.v2 * q.v2 - p.b * q.b,
      p.s * q.v1 + p.v1 * q.s - p.v2 * q.b + p.b * q.v2,
      p.s * q.v2 + p.v2 * q.s + p.v1 * q.b - p.b * q.v1,
      p.s * q.b + p.b * q.s + p.v1 * q.v2 - p.v2 * q.v1,
  };
}

// Selects the grade-k part; k outside {0, 1, 2} gives the zero multivector.
inline Multivector2 grade_project(const Multivector2& p, int k) {
  switch (k) {
    case 0:
      return {p.s, 0.0, 0.0, 0.0};
    case 1:
      return {0.0, p.v1, p.v2, 0.0};
    case 2:
      return {0.0, 0.0, 0.0, p.b};
    default:
      return {};
  }
}

// Left action of J on a vector: a clockwise quarter turn, (v1, v2) -> (v2, -v1).
// Agrees with mv_product(mv_bivector(1), mv_vector(v)).
inline Vec2 j_rotate(Vec2 v) { return {v.y, -v.x}; }
inline CVec2 j_rotate(CVec2 v) { return {v.y, -v.x}; }

// Matrix of the J action on vectors.
inline Mat2 j_matrix() { return {0.0, 1.0, -1.0, 0.0}; }

}  // namespace planimm
