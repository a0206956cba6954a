#pragma once

// Exact sign predicates over rationals (GMP). Doubles convert to mpq_class
// losslessly, so every sign below is the true sign of the real expression.
// Geometric fixings must be sound certificates, hence no floating filters.

#include <gmpxx.h>

#include <array>

#include "ccp/types.hpp"

namespace ccp::exact {

using Q = mpq_class;
using Vec2q = std::array<Q, 2>;
using Vec3q = std::array<Q, 3>;

inline int sign(const Q& q) { return sgn(q); }

inline Vec2q to_q2(const Point& p) { return {Q(p[0]), Q(p[1])}; }
inline Vec3q to_q3(const Point& p) {
  return {Q(p[0]), Q(p[1]), Q(p.dim == 3 ? p[2] : 0.0)};
}

inline Vec2q sub(const Vec2q& a, const Vec2q& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec3q sub(const Vec3q& a, const Vec3q& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline Q cross(const Vec2q& a, const Vec2q& b) { return a[0] * b[1] - a[1] * b[0]; }
inline Q dot(const Vec2q& a, const Vec2q& b) { return a[0] * b[0] + a[1] * b[1]; }

inline Vec3q cross(const Vec3q& a, const Vec3q& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}
inline Q dot(const Vec3q& a, const Vec3q& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline bool is_zero(const Vec2q& a) { return sgn(a[0]) == 0 && sgn(a[1]) == 0; }
inline bool is_zero(const Vec3q& a) {
  return sgn(a[0]) == 0 && sgn(a[1]) == 0 && sgn(a[2]) == 0;
}

/// Sign of the signed area of triangle (a, b, c): +1 counterclockwise,
/// -1 clockwise, 0 collinear.
inline int orient2d(const Point& a, const Point& b, const Point& c) {
  return sign(cross(sub(to_q2(b), to_q2(a)), sub(to_q2(c), to_q2(a))));
}

/// Sign of det[b-a, c-a, d-a]: +1 when d lies on the side of plane (a,b,c)
/// pointed to by (b-a) x (c-a), -1 opposite, 0 coplanar.
inline int orient3d(const Point& a, const Point& b, const Point& c, const Point& d) {
  Vec3q u = sub(to_q3(b), to_q3(a));
  Vec3q v = sub(to_q3(c), to_q3(a));
  Vec3q w = sub(to_q3(d), to_q3(a));
  return sign(dot(cross(u, v), w));
}

/// CCW angular comparison of nonzero direction vectors, starting at the
/// positive x-axis. Returns true when a strictly precedes b.
inline bool angle_less(const Vec2q& a, const Vec2q& b) {
  auto half = [](const Vec2q& v) {
    int sy = sgn(v[1]);
    if (sy > 0 || (sy == 0 && sgn(v[0]) > 0)) return 0;
    return 1;
  };
  int ha = half(a), hb = half(b);
  if (ha != hb) return ha < hb;
  return sign(cross(a, b)) > 0;
}

inline bool same_direction(const Vec2q& a, const Vec2q& b) {
  return sign(cross(a, b)) == 0 && sign(dot(a, b)) > 0;
}

}  // namespace ccp::exact
