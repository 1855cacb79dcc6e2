#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "peg/numeric.hpp"

// Plane primitives over a generic scalar (double or Rat): vectors, the chord
// rotation used everywhere, and segment predicates/intersections.

namespace peg {

template <class S>
struct Vec2 {
  S x{}, y{};

  friend Vec2 operator+(const Vec2& a, const Vec2& b) { return {S(a.x + b.x), S(a.y + b.y)}; }
  friend Vec2 operator-(const Vec2& a, const Vec2& b) { return {S(a.x - b.x), S(a.y - b.y)}; }
  friend Vec2 operator*(const S& k, const Vec2& a) { return {S(k * a.x), S(k * a.y)}; }
  Vec2 operator-() const { return {S(-x), S(-y)}; }
  friend bool operator==(const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }
  friend bool operator!=(const Vec2& a, const Vec2& b) { return !(a == b); }
};

using P2 = Vec2<double>;

template <class S>
inline S dot(const Vec2<S>& a, const Vec2<S>& b) {
  return S(a.x * b.x + a.y * b.y);
}
template <class S>
inline S cross(const Vec2<S>& a, const Vec2<S>& b) {
  return S(a.x * b.y - a.y * b.x);
}
template <class S>
inline S norm2(const Vec2<S>& a) {
  return dot(a, a);
}
template <class S>
inline double norm(const Vec2<S>& a) {
  return std::sqrt(to_d(norm2(a)));
}
template <class S>
inline P2 to_p2(const Vec2<S>& a) {
  return {to_d(a.x), to_d(a.y)};
}

// Multiplication by -i (rotation by -90 degrees).
template <class S>
inline Vec2<S> rot_cw(const Vec2<S>& v) {
  return {v.y, S(-v.x)};
}

// e^{-i theta} * v for an Angle carrying (c, s) = (cos, sin).
template <class S>
inline Vec2<S> rotate_neg(const Vec2<S>& v, const Angle<S>& a) {
  return {S(a.c * v.x + a.s * v.y), S(a.c * v.y - a.s * v.x)};
}

// e^{+i theta} * v.
template <class S>
inline Vec2<S> rotate_pos(const Vec2<S>& v, const Angle<S>& a) {
  return {S(a.c * v.x - a.s * v.y), S(a.c * v.y + a.s * v.x)};
}

// The chord rotation: (z, w) -> (z', w') rotates the chord zw by -theta about
// its midpoint.  Midpoint and chord length are preserved (exactly in rational
// mode; the right angle is exact in double mode too).
template <class S>
inline std::pair<Vec2<S>, Vec2<S>> rotate_pair(const Vec2<S>& z, const Vec2<S>& w,
                                               const Angle<S>& a) {
  S half(S(1) / S(2));
  Vec2<S> m = half * (z + w);
  Vec2<S> h = rotate_neg(half * (z - w), a);
  return {m + h, m - h};
}

// ---- double-only distance helpers -----------------------------------------

inline double dist(const P2& a, const P2& b) { return norm(a - b); }

// Distance from p to segment [a, b]; also reports the closest parameter.
inline double point_segment_dist(const P2& p, const P2& a, const P2& b, double* t_out = nullptr) {
  P2 u = b - a;
  double uu = norm2(u);
  double t = uu > 0 ? std::clamp(dot(p - a, u) / uu, 0.0, 1.0) : 0.0;
  if (t_out) *t_out = t;
  return dist(p, a + t * u);
}

inline double segment_segment_dist(const P2& a, const P2& b, const P2& c, const P2& d) {
  auto sgn = [](double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
  int o1 = sgn(cross(b - a, c - a)), o2 = sgn(cross(b - a, d - a));
  int o3 = sgn(cross(d - c, a - c)), o4 = sgn(cross(d - c, b - c));
  if (o1 * o2 < 0 && o3 * o4 < 0) return 0.0;  // proper crossing
  double r = point_segment_dist(c, a, b);
  r = std::min(r, point_segment_dist(d, a, b));
  r = std::min(r, point_segment_dist(a, c, d));
  r = std::min(r, point_segment_dist(b, c, d));
  return r;
}

// ---- segment intersection with parameters ----------------------------------

enum class SegX { None, Point, Overlap };

// Intersection of [a,b] and [c,d].  For Point, (s, t) are the parameters on
// each segment.  For Overlap (collinear), [s, s2] and [t, t2] bound the shared
// sub-segment parameters.  eps is an absolute coordinate tolerance (0 for
// exact scalars).
template <class S>
struct SegXResult {
  SegX kind = SegX::None;
  S s{}, t{}, s2{}, t2{};
};

template <class S>
SegXResult<S> segment_intersect(const Vec2<S>& a, const Vec2<S>& b, const Vec2<S>& c,
                                const Vec2<S>& d, double eps) {
  SegXResult<S> r;
  Vec2<S> u = b - a, v = d - c, w = c - a;
  S den = cross(u, v);
  double scale = std::max({norm(u), norm(v), 1.0});
  bool nonparallel;
  if constexpr (scalar_traits<S>::exact)
    nonparallel = den != 0;
  else
    nonparallel = std::abs(to_d(den)) > eps * scale * scale;
  if (nonparallel) {
    S s = S(cross(w, v) / den);
    S t = S(cross(w, u) / den);
    double se = eps * (norm(u) > 0 ? scale / norm(u) : 1.0);
    double te = eps * (norm(v) > 0 ? scale / norm(v) : 1.0);
    if (to_d(s) < -se || to_d(s) > 1 + se || to_d(t) < -te || to_d(t) > 1 + te) return r;
    r.kind = SegX::Point;
    r.s = s;
    r.t = t;
    return r;
  }
  // Parallel: collinear iff c is on line(a,b).
  double du = norm(u);
  if constexpr (scalar_traits<S>::exact) {
    if (du > 0 && cross(w, u) != 0) return r;
    if (du == 0 && c != a && cross(Vec2<S>(d - c), Vec2<S>(a - c)) != 0) return r;
  } else {
    double h = du > 0 ? std::abs(to_d(cross(w, u))) / du : norm(w);
    if (h > eps * std::max(1.0, scale)) return r;
  }
  if (du == 0) {  // a==b degenerate segment
    double t;
    if (point_segment_dist(to_p2(a), to_p2(c), to_p2(d), &t) <= eps) {
      r.kind = SegX::Point;
      r.s = S(0);
      r.t = scalar_traits<S>::from_double(t);
    }
    return r;
  }
  S uu = norm2(u);
  S t0 = S(dot(w, u) / uu);
  S t1 = S(dot(Vec2<S>(d - a), u) / uu);
  S lo = std::min(t0, t1), hi = std::max(t0, t1);
  double pe = eps / du;
  if (to_d(hi) < -pe || to_d(lo) > 1 + pe) return r;
  S clo = std::max(lo, S(0)), chi = std::min(hi, S(1));
  auto on_cd = [&](const S& sp) {  // parameter on [c,d] of point a + sp*u
    Vec2<S> p = a + sp * u;
    S vv = norm2(v);
    return vv > 0 ? S(dot(Vec2<S>(p - c), v) / vv) : S(0);
  };
  if (clo == chi || norm(Vec2<S>((a + chi * u) - (a + clo * u))) <= eps) {
    r.kind = SegX::Point;
    r.s = clo;
    r.t = on_cd(clo);
    return r;
  }
  r.kind = SegX::Overlap;
  r.s = clo;
  r.s2 = chi;
  r.t = on_cd(clo);
  r.t2 = on_cd(chi);
  return r;
}

// Axis-aligned box.
template <class S>
struct Box {
  S xlo{}, xhi{}, ylo{}, yhi{};
  void expand(const Vec2<S>& p) {
    xlo = std::min(xlo, p.x);
    xhi = std::max(xhi, p.x);
    ylo = std::min(ylo, p.y);
    yhi = std::max(yhi, p.y);
  }
  static Box of(const Vec2<S>& a, const Vec2<S>& b) {
    return {std::min(a.x, b.x), std::max(a.x, b.x), std::min(a.y, b.y), std::max(a.y, b.y)};
  }
};

inline bool boxes_overlap(const Box<double>& a, const Box<double>& b, double pad) {
  return a.xlo <= b.xhi + pad && b.xlo <= a.xhi + pad && a.ylo <= b.yhi + pad &&
         b.ylo <= a.yhi + pad;
}

}  // namespace peg
