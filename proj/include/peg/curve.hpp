#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "peg/geom.hpp"

// Simple closed piecewise-linear curves: validation, orientation, area,
// winding numbers, point location, nesting tests, Hausdorff distance, and
// arc extraction between on-curve points.

namespace peg {

// A point on a curve: parameter t in [0,1] along segment seg (from vertex seg
// to vertex seg+1 mod N).  Canonical form has t in [0,1): t == 1 is folded to
// (seg+1, 0).
template <class S>
struct CurvePoint {
  int seg = 0;
  S t{};
};

template <class S>
class PLCurve {
 public:
  PLCurve() = default;

  // Validates: >= 3 distinct vertices, simple (no self-intersections), and
  // normalizes orientation to counterclockwise keeping the first vertex first.
  static PLCurve from_vertices(std::vector<Vec2<S>> vs, const Tols& tol = {}) {
    PLCurve c;
    require(vs.size() >= 3, Err::DegenerateCurve, "need at least 3 vertices");
    c.v_ = std::move(vs);
    c.tol_ = tol;
    c.finish_setup();
    c.check_simple();
    if (c.signed_area_raw() < 0) {
      std::reverse(c.v_.begin() + 1, c.v_.end());
      c.finish_setup();
    }
    return c;
  }

  int size() const { return static_cast<int>(v_.size()); }
  const std::vector<Vec2<S>>& vertices() const { return v_; }
  const Vec2<S>& vertex(int i) const { return v_[mod(i)]; }
  std::pair<Vec2<S>, Vec2<S>> segment(int i) const { return {v_[mod(i)], v_[mod(i + 1)]}; }
  const Tols& tols() const { return tol_; }

  double diameter() const { return diam_; }
  double perimeter() const { return len_prefix_.back(); }
  double segment_length(int i) const { return len_prefix_[mod(i) + 1] - len_prefix_[mod(i)]; }

  // Enclosed area (positive; curves are normalized counterclockwise).
  S area() const {
    S a = signed_area_raw();
    return a < 0 ? S(-a) : a;
  }

  Vec2<S> point_at(const CurvePoint<S>& cp) const {
    auto [a, b] = segment(cp.seg);
    return a + cp.t * (b - a);
  }

  CurvePoint<S> canonical(CurvePoint<S> cp) const {
    int n = size();
    cp.seg = mod(cp.seg);
    if (cp.t >= 1) {
      cp.seg = mod(cp.seg + 1);
      cp.t = S(cp.t - 1);
    }
    if (cp.t < 0) {
      cp.seg = mod(cp.seg - 1);
      cp.t = S(cp.t + 1);
    }
    (void)n;
    return cp;
  }

  // Arclength position in [0, perimeter).
  double arc_pos(const CurvePoint<S>& cp) const {
    CurvePoint<S> c = canonical(cp);
    return len_prefix_[c.seg] + to_d(c.t) * segment_length(c.seg);
  }

  // Arclength position without folding t == 1 into the next segment, so a
  // range within one segment never wraps (can equal the perimeter).
  double arc_pos_unfolded(int seg, double t) const {
    seg = mod(seg);
    return len_prefix_[seg] + t * segment_length(seg);
  }

  // Point at given arclength position (mod perimeter), double parameterized.
  CurvePoint<double> at_arclength(double s) const {
    double L = perimeter();
    s = std::fmod(s, L);
    if (s < 0) s += L;
    int lo = int(std::upper_bound(len_prefix_.begin(), len_prefix_.end(), s) -
                 len_prefix_.begin()) - 1;
    lo = std::clamp(lo, 0, size() - 1);
    double seg_len = segment_length(lo);
    double t = seg_len > 0 ? (s - len_prefix_[lo]) / seg_len : 0.0;
    return {lo, std::clamp(t, 0.0, 1.0)};
  }

  // Distance from p to the curve; optionally reports the nearest CurvePoint.
  double distance_to(const P2& p, CurvePoint<double>* nearest = nullptr) const {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < size(); ++i) {
      auto [a, b] = segment(i);
      double t;
      double d = point_segment_dist(p, to_p2(a), to_p2(b), &t);
      if (d < best) {
        best = d;
        if (nearest) *nearest = {i, t};
      }
    }
    return best;
  }

  // Vertices of the arc from cp0 to cp1 (inclusive endpoints), traversed
  // forward (counterclockwise) or backward.  If both points lie on one
  // segment but in the wrong order for the requested direction, the arc wraps
  // all the way around the curve.
  std::vector<Vec2<S>> arc_points(const CurvePoint<S>& cp0, const CurvePoint<S>& cp1,
                                  bool forward = true) const {
    CurvePoint<S> a = canonical(cp0), b = canonical(cp1);
    std::vector<Vec2<S>> pts;
    pts.push_back(point_at(a));
    if (forward) {
      if (!(a.seg == b.seg && a.t <= b.t)) {
        int i = a.seg;
        do {
          i = mod(i + 1);
          pts.push_back(v_[i]);
        } while (i != b.seg);
      }
    } else {
      if (!(a.seg == b.seg && b.t <= a.t)) {
        int i = a.seg;
        do {
          pts.push_back(v_[i]);
          i = mod(i - 1);
        } while (i != b.seg);
      }
    }
    Vec2<S> last = point_at(b);
    if (!(pts.back() == last)) pts.push_back(last);
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2<S>& p, const Vec2<S>& q) { return p == q; }),
              pts.end());
    return pts;
  }

  int mod(int i) const {
    int n = size();
    i %= n;
    return i < 0 ? i + n : i;
  }

 private:
  void finish_setup() {
    int n = size();
    len_prefix_.assign(1, 0.0);
    for (int i = 0; i < n; ++i)
      len_prefix_.push_back(len_prefix_.back() + norm(Vec2<S>(v_[(i + 1) % n] - v_[i])));
    Box<double> bb{to_d(v_[0].x), to_d(v_[0].x), to_d(v_[0].y), to_d(v_[0].y)};
    for (auto& p : v_) bb.expand(to_p2(p));
    diam_ = std::max(bb.xhi - bb.xlo, bb.yhi - bb.ylo);
    require(diam_ > 0, Err::DegenerateCurve, "all vertices coincide");
  }

  S signed_area_raw() const {
    S a{};
    int n = size();
    for (int i = 0; i < n; ++i) a = S(a + cross(v_[i], v_[(i + 1) % n]));
    return S(a / S(2));
  }

  void check_simple() const {
    int n = size();
    double eps = scalar_traits<S>::exact ? 0.0 : tol_.identity * std::max(1.0, diam_);
    // Distinct vertices and no vertex interior to a non-incident segment.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (j == i || j == mod(i - 1)) continue;
        auto [a, b] = segment(j);
        if (point_segment_dist(to_p2(v_[i]), to_p2(a), to_p2(b)) <= eps)
          fail(Err::NonSimpleCurve, "vertex " + std::to_string(i) +
                                        " lies on segment " + std::to_string(j));
      }
    // Non-adjacent segments must be disjoint.
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (j == i + 1 || (i == 0 && j == n - 1)) continue;
        auto [a, b] = segment(i);
        auto [c, d] = segment(j);
        if (segment_intersect<S>(a, b, c, d, eps).kind != SegX::None)
          fail(Err::NonSimpleCurve, "segments " + std::to_string(i) + " and " +
                                        std::to_string(j) + " intersect");
      }
    // Adjacent segments: forbid backtracking overlap (covered by the vertex
    // test above when vertices are distinct; catch coincident vertices here).
    for (int i = 0; i < n; ++i)
      if (norm(Vec2<S>(v_[(i + 1) % n] - v_[i])) <= eps)
        fail(Err::NonSimpleCurve, "coincident consecutive vertices at " + std::to_string(i));
  }

  std::vector<Vec2<S>> v_;
  std::vector<double> len_prefix_;
  double diam_ = 0.0;
  Tols tol_;
};

// ---- winding numbers --------------------------------------------------------

// Winding number of a closed polyline (not necessarily simple) about p.
// Throws PointOnLoop if p lies on the polyline (within eps).
template <class S>
int winding_number(const std::vector<Vec2<S>>& loop, const Vec2<S>& p, double eps) {
  int n = static_cast<int>(loop.size());
  for (int i = 0; i < n; ++i) {
    const Vec2<S>&a = loop[i], &b = loop[(i + 1) % n];
    if (point_segment_dist(to_p2(p), to_p2(a), to_p2(b)) <= eps)
      fail(Err::PointOnLoop, "winding undefined: point on loop");
  }
  int w = 0;
  for (int i = 0; i < n; ++i) {
    const Vec2<S>&a = loop[i], &b = loop[(i + 1) % n];
    if (a.y <= p.y) {
      if (b.y > p.y && cross(Vec2<S>(b - a), Vec2<S>(p - a)) > 0) ++w;
    } else {
      if (b.y <= p.y && cross(Vec2<S>(b - a), Vec2<S>(p - a)) < 0) --w;
    }
  }
  return w;
}

enum class Where { Inside, On, Outside };

template <class S>
Where locate_point(const PLCurve<S>& c, const Vec2<S>& p, double eps) {
  for (int i = 0; i < c.size(); ++i) {
    auto [a, b] = c.segment(i);
    if (point_segment_dist(to_p2(p), to_p2(a), to_p2(b)) <= eps) return Where::On;
  }
  return winding_number(c.vertices(), p, 0.0) != 0 ? Where::Inside : Where::Outside;
}

// ---- nesting ----------------------------------------------------------------

// Whether `inner` is contained in the closed region bounded by `outer`
// (strict = contained in the open region, boundary contact forbidden).
//
// Closed containment is decided rigorously: for every segment of `inner`,
// collect the parameters of all intersections with `outer` (points and
// overlap-interval endpoints); between consecutive parameters the side is
// constant, so testing each gap midpoint decides containment exactly (up to
// the incidence tolerance).
template <class S>
bool is_nested(const PLCurve<S>& inner, const PLCurve<S>& outer, bool strict,
               const Tols& tol = {}) {
  double eps = scalar_traits<S>::exact ? 0.0
                                       : tol.identity * std::max(1.0, std::max(inner.diameter(),
                                                                               outer.diameter()));
  double loc_eps = std::max(eps, tol.identity * std::max(1.0, outer.diameter()));
  if (strict) {
    for (int i = 0; i < inner.size(); ++i) {
      auto [a, b] = inner.segment(i);
      for (int j = 0; j < outer.size(); ++j) {
        auto [c, d] = outer.segment(j);
        if (segment_intersect<S>(a, b, c, d, eps).kind != SegX::None) return false;
      }
    }
    return locate_point(outer, inner.vertex(0), loc_eps) == Where::Inside;
  }
  for (int i = 0; i < inner.size(); ++i) {
    auto [a, b] = inner.segment(i);
    std::vector<double> params{0.0, 1.0};
    for (int j = 0; j < outer.size(); ++j) {
      auto [c, d] = outer.segment(j);
      auto r = segment_intersect<S>(a, b, c, d, eps);
      if (r.kind == SegX::Point) params.push_back(std::clamp(to_d(r.s), 0.0, 1.0));
      if (r.kind == SegX::Overlap) {
        params.push_back(std::clamp(to_d(r.s), 0.0, 1.0));
        params.push_back(std::clamp(to_d(r.s2), 0.0, 1.0));
      }
    }
    std::sort(params.begin(), params.end());
    P2 pa = to_p2(a), pb = to_p2(b);
    for (size_t k = 0; k + 1 < params.size(); ++k) {
      double tm = (params[k] + params[k + 1]) / 2;
      if (params[k + 1] - params[k] < 1e-14) continue;
      P2 q = pa + tm * (pb - pa);
      Vec2<S> qs{scalar_traits<S>::from_double(q.x), scalar_traits<S>::from_double(q.y)};
      if (locate_point(outer, qs, loc_eps) == Where::Outside) return false;
    }
  }
  return true;
}

// ---- Hausdorff distance ------------------------------------------------------

namespace detail {
// max_{x in [p,q]} dist(x, B) via branch and bound; the distance to each
// segment of B is convex along [p,q], so min_j max(d_j(p), d_j(q)) bounds the
// interval maximum from above.
template <class S>
double directed_hausdorff(const PLCurve<S>& A, const PLCurve<S>& B, double tol) {
  struct Item {
    P2 p, q;
    double ub;
  };
  auto dist_to_B = [&](const P2& x) {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < B.size(); ++j) {
      auto [c, d] = B.segment(j);
      best = std::min(best, point_segment_dist(x, to_p2(c), to_p2(d)));
    }
    return best;
  };
  auto ub_of = [&](const P2& p, const P2& q) {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < B.size(); ++j) {
      auto [c, d] = B.segment(j);
      P2 pc = to_p2(c), pd = to_p2(d);
      best = std::min(best, std::max(point_segment_dist(p, pc, pd),
                                     point_segment_dist(q, pc, pd)));
    }
    return best;
  };
  double lb = 0.0;
  std::deque<Item> work;
  for (int i = 0; i < A.size(); ++i) {
    auto [a, b] = A.segment(i);
    P2 p = to_p2(a), q = to_p2(b);
    lb = std::max(lb, std::max(dist_to_B(p), dist_to_B(q)));
    work.push_back({p, q, ub_of(p, q)});
  }
  while (!work.empty()) {
    Item it = work.front();
    work.pop_front();
    if (it.ub <= lb + tol) continue;
    P2 m = 0.5 * (it.p + it.q);
    lb = std::max(lb, dist_to_B(m));
    if (dist(it.p, it.q) < tol) continue;
    double u1 = ub_of(it.p, m), u2 = ub_of(m, it.q);
    if (u1 > lb + tol) work.push_back({it.p, m, u1});
    if (u2 > lb + tol) work.push_back({m, it.q, u2});
  }
  return lb;
}
}  // namespace detail

template <class S>
double hausdorff_distance(const PLCurve<S>& A, const PLCurve<S>& B, double tol = 1e-13) {
  double t = tol * std::max(1.0, std::max(A.diameter(), B.diameter()));
  return std::max(detail::directed_hausdorff(A, B, t), detail::directed_hausdorff(B, A, t));
}

}  // namespace peg
