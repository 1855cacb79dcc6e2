#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "peg/curve.hpp"

// Pairs of Lipschitz graphs bounding a region: y = f(x) above, y = g(x)
// below on [a, b], equal exactly at the two ends.  These are the curves the
// tendril isotopies and the certification pipeline operate on.

namespace peg {

// Piecewise-linear function given by breakpoints with strictly increasing x.
template <class S>
struct PLFunction {
  std::vector<Vec2<S>> pts;

  void validate() const {
    require(pts.size() >= 2, Err::InvalidConfiguration, "PL function needs >= 2 points");
    for (size_t i = 0; i + 1 < pts.size(); ++i)
      require(pts[i].x < pts[i + 1].x, Err::InvalidConfiguration,
              "PL function breakpoints must have strictly increasing x");
  }

  S domain_lo() const { return pts.front().x; }
  S domain_hi() const { return pts.back().x; }

  S eval(const S& x) const {
    require(x >= domain_lo() && x <= domain_hi(), Err::InvalidConfiguration,
            "PL function evaluated outside its domain");
    auto it = std::upper_bound(pts.begin(), pts.end(), x,
                               [](const S& v, const Vec2<S>& p) { return v < p.x; });
    size_t i = it == pts.begin() ? 0 : size_t(it - pts.begin()) - 1;
    if (i + 1 >= pts.size()) i = pts.size() - 2;
    const Vec2<S>&p = pts[i], &q = pts[i + 1];
    S t = S((x - p.x) / (q.x - p.x));
    return S(p.y + t * (q.y - p.y));
  }

  // Maximum absolute slope.
  double lipschitz() const {
    double L = 0;
    for (size_t i = 0; i + 1 < pts.size(); ++i)
      L = std::max(L, std::abs(to_d(S((pts[i + 1].y - pts[i].y) / (pts[i + 1].x - pts[i].x)))));
    return L;
  }
};

template <class S>
struct GraphPair {
  PLFunction<S> f;  // upper graph
  PLFunction<S> g;  // lower graph

  void validate(const Tols& tol = {}) const {
    f.validate();
    g.validate();
    require(f.domain_lo() == g.domain_lo() && f.domain_hi() == g.domain_hi(),
            Err::InvalidConfiguration, "graph pair domains differ");
    require(f.pts.front().y == g.pts.front().y && f.pts.back().y == g.pts.back().y,
            Err::InvalidConfiguration, "graphs must agree at domain endpoints");
    // f > g strictly in the interior: check at all breakpoints of both.
    std::vector<S> xs;
    for (auto& p : f.pts) xs.push_back(p.x);
    for (auto& p : g.pts) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (auto& x : xs) {
      if (x == f.domain_lo() || x == f.domain_hi()) continue;
      require(f.eval(x) > g.eval(x), Err::InvalidConfiguration,
              "upper graph must lie strictly above lower graph in the interior");
    }
    (void)tol;
  }

  S domain_lo() const { return f.domain_lo(); }
  S domain_hi() const { return f.domain_hi(); }

  // Counterclockwise curve: lower graph left-to-right, upper right-to-left.
  PLCurve<S> to_curve(const Tols& tol = {}) const {
    std::vector<Vec2<S>> vs;
    for (auto& p : g.pts) vs.push_back(p);
    for (auto it = f.pts.rbegin(); it != f.pts.rend(); ++it) {
      if (it->x == g.pts.back().x || it->x == g.pts.front().x) continue;
      vs.push_back(*it);
    }
    return PLCurve<S>::from_vertices(std::move(vs), tol);
  }
};

// If the curve is a graph pair (two strictly x-monotone chains between the
// unique x-extreme vertices), return it; otherwise nullopt.
template <class S>
std::optional<GraphPair<S>> try_graph_pair(const PLCurve<S>& c) {
  int n = c.size(), imin = 0, imax = 0;
  for (int i = 1; i < n; ++i) {
    if (c.vertex(i).x < c.vertex(imin).x ||
        (c.vertex(i).x == c.vertex(imin).x && c.vertex(i).y < c.vertex(imin).y))
      imin = i;
    if (c.vertex(i).x > c.vertex(imax).x ||
        (c.vertex(i).x == c.vertex(imax).x && c.vertex(i).y > c.vertex(imax).y))
      imax = i;
  }
  // Unique extremes required.
  for (int i = 0; i < n; ++i) {
    if (i != imin && c.vertex(i).x == c.vertex(imin).x) return std::nullopt;
    if (i != imax && c.vertex(i).x == c.vertex(imax).x) return std::nullopt;
  }
  auto chain = [&](int from, int to) {
    std::vector<Vec2<S>> pts;
    for (int i = from;; i = c.mod(i + 1)) {
      pts.push_back(c.vertex(i));
      if (c.mod(i) == c.mod(to)) break;
    }
    return pts;
  };
  std::vector<Vec2<S>> c1 = chain(imin, imax), c2 = chain(imax, imin);
  std::reverse(c2.begin(), c2.end());  // both now left-to-right
  auto monotone = [](const std::vector<Vec2<S>>& pts) {
    for (size_t i = 0; i + 1 < pts.size(); ++i)
      if (!(pts[i].x < pts[i + 1].x)) return false;
    return true;
  };
  if (!monotone(c1) || !monotone(c2)) return std::nullopt;
  // Decide which chain is the upper one by comparing at an interior point.
  PLFunction<S> h1{c1}, h2{c2};
  GraphPair<S> gp;
  S xm = S((c.vertex(imin).x + c.vertex(imax).x) / S(2));
  if (h1.eval(xm) >= h2.eval(xm)) {
    gp.f = h1;
    gp.g = h2;
  } else {
    gp.f = h2;
    gp.g = h1;
  }
  try {
    gp.validate();
  } catch (const ContractError&) {
    return std::nullopt;
  }
  return gp;
}

// Pointwise nesting of graph pairs on the union of their breakpoints: the
// region of `inner` is contained in the region of `outer`.  Fast path used by
// the isotopy audits when both curves are graphical.
template <class S>
bool graph_pair_nested(const GraphPair<S>& inner, const GraphPair<S>& outer, bool strict,
                       double eps = 0.0) {
  if (to_d(inner.domain_lo()) < to_d(outer.domain_lo()) - eps ||
      to_d(inner.domain_hi()) > to_d(outer.domain_hi()) + eps)
    return false;
  std::vector<S> xs;
  for (auto& p : inner.f.pts) xs.push_back(p.x);
  for (auto& p : inner.g.pts) xs.push_back(p.x);
  for (auto& p : outer.f.pts)
    if (p.x >= inner.domain_lo() && p.x <= inner.domain_hi()) xs.push_back(p.x);
  for (auto& p : outer.g.pts)
    if (p.x >= inner.domain_lo() && p.x <= inner.domain_hi()) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (auto& x : xs) {
    double fi = to_d(inner.f.eval(x)), gi = to_d(inner.g.eval(x));
    double fo = to_d(outer.f.eval(x)), go = to_d(outer.g.eval(x));
    if (strict) {
      if (!(fi < fo - eps && gi > go + eps)) return false;
    } else {
      if (fi > fo + eps || gi < go - eps) return false;
    }
  }
  return true;
}

}  // namespace peg
