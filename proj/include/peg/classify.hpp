#pragma once

#include "peg/graphpair.hpp"
#include "peg/inscribe.hpp"

// Classification of inscriptions: gracefulness (the four vertices appear
// along the curve in rectangle-perimeter order), elegance (gracefulness plus
// an unlinking condition on the four boundary arcs), the Lipschitz threshold
// tan((theta + pi)/4) separating graph pairs that force graceful inscriptions,
// and the slope certificate for individual theta-rectangles.

namespace peg {

enum class Elegance { Elegant, NotElegant, NotEvaluated };

inline const char* elegance_name(Elegance e) {
  switch (e) {
    case Elegance::Elegant: return "elegant";
    case Elegance::NotElegant: return "not_elegant";
    case Elegance::NotEvaluated: return "not_evaluated";
  }
  return "?";
}

// Critical Lipschitz constant for angle theta in [0, pi/2]: graph pairs with
// both constants strictly below it admit only graceful inscriptions.
inline double lipschitz_threshold(double theta) {
  require(theta >= 0.0 && theta <= std::numbers::pi / 2 + 1e-12, Err::ThetaOutOfRange,
          "threshold defined for theta in [0, pi/2]");
  return std::tan((theta + std::numbers::pi) / 4);
}

// Indices of the four points sorted by arclength position along the curve.
// Throws CoincidentPoints if two of them coincide (within the dedup
// tolerance) unless `coincident` is supplied, which is then set instead.
template <class S>
std::array<int, 4> cyclic_order(const PLCurve<S>& c, const std::array<CurvePoint<S>, 4>& cps,
                                bool* coincident = nullptr) {
  double L = c.perimeter();
  std::array<double, 4> pos;
  for (int k = 0; k < 4; ++k) pos[k] = c.arc_pos(cps[k]);
  double eps = c.tols().dedup * std::max(1.0, L);
  bool coin = false;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      double d = std::abs(pos[i] - pos[j]);
      if (std::min(d, L - d) <= eps) coin = true;
    }
  if (coin) {
    if (coincident) {
      *coincident = true;
      return {0, 1, 2, 3};
    }
    fail(Err::CoincidentPoints, "two of the four points coincide on the curve");
  }
  if (coincident) *coincident = false;
  std::array<int, 4> idx{0, 1, 2, 3};
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return pos[a] < pos[b]; });
  return idx;
}

// Graceful: the cyclic order of (z, w, z', w') along the curve traces the
// rectangle perimeter, i.e. the diagonal partners z and w are separated.
// Coincident-vertex degenerate cases count as graceful by convention.
template <class S>
bool is_graceful(const PLCurve<S>& c, const Inscription<S>& ins) {
  bool coincident = false;
  auto order = cyclic_order(c, ins.cp, &coincident);
  if (coincident) return true;
  int iz = 0, iw = 0;
  for (int k = 0; k < 4; ++k) {
    if (order[k] == 0) iz = k;
    if (order[k] == 1) iw = k;
  }
  return (iz + 2) % 4 == iw;
}

// Elegant: graceful, and the four curve arcs between consecutive rectangle
// vertices, each closed up by the corresponding rectangle side, have winding
// number zero about both non-incident rectangle vertices.  For curves that
// are graph pairs, graceful already implies elegant.  Returns NotEvaluated
// when the sufficient test cannot be applied (degenerate contacts).
template <class S>
Elegance is_elegant(const PLCurve<S>& c, const Inscription<S>& ins) {
  if (!is_graceful(c, ins)) return Elegance::NotElegant;
  if (try_graph_pair(c)) return Elegance::Elegant;
  bool coincident = false;
  auto order = cyclic_order(c, ins.cp, &coincident);
  if (coincident) return Elegance::NotEvaluated;
  double eps = c.tols().identity * std::max(1.0, c.diameter());
  try {
    for (int k = 0; k < 4; ++k) {
      int a = order[k], b = order[(k + 1) % 4];
      std::vector<Vec2<S>> loop = c.arc_points(ins.cp[a], ins.cp[b], true);
      loop.push_back(ins.verts[a]);  // close with the rectangle side b -> a
      for (int other = 0; other < 4; ++other) {
        if (other == a || other == b) continue;
        if (winding_number(loop, ins.verts[other], eps) != 0) return Elegance::NotEvaluated;
      }
    }
  } catch (const ContractError& e) {
    if (e.code() == Err::PointOnLoop) return Elegance::NotEvaluated;
    throw;
  }
  return Elegance::Elegant;
}

// Construct a theta-rectangle: chord endpoints z, w at angle phi around
// center, rotated copies at phi - theta.
inline std::array<P2, 4> make_theta_rectangle(const P2& center, double d, double phi,
                                              double theta) {
  P2 h{d / 2 * std::cos(phi), d / 2 * std::sin(phi)};
  P2 h2{d / 2 * std::cos(phi - theta), d / 2 * std::sin(phi - theta)};
  return {center + h, center - h, center + h2, center - h2};
}

enum class SlopeTriple { Lower, Upper };

// Slope certificate: sort the four vertices of a theta-rectangle by x (ties
// by y) and return the maximum absolute chord slope of the chosen triple
// (v1,v2,v3) or (v2,v3,v4).  A vertical chord yields +infinity.  The larger
// of the two certificates is >= tan((pi + theta)/4) for every theta-rectangle.
inline double slope_certificate(const std::array<P2, 4>& q, SlopeTriple which,
                                double defect_tol = 1e-9) {
  // Validate rectangle structure: shared diagonal midpoints, equal diagonals.
  P2 m1 = 0.5 * (q[0] + q[1]), m2 = 0.5 * (q[2] + q[3]);
  double d1 = dist(q[0], q[1]), d2 = dist(q[2], q[3]);
  double scale = std::max({1.0, d1, d2});
  require(dist(m1, m2) <= defect_tol * scale && std::abs(d1 - d2) <= defect_tol * scale,
          Err::InvalidConfiguration, "vertices do not form a theta-rectangle");
  std::array<P2, 4> v = q;
  std::sort(v.begin(), v.end(), [](const P2& a, const P2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  auto slope = [](const P2& a, const P2& b) {
    double dx = b.x - a.x;
    if (dx == 0.0) return std::numeric_limits<double>::infinity();
    return std::abs((b.y - a.y) / dx);
  };
  if (which == SlopeTriple::Lower) return std::max(slope(v[0], v[1]), slope(v[1], v[2]));
  return std::max(slope(v[1], v[2]), slope(v[2], v[3]));
}

}  // namespace peg
