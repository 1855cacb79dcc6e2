#pragma once

#include "peg/classify.hpp"
#include "peg/inscribe.hpp"

#include <optional>

// Symplectic action of an inscription.  Each inscription (z, w, z', w') at
// angle theta bounds two "caps": loop1 follows the rotation arc from z to z'
// (circle about the chord midpoint m, radius d/2, turning by -theta) and
// returns along the curve from z' to z; loop2 does the same for w, w'.  The
// action is
//
//   A = theta d^2/4 + SA(loop1) + SA(loop2) - nu * Area(curve)
//
// where SA is the signed area integral (1/2) oint (x dy - y dx) and nu is the
// winding number about the origin of the difference loop t -> z(t) - w(t)
// (rotation flow followed by the co-parametrized curve returns).  The value
// is independent of the direction chosen for the curve returns: switching a
// return arc changes SA and nu * Area by the same amount.
//
// The rotation arc from p to p' about m contributes
//   (1/2) dot(m, rot_cw(p' - p)) - theta d^2 / 8,
// so the two arc constants cancel the Hamiltonian term exactly.

namespace peg {

struct ActionOpts {
  double origin_margin_rel = 1e-9;  // min origin clearance of the difference path, x diameter
  double integer_tol = 1e-6;        // max distance of the winding estimate from an integer
  double residual_tol = 1e-5;       // max rotation-relation defect, x max(1, diameter)
};

struct ActionValue {
  double action = 0;
  double hamiltonian_term = 0;  // theta d^2 / 4
  double loop_area_sum = 0;     // SA(loop1) + SA(loop2)
  int winding = 0;              // nu for the evaluated arc choice
  int arc_choice = 0;           // bit 0: z-return reversed, bit 1: w-return reversed
  double area = 0;              // enclosed curve area
};

// Angle actually realized by the rotation (c, s); equals theta in float mode,
// and the rationalized angle 2 atan(tau) in exact mode.
template <class S>
double effective_theta(const Angle<S>& ang) {
  double t = std::atan2(to_d(ang.s), to_d(ang.c));
  if (t <= 0) t += 2 * std::numbers::pi;  // theta = pi comes out exactly; (0, pi) has s > 0
  return t;
}

namespace detail {

// Line integral (1/2) int (x dy - y dx) along an open polyline.
inline double polyline_area_term(const std::vector<P2>& pts) {
  double s = 0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) s += cross(pts[i], pts[i + 1]);
  return s / 2;
}

// Total turn about the origin along a polyline; nullopt when the path gets
// within `margin` of the origin (winding ill-defined at this resolution).
inline std::optional<double> path_turn(const std::vector<P2>& pts, double margin) {
  double turn = 0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const P2& p = pts[i];
    const P2& q = pts[i + 1];
    if (point_segment_dist(P2{0, 0}, p, q) < margin) return std::nullopt;
    turn += std::atan2(cross(p, q), dot(p, q));
  }
  return turn;
}

// Arclength walker used to co-parametrize two polylines.
struct PolyWalk {
  std::vector<P2> pts;
  std::vector<double> cum;
  size_t idx = 0;     // current vertex index
  double pos = 0;     // current arclength position
  P2 cur{0, 0};

  explicit PolyWalk(std::vector<P2> p) : pts(std::move(p)) {
    cum.resize(pts.size(), 0.0);
    for (size_t i = 1; i < pts.size(); ++i) cum[i] = cum[i - 1] + dist(pts[i - 1], pts[i]);
    cur = pts.front();
  }
  double total() const { return cum.back(); }

  // Walk forward to arclength `target`, reporting every vertex passed and the
  // final (possibly interpolated) point.
  template <class Emit>
  void advance(double target, Emit&& emit) {
    target = std::min(target, total());
    while (idx + 1 < pts.size() && cum[idx + 1] <= target) {
      ++idx;
      pos = cum[idx];
      cur = pts[idx];
      emit(cur);
    }
    if (target > pos && idx + 1 < pts.size()) {
      double seg = cum[idx + 1] - cum[idx];
      double f = seg > 0 ? (target - cum[idx]) / seg : 1.0;
      cur = pts[idx] + f * (pts[idx + 1] - pts[idx]);
      pos = target;
      emit(cur);
    }
  }
};

// Difference path a1(s) - a2(s) from (z'-w') to (z-w) under an interleaving
// plan: a list of (which polyline, arclength fraction) moves.
inline std::vector<P2> difference_path(const std::vector<P2>& a1, const std::vector<P2>& a2,
                                       const std::vector<std::pair<int, double>>& plan) {
  PolyWalk w1(a1), w2(a2);
  std::vector<P2> out;
  out.push_back(w1.cur - w2.cur);
  for (auto& [which, frac] : plan) {
    if (which == 0)
      w1.advance(frac * w1.total(), [&](const P2& p) { out.push_back(p - w2.cur); });
    else
      w2.advance(frac * w2.total(), [&](const P2& p) { out.push_back(w1.cur - p); });
  }
  return out;
}

// Winding number of the closed difference loop: rotation flow (exact turn
// -theta) followed by the co-parametrized curve returns.  Tries sequential
// plans first, then staircase interleaves of increasing resolution.
inline std::optional<int> difference_winding(const std::vector<P2>& a1, const std::vector<P2>& a2,
                                             double theta, double margin, double integer_tol) {
  std::vector<std::vector<std::pair<int, double>>> plans;
  plans.push_back({{0, 1.0}, {1, 1.0}});
  plans.push_back({{1, 1.0}, {0, 1.0}});
  for (int k = 2; k <= 1024; k *= 2) {
    std::vector<std::pair<int, double>> plan;
    for (int j = 1; j <= k; ++j) {
      plan.push_back({0, double(j) / k});
      plan.push_back({1, double(j) / k});
    }
    plans.push_back(std::move(plan));
  }
  for (auto& plan : plans) {
    auto path = difference_path(a1, a2, plan);
    auto turn = path_turn(path, margin);
    if (!turn) continue;
    double nu = (-theta + *turn) / (2 * std::numbers::pi);
    double rounded = std::round(nu);
    if (std::abs(nu - rounded) <= integer_tol) return static_cast<int>(rounded);
  }
  return std::nullopt;
}

}  // namespace detail

template <class S>
ActionValue action(const PLCurve<S>& c, const Angle<S>& ang, const Inscription<S>& ins,
                   const ActionOpts& opts = {}) {
  double diam = c.diameter();
  double d = to_d(ins.d);
  require(d > c.tols().degenerate * diam, Err::DegenerateChord,
          "chord too short for a well-defined action");
  auto [rz, rw] = rotate_pair(ins.verts[0], ins.verts[1], ang);
  double defect = std::max(dist(to_p2(rz), to_p2(ins.verts[2])),
                           dist(to_p2(rw), to_p2(ins.verts[3])));
  require(defect <= opts.residual_tol * std::max(1.0, diam), Err::InvalidParams,
          "vertices do not satisfy the rotation relation");

  double theta = effective_theta(ang);
  double area = to_d(c.area());
  double hr2 = theta * d * d / 4;
  P2 z = to_p2(ins.verts[0]), w = to_p2(ins.verts[1]);
  P2 zp = to_p2(ins.verts[2]), wp = to_p2(ins.verts[3]);
  P2 m = 0.5 * (z + w);
  double margin = opts.origin_margin_rel * std::max(1.0, diam);

  auto to_p2s = [](const std::vector<Vec2<S>>& v) {
    std::vector<P2> out;
    out.reserve(v.size());
    for (auto& p : v) out.push_back(to_p2(p));
    return out;
  };

  for (int choice = 0; choice < 4; ++choice) {
    std::vector<P2> a1 = to_p2s(c.arc_points(ins.cp[2], ins.cp[0], !(choice & 1)));
    std::vector<P2> a2 = to_p2s(c.arc_points(ins.cp[3], ins.cp[1], !(choice & 2)));
    auto nu = detail::difference_winding(a1, a2, theta, margin, opts.integer_tol);
    if (!nu) continue;
    double sa = 0.5 * dot(m, rot_cw(zp - z)) - hr2 / 2 + detail::polyline_area_term(a1) +
                0.5 * dot(m, rot_cw(wp - w)) - hr2 / 2 + detail::polyline_area_term(a2);
    ActionValue v;
    v.hamiltonian_term = hr2;
    v.loop_area_sum = sa;
    v.winding = *nu;
    v.arc_choice = choice;
    v.area = area;
    v.action = hr2 + sa - *nu * area;
    return v;
  }
  fail(Err::CoparametrizationFailure,
       "difference loop passes through the origin for every arc choice and schedule");
}

// The dual of an inscription (z, w, z', w') at theta is (z', w', w, z) at
// pi - theta: the same rectangle with chord roles exchanged.
template <class S>
Inscription<S> dual_inscription(const Inscription<S>& ins) {
  static constexpr std::array<int, 4> perm{2, 3, 1, 0};
  Inscription<S> out;
  for (int k = 0; k < 4; ++k) {
    out.cp[k] = ins.cp[perm[k]];
    out.verts[k] = ins.verts[perm[k]];
  }
  out.d = ins.d;
  return out;
}

// ---- spectrum ----------------------------------------------------------------

struct SpectrumEntry {
  int family_id = 0;
  FamilyKind kind = FamilyKind::Isolated;
  double action = 0;
  double d = 0;
  bool graceful = false;
  Elegance elegance = Elegance::NotEvaluated;
};

// One labelled action value per inscription family (the action is constant
// along families), sorted by action.
template <class S>
std::vector<SpectrumEntry> action_spectrum(const PLCurve<S>& c, const Angle<S>& ang,
                                           const InscribeOpts& iopts = {},
                                           const ActionOpts& aopts = {}) {
  auto en = enumerate_inscriptions(c, ang, iopts);
  std::vector<SpectrumEntry> out;
  for (size_t i = 0; i < en.families.size(); ++i) {
    const auto& fam = en.families[i];
    SpectrumEntry e;
    e.family_id = static_cast<int>(i);
    e.kind = fam.kind;
    e.d = to_d(fam.rep.d);
    e.action = action(c, ang, fam.rep, aopts).action;
    e.graceful = is_graceful(c, fam.rep);
    e.elegance = is_elegant(c, fam.rep);
    out.push_back(e);
  }
  std::sort(out.begin(), out.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
    return a.action < b.action || (a.action == b.action && a.family_id < b.family_id);
  });
  return out;
}

// ---- duality check -------------------------------------------------------------

struct DualityPair {
  int family_id = 0;       // index into the theta enumeration
  int dual_family_id = 0;  // index into the (pi - theta) enumeration
  double action = 0, dual_action = 0;
  double defect = 0;  // |A + A* - Area|
};

struct DualityReport {
  std::vector<DualityPair> pairs;
  double max_defect = 0;
  double max_match_distance = 0;  // worst vertex distance of a dual rep to its matched family
  bool complete = false;          // bijection between the two enumerations
};

// Enumerate at theta and pi - theta, match every family's dualized rep to a
// family on the other side, and verify A(F) + A(F*) = Area.  The dual action
// is evaluated on the dualized inscription itself, not on the matched
// family's stored rep: the two may differ by a role exchange (folded into
// the symmetry orbit at the right angle), which preserves the rectangle but
// not the action.  Throws UnmatchedFamily if some family has no partner
// within tolerance.
template <class S>
DualityReport check_duality(const PLCurve<S>& c, const Angle<S>& ang,
                            const InscribeOpts& iopts = {}, const ActionOpts& aopts = {},
                            double match_tol = 1e-6) {
  Angle<S> dang = complement_angle(ang);
  auto e1 = enumerate_inscriptions(c, ang, iopts);
  auto e2 = enumerate_inscriptions(c, dang, iopts);
  bool right2 = to_d(dang.c) == 0.0;
  double scaled_tol = match_tol * std::max(1.0, c.diameter());
  double area = to_d(c.area());

  DualityReport rep;
  std::vector<int> hit(e2.families.size(), 0);
  for (size_t i = 0; i < e1.families.size(); ++i) {
    Inscription<S> dual = dual_inscription(e1.families[i].rep);
    std::array<P2, 4> q;
    for (int k = 0; k < 4; ++k) q[k] = to_p2(dual.verts[k]);
    int best = -1;
    double bestd = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < e2.families.size(); ++j) {
      double dj = family_vertex_distance(c, e2.families[j], right2, q);
      if (dj < bestd) {
        bestd = dj;
        best = static_cast<int>(j);
      }
    }
    if (best < 0 || bestd > scaled_tol)
      fail(Err::UnmatchedFamily, "no dual partner within tolerance for family " +
                                     std::to_string(i) + " (best " + std::to_string(bestd) + ")");
    ++hit[best];
    DualityPair p;
    p.family_id = static_cast<int>(i);
    p.dual_family_id = best;
    p.action = action(c, ang, e1.families[i].rep, aopts).action;
    p.dual_action = action(c, dang, dual, aopts).action;
    p.defect = std::abs(p.action + p.dual_action - area);
    rep.max_defect = std::max(rep.max_defect, p.defect);
    rep.max_match_distance = std::max(rep.max_match_distance, bestd);
    rep.pairs.push_back(p);
  }
  rep.complete = e1.families.size() == e2.families.size() &&
                 std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; });
  return rep;
}

// ---- continuation in theta -----------------------------------------------------

struct ContinuationPoint {
  double theta = 0;
  double action = 0;
  double d = 0;
  std::array<P2, 4> verts{};
  int family_id = 0;
};

// Follow one family across an angle schedule by nearest-vertex matching of
// the previous representative.  Throws UnmatchedFamily when the track jumps
// further than match_tol x max(1, diameter).
template <class S>
std::vector<ContinuationPoint> continue_family(const PLCurve<S>& c, const Angle<S>& start_ang,
                                               const Family<S>& start,
                                               const std::vector<double>& thetas,
                                               const InscribeOpts& iopts = {},
                                               const ActionOpts& aopts = {},
                                               double match_tol = 0.1) {
  double scale = std::max(1.0, c.diameter());
  std::vector<ContinuationPoint> out;
  auto record = [&](const Angle<S>& ang, const Family<S>& fam, int fid) {
    ContinuationPoint p;
    p.theta = effective_theta(ang);
    p.action = action(c, ang, fam.rep, aopts).action;
    p.d = to_d(fam.rep.d);
    for (int k = 0; k < 4; ++k) p.verts[k] = to_p2(fam.rep.verts[k]);
    p.family_id = fid;
    out.push_back(p);
  };
  record(start_ang, start, -1);
  std::array<P2, 4> prev;
  for (int k = 0; k < 4; ++k) prev[k] = to_p2(start.rep.verts[k]);
  for (double th : thetas) {
    Angle<S> ang = make_angle<S>(th);
    auto en = enumerate_inscriptions(c, ang, iopts);
    bool right = to_d(ang.c) == 0.0;
    int best = -1;
    double bestd = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < en.families.size(); ++j) {
      double dj = family_vertex_distance(c, en.families[j], right, prev);
      if (dj < bestd) {
        bestd = dj;
        best = static_cast<int>(j);
      }
    }
    if (best < 0 || bestd > match_tol * scale)
      fail(Err::UnmatchedFamily,
           "continuation lost the family at theta = " + std::to_string(th));
    record(ang, en.families[best], best);
    // Track the member nearest the previous tuple, not just the rep: for
    // matching stability use the rep of the matched family.
    for (int k = 0; k < 4; ++k) prev[k] = to_p2(en.families[best].rep.verts[k]);
  }
  return out;
}

}  // namespace peg
