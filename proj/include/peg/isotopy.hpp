#pragma once

#include "peg/action.hpp"

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include <functional>
#include <string>

// Piecewise-linear isotopies of PL curves: every vertex moves along its own
// polyline over a shared breakpoint schedule, so each frame is a polygon with
// a fixed number of vertices.  On top of frame evaluation this provides
// critical-time detection (where the inscription spectrum changes
// combinatorially), action-branch tracking, the nesting/monotonicity audit,
// and an area proxy for the deformation cost of equal-area isotopies.

namespace peg {

struct Isotopy {
  std::vector<double> times;           // 0 = t_0 < ... < t_k = 1, shared by all vertices
  std::vector<std::vector<P2>> paths;  // paths[v][j]: position of vertex v at times[j]
};

inline Isotopy make_isotopy(std::vector<double> times, std::vector<std::vector<P2>> paths) {
  require(times.size() >= 2, Err::InvalidParams, "isotopy needs at least two breakpoints");
  require(std::abs(times.front()) <= 1e-15 && std::abs(times.back() - 1.0) <= 1e-15,
          Err::InvalidParams, "isotopy time range must be [0, 1]");
  times.front() = 0.0;
  times.back() = 1.0;
  for (size_t j = 1; j < times.size(); ++j)
    require(times[j] > times[j - 1], Err::InvalidParams, "breakpoints must strictly increase");
  require(paths.size() >= 3, Err::InvalidParams, "isotopy needs at least three vertices");
  for (auto& p : paths)
    require(p.size() == times.size(), Err::SharedBreakpointsViolated,
            "every vertex path must supply one position per shared breakpoint");
  return Isotopy{std::move(times), std::move(paths)};
}

inline Isotopy make_linear_isotopy(const PLCurve<double>& c0, const PLCurve<double>& c1) {
  require(c0.size() == c1.size(), Err::InvalidParams,
          "linear isotopy needs matching vertex counts");
  std::vector<std::vector<P2>> paths(c0.size());
  for (int v = 0; v < c0.size(); ++v)
    paths[v] = {to_p2(c0.vertex(v)), to_p2(c1.vertex(v))};
  return make_isotopy({0.0, 1.0}, std::move(paths));
}

inline std::vector<P2> isotopy_frame(const Isotopy& iso, double t) {
  t = std::clamp(t, 0.0, 1.0);
  auto it = std::upper_bound(iso.times.begin(), iso.times.end(), t);
  size_t j = std::min(iso.times.size() - 1,
                      static_cast<size_t>(std::max<std::ptrdiff_t>(1, it - iso.times.begin())));
  double t0 = iso.times[j - 1], t1 = iso.times[j];
  double f = (t - t0) / (t1 - t0);
  std::vector<P2> out;
  out.reserve(iso.paths.size());
  for (auto& p : iso.paths) out.push_back(p[j - 1] + f * (p[j] - p[j - 1]));
  return out;
}

// Frame as a curve; throws NonSimpleAtT if the frame self-intersects.
inline PLCurve<double> isotopy_curve(const Isotopy& iso, double t) {
  auto frame = isotopy_frame(iso, t);
  std::vector<Vec2<double>> v(frame.begin(), frame.end());
  try {
    return PLCurve<double>::from_vertices(v);
  } catch (const ContractError& e) {
    fail(Err::NonSimpleAtT,
         "frame at t = " + std::to_string(t) + " is not a simple curve: " + e.what());
  }
}

// ---- critical times ------------------------------------------------------------

struct CriticalEvent {
  double t = 0;
  std::string kind;  // "spectrum-change" (refined bracket midpoint) or "breakpoint"
};

struct CriticalOpts {
  int coarse = 17;          // uniform scan points per breakpoint interval
  double bisect_tol = 1e-9; // bracket width for refined events
  InscribeOpts iopts{};
};

namespace detail {

struct SpectrumSignature {
  int families = 0, isolated = 0, segments = 0, closed = 0;
  // Orbit-canonicalized segment quadruples of every family piece: vertex
  // handoffs across curve corners change this multiset even when counts do
  // not (e.g. a sliding family flipping orientation through a square).
  std::vector<std::array<int, 4>> quads;
  bool operator==(const SpectrumSignature&) const = default;
};

inline std::array<int, 4> canonical_quad(const std::array<int, 4>& q, bool right_angle) {
  std::array<int, 4> best = q;
  for (auto& p : orbit_perms(right_angle)) best = std::min(best, permute(q, p));
  return best;
}

inline SpectrumSignature spectrum_signature(const PLCurve<double>& c, const Angle<double>& ang,
                                            const InscribeOpts& iopts) {
  auto en = enumerate_inscriptions(c, ang, iopts);
  bool right_angle = to_d(ang.c) == 0.0;
  SpectrumSignature s;
  s.families = static_cast<int>(en.families.size());
  for (auto& f : en.families) {
    if (f.kind == FamilyKind::Isolated) {
      ++s.isolated;
      s.quads.push_back(canonical_quad(
          {f.rep.cp[0].seg, f.rep.cp[1].seg, f.rep.cp[2].seg, f.rep.cp[3].seg}, right_angle));
    } else {
      ++s.segments;
      for (auto& p : f.pieces) s.quads.push_back(canonical_quad(p.quad, right_angle));
    }
    if (f.closed_loop) ++s.closed;
  }
  std::sort(s.quads.begin(), s.quads.end());
  return s;
}

}  // namespace detail

// Times where the inscription spectrum changes combinatorially (family count
// or kind multiset), refined by bisection, plus the isotopy breakpoints.
inline std::vector<CriticalEvent> critical_times(const Isotopy& iso, const Angle<double>& ang,
                                                 const CriticalOpts& opts = {}) {
  std::vector<CriticalEvent> out;
  for (size_t j = 1; j + 1 < iso.times.size(); ++j)
    out.push_back({iso.times[j], "breakpoint"});
  auto sig = [&](double t) {
    return detail::spectrum_signature(isotopy_curve(iso, t), ang, opts.iopts);
  };
  for (size_t j = 1; j < iso.times.size(); ++j) {
    double a = iso.times[j - 1], b = iso.times[j];
    int n = std::max(2, opts.coarse);
    double prev_t = a;
    auto prev_s = sig(a);
    for (int i = 1; i <= n; ++i) {
      double t = a + (b - a) * i / n;
      auto s = sig(t);
      if (!(s == prev_s)) {
        double lo = prev_t, hi = t;
        auto slo = prev_s;
        while (hi - lo > opts.bisect_tol) {
          double mid = (lo + hi) / 2;
          auto sm = sig(mid);
          if (sm == slo)
            lo = mid;
          else
            hi = mid;
        }
        out.push_back({(lo + hi) / 2, "spectrum-change"});
      }
      prev_t = t;
      prev_s = s;
    }
  }
  std::sort(out.begin(), out.end(),
            [](const CriticalEvent& x, const CriticalEvent& y) { return x.t < y.t; });
  return out;
}

// ---- branch tracking -----------------------------------------------------------

struct DiagramRow {
  double t = 0;
  int branch = 0;
  double action = 0;
  double area = 0;
  double d = 0;
};

struct Diagram {
  std::vector<double> times;
  std::vector<DiagramRow> rows;  // sorted by (t, branch)
  int branch_count = 0;
};

struct TrackOpts {
  int samples = 25;           // uniform sample count (breakpoints are always included)
  double match_tol = 0.05;    // matching radius, x max(1, diameter)
  double ambiguity_ratio = 1.5;  // contested when a rival match is this close
  double min_dt = 1e-7;       // refinement floor before MatchingAmbiguous
  InscribeOpts iopts{};
  ActionOpts aopts{};
};

namespace detail {

struct TrackedFamily {
  std::array<P2, 4> verts{};
  double action = 0, d = 0;
};

inline std::vector<TrackedFamily> tracked_families(const PLCurve<double>& c,
                                                   const Angle<double>& ang,
                                                   const TrackOpts& opts) {
  auto en = enumerate_inscriptions(c, ang, opts.iopts);
  std::vector<TrackedFamily> out;
  // Families with chords at the degeneracy floor (corner/pinch artifacts)
  // carry no usable action value and are not tracked.
  double d_floor = 10 * c.tols().degenerate * std::max(1.0, c.diameter());
  for (auto& f : en.families) {
    if (to_d(f.rep.d) <= d_floor) continue;
    TrackedFamily tf;
    for (int k = 0; k < 4; ++k) tf.verts[k] = to_p2(f.rep.verts[k]);
    tf.action = action(c, ang, f.rep, opts.aopts).action;
    tf.d = to_d(f.rep.d);
    out.push_back(tf);
  }
  return out;
}

// Distance between family snapshots: max vertex distance minimized over the
// symmetry orbit.
inline double snapshot_distance(const TrackedFamily& a, const TrackedFamily& b,
                                bool right_angle) {
  double best = std::numeric_limits<double>::infinity();
  for (auto& p : orbit_perms(right_angle)) {
    double m = 0;
    for (int k = 0; k < 4; ++k) m = std::max(m, dist(a.verts[p[k]], b.verts[k]));
    best = std::min(best, m);
  }
  return best;
}

// Greedy nearest assignment of new families to previous branches.  Returns
// branch index per new family (-1 = new branch) or nullopt when a losing
// candidate was within ambiguity_ratio of the assignment that beat it.
inline std::optional<std::vector<int>> assign_branches(
    const std::vector<TrackedFamily>& prev, const std::vector<TrackedFamily>& next,
    bool right_angle, double thresh, double ambiguity_ratio) {
  struct Cand {
    double d;
    int j, b;
  };
  std::vector<Cand> cands;
  for (int j = 0; j < static_cast<int>(next.size()); ++j)
    for (int b = 0; b < static_cast<int>(prev.size()); ++b) {
      double d = snapshot_distance(prev[b], next[j], right_angle);
      if (d <= thresh) cands.push_back({d, j, b});
    }
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) { return x.d < y.d; });
  std::vector<int> match(next.size(), -1), owner(prev.size(), -1);
  std::vector<double> match_d(next.size(), 0), owner_d(prev.size(), 0);
  for (auto& c : cands)
    if (match[c.j] < 0 && owner[c.b] < 0) {
      match[c.j] = c.b;
      owner[c.b] = c.j;
      match_d[c.j] = owner_d[c.b] = c.d;
    }
  for (auto& r : cands) {
    if (match[r.j] == r.b) continue;
    double win = std::numeric_limits<double>::infinity();
    if (match[r.j] >= 0) win = std::min(win, match_d[r.j]);
    if (owner[r.b] >= 0) win = std::min(win, owner_d[r.b]);
    if (r.d <= win * ambiguity_ratio) return std::nullopt;
  }
  return match;
}

}  // namespace detail

// Track action branches through the isotopy.  Families at consecutive sample
// times are matched by nearest rectangle-vertex distance; contested matches
// trigger time refinement, and MatchingAmbiguous is thrown only when a
// contest survives at the refinement floor.
inline Diagram track_branches(const Isotopy& iso, const Angle<double>& ang,
                              const TrackOpts& opts = {}) {
  bool right_angle = to_d(ang.c) == 0.0;
  std::vector<double> times = iso.times;
  for (int i = 0; i <= opts.samples; ++i) times.push_back(double(i) / opts.samples);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              times.end());

  Diagram dg;
  int next_branch = 0;
  std::vector<int> branch_of;  // branch id per family at the previous time
  std::vector<detail::TrackedFamily> prev;
  double prev_t = 0;

  auto emit = [&](double t, const PLCurve<double>& c,
                  const std::vector<detail::TrackedFamily>& fams, const std::vector<int>& ids) {
    double area = c.area();
    for (size_t j = 0; j < fams.size(); ++j)
      dg.rows.push_back({t, ids[j], fams[j].action, area, fams[j].d});
    dg.times.push_back(t);
  };

  // Advance from (prev, branch_of) at prev_t to time t, refining on contest.
  std::function<void(double, int)> advance = [&](double t, int depth) {
    auto c = isotopy_curve(iso, t);
    auto fams = detail::tracked_families(c, ang, opts);
    double thresh = opts.match_tol * std::max(1.0, c.diameter());
    auto match = detail::assign_branches(prev, fams, right_angle, thresh, opts.ambiguity_ratio);
    if (!match) {
      if (t - prev_t <= opts.min_dt || depth > 40)
        fail(Err::MatchingAmbiguous,
             "branch matching contested at t = " + std::to_string(t));
      double mid = (prev_t + t) / 2;
      advance(mid, depth + 1);
      advance(t, depth + 1);
      return;
    }
    std::vector<int> ids(fams.size());
    for (size_t j = 0; j < fams.size(); ++j)
      ids[j] = (*match)[j] >= 0 ? branch_of[(*match)[j]] : next_branch++;
    emit(t, c, fams, ids);
    prev = std::move(fams);
    branch_of = std::move(ids);
    prev_t = t;
  };

  {
    auto c0 = isotopy_curve(iso, times.front());
    prev = detail::tracked_families(c0, ang, opts);
    branch_of.resize(prev.size());
    for (size_t j = 0; j < prev.size(); ++j) branch_of[j] = next_branch++;
    emit(times.front(), c0, prev, branch_of);
    prev_t = times.front();
  }
  for (size_t i = 1; i < times.size(); ++i) advance(times[i], 0);
  dg.branch_count = next_branch;
  return dg;
}

// ---- nesting / monotonicity audit ------------------------------------------------

struct AuditOpts {
  int samples = 9;
  double tol = 1e-9;
  double match_tol = 0.05;
  std::vector<double> at_times{};  // when non-empty, audit exactly this time grid
  InscribeOpts iopts{};
  ActionOpts aopts{};
};

struct MonotonicityReport {
  bool precondition_ok = true;  // consecutive frames nested (earlier inside later)
  bool monotone_ok = true;      // 0 <= delta action <= delta area for matched branches
  double first_bad_t = -1;      // first time of a precondition failure
  double worst_decrease = 0;    // largest action decrease observed
  double worst_excess = 0;      // largest (delta action - delta area) observed
  int pairs_checked = 0;
};

// Audit an expanding isotopy: frames must be nested (each earlier curve inside
// the later one), and along every matched action branch the action must grow,
// by at most the area growth.
inline MonotonicityReport audit_nested_monotonicity(const Isotopy& iso, const Angle<double>& ang,
                                                    const AuditOpts& opts = {}) {
  bool right_angle = to_d(ang.c) == 0.0;
  std::vector<double> times = opts.at_times;
  if (times.empty()) {
    times = iso.times;
    for (int i = 0; i <= opts.samples; ++i) times.push_back(double(i) / opts.samples);
  }
  for (double& t : times) t = std::clamp(t, iso.times.front(), iso.times.back());
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              times.end());

  MonotonicityReport rep;
  TrackOpts topts;
  topts.match_tol = opts.match_tol;
  topts.iopts = opts.iopts;
  topts.aopts = opts.aopts;

  auto c_prev = isotopy_curve(iso, times.front());
  auto fams_prev = detail::tracked_families(c_prev, ang, topts);
  for (size_t i = 1; i < times.size(); ++i) {
    auto c = isotopy_curve(iso, times[i]);
    auto fams = detail::tracked_families(c, ang, topts);

    bool nested = false;
    auto gp_in = try_graph_pair(c_prev);
    auto gp_out = try_graph_pair(c);
    if (gp_in && gp_out)
      nested = graph_pair_nested(*gp_in, *gp_out, false,
                                 opts.tol * std::max(1.0, c.diameter()));
    else
      nested = is_nested(c_prev, c, false, c.tols());
    if (!nested) {
      rep.precondition_ok = false;
      if (rep.first_bad_t < 0) rep.first_bad_t = times[i];
    }

    double thresh = opts.match_tol * std::max(1.0, c.diameter());
    auto match = detail::assign_branches(fams_prev, fams, right_angle, thresh, 1.0);
    double d_area = c.area() - c_prev.area();
    if (match) {
      for (size_t j = 0; j < fams.size(); ++j) {
        int b = (*match)[j];
        if (b < 0) continue;
        double da = fams[j].action - fams_prev[b].action;
        rep.worst_decrease = std::max(rep.worst_decrease, -da);
        rep.worst_excess = std::max(rep.worst_excess, da - d_area);
        ++rep.pairs_checked;
      }
    }
    c_prev = std::move(c);
    fams_prev = std::move(fams);
  }
  rep.monotone_ok = rep.worst_decrease <= opts.tol && rep.worst_excess <= opts.tol;
  return rep;
}

// ---- area proxy for equal-area deformations ---------------------------------------

// Half the area of the symmetric difference of the two enclosed regions: a
// lower-bound proxy for the deformation cost between equal-area curves.
// Throws AreasDiffer when the enclosed areas disagree.
inline double hofer_area_proxy(const PLCurve<double>& c0, const PLCurve<double>& c1,
                               double area_tol = 1e-9) {
  double a0 = c0.area(), a1 = c1.area();
  require(std::abs(a0 - a1) <= area_tol * std::max({1.0, a0, a1}), Err::AreasDiffer,
          "area proxy requires equal enclosed areas");
  namespace bg = boost::geometry;
  using BPt = bg::model::d2::point_xy<double>;
  using BPoly = bg::model::polygon<BPt, false, false>;  // ccw, open
  auto to_poly = [](const PLCurve<double>& c) {
    BPoly p;
    for (int i = 0; i < c.size(); ++i)
      bg::append(p.outer(), BPt(c.vertex(i).x, c.vertex(i).y));
    bg::correct(p);
    return p;
  };
  BPoly p0 = to_poly(c0), p1 = to_poly(c1);
  bg::model::multi_polygon<BPoly> sym;
  bg::sym_difference(p0, p1, sym);
  return bg::area(sym) / 2;
}

}  // namespace peg
